//! Weight carriers.
//!
//! Every weight in the engine lives in a semiring: commutative addition with
//! identity [`Semiring::zero`], multiplication with identity [`Semiring::one`]
//! distributing over addition, and `zero` annihilating products. The three
//! shipped instances are [`Boolean`] (recognition), [`NonNegReal`]
//! (unnormalized likelihoods) and [`Viterbi`] (best-parse extraction, `max` as
//! addition). All three have commutative multiplication, which the rest of the
//! engine assumes when it folds the weight of a parse state over its bag of
//! generators in a fixed order.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Names the semiring instance selected in a grammar file or on the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SemiringKind {
    Bool,
    Real,
    Viterbi,
}

impl FromStr for SemiringKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bool" => Ok(SemiringKind::Bool),
            "real" => Ok(SemiringKind::Real),
            "viterbi" => Ok(SemiringKind::Viterbi),
            other => Err(format!(
                "unknown semiring `{other}` (expected bool, real or viterbi)"
            )),
        }
    }
}

impl fmt::Display for SemiringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemiringKind::Bool => "bool",
            SemiringKind::Real => "real",
            SemiringKind::Viterbi => "viterbi",
        })
    }
}

/// A semiring value. Operations are pure; values are immutable and `Send`.
pub trait Semiring:
    Clone + fmt::Debug + fmt::Display + PartialEq + Serialize + Send + Sync + 'static
{
    const KIND: SemiringKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// `|a - b| <= tol` for numeric instances, exact equality for booleans.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Parses a `@ weight` annotation from a grammar file.
    fn parse_weight(text: &str) -> Result<Self, String>;

    /// Reads a weight back from its JSON representation.
    fn from_json(value: &serde_json::Value) -> Result<Self, String>;
}

/// The Boolean semiring: disjunction and conjunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Boolean(pub bool);

impl Semiring for Boolean {
    const KIND: SemiringKind = SemiringKind::Bool;

    fn zero() -> Self {
        Boolean(false)
    }

    fn one() -> Self {
        Boolean(true)
    }

    fn add(&self, other: &Self) -> Self {
        Boolean(self.0 || other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Boolean(self.0 && other.0)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self.0 == other.0
    }

    fn parse_weight(text: &str) -> Result<Self, String> {
        match text {
            "true" => Ok(Boolean(true)),
            "false" => Ok(Boolean(false)),
            // Numeric annotations coerce to their support so a real-weighted
            // grammar file can be loaded under `--semiring bool`.
            other => match other.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Boolean(x != 0.0)),
                _ => Err(format!("expected true, false or a number, got `{other}`")),
            },
        }
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        match value {
            serde_json::Value::Bool(b) => Ok(Boolean(*b)),
            serde_json::Value::Number(n) => {
                let x = n.as_f64().ok_or("not a finite number")?;
                Ok(Boolean(x != 0.0))
            }
            other => Err(format!("expected a boolean, got {other}")),
        }
    }
}

impl fmt::Display for Boolean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Boolean {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_bool(self.0)
    }
}

impl<'de> Deserialize<'de> for Boolean {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Boolean(bool::deserialize(deserializer)?))
    }
}

/// Non-negative reals under ordinary addition and multiplication.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NonNegReal(pub f64);

impl NonNegReal {
    pub fn new(x: f64) -> Result<Self, String> {
        if x.is_finite() && x >= 0.0 {
            Ok(NonNegReal(x))
        } else {
            Err(format!("expected a finite non-negative real, got {x}"))
        }
    }
}

impl Semiring for NonNegReal {
    const KIND: SemiringKind = SemiringKind::Real;

    fn zero() -> Self {
        NonNegReal(0.0)
    }

    fn one() -> Self {
        NonNegReal(1.0)
    }

    fn add(&self, other: &Self) -> Self {
        NonNegReal(self.0 + other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        NonNegReal(self.0 * other.0)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.0 - other.0).abs() <= tol
    }

    fn parse_weight(text: &str) -> Result<Self, String> {
        let x: f64 = text
            .parse()
            .map_err(|_| format!("not a number: `{text}`"))?;
        NonNegReal::new(x)
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        let x = value
            .as_f64()
            .ok_or_else(|| format!("expected a number, got {value}"))?;
        NonNegReal::new(x)
    }
}

impl fmt::Display for NonNegReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for NonNegReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for NonNegReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        NonNegReal::new(f64::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}

/// Values in `[0, 1]` with `max` as addition and product as multiplication;
/// `add` over a set of parsings picks out the best one.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Viterbi(pub f64);

impl Viterbi {
    pub fn new(x: f64) -> Result<Self, String> {
        if x.is_finite() && (0.0..=1.0).contains(&x) {
            Ok(Viterbi(x))
        } else {
            Err(format!("expected a value in [0, 1], got {x}"))
        }
    }
}

impl Semiring for Viterbi {
    const KIND: SemiringKind = SemiringKind::Viterbi;

    fn zero() -> Self {
        Viterbi(0.0)
    }

    fn one() -> Self {
        Viterbi(1.0)
    }

    fn add(&self, other: &Self) -> Self {
        Viterbi(self.0.max(other.0))
    }

    fn mul(&self, other: &Self) -> Self {
        Viterbi(self.0 * other.0)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.0 - other.0).abs() <= tol
    }

    fn parse_weight(text: &str) -> Result<Self, String> {
        let x: f64 = text
            .parse()
            .map_err(|_| format!("not a number: `{text}`"))?;
        Viterbi::new(x)
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        let x = value
            .as_f64()
            .ok_or_else(|| format!("expected a number, got {value}"))?;
        Viterbi::new(x)
    }
}

impl fmt::Display for Viterbi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Viterbi {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Viterbi {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Viterbi::new(f64::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}
