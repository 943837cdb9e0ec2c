//! Generator weights and their multiplicative extension to parse states.
//!
//! A weight map assigns every generator a semiring value; identity arrows
//! implicitly weigh one. The weight of a parse state is the product over its
//! bag of generator occurrences, folded in generator-declaration order. That
//! makes the weight a function of the canonical structure, so any two
//! application orders that reach the same state agree on it exactly.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{EngineError, Result};
use crate::grammar::{GenId, Grammar, GrammarMorphism, ParseState};
use crate::semiring::Semiring;

#[derive(Clone, Debug)]
pub struct WeightMap<S> {
    weights: Vec<S>,
}

impl<S: Semiring> WeightMap<S> {
    pub fn uniform_one(len: usize) -> Self {
        WeightMap {
            weights: vec![S::one(); len],
        }
    }

    pub fn from_vec(weights: Vec<S>) -> Self {
        WeightMap { weights }
    }

    pub fn get(&self, id: GenId) -> &S {
        &self.weights[id.0]
    }

    pub fn set(&mut self, id: GenId, value: S) {
        self.weights[id.0] = value;
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// A grammar together with a total weight map over its signature.
#[derive(Clone, Debug)]
pub struct WeightedGrammar<S: Semiring> {
    pub grammar: Grammar,
    pub weights: WeightMap<S>,
}

impl<S: Semiring> WeightedGrammar<S> {
    /// Parses the grammar's `@ weight` annotations into `S`; missing
    /// annotations weigh one.
    pub fn new(grammar: Grammar) -> Result<Self> {
        let mut weights = Vec::with_capacity(grammar.signature().len());
        for (id, _) in grammar.signature().generators() {
            let w = match grammar.raw_weight(id) {
                None => S::one(),
                Some(text) => {
                    S::parse_weight(text).map_err(|message| EngineError::InvalidWeight {
                        text: text.to_string(),
                        semiring: S::KIND.to_string(),
                        message,
                    })?
                }
            };
            weights.push(w);
        }
        Ok(WeightedGrammar {
            grammar,
            weights: WeightMap::from_vec(weights),
        })
    }

    pub fn with_weights(grammar: Grammar, weights: WeightMap<S>) -> Self {
        debug_assert_eq!(grammar.signature().len(), weights.len());
        WeightedGrammar { grammar, weights }
    }

    pub fn generator_weight(&self, id: GenId) -> &S {
        self.weights.get(id)
    }

    /// Product of generator weights over the state's canonical structure;
    /// the empty product is one.
    pub fn arrow_weight(&self, p: &ParseState) -> S {
        let mut acc = S::one();
        for (id, count) in self.grammar.generator_bag(p) {
            let w = self.weights.get(id);
            for _ in 0..count {
                acc = acc.mul(w);
            }
        }
        acc
    }

    /// Weighted product over a bag difference, used by the automaton to
    /// weigh the arrow applied on top of an existing state.
    pub fn bag_weight(&self, bag: &BTreeMap<GenId, usize>) -> S {
        let mut acc = S::one();
        for (id, count) in bag {
            let w = self.weights.get(*id);
            for _ in 0..*count {
                acc = acc.mul(w);
            }
        }
        acc
    }

    /// `arrow_weight` gated on acceptance: zero unless the codomain is
    /// exactly the start symbol.
    pub fn output_weight(&self, p: &ParseState) -> S {
        if self.grammar.is_parsing(p) {
            self.arrow_weight(p)
        } else {
            S::zero()
        }
    }

    /// Collapses weights to their Boolean support.
    pub fn to_boolean_support(&self) -> WeightedGrammar<crate::semiring::Boolean> {
        let weights = (0..self.weights.len())
            .map(|i| crate::semiring::Boolean(!self.weights.get(GenId(i)).is_zero()))
            .collect();
        WeightedGrammar {
            grammar: self.grammar.clone(),
            weights: WeightMap::from_vec(weights),
        }
    }

    /// Weights as a JSON object keyed by generator name.
    pub fn weights_to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (id, gen) in self.grammar.signature().generators() {
            map.insert(
                gen.name.clone(),
                serde_json::to_value(self.weights.get(id)).expect("weights serialize"),
            );
        }
        Value::Object(map)
    }

    /// Overrides weights from a JSON object; unknown generator names are
    /// rejected, missing ones keep their current weight.
    pub fn import_weights_json(&mut self, value: &Value) -> Result<()> {
        let obj = value
            .as_object()
            .ok_or_else(|| EngineError::InvalidWeight {
                text: value.to_string(),
                semiring: S::KIND.to_string(),
                message: "expected a JSON object of generator weights".to_string(),
            })?;
        for (name, v) in obj {
            let id = self.grammar.signature().by_name(name).ok_or_else(|| {
                EngineError::UndeclaredSymbol {
                    symbol: name.clone(),
                    context: "weights import".to_string(),
                }
            })?;
            let w = S::from_json(v).map_err(|message| EngineError::InvalidWeight {
                text: v.to_string(),
                semiring: S::KIND.to_string(),
                message,
            })?;
            self.weights.set(id, w);
        }
        Ok(())
    }
}

/// True when the target weights pull back to the source weights along the
/// morphism's arrow map, within `tol` for numeric semirings.
pub fn check_weight_preserving<S: Semiring>(
    m: &GrammarMorphism,
    src: &WeightedGrammar<S>,
    dst: &WeightedGrammar<S>,
    tol: f64,
) -> bool {
    src.grammar.signature().generators().all(|(id, _)| {
        src.generator_weight(id)
            .approx_eq(dst.generator_weight(m.arrow_gen(id)), tol)
    })
}
