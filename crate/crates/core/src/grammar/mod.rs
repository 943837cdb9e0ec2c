//! Grammars as generator systems.
//!
//! A grammar (context-free or pregroup) presents a monoidal category: object
//! generators are words plus nonterminals (CFG) or words plus basic types with
//! an adjoint order (pregroup); arrow generators are the production rules, the
//! lexicon entries and the contraction cups. Parse states are canonical
//! representatives of arrows from a word sequence to the current codomain.

mod loader;
mod morphism;
mod state;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{EngineError, Result};
use crate::semiring::SemiringKind;

pub use loader::load_grammar;
pub use morphism::{load_morphism, GrammarMorphism};
pub use state::{ParseState, PregroupState, Structure, Tree, WordSlot};

/// Index of an arrow generator into its signature's declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub usize);

/// A basic type together with its adjoint order: negative orders are left
/// adjoints, positive orders right adjoints (`n^l` is `(n, -1)`, `n^r` is
/// `(n, 1)`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PregroupType {
    pub base: String,
    pub order: i32,
}

impl PregroupType {
    pub fn new(base: impl Into<String>, order: i32) -> Self {
        PregroupType {
            base: base.into(),
            order,
        }
    }

    /// `self ⊗ right` contracts when `right` is the next adjoint of the same
    /// base: `(b, z)(b, z+1) -> ε`. This covers both `t tʳ` and `tˡ t`.
    pub fn contracts_with(&self, right: &PregroupType) -> bool {
        self.base == right.base && right.order == self.order + 1
    }

    pub fn parse(token: &str) -> std::result::Result<Self, String> {
        let (base, suffix) = match token.split_once('^') {
            None => (token, ""),
            Some((b, s)) => (b, s),
        };
        if base.is_empty() {
            return Err(format!("empty base type in `{token}`"));
        }
        let order = if suffix.is_empty() {
            0
        } else if suffix.chars().all(|c| c == 'l') {
            -(suffix.len() as i32)
        } else if suffix.chars().all(|c| c == 'r') {
            suffix.len() as i32
        } else {
            return Err(format!("bad adjoint suffix `{suffix}` in `{token}`"));
        };
        Ok(PregroupType::new(base, order))
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if self.order != 0 {
            let c = if self.order < 0 { 'l' } else { 'r' };
            write!(f, "^")?;
            for _ in 0..self.order.unsigned_abs() {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// An object generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Obj {
    Word(String),
    Nt(String),
    Typed(PregroupType),
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Word(w) => f.write_str(w),
            Obj::Nt(x) => f.write_str(x),
            Obj::Typed(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// CFG production, read bottom-up: rhs -> lhs.
    Rule,
    /// Lexicon entry: word -> its type string.
    Lexicon,
    /// Contraction of an adjacent contractible pair to the empty sequence.
    Cup,
}

/// An arrow generator with its domain and codomain object sequences.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub dom: Vec<Obj>,
    pub cod: Vec<Obj>,
    pub kind: GenKind,
}

/// Object and arrow generators of the presented category. Generator order is
/// declaration order and drives every deterministic tie-break in the engine.
#[derive(Clone, Debug, Default)]
pub struct MonoidalSignature {
    pub objects: BTreeSet<Obj>,
    generators: Vec<Generator>,
    by_name: BTreeMap<String, GenId>,
    cups_by_left: BTreeMap<PregroupType, GenId>,
}

impl MonoidalSignature {
    pub(crate) fn add_object(&mut self, obj: Obj) {
        self.objects.insert(obj);
    }

    pub(crate) fn push(&mut self, gen: Generator) -> Result<GenId> {
        for obj in gen.dom.iter().chain(gen.cod.iter()) {
            debug_assert!(
                self.objects.contains(obj),
                "generator uses unknown object {obj}"
            );
        }
        let id = GenId(self.generators.len());
        if self.by_name.insert(gen.name.clone(), id).is_some() {
            return Err(EngineError::Syntax {
                line: 0,
                message: format!("duplicate generator `{}`", gen.name),
            });
        }
        if gen.kind == GenKind::Cup {
            if let Obj::Typed(left) = &gen.dom[0] {
                self.cups_by_left.insert(left.clone(), id);
            }
        }
        self.generators.push(gen);
        Ok(id)
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id.0]
    }

    pub fn generators(&self) -> impl Iterator<Item = (GenId, &Generator)> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| (GenId(i), g))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn by_name(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    /// The cup whose domain starts with `left` (and so contracts
    /// `left ⊗ left+1`).
    pub fn cup_for(&self, left: &PregroupType) -> Option<GenId> {
        self.cups_by_left.get(left).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrammarMode {
    Cfg,
    Pregroup,
}

impl fmt::Display for GrammarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrammarMode::Cfg => "cfg",
            GrammarMode::Pregroup => "pregroup",
        })
    }
}

/// A CFG production as written in the grammar file.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: String,
    pub rhs: Vec<String>,
}

/// A pregroup lexicon entry as written in the grammar file.
#[derive(Clone, Debug)]
pub struct LexEntry {
    pub word: String,
    pub types: Vec<PregroupType>,
}

/// A validated grammar together with its derived signature.
#[derive(Clone, Debug)]
pub struct Grammar {
    pub mode: GrammarMode,
    pub semiring: SemiringKind,
    pub start: String,
    /// Words in first-appearance order; drives deterministic enumeration.
    vocabulary: Vec<String>,
    vocab_set: BTreeSet<String>,
    pub nonterminals: BTreeSet<String>,
    pub basic_types: BTreeSet<String>,
    pub adjoint_bound: i32,
    pub rules: Vec<Rule>,
    pub lexicon: Vec<LexEntry>,
    signature: MonoidalSignature,
    /// `@ weight` annotation per generator, index-aligned with the signature;
    /// `None` means the semiring's one.
    raw_weights: Vec<Option<String>>,
}

impl Grammar {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        mode: GrammarMode,
        semiring: SemiringKind,
        start: String,
        vocabulary: Vec<String>,
        nonterminals: BTreeSet<String>,
        basic_types: BTreeSet<String>,
        adjoint_bound: i32,
        rules: Vec<Rule>,
        lexicon: Vec<LexEntry>,
        signature: MonoidalSignature,
        raw_weights: Vec<Option<String>>,
    ) -> Self {
        let vocab_set = vocabulary.iter().cloned().collect();
        Grammar {
            mode,
            semiring,
            start,
            vocabulary,
            vocab_set,
            nonterminals,
            basic_types,
            adjoint_bound,
            rules,
            lexicon,
            signature,
            raw_weights,
        }
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn contains_word(&self, w: &str) -> bool {
        self.vocab_set.contains(w)
    }

    pub fn signature(&self) -> &MonoidalSignature {
        &self.signature
    }

    pub fn raw_weight(&self, id: GenId) -> Option<&str> {
        self.raw_weights[id.0].as_deref()
    }

    /// The object the codomain of a parsing must equal.
    pub fn start_obj(&self) -> Obj {
        match self.mode {
            GrammarMode::Cfg => Obj::Nt(self.start.clone()),
            GrammarMode::Pregroup => Obj::Typed(PregroupType::new(self.start.clone(), 0)),
        }
    }

    /// Default closure bound: generous enough for any derivation that does
    /// not cycle through unary rules.
    pub fn default_depth_bound(prefix_len: usize) -> usize {
        10 * (prefix_len + 1)
    }
}
