//! Semiring-weighted incremental grammar engine.
//!
//! Context-free and pregroup grammars are presented as generator systems;
//! parse states are canonical forms of the arrows they generate. The engine
//! runs a grammar as a weighted automaton over parse states one word at a
//! time, checks structure-preserving maps between grammars against the
//! induced automata, and fits generator weights to a finite probabilistic
//! model of parsed sentences.
//!
//! ```
//! use stepgram::automaton::word_weight;
//! use stepgram::{load_grammar, NonNegReal, WeightedGrammar};
//!
//! let grammar = load_grammar(
//!     "mode: cfg\nstart: s\nrule: s -> n v @ 1.0\nrule: n -> ants @ 0.5\nrule: v -> march @ 0.5\n",
//! )?;
//! let wg = WeightedGrammar::<NonNegReal>::new(grammar)?;
//! let sentence: Vec<String> = vec!["ants".into(), "march".into()];
//! assert_eq!(word_weight(&wg, &sentence, None)?, NonNegReal(0.25));
//! # Ok::<(), stepgram::EngineError>(())
//! ```

pub mod automaton;
pub mod error;
pub mod fitting;
pub mod grammar;
pub mod render;
pub mod semiring;
pub mod weighted;

pub use error::{EngineError, Result};
pub use grammar::{
    load_grammar, load_morphism, GenId, GenKind, Grammar, GrammarMode, GrammarMorphism,
    MonoidalSignature, Obj, ParseState, PregroupType, Structure, Tree,
};
pub use semiring::{Boolean, NonNegReal, Semiring, SemiringKind, Viterbi};
pub use weighted::{check_weight_preserving, WeightMap, WeightedGrammar};
