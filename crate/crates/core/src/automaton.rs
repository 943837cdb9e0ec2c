//! The incremental automaton over parse states.
//!
//! States are parse states; consuming a word appends it to the codomain and
//! then closes under bounded generator application, weighing each successor
//! by the product of the generators applied after the word. Outputs gate the
//! arrow weight on acceptance. Finite truncations materialise the automaton
//! for homomorphism checks and Boolean partition-refinement bisimulation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{EngineError, Result};
use crate::grammar::{Grammar, GrammarMorphism, ParseState};
use crate::semiring::{Boolean, Semiring};
use crate::weighted::WeightedGrammar;

/// Finitely supported successor distribution of one state on one word.
/// Absent states implicitly weigh zero; stored weights are never zero.
pub type StepDistribution<S> = BTreeMap<ParseState, S>;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// One consumed word of a run: the per-source successor distributions and
/// the merged frontier with each state's intrinsic arrow weight.
#[derive(Clone, Debug)]
pub struct StepRecord<S: Semiring> {
    pub word: String,
    pub sources: Vec<(ParseState, StepDistribution<S>)>,
    pub frontier: BTreeMap<ParseState, S>,
}

#[derive(Clone, Debug)]
pub struct RunTrace<S: Semiring> {
    pub steps: Vec<StepRecord<S>>,
    pub acceptance: S,
}

impl<S: Semiring> RunTrace<S> {
    /// JSON rendering: per word the frontier as canonical strings with
    /// weights, plus the final acceptance weight.
    pub fn to_json(&self, g: &Grammar) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|rec| {
                let frontier: Vec<Value> = rec
                    .frontier
                    .iter()
                    .map(|(state, w)| {
                        json!({
                            "state": g.state_to_string(state),
                            "weight": serde_json::to_value(w).expect("weight serializes"),
                        })
                    })
                    .collect();
                json!({ "word": rec.word, "frontier": frontier })
            })
            .collect();
        json!({
            "steps": steps,
            "acceptance": serde_json::to_value(&self.acceptance).expect("weight serializes"),
        })
    }
}

/// Evaluates one transition: append `word` to `state`, then enumerate every
/// arrow that can be built on top within `depth_bound` applications.
pub fn step<S: Semiring>(
    wg: &WeightedGrammar<S>,
    state: &ParseState,
    word: &str,
    depth_bound: usize,
) -> Result<StepDistribution<S>> {
    let appended = wg.grammar.append_word(state, word)?;
    let closure = wg.grammar.closure(&appended, depth_bound)?;
    Ok(weigh_successors(wg, state, closure))
}

/// Weighs each successor by the bag of generators added on top of `base`.
fn weigh_successors<S: Semiring>(
    wg: &WeightedGrammar<S>,
    base: &ParseState,
    closure: BTreeSet<ParseState>,
) -> StepDistribution<S> {
    let base_bag = wg.grammar.generator_bag(base);
    let mut out = BTreeMap::new();
    for succ in closure {
        let mut diff = wg.grammar.generator_bag(&succ);
        for (id, count) in &base_bag {
            if let Some(c) = diff.get_mut(id) {
                *c -= (*count).min(*c);
                if *c == 0 {
                    diff.remove(id);
                }
            }
        }
        let w = wg.bag_weight(&diff);
        if !w.is_zero() {
            out.insert(succ, w);
        }
    }
    out
}

fn resolve_bound(depth_bound: Option<usize>, prefix_len: usize) -> usize {
    depth_bound.unwrap_or_else(|| Grammar::default_depth_bound(prefix_len))
}

/// Runs the automaton over a sentence, recording every step distribution.
pub fn run<S: Semiring>(
    wg: &WeightedGrammar<S>,
    sentence: &[String],
    depth_bound: Option<usize>,
) -> Result<RunTrace<S>> {
    let mut frontier: BTreeSet<ParseState> = [wg.grammar.initial_state()].into();
    let mut steps = Vec::new();
    for (k, word) in sentence.iter().enumerate() {
        let bound = resolve_bound(depth_bound, k + 1);
        let mut sources = Vec::new();
        let mut next = BTreeSet::new();
        for state in &frontier {
            let dist = step(wg, state, word, bound)?;
            next.extend(dist.keys().cloned());
            sources.push((state.clone(), dist));
        }
        let weighted_frontier = next
            .iter()
            .map(|s| (s.clone(), wg.arrow_weight(s)))
            .collect();
        steps.push(StepRecord {
            word: word.clone(),
            sources,
            frontier: weighted_frontier,
        });
        frontier = next;
    }
    let acceptance = frontier
        .iter()
        .fold(S::zero(), |acc, s| acc.add(&wg.output_weight(s)));
    Ok(RunTrace { steps, acceptance })
}

/// Frontier-only run: the per-word frontiers are identical to [`run`]'s (the
/// union of the per-source successor sets), computed with one shared closure
/// per word.
pub fn run_frontiers<S: Semiring>(
    wg: &WeightedGrammar<S>,
    sentence: &[String],
    depth_bound: Option<usize>,
) -> Result<(Vec<BTreeSet<ParseState>>, S)> {
    let mut frontier: BTreeSet<ParseState> = [wg.grammar.initial_state()].into();
    let mut frontiers = Vec::new();
    for (k, word) in sentence.iter().enumerate() {
        let bound = resolve_bound(depth_bound, k + 1);
        let mut seeds = Vec::new();
        for state in &frontier {
            seeds.push(wg.grammar.append_word(state, word)?);
        }
        let closure = wg.grammar.closure_multi(seeds, bound)?;
        // Weights of zero-weight arrows never enter a step distribution, so
        // filter the same way here.
        let mut next = BTreeSet::new();
        for s in closure {
            if !wg.arrow_weight(&s).is_zero() {
                next.insert(s);
            }
        }
        frontiers.push(next.clone());
        frontier = next;
    }
    let acceptance = frontier
        .iter()
        .fold(S::zero(), |acc, s| acc.add(&wg.output_weight(s)));
    Ok((frontiers, acceptance))
}

/// The semiring sum over all parsings of the sentence of their arrow weight,
/// evaluated by running the automaton.
pub fn word_weight<S: Semiring>(
    wg: &WeightedGrammar<S>,
    sentence: &[String],
    depth_bound: Option<usize>,
) -> Result<S> {
    Ok(run_frontiers(wg, sentence, depth_bound)?.1)
}

/// Finite materialisation of the automaton over all prefixes up to
/// `word_depth` words. States whose prefix has the full depth carry outputs
/// but no recorded transitions.
#[derive(Clone, Debug)]
pub struct TruncatedAutomaton<S: Semiring> {
    pub vocabulary: Vec<String>,
    pub word_depth: usize,
    /// Sorted canonical states; indices below are into this list.
    pub states: Vec<ParseState>,
    pub outputs: Vec<S>,
    pub transitions: BTreeMap<(usize, usize), Vec<(usize, S)>>,
    pub initial: usize,
}

impl<S: Semiring> TruncatedAutomaton<S> {
    pub fn state_index(&self, state: &ParseState) -> Option<usize> {
        self.states.binary_search(state).ok()
    }

    /// DOT rendering: states labelled with their codomain and output weight,
    /// edges labelled `word / weight`.
    pub fn to_dot(&self, g: &Grammar) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        for (i, state) in self.states.iter().enumerate() {
            let cod = g
                .codomain(state)
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(out, "  q{i} [label=\"[{cod}] / {}\"];", self.outputs[i]);
        }
        for ((from, widx), succs) in &self.transitions {
            for (to, w) in succs {
                let _ = writeln!(
                    out,
                    "  q{from} -> q{to} [label=\"{} / {w}\"];",
                    self.vocabulary[*widx]
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first materialisation over every word sequence of length at most
/// `word_depth`.
pub fn truncate<S: Semiring>(
    wg: &WeightedGrammar<S>,
    word_depth: usize,
    depth_bound: Option<usize>,
    state_cap: usize,
) -> Result<TruncatedAutomaton<S>> {
    let vocabulary: Vec<String> = wg.grammar.vocabulary().to_vec();
    let initial = wg.grammar.initial_state();
    let mut all: BTreeSet<ParseState> = [initial.clone()].into();
    let mut level: Vec<ParseState> = vec![initial.clone()];
    let mut raw: Vec<(ParseState, usize, StepDistribution<S>)> = Vec::new();

    for d in 0..word_depth {
        let bound = resolve_bound(depth_bound, d + 1);
        let mut next = BTreeSet::new();
        for state in &level {
            for (widx, word) in vocabulary.iter().enumerate() {
                let dist = step(wg, state, word, bound)?;
                for succ in dist.keys() {
                    if all.insert(succ.clone()) {
                        next.insert(succ.clone());
                    }
                }
                raw.push((state.clone(), widx, dist));
            }
            if all.len() > state_cap {
                return Err(EngineError::StateCapExceeded { cap: state_cap });
            }
        }
        level = next.into_iter().collect();
    }

    let states: Vec<ParseState> = all.into_iter().collect();
    let index: BTreeMap<&ParseState, usize> =
        states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let outputs = states.iter().map(|s| wg.output_weight(s)).collect();
    let mut transitions = BTreeMap::new();
    for (from, widx, dist) in raw {
        let entry: Vec<(usize, S)> = dist.into_iter().map(|(s, w)| (index[&s], w)).collect();
        transitions.insert((index[&from], widx), entry);
    }
    let initial = index[&initial];
    Ok(TruncatedAutomaton {
        vocabulary,
        word_depth,
        states,
        outputs,
        transitions,
        initial,
    })
}

/// Why a coalgebra-homomorphism check failed.
#[derive(Clone, Debug)]
pub struct HomViolation {
    pub state: ParseState,
    pub word: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub enum HomCheck {
    Holds,
    Violated(HomViolation),
}

impl HomCheck {
    pub fn holds(&self) -> bool {
        matches!(self, HomCheck::Holds)
    }
}

/// Verifies on the source truncation that mapping states commutes with
/// outputs and with step distributions: outputs must agree, and pushing a
/// source distribution forward along the morphism (adding weights when
/// states merge) must reproduce the target distribution.
pub fn check_coalgebra_hom<S: Semiring>(
    m: &GrammarMorphism,
    src: &WeightedGrammar<S>,
    dst: &WeightedGrammar<S>,
    word_depth: usize,
    depth_bound: Option<usize>,
    tol: f64,
) -> Result<HomCheck> {
    let trunc = truncate(src, word_depth, depth_bound, DEFAULT_STATE_CAP)?;
    for state in &trunc.states {
        let mapped = m.apply_state(state)?;
        let out_src = src.output_weight(state);
        let out_dst = dst.output_weight(&mapped);
        if !out_src.approx_eq(&out_dst, tol) {
            return Ok(HomCheck::Violated(HomViolation {
                state: state.clone(),
                word: None,
                detail: format!("output weight {out_src} maps to {out_dst}"),
            }));
        }
        if state.prefix.len() >= word_depth {
            continue;
        }
        let bound = resolve_bound(depth_bound, state.prefix.len() + 1);
        for word in src.grammar.vocabulary() {
            let src_dist = step(src, state, word, bound)?;
            let mut pushed: BTreeMap<ParseState, S> = BTreeMap::new();
            for (succ, w) in src_dist {
                let image = m.apply_state(&succ)?;
                pushed
                    .entry(image)
                    .and_modify(|acc| *acc = acc.add(&w))
                    .or_insert(w);
            }
            let dst_dist = step(dst, &mapped, word, bound)?;
            let keys: BTreeSet<&ParseState> = pushed.keys().chain(dst_dist.keys()).collect();
            for key in keys {
                let a = pushed.get(key).cloned().unwrap_or_else(S::zero);
                let b = dst_dist.get(key).cloned().unwrap_or_else(S::zero);
                if !a.approx_eq(&b, tol) {
                    return Ok(HomCheck::Violated(HomViolation {
                        state: state.clone(),
                        word: Some(word.clone()),
                        detail: format!(
                            "successor `{}` has pushforward weight {a} but target weight {b}",
                            dst.grammar.state_to_string(key)
                        ),
                    }));
                }
            }
        }
    }
    Ok(HomCheck::Holds)
}

/// Strong bisimulation by partition refinement on the disjoint union of two
/// Boolean truncations; the verdict relates the initial states.
pub fn boolean_bisimilar(
    a: &TruncatedAutomaton<Boolean>,
    b: &TruncatedAutomaton<Boolean>,
) -> Result<bool> {
    let vocab_a: BTreeSet<&String> = a.vocabulary.iter().collect();
    let vocab_b: BTreeSet<&String> = b.vocabulary.iter().collect();
    if vocab_a != vocab_b {
        return Err(EngineError::VocabularyMismatch(
            "bisimulation requires identical vocabularies".to_string(),
        ));
    }
    let words: Vec<&String> = vocab_a.into_iter().collect();

    let offset = a.states.len();
    let total = offset + b.states.len();

    // successor sets per (global state, word), transitions present iff true.
    let widx = |ta: &TruncatedAutomaton<Boolean>, w: &String| -> usize {
        ta.vocabulary
            .iter()
            .position(|v| v == w)
            .expect("word present")
    };
    let mut succs: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); words.len()]; total];
    for (i, _) in a.states.iter().enumerate() {
        for (k, w) in words.iter().enumerate() {
            if let Some(list) = a.transitions.get(&(i, widx(a, w))) {
                succs[i][k] = list.iter().filter(|(_, w)| w.0).map(|(t, _)| *t).collect();
            }
        }
    }
    for (j, _) in b.states.iter().enumerate() {
        for (k, w) in words.iter().enumerate() {
            if let Some(list) = b.transitions.get(&(j, widx(b, w))) {
                succs[offset + j][k] = list
                    .iter()
                    .filter(|(_, w)| w.0)
                    .map(|(t, _)| offset + t)
                    .collect();
            }
        }
    }

    let mut block: Vec<usize> = (0..total)
        .map(|i| {
            let out = if i < offset {
                a.outputs[i].0
            } else {
                b.outputs[i - offset].0
            };
            usize::from(out)
        })
        .collect();

    loop {
        let mut keys: BTreeMap<(usize, Vec<BTreeSet<usize>>), usize> = BTreeMap::new();
        let mut next: Vec<usize> = Vec::with_capacity(total);
        for i in 0..total {
            let sig: Vec<BTreeSet<usize>> = succs[i]
                .iter()
                .map(|list| list.iter().map(|t| block[*t]).collect())
                .collect();
            let n = keys.len();
            let id = *keys.entry((block[i], sig)).or_insert(n);
            next.push(id);
        }
        if next == block {
            break;
        }
        block = next;
    }

    Ok(block[a.initial] == block[offset + b.initial])
}

/// Outcome of a bounded language-equivalence check.
#[derive(Clone, Debug)]
pub enum LanguageEquiv<S> {
    Equivalent,
    Counterexample {
        sentence: Vec<String>,
        left: S,
        right: S,
    },
}

/// Compares word weights of every sentence up to `max_len`; the numeric
/// surrogate for bisimilarity.
pub fn language_equiv<S: Semiring>(
    a: &WeightedGrammar<S>,
    b: &WeightedGrammar<S>,
    max_len: usize,
    tol: f64,
    depth_bound: Option<usize>,
) -> Result<LanguageEquiv<S>> {
    let vocab_a: BTreeSet<&String> = a.grammar.vocabulary().iter().collect();
    let vocab_b: BTreeSet<&String> = b.grammar.vocabulary().iter().collect();
    if vocab_a != vocab_b {
        return Err(EngineError::VocabularyMismatch(
            "language equivalence requires identical vocabularies".to_string(),
        ));
    }
    let mut stack: Vec<Vec<String>> = vec![Vec::new()];
    while let Some(sentence) = stack.pop() {
        let left = word_weight(a, &sentence, depth_bound)?;
        let right = word_weight(b, &sentence, depth_bound)?;
        if !left.approx_eq(&right, tol) {
            return Ok(LanguageEquiv::Counterexample {
                sentence,
                left,
                right,
            });
        }
        if sentence.len() < max_len {
            for w in a.grammar.vocabulary().iter().rev() {
                let mut next = sentence.clone();
                next.push(w.clone());
                stack.push(next);
            }
        }
    }
    Ok(LanguageEquiv::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::load_grammar;
    use crate::semiring::{NonNegReal, Viterbi};

    const ALICE: &str = "\
mode: pregroup
start: s
word: Alice : n
word: loves : n^r s n^l
word: Bob : n
";

    const COMPLEX: &str = "\
mode: cfg
start: s
rule: s -> np vp
rule: vp -> tv np
rule: vp -> itv
rule: np -> adj np
rule: np -> Complex
rule: adj -> Complex
rule: np -> houses
rule: tv -> houses
rule: itv -> houses
rule: np -> students
rule: itv -> disappoint
";

    const AMBIGUOUS: &str = "\
mode: cfg
semiring: real
start: s
rule: s -> s s @ 0.25
rule: s -> a @ 0.5
rule: s -> b @ 0.25
";

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(|w| w.to_string()).collect()
    }

    fn boolean(text: &str) -> WeightedGrammar<Boolean> {
        WeightedGrammar::new(load_grammar(text).unwrap()).unwrap()
    }

    #[test]
    fn initial_state_accepts_nothing() {
        let wg = boolean(COMPLEX);
        let init = wg.grammar.initial_state();
        assert!(init.prefix.is_empty());
        assert_eq!(wg.output_weight(&init), Boolean(false));
        assert!(step(&wg, &init, "Complex", 10).is_ok());
    }

    #[test]
    fn step_from_initial_on_first_word() {
        let wg = boolean(COMPLEX);
        let dist = step(&wg, &wg.grammar.initial_state(), "Complex", 10).unwrap();
        let rendered: Vec<String> = dist.keys().map(|s| wg.grammar.state_to_string(s)).collect();
        assert_eq!(rendered, ["Complex", "np(Complex)", "adj(Complex)"]);
        assert!(dist.values().all(|w| w.0));
    }

    #[test]
    fn step_closure_includes_multi_level_reductions() {
        let wg = boolean(COMPLEX);
        let from = wg.grammar.state_from_str("np(Complex)").unwrap();
        let dist = step(&wg, &from, "houses", 20).unwrap();
        let rendered: BTreeSet<String> = dist
            .keys()
            .map(|s| {
                wg.grammar
                    .codomain(s)
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        for expected in ["np houses", "np np", "np itv", "np vp", "s", "np tv"] {
            assert!(rendered.contains(expected), "missing codomain {expected}");
        }
    }

    #[test]
    fn pregroup_step_inserts_lexicon_then_contracts() {
        let wg = boolean(ALICE);
        let from = wg.grammar.state_from_str("Alice[n]").unwrap();
        let dist = step(&wg, &from, "loves", 20).unwrap();
        let rendered: Vec<String> = dist
            .keys()
            .map(|s| {
                wg.grammar
                    .codomain(s)
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        assert_eq!(rendered, ["n loves", "n n^r s n^l", "s n^l"]);
    }

    #[test]
    fn run_accepts_the_example_and_rejects_noise() {
        let wg = boolean(ALICE);
        let trace = run(&wg, &words("Alice loves Bob"), None).unwrap();
        assert_eq!(trace.acceptance, Boolean(true));
        let trace = run(&wg, &words("Alice Alice"), None).unwrap();
        assert_eq!(trace.acceptance, Boolean(false));
        let trace = run(&wg, &[], None).unwrap();
        assert_eq!(trace.acceptance, Boolean(false));
    }

    #[test]
    fn run_and_frontier_run_agree() {
        let wg = boolean(COMPLEX);
        for sentence in [
            "Complex houses students",
            "houses disappoint",
            "Complex Complex",
        ] {
            let sentence = words(sentence);
            let trace = run(&wg, &sentence, None).unwrap();
            let (frontiers, acceptance) = run_frontiers(&wg, &sentence, None).unwrap();
            assert_eq!(trace.acceptance, acceptance);
            for (rec, frontier) in trace.steps.iter().zip(&frontiers) {
                let from_trace: BTreeSet<&ParseState> = rec.frontier.keys().collect();
                let from_frontier: BTreeSet<&ParseState> = frontier.iter().collect();
                assert_eq!(from_trace, from_frontier);
            }
        }
    }

    #[test]
    fn word_weight_matches_enumeration_oracle() {
        let g = load_grammar(AMBIGUOUS).unwrap();
        let wg = WeightedGrammar::<NonNegReal>::new(g.clone()).unwrap();
        let sentence = words("a a a");
        let parsings = g.enumerate_parsings(&sentence, 40).unwrap();
        assert_eq!(parsings.len(), 2);
        let oracle: f64 = parsings.iter().map(|p| wg.arrow_weight(p).0).sum();
        let got = word_weight(&wg, &sentence, None).unwrap();
        assert!(got.approx_eq(&NonNegReal(oracle), 1e-12));
        assert!((oracle - 2.0 * 0.25_f64.powi(2) * 0.5_f64.powi(3)).abs() < 1e-15);

        let vg = WeightedGrammar::<Viterbi>::new(g).unwrap();
        let best = word_weight(&vg, &sentence, None).unwrap();
        assert!(best.approx_eq(&Viterbi(0.25_f64.powi(2) * 0.5_f64.powi(3)), 1e-12));
    }

    #[test]
    fn truncation_counts_and_outputs() {
        let wg = boolean(ALICE);
        let t0 = truncate(&wg, 0, None, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(t0.states.len(), 1);
        assert!(t0.transitions.is_empty());

        let t1 = truncate(&wg, 1, None, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(t1.states.len(), 7);
        for (i, state) in t1.states.iter().enumerate() {
            assert_eq!(t1.outputs[i], wg.output_weight(state));
        }

        assert!(matches!(
            truncate(&wg, 2, None, 3),
            Err(EngineError::StateCapExceeded { .. })
        ));
    }

    #[test]
    fn automaton_dot_is_deterministic() {
        let wg = boolean(ALICE);
        let t = truncate(&wg, 1, None, DEFAULT_STATE_CAP).unwrap();
        let a = t.to_dot(&wg.grammar);
        let b = t.to_dot(&wg.grammar);
        assert_eq!(a, b);
        assert!(a.contains("digraph automaton"));
    }

    #[test]
    fn identity_is_a_coalgebra_homomorphism() {
        let wg = boolean(COMPLEX);
        let m = GrammarMorphism::identity(&wg.grammar).unwrap();
        let check = check_coalgebra_hom(&m, &wg, &wg, 2, None, 1e-9).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn automata_are_self_bisimilar() {
        let wg = boolean(ALICE);
        let t = truncate(&wg, 2, None, DEFAULT_STATE_CAP).unwrap();
        assert!(boolean_bisimilar(&t, &t).unwrap());
    }

    #[test]
    fn missing_rule_breaks_bisimilarity() {
        let full = boolean(COMPLEX);
        let pruned = boolean(&COMPLEX.replace("rule: vp -> itv\n", ""));
        let ta = truncate(&full, 3, None, DEFAULT_STATE_CAP).unwrap();
        let tb = truncate(&pruned, 3, None, DEFAULT_STATE_CAP).unwrap();
        assert!(!boolean_bisimilar(&ta, &tb).unwrap());
    }

    #[test]
    fn language_equiv_finds_short_counterexamples() {
        let g = load_grammar(AMBIGUOUS).unwrap();
        let a = WeightedGrammar::<NonNegReal>::new(g.clone()).unwrap();
        let mut b = a.clone();
        let lex = g.signature().by_name("s -> a").unwrap();
        b.weights.set(lex, NonNegReal(1.0));
        match language_equiv(&a, &b, 3, 1e-9, None).unwrap() {
            LanguageEquiv::Counterexample { sentence, .. } => {
                assert_eq!(sentence, words("a"));
            }
            LanguageEquiv::Equivalent => panic!("expected a counterexample"),
        }
        assert!(matches!(
            language_equiv(&a, &a, 3, 1e-9, None).unwrap(),
            LanguageEquiv::Equivalent
        ));
    }

    #[test]
    fn weakly_equivalent_encodings_agree_on_the_language() {
        let cfg = boolean("mode: cfg\nstart: s\nrule: s -> a b\n");
        let pg = boolean("mode: pregroup\nstart: s\nword: a : s n^l\nword: b : n\n");
        assert!(matches!(
            language_equiv(&cfg, &pg, 4, 0.0, None).unwrap(),
            LanguageEquiv::Equivalent
        ));
    }
}
