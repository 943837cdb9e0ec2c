//! Compliance, maximal parse states and weight estimation from a finite
//! probabilistic model over parsed sentences.
//!
//! The model is one finite joint distribution over (sentence, parsing)
//! pairs; both conditional families (completions of a prefix, parsings of a
//! sentence) are derived from it, which keeps them mutually consistent and
//! makes the maximal-parse-state likelihood a finite sum. Fitting solves the
//! vector least-squares problem over rows `B_p(·)` against targets
//! `log pr_M(p)` and exponentiates the solution.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{EngineError, Result};
use crate::grammar::{GenId, Grammar, ParseState, Structure, Tree, WordSlot};
use crate::semiring::NonNegReal;
use crate::weighted::WeightMap;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub sentence: Vec<String>,
    pub parsing: ParseState,
    pub prob: f64,
}

/// Finite joint distribution over (sentence, parsing) pairs.
#[derive(Clone, Debug)]
pub struct CorpusModel {
    pub entries: Vec<CorpusEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    sentence: Vec<String>,
    parsing: String,
    prob: f64,
}

impl CorpusModel {
    /// Loads and validates the JSON corpus format: a list of
    /// `{sentence, parsing, prob}` objects. Duplicate (sentence, parsing)
    /// pairs accumulate their mass.
    pub fn load_json(text: &str, grammar: &Grammar) -> Result<Self> {
        let raw: Vec<RawEntry> = serde_json::from_str(text)?;
        let mut merged: BTreeMap<(Vec<String>, ParseState), f64> = BTreeMap::new();
        let mut order: Vec<(Vec<String>, ParseState)> = Vec::new();
        for (index, entry) in raw.into_iter().enumerate() {
            let fail = |message: String| EngineError::CorpusEntry { index, message };
            if !(0.0..=1.0).contains(&entry.prob) {
                return Err(fail(format!("probability {} outside [0, 1]", entry.prob)));
            }
            let parsing = grammar
                .state_from_str(&entry.parsing)
                .map_err(|e| fail(format!("invalid parsing `{}`: {e}", entry.parsing)))?;
            if parsing.prefix != entry.sentence {
                return Err(fail("parsing does not cover the sentence".to_string()));
            }
            if !grammar.is_parsing(&parsing) {
                return Err(fail(
                    "state does not reduce to the start symbol".to_string(),
                ));
            }
            let key = (entry.sentence, parsing);
            if !merged.contains_key(&key) {
                order.push(key.clone());
            }
            *merged.entry(key).or_insert(0.0) += entry.prob;
        }
        let entries: Vec<CorpusEntry> = order
            .into_iter()
            .map(|key| {
                let prob = merged[&key];
                CorpusEntry {
                    sentence: key.0,
                    parsing: key.1,
                    prob,
                }
            })
            .collect();
        let model = CorpusModel { entries };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.entries.iter().map(|e| e.prob).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(EngineError::Corpus(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn prefix_mass(&self, prefix: &[String]) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.sentence.len() >= prefix.len() && e.sentence[..prefix.len()] == *prefix)
            .map(|e| e.prob)
            .sum()
    }

    fn sentence_mass(&self, sentence: &[String]) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.sentence == sentence)
            .map(|e| e.prob)
            .sum()
    }

    /// `Pr(completion | prefix)`: the renormalised marginal over sentence
    /// completions of the prefix, sorted for determinism.
    pub fn conditional_completion(&self, prefix: &[String]) -> Result<Vec<(Vec<String>, f64)>> {
        let mass = self.prefix_mass(prefix);
        if mass <= 0.0 {
            return Err(EngineError::ZeroMassPrefix(prefix.join(" ")));
        }
        let mut acc: BTreeMap<Vec<String>, f64> = BTreeMap::new();
        for e in &self.entries {
            if e.sentence.len() >= prefix.len() && e.sentence[..prefix.len()] == *prefix {
                *acc.entry(e.sentence[prefix.len()..].to_vec())
                    .or_insert(0.0) += e.prob;
            }
        }
        Ok(acc.into_iter().map(|(c, p)| (c, p / mass)).collect())
    }

    /// `Pr(parsing | sentence)`: the renormalised joint restricted to one
    /// sentence.
    pub fn conditional_parsing(&self, sentence: &[String]) -> Result<Vec<(ParseState, f64)>> {
        let mass = self.sentence_mass(sentence);
        if mass <= 0.0 {
            return Err(EngineError::ZeroMassPrefix(sentence.join(" ")));
        }
        Ok(self
            .entries
            .iter()
            .filter(|e| e.sentence == sentence)
            .map(|e| (e.parsing.clone(), e.prob / mass))
            .collect())
    }

    /// All distinct prefixes of support sentences (including the empty one),
    /// sorted.
    pub fn prefixes(&self) -> BTreeSet<Vec<String>> {
        let mut out = BTreeSet::new();
        for e in &self.entries {
            for n in 0..=e.sentence.len() {
                out.insert(e.sentence[..n].to_vec());
            }
        }
        out
    }
}

/// Whether the parsing factors through `p` tensored with a remainder: CFG
/// states embed when each of their trees occurs as a subtree of the parsing
/// at the matching leaf span; pregroup states when their lexicon choices
/// agree and their links are a subset of the parsing's.
pub fn is_compliant(parsing: &ParseState, p: &ParseState) -> Result<bool> {
    let n = p.prefix.len();
    if parsing.prefix.len() < n || parsing.prefix[..n] != p.prefix[..] {
        return Err(EngineError::Corpus(format!(
            "state prefix `{}` is not a prefix of the parsed sentence `{}`",
            p.prefix.join(" "),
            parsing.prefix.join(" ")
        )));
    }
    match (&parsing.structure, &p.structure) {
        (Structure::Forest(parse_trees), Structure::Forest(state_trees)) => {
            // Collect every subtree of the parsing with its leaf span.
            let mut spans: Vec<(usize, usize, &Tree)> = Vec::new();
            let mut offset = 0;
            for t in parse_trees {
                offset = collect_spans(t, offset, &mut spans);
            }
            let mut start = 0;
            for t in state_trees {
                let mut leaves = Vec::new();
                t.leaves(&mut leaves);
                let end = start + leaves.len();
                let found = spans
                    .iter()
                    .any(|(l, r, sub)| *l == start && *r == end && *sub == t);
                if !found {
                    return Ok(false);
                }
                start = end;
            }
            Ok(true)
        }
        (Structure::Pregroup(parse_st), Structure::Pregroup(state_st)) => {
            for (w, choice) in state_st.choices.iter().enumerate() {
                match choice {
                    WordSlot::Bare => {}
                    WordSlot::Entry(gen) => {
                        if parse_st.choices[w] != WordSlot::Entry(*gen) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(state_st.links.is_subset(&parse_st.links))
        }
        _ => Err(EngineError::Corpus(
            "mixed parse state structures".to_string(),
        )),
    }
}

fn collect_spans<'a>(
    tree: &'a Tree,
    offset: usize,
    out: &mut Vec<(usize, usize, &'a Tree)>,
) -> usize {
    let end = match tree {
        Tree::Leaf(_) => offset + 1,
        Tree::Node { children, .. } => {
            let mut cur = offset;
            for c in children {
                cur = collect_spans(c, cur, out);
            }
            cur
        }
    };
    out.push((offset, end, tree));
    end
}

/// A compliant state is maximal when no single further generator
/// application stays compliant. Applications strictly grow the canonical
/// structure, so single-step checking is complete.
pub fn is_maximal(grammar: &Grammar, parsing: &ParseState, p: &ParseState) -> Result<bool> {
    if !is_compliant(parsing, p)? {
        return Err(EngineError::Corpus(
            "maximality asked of a non-compliant state".to_string(),
        ));
    }
    for (gen, pos) in grammar.applicable_generators(p) {
        let next = grammar.apply_generator(p, gen, pos)?;
        if is_compliant(parsing, &next)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All states over the prefix that comply with the parsing, found by closing
/// the bare prefix state under compliant generator applications (compliance
/// is downward closed, so this is exhaustive).
pub fn compliant_states(
    grammar: &Grammar,
    parsing: &ParseState,
    prefix_len: usize,
) -> Result<BTreeSet<ParseState>> {
    let prefix = parsing.prefix[..prefix_len].to_vec();
    let bare = grammar.bare_state(&prefix)?;
    if !is_compliant(parsing, &bare)? {
        return Ok(BTreeSet::new());
    }
    let mut visited: BTreeSet<ParseState> = [bare.clone()].into();
    let mut queue = VecDeque::from([bare]);
    while let Some(state) = queue.pop_front() {
        for (gen, pos) in grammar.applicable_generators(&state) {
            let next = grammar.apply_generator(&state, gen, pos)?;
            if !visited.contains(&next) && is_compliant(parsing, &next)? {
                visited.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(visited)
}

/// The maximal states of a prefix on one parsing. For contraction-only
/// pregroup states and epsilon-free CFG forests this is a singleton; the
/// caller can still observe multiplicity if a grammar ever produces it.
pub fn maximal_states(
    grammar: &Grammar,
    parsing: &ParseState,
    prefix_len: usize,
) -> Result<Vec<ParseState>> {
    let mut out = Vec::new();
    for state in compliant_states(grammar, parsing, prefix_len)? {
        if is_maximal(grammar, parsing, &state)? {
            out.push(state);
        }
    }
    Ok(out)
}

/// `pr_M(p)`: the joint mass of parsings for which `p` is the maximal state
/// of its prefix, normalised by the prefix mass.
pub fn maximal_likelihood(grammar: &Grammar, model: &CorpusModel, p: &ParseState) -> Result<f64> {
    let mass = model.prefix_mass(&p.prefix);
    if mass <= 0.0 {
        return Err(EngineError::ZeroMassPrefix(p.prefix.join(" ")));
    }
    let n = p.prefix.len();
    let mut qualifying = 0.0;
    for e in &model.entries {
        if e.sentence.len() < n || e.sentence[..n] != p.prefix[..] {
            continue;
        }
        if is_compliant(&e.parsing, p)? && is_maximal(grammar, &e.parsing, p)? {
            qualifying += e.prob;
        }
    }
    Ok(qualifying / mass)
}

/// Multiset of generator occurrences; the regression features.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureBag {
    pub counts: BTreeMap<GenId, usize>,
}

pub fn generator_bag(grammar: &Grammar, p: &ParseState) -> FeatureBag {
    FeatureBag {
        counts: grammar.generator_bag(p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMethod {
    NormalEquations,
    GradientDescent,
}

#[derive(Clone, Copy, Debug)]
pub struct FitParams {
    pub max_iters: usize,
    pub grad_tol: f64,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            max_iters: 500_000,
            grad_tol: 1e-13,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub weights: WeightMap<NonNegReal>,
    pub residual: f64,
    pub rows_used: usize,
    pub rank_deficient: bool,
    /// Generators whose design-matrix column is identically zero; their
    /// fitted weight is the minimum-norm choice 1.
    pub unidentified: Vec<GenId>,
}

/// The default state set: every maximal state of every prefix of every
/// support sentence. These are exactly the states with nonzero likelihood.
pub fn default_fit_states(grammar: &Grammar, model: &CorpusModel) -> Result<Vec<ParseState>> {
    let mut out = BTreeSet::new();
    for e in &model.entries {
        for n in 0..=e.sentence.len() {
            for state in maximal_states(grammar, &e.parsing, n)? {
                out.insert(state);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Least-squares estimation of `log r(g)` from rows `B_p(·)` against
/// `log pr_M(p)`; rows with zero likelihood are dropped. Both methods reach
/// the minimum-norm solution on rank-deficient problems (gradient descent
/// starts at the origin and stays in the row space).
pub fn fit_weights(
    grammar: &Grammar,
    model: &CorpusModel,
    states: &[ParseState],
    method: FitMethod,
    params: FitParams,
) -> Result<FitResult> {
    let cols = grammar.signature().len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut targets: Vec<f64> = Vec::new();
    for p in states {
        let pr = maximal_likelihood(grammar, model, p)?;
        if pr <= 0.0 {
            continue;
        }
        let bag = grammar.generator_bag(p);
        let mut row = vec![0.0; cols];
        for (id, count) in bag {
            row[id.0] = count as f64;
        }
        rows.push(row);
        targets.push(pr.ln());
    }
    if rows.is_empty() {
        return Err(EngineError::Fit(
            "no usable rows: every state has zero likelihood".to_string(),
        ));
    }

    let m = rows.len();
    let x = DMatrix::from_row_iterator(m, cols, rows.iter().flatten().copied());
    let y = DVector::from_vec(targets);

    let svd = x.clone().svd(true, true);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let rank_eps = max_sv * 1e-10;
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > rank_eps)
        .count();
    let rank_deficient = rank < cols;

    let beta = match method {
        FitMethod::NormalEquations => svd
            .solve(&y, rank_eps)
            .map_err(|e| EngineError::Fit(e.to_string()))?,
        FitMethod::GradientDescent => {
            let mut beta = DVector::zeros(cols);
            for _ in 0..params.max_iters {
                let grad = x.transpose() * (&x * &beta - &y);
                if grad.amax() <= params.grad_tol {
                    break;
                }
                let xg = &x * &grad;
                let denom = xg.dot(&xg);
                if denom == 0.0 {
                    break;
                }
                let eta = grad.dot(&grad) / denom;
                beta -= eta * grad;
            }
            beta
        }
    };

    let residual = (&x * &beta - &y).norm();
    let mut weights = Vec::with_capacity(cols);
    for i in 0..cols {
        weights.push(NonNegReal(beta[i].exp()));
    }
    let unidentified = (0..cols)
        .filter(|i| (0..m).all(|r| x[(r, *i)] == 0.0))
        .map(GenId)
        .collect();
    Ok(FitResult {
        weights: WeightMap::from_vec(weights),
        residual,
        rows_used: m,
        rank_deficient,
        unidentified,
    })
}

/// Per-prefix coherence: the maximal-state likelihoods of one prefix should
/// partition its mass when every support parsing has a unique maximal state.
#[derive(Clone, Debug)]
pub struct PrefixCoherence {
    pub prefix: Vec<String>,
    pub mass: f64,
    pub likelihood_sum: f64,
    /// True when some support parsing admits more than one maximal state
    /// for this prefix.
    pub multiplicity: bool,
}

pub fn prefix_coherence(grammar: &Grammar, model: &CorpusModel) -> Result<Vec<PrefixCoherence>> {
    let mut out = Vec::new();
    for prefix in model.prefixes() {
        let mass = model.prefix_mass(&prefix);
        let mut states: BTreeSet<ParseState> = BTreeSet::new();
        let mut multiplicity = false;
        for e in &model.entries {
            let n = prefix.len();
            if e.sentence.len() < n || e.sentence[..n] != prefix[..] {
                continue;
            }
            let maximal = maximal_states(grammar, &e.parsing, n)?;
            if maximal.len() > 1 {
                multiplicity = true;
            }
            states.extend(maximal);
        }
        let mut likelihood_sum = 0.0;
        for state in &states {
            likelihood_sum += maximal_likelihood(grammar, model, state)?;
        }
        out.push(PrefixCoherence {
            prefix,
            mass,
            likelihood_sum,
            multiplicity,
        });
    }
    Ok(out)
}
