//! Shared fixtures and independent oracles for integration tests. The
//! oracles deliberately avoid the parse-state machinery: CFG membership via
//! reverse rewriting over symbol sequences, pregroup membership via an
//! interval dynamic program over type rows.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::fs;
use std::path::PathBuf;

use stepgram::{load_grammar, Grammar, PregroupType};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture_text(name: &str) -> String {
    fs::read_to_string(workspace_root().join("grammars").join(name)).unwrap()
}

pub fn load_fixture(name: &str) -> Grammar {
    load_grammar(&fixture_text(name)).unwrap()
}

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(|w| w.to_string()).collect()
}

/// Every sentence over the vocabulary with length `min_len..=max_len`, in
/// deterministic order.
pub fn all_sentences(vocab: &[String], min_len: usize, max_len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<String>> = vec![Vec::new()];
    for len in 0..=max_len {
        if len >= min_len {
            out.extend(level.iter().cloned());
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * vocab.len());
        for sentence in &level {
            for w in vocab {
                let mut s = sentence.clone();
                s.push(w.clone());
                next.push(s);
            }
        }
        level = next;
    }
    out
}

/// CFG membership by the rewriting semantics run in reverse: starting from
/// the sentence, replace any right-hand side occurrence with its left-hand
/// symbol; accept when the start symbol alone is reached. Right-hand sides
/// are nonempty, so sequences never grow and the search terminates.
pub fn cfg_rewrite_accepts(g: &Grammar, sentence: &[String]) -> bool {
    let target = vec![g.start.clone()];
    let init: Vec<String> = sentence.to_vec();
    let mut visited: BTreeSet<Vec<String>> = [init.clone()].into();
    let mut queue = VecDeque::from([init]);
    while let Some(seq) = queue.pop_front() {
        if seq == target {
            return true;
        }
        for rule in &g.rules {
            let k = rule.rhs.len();
            if k > seq.len() {
                continue;
            }
            for i in 0..=seq.len() - k {
                if seq[i..i + k] == rule.rhs[..] {
                    let mut next = Vec::with_capacity(seq.len() - k + 1);
                    next.extend_from_slice(&seq[..i]);
                    next.push(rule.lhs.clone());
                    next.extend_from_slice(&seq[i + k..]);
                    if visited.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    false
}

/// Pregroup membership: some lexicon assignment must let the concatenated
/// type row reduce to exactly the start type by contractions alone, decided
/// by an interval dynamic program.
pub fn pregroup_dp_accepts(g: &Grammar, sentence: &[String]) -> bool {
    let mut options: Vec<Vec<&stepgram::grammar::LexEntry>> = Vec::new();
    for w in sentence {
        let opts: Vec<_> = g.lexicon.iter().filter(|e| &e.word == w).collect();
        if opts.is_empty() {
            return false;
        }
        options.push(opts);
    }
    if options.is_empty() {
        return false;
    }
    let mut idx = vec![0usize; options.len()];
    loop {
        let row: Vec<&PregroupType> = idx
            .iter()
            .zip(&options)
            .flat_map(|(i, opts)| opts[*i].types.iter())
            .collect();
        if row_reduces_to_start(&row, &g.start) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == options.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn row_reduces_to_start(row: &[&PregroupType], start: &str) -> bool {
    let n = row.len();
    // null[i][j]: the half-open interval [i, j) contracts away entirely.
    let mut null = vec![vec![false; n + 1]; n + 1];
    for (i, row_flags) in null.iter_mut().enumerate() {
        row_flags[i] = true;
    }
    for len in (2..=n).step_by(2) {
        for i in 0..=n - len {
            let j = i + len;
            let mut m = i + 1;
            while m < j {
                if row[i].contracts_with(row[m]) && null[i + 1][m] && null[m + 1][j] {
                    null[i][j] = true;
                    break;
                }
                m += 2;
            }
        }
    }
    (0..n).any(|k| null[0][k] && row[k].base == start && row[k].order == 0 && null[k + 1][n])
}
