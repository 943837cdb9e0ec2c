//! Cross-checks between the parse-state engine and independent recognisers,
//! plus frontier well-formedness over automaton runs.

mod common;

use std::collections::BTreeSet;

use stepgram::automaton::{run, run_frontiers, word_weight};
use stepgram::fitting::is_compliant;
use stepgram::semiring::{Boolean, NonNegReal, Semiring, Viterbi};
use stepgram::{Grammar, ParseState, WeightedGrammar};

fn bound_for(len: usize) -> usize {
    Grammar::default_depth_bound(len)
}

#[test]
fn cfg_acceptance_agrees_with_the_rewriting_oracle() {
    for name in ["complex.gram", "ambiguous.gram", "twins.gram", "fit.gram"] {
        let g = common::load_fixture(name);
        for sentence in common::all_sentences(g.vocabulary(), 0, 5) {
            let parses = !g
                .enumerate_parsings(&sentence, bound_for(sentence.len()))
                .unwrap()
                .is_empty();
            assert_eq!(
                parses,
                common::cfg_rewrite_accepts(&g, &sentence),
                "{name}: {:?}",
                sentence
            );
        }
    }
}

#[test]
fn pregroup_acceptance_agrees_with_the_contraction_dp() {
    for name in ["alice.gram", "alice_renamed.gram"] {
        let g = common::load_fixture(name);
        for sentence in common::all_sentences(g.vocabulary(), 0, 4) {
            let parses = !g
                .enumerate_parsings(&sentence, bound_for(sentence.len()))
                .unwrap()
                .is_empty();
            assert_eq!(
                parses,
                common::pregroup_dp_accepts(&g, &sentence),
                "{name}: {:?}",
                sentence
            );
        }
    }
}

#[test]
fn run_reaches_exactly_the_enumerated_parsings() {
    for name in ["alice.gram", "complex.gram", "ambiguous.gram"] {
        let g = common::load_fixture(name);
        let wg = WeightedGrammar::<Boolean>::new(g.clone()).unwrap();
        for sentence in common::all_sentences(g.vocabulary(), 1, 3) {
            let (frontiers, acceptance) = run_frontiers(&wg, &sentence, None).unwrap();
            let final_parsings: BTreeSet<ParseState> = frontiers
                .last()
                .unwrap()
                .iter()
                .filter(|s| g.is_parsing(s))
                .cloned()
                .collect();
            let enumerated = g
                .enumerate_parsings(&sentence, bound_for(sentence.len()))
                .unwrap();
            assert_eq!(final_parsings, enumerated, "{name}: {sentence:?}");
            assert_eq!(acceptance, Boolean(!enumerated.is_empty()));
        }
    }
}

#[test]
fn word_weight_matches_the_sum_over_parsings() {
    for name in ["alice.gram", "complex.gram", "ambiguous.gram"] {
        let g = common::load_fixture(name);
        let real = WeightedGrammar::<NonNegReal>::new(g.clone()).unwrap();
        let viterbi = WeightedGrammar::<Viterbi>::new(g.clone()).unwrap();
        for sentence in common::all_sentences(g.vocabulary(), 1, 3) {
            let parsings = g
                .enumerate_parsings(&sentence, bound_for(sentence.len()))
                .unwrap();
            let oracle_sum: f64 = parsings.iter().map(|p| real.arrow_weight(p).0).sum();
            let got = word_weight(&real, &sentence, None).unwrap();
            assert!(
                got.approx_eq(&NonNegReal(oracle_sum), 1e-9 * (1.0 + oracle_sum)),
                "{name}: {sentence:?}: {got} vs {oracle_sum}"
            );

            let oracle_max = parsings
                .iter()
                .map(|p| viterbi.arrow_weight(p).0)
                .fold(0.0_f64, f64::max);
            let got = word_weight(&viterbi, &sentence, None).unwrap();
            assert!(got.approx_eq(&Viterbi(oracle_max), 1e-12));
        }
    }
}

#[test]
fn frontiers_are_sound_and_step_is_local() {
    let g = common::load_fixture("complex.gram");
    let wg = WeightedGrammar::<Boolean>::new(g.clone()).unwrap();
    for sentence in [
        common::words("Complex houses students"),
        common::words("houses disappoint"),
    ] {
        let trace = run(&wg, &sentence, None).unwrap();
        for (k, record) in trace.steps.iter().enumerate() {
            for state in record.frontier.keys() {
                // Prefix soundness plus replay: the state is reachable from
                // its own bare prefix.
                assert_eq!(state.prefix[..], sentence[..k + 1]);
                let replayed = g
                    .closure(&g.bare_state(&state.prefix).unwrap(), bound_for(k + 1))
                    .unwrap();
                assert!(replayed.contains(state));
            }
            // Step locality: successors embed their source's structure.
            for (source, dist) in &record.sources {
                for successor in dist.keys() {
                    assert!(is_compliant(successor, source).unwrap());
                }
            }
        }
    }
}
