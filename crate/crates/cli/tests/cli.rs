//! Exit-code contract and error-path checks for the binary.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stepgram(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_stepgram"))
        .args(args)
        .output()
        .unwrap()
}

fn grammar_arg(name: &str) -> String {
    root()
        .join("grammars")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn accept_reject_usage_and_bound_exit_codes() {
    let alice = grammar_arg("alice.gram");
    let accept = stepgram(&["--grammar", &alice, "parse", "Alice loves Bob"]);
    assert_eq!(accept.status.code(), Some(0));

    let reject = stepgram(&["--grammar", &alice, "parse", "loves Alice"]);
    assert_eq!(reject.status.code(), Some(1));

    let usage = stepgram(&["parse", "Alice loves Bob"]);
    assert_eq!(usage.status.code(), Some(2));

    let complex = grammar_arg("complex.gram");
    let bound = stepgram(&[
        "--grammar",
        &complex,
        "--depth-bound",
        "0",
        "parse",
        "Complex houses students",
    ]);
    assert_eq!(bound.status.code(), Some(3));
    let stderr = String::from_utf8(bound.stderr).unwrap();
    assert!(stderr.contains("depth bound"), "{stderr}");
}

#[test]
fn render_rejects_out_of_range_index() {
    let complex = grammar_arg("complex.gram");
    let out = stepgram(&[
        "--grammar",
        &complex,
        "render",
        "Complex houses students",
        "--index",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("out of range"));
}

#[test]
fn fit_reports_invalid_corpus_entries() {
    let tmp = root().join("target/acceptance-tmp");
    fs::create_dir_all(&tmp).unwrap();
    let bad = tmp.join("bad-corpus.json");
    fs::write(
        &bad,
        r#"[{"sentence": ["a", "c"], "parsing": "s(q(a) c)", "prob": 1.0}]"#,
    )
    .unwrap();
    let fit_grammar = grammar_arg("fit.gram");
    let out = stepgram(&["--grammar", &fit_grammar, "fit", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("entry 0"));
}

#[test]
fn weights_import_rejects_unknown_generators() {
    let tmp = root().join("target/acceptance-tmp");
    fs::create_dir_all(&tmp).unwrap();
    let bad = tmp.join("bad-weights.json");
    fs::write(&bad, r#"{"no such rule": 0.5}"#).unwrap();
    let complex = grammar_arg("complex.gram");
    let out = stepgram(&[
        "--grammar",
        &complex,
        "weights",
        "import",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn semiring_override_controls_weight_interpretation() {
    let complex = grammar_arg("complex.gram");
    // Real weights coerce to their Boolean support under the override.
    let out = stepgram(&[
        "--grammar",
        &complex,
        "--semiring",
        "bool",
        "parse",
        "Complex houses students",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("word weight: true"), "{stdout}");

    let out = stepgram(&["--grammar", &complex, "--semiring", "tropical", "language"]);
    assert_eq!(out.status.code(), Some(2));
}
