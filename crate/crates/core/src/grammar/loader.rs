//! Grammar file parsing.
//!
//! The format is line-based UTF-8 with `#` comments:
//!
//! ```text
//! mode: cfg | pregroup
//! semiring: bool | real | viterbi      # optional, defaults to real
//! start: <symbol>
//! adjoint-bound: <n>                   # pregroup only, defaults to 2
//! rule: <nonterminal> -> <sym> <sym> ... [@ <weight>]
//! word: <word> : <type> <type> ...     [@ <weight>]
//! ```
//!
//! CFG nonterminals are the symbols that occur on a left-hand side; every
//! other right-hand symbol is a vocabulary word. A missing `@ weight`
//! defaults to the semiring's one.

use std::collections::BTreeSet;

use super::{
    GenKind, Generator, Grammar, GrammarMode, LexEntry, MonoidalSignature, Obj, PregroupType, Rule,
};
use crate::error::{EngineError, Result};
use crate::semiring::SemiringKind;

fn syntax(line: usize, message: impl Into<String>) -> EngineError {
    EngineError::Syntax {
        line,
        message: message.into(),
    }
}

struct RawLine {
    number: usize,
    key: String,
    rest: String,
}

fn split_lines(text: &str) -> Result<Vec<RawLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(number, "expected `key: value`"))?;
        out.push(RawLine {
            number,
            key: key.trim().to_string(),
            rest: rest.trim().to_string(),
        });
    }
    Ok(out)
}

/// Splits a trailing `@ weight` annotation off a declaration body.
fn split_weight(rest: &str) -> (String, Option<String>) {
    match rest.rsplit_once('@') {
        Some((body, w)) => (body.trim().to_string(), Some(w.trim().to_string())),
        None => (rest.to_string(), None),
    }
}

pub fn load_grammar(text: &str) -> Result<Grammar> {
    let lines = split_lines(text)?;

    let mut mode: Option<(GrammarMode, usize)> = None;
    let mut semiring = SemiringKind::Real;
    let mut start: Option<String> = None;
    let mut adjoint_bound: i32 = 2;
    let mut rules: Vec<(usize, Rule, Option<String>)> = Vec::new();
    let mut lexicon: Vec<(usize, LexEntry, Option<String>)> = Vec::new();

    for line in &lines {
        match line.key.as_str() {
            "mode" => {
                let m = match line.rest.as_str() {
                    "cfg" => GrammarMode::Cfg,
                    "pregroup" => GrammarMode::Pregroup,
                    other => return Err(syntax(line.number, format!("unknown mode `{other}`"))),
                };
                mode = Some((m, line.number));
            }
            "semiring" => {
                semiring = line
                    .rest
                    .parse()
                    .map_err(|e: String| syntax(line.number, e))?;
            }
            "start" => {
                if line.rest.split_whitespace().count() != 1 {
                    return Err(syntax(line.number, "start must be a single symbol"));
                }
                start = Some(line.rest.clone());
            }
            "adjoint-bound" => {
                adjoint_bound = line
                    .rest
                    .parse()
                    .map_err(|_| syntax(line.number, "adjoint-bound must be an integer"))?;
                if adjoint_bound < 1 {
                    return Err(syntax(line.number, "adjoint-bound must be at least 1"));
                }
            }
            "rule" => {
                let (body, weight) = split_weight(&line.rest);
                let tokens: Vec<&str> = body.split_whitespace().collect();
                if tokens.len() < 2 || tokens[1] != "->" {
                    return Err(syntax(line.number, "expected `rule: lhs -> sym sym ...`"));
                }
                let rhs: Vec<String> = tokens[2..].iter().map(|s| s.to_string()).collect();
                if rhs.is_empty() {
                    return Err(syntax(
                        line.number,
                        "empty right-hand sides are not supported",
                    ));
                }
                rules.push((
                    line.number,
                    Rule {
                        lhs: tokens[0].to_string(),
                        rhs,
                    },
                    weight,
                ));
            }
            "word" => {
                let (body, weight) = split_weight(&line.rest);
                let tokens: Vec<&str> = body.split_whitespace().collect();
                if tokens.len() < 3 || tokens[1] != ":" {
                    return Err(syntax(line.number, "expected `word: w : type type ...`"));
                }
                let mut types = Vec::new();
                for tok in &tokens[2..] {
                    types.push(PregroupType::parse(tok).map_err(|e| syntax(line.number, e))?);
                }
                lexicon.push((
                    line.number,
                    LexEntry {
                        word: tokens[0].to_string(),
                        types,
                    },
                    weight,
                ));
            }
            other => {
                return Err(syntax(
                    line.number,
                    format!("unknown declaration `{other}`"),
                ))
            }
        }
    }

    let (mode, _) = mode.ok_or_else(|| syntax(0, "missing `mode:` declaration"))?;
    let start = start.ok_or_else(|| syntax(0, "missing `start:` declaration"))?;

    match mode {
        GrammarMode::Cfg => {
            if let Some((n, ..)) = lexicon.first() {
                return Err(syntax(
                    *n,
                    "`word:` declarations are only valid in pregroup mode",
                ));
            }
            build_cfg(semiring, start, rules)
        }
        GrammarMode::Pregroup => {
            if let Some((n, ..)) = rules.first() {
                return Err(syntax(
                    *n,
                    "`rule:` declarations are only valid in cfg mode",
                ));
            }
            build_pregroup(semiring, start, adjoint_bound, lexicon)
        }
    }
}

fn build_cfg(
    semiring: SemiringKind,
    start: String,
    raw_rules: Vec<(usize, Rule, Option<String>)>,
) -> Result<Grammar> {
    let mut nonterminals: BTreeSet<String> =
        raw_rules.iter().map(|(_, r, _)| r.lhs.clone()).collect();

    // Words are the right-hand symbols that never head a rule.
    let mut vocabulary: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    for (_, rule, _) in &raw_rules {
        for sym in &rule.rhs {
            if !nonterminals.contains(sym) && seen.insert(sym.clone()) {
                vocabulary.push(sym.clone());
            }
        }
    }

    if seen.contains(&start) {
        return Err(EngineError::StartInVocabulary(start));
    }
    nonterminals.insert(start.clone());

    let mut sig = MonoidalSignature::default();
    for w in &vocabulary {
        sig.add_object(Obj::Word(w.clone()));
    }
    for x in &nonterminals {
        sig.add_object(Obj::Nt(x.clone()));
    }

    let classify = |sym: &str| -> Obj {
        if nonterminals.contains(sym) {
            Obj::Nt(sym.to_string())
        } else {
            Obj::Word(sym.to_string())
        }
    };

    let mut rules = Vec::new();
    let mut raw_weights = Vec::new();
    for (line, rule, weight) in raw_rules {
        let name = format!("{} -> {}", rule.lhs, rule.rhs.join(" "));
        let gen = Generator {
            name,
            dom: rule.rhs.iter().map(|s| classify(s)).collect(),
            cod: vec![Obj::Nt(rule.lhs.clone())],
            kind: GenKind::Rule,
        };
        sig.push(gen).map_err(|e| match e {
            EngineError::Syntax { message, .. } => EngineError::Syntax { line, message },
            other => other,
        })?;
        raw_weights.push(weight);
        rules.push(rule);
    }

    Ok(Grammar::assemble(
        GrammarMode::Cfg,
        semiring,
        start,
        vocabulary,
        nonterminals,
        BTreeSet::new(),
        2,
        rules,
        Vec::new(),
        sig,
        raw_weights,
    ))
}

fn build_pregroup(
    semiring: SemiringKind,
    start: String,
    adjoint_bound: i32,
    raw_lexicon: Vec<(usize, LexEntry, Option<String>)>,
) -> Result<Grammar> {
    let mut vocabulary: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut basic_types: BTreeSet<String> = BTreeSet::new();
    basic_types.insert(start.clone());

    for (line, entry, _) in &raw_lexicon {
        if seen.insert(entry.word.clone()) {
            vocabulary.push(entry.word.clone());
        }
        for t in &entry.types {
            if t.order.abs() > adjoint_bound {
                return Err(syntax(
                    *line,
                    format!("type {t} exceeds the adjoint-order bound {adjoint_bound}"),
                ));
            }
            basic_types.insert(t.base.clone());
        }
    }

    if seen.contains(&start) {
        return Err(EngineError::StartInVocabulary(start));
    }
    for w in &vocabulary {
        if basic_types.contains(w) {
            return Err(EngineError::UndeclaredSymbol {
                symbol: w.clone(),
                context: "a word may not share its name with a basic type".to_string(),
            });
        }
    }

    let mut sig = MonoidalSignature::default();
    for w in &vocabulary {
        sig.add_object(Obj::Word(w.clone()));
    }
    for b in &basic_types {
        for z in -adjoint_bound..=adjoint_bound {
            sig.add_object(Obj::Typed(PregroupType::new(b.clone(), z)));
        }
    }

    let mut lexicon = Vec::new();
    let mut raw_weights = Vec::new();
    for (line, entry, weight) in raw_lexicon {
        let name = format!(
            "{} : {}",
            entry.word,
            entry
                .types
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
        let gen = Generator {
            name,
            dom: vec![Obj::Word(entry.word.clone())],
            cod: entry.types.iter().map(|t| Obj::Typed(t.clone())).collect(),
            kind: GenKind::Lexicon,
        };
        sig.push(gen).map_err(|e| match e {
            EngineError::Syntax { message, .. } => EngineError::Syntax { line, message },
            other => other,
        })?;
        raw_weights.push(weight);
        lexicon.push(entry);
    }

    // One cup per typed object whose next adjoint stays within the bound.
    for b in &basic_types {
        for z in -adjoint_bound..adjoint_bound {
            let left = PregroupType::new(b.clone(), z);
            let right = PregroupType::new(b.clone(), z + 1);
            let gen = Generator {
                name: format!("cup({left},{right})"),
                dom: vec![Obj::Typed(left), Obj::Typed(right)],
                cod: vec![],
                kind: GenKind::Cup,
            };
            sig.push(gen)?;
            raw_weights.push(None);
        }
    }

    Ok(Grammar::assemble(
        GrammarMode::Pregroup,
        semiring,
        start,
        vocabulary,
        BTreeSet::new(),
        basic_types,
        adjoint_bound,
        Vec::new(),
        lexicon,
        sig,
        raw_weights,
    ))
}
