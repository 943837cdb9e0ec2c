//! Command-line surface for the grammar engine.
//!
//! Exit codes: 0 success/accept, 1 reject, 2 usage error, 3 resource bound
//! exceeded. All output is deterministic: identical invocations produce
//! byte-identical bytes.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stepgram::automaton::{
    boolean_bisimilar, check_coalgebra_hom, language_equiv, run, truncate, HomCheck, LanguageEquiv,
    DEFAULT_STATE_CAP,
};
use stepgram::fitting::{default_fit_states, fit_weights, CorpusModel, FitMethod, FitParams};
use stepgram::render::parse_state_dot;
use stepgram::{
    check_weight_preserving, load_grammar, load_morphism, Boolean, EngineError, Grammar,
    NonNegReal, Semiring, SemiringKind, Viterbi, WeightedGrammar,
};

#[derive(Parser)]
#[command(
    name = "stepgram",
    version,
    about = "Semiring-weighted incremental grammar engine"
)]
struct Cli {
    /// Grammar file.
    #[arg(long, global = true)]
    grammar: Option<PathBuf>,
    /// Override the semiring declared in the grammar file (bool, real, viterbi).
    #[arg(long, global = true)]
    semiring: Option<String>,
    /// Generator applications allowed per consumed word (default: 10·(n+1)).
    #[arg(long, global = true)]
    depth_bound: Option<usize>,
    /// Sentence length bound for language listings, equivalence checks and
    /// truncations.
    #[arg(long, global = true, default_value_t = 4)]
    max_len: usize,
    /// Numeric comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// JSON weight map applied on top of the grammar file's weights.
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// List all parsings of a sentence and its word weight.
    Parse { sentence: String },
    /// Consume a sentence one word at a time, printing each frontier.
    Step { sentence: String },
    /// List the language up to --max-len.
    Language,
    /// Compare two grammars: bisimulation for bool, bounded language
    /// equivalence otherwise; optionally check a morphism between them.
    Equiv {
        other: PathBuf,
        #[arg(long)]
        morphism: Option<PathBuf>,
    },
    /// Fit generator weights to a corpus of parsed sentences.
    Fit {
        corpus: PathBuf,
        /// Where to write the fitted weights JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::NormalEquations)]
        method: Method,
    },
    /// Render one parsing of a sentence as DOT.
    Render {
        sentence: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Read or write generator weight maps.
    Weights {
        #[command(subcommand)]
        action: WeightsAction,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    NormalEquations,
    GradientDescent,
}

#[derive(Subcommand)]
enum WeightsAction {
    /// Print the grammar's weight map as JSON.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a weight map against the grammar and print the merged map.
    Import { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_bound() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn dispatch(cli: &Cli) -> stepgram::Result<u8> {
    let path = cli.grammar.as_ref().ok_or_else(|| {
        EngineError::Corpus("a grammar file is required (--grammar PATH)".to_string())
    })?;
    let grammar = load_grammar(&fs::read_to_string(path)?)?;
    let kind = match &cli.semiring {
        Some(name) => {
            name.parse::<SemiringKind>()
                .map_err(|message| EngineError::InvalidWeight {
                    text: name.clone(),
                    semiring: "cli".into(),
                    message,
                })?
        }
        None => grammar.semiring,
    };
    if cli.tol < 0.0 {
        return Err(EngineError::Corpus(
            "--tol must be non-negative".to_string(),
        ));
    }
    match kind {
        SemiringKind::Bool => run_app::<Boolean>(cli, grammar),
        SemiringKind::Real => run_app::<NonNegReal>(cli, grammar),
        SemiringKind::Viterbi => run_app::<Viterbi>(cli, grammar),
    }
}

fn split_sentence(text: &str) -> Vec<String> {
    text.split_whitespace().map(|w| w.to_string()).collect()
}

fn run_app<S: Semiring>(cli: &Cli, grammar: Grammar) -> stepgram::Result<u8> {
    let mut wg = WeightedGrammar::<S>::new(grammar)?;
    if let Some(path) = &cli.weights {
        let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        wg.import_weights_json(&value)?;
    }

    match &cli.command {
        Command::Parse { sentence } => cmd_parse(cli, &wg, &split_sentence(sentence)),
        Command::Step { sentence } => cmd_step(cli, &wg, &split_sentence(sentence)),
        Command::Language => cmd_language(cli, &wg),
        Command::Equiv { other, morphism } => cmd_equiv(cli, &wg, other, morphism.as_deref()),
        Command::Fit {
            corpus,
            out,
            method,
        } => cmd_fit(cli, &wg, corpus, out.as_deref(), *method),
        Command::Render { sentence, index } => {
            cmd_render(cli, &wg, &split_sentence(sentence), *index)
        }
        Command::Weights { action } => cmd_weights(cli, &wg, action),
    }
}

fn cmd_parse<S: Semiring>(
    cli: &Cli,
    wg: &WeightedGrammar<S>,
    sentence: &[String],
) -> stepgram::Result<u8> {
    let bound = cli
        .depth_bound
        .unwrap_or_else(|| Grammar::default_depth_bound(sentence.len()));
    let parsings = wg.grammar.enumerate_parsings(sentence, bound)?;
    let weight = stepgram::automaton::word_weight(wg, sentence, cli.depth_bound)?;
    if cli.format == Format::Json {
        let list: Vec<serde_json::Value> = parsings
            .iter()
            .map(|p| {
                serde_json::json!({
                    "state": wg.grammar.state_to_string(p),
                    "weight": serde_json::to_value(wg.arrow_weight(p)).unwrap(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "parsings": list,
            "word_weight": serde_json::to_value(&weight).unwrap(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for (i, p) in parsings.iter().enumerate() {
            println!(
                "parsing {}: {} @ {}",
                i,
                wg.grammar.state_to_string(p),
                wg.arrow_weight(p)
            );
        }
        println!("parsings: {}", parsings.len());
        println!("word weight: {weight}");
    }
    Ok(if parsings.is_empty() { 1 } else { 0 })
}

fn cmd_step<S: Semiring>(
    cli: &Cli,
    wg: &WeightedGrammar<S>,
    sentence: &[String],
) -> stepgram::Result<u8> {
    let trace = run(wg, sentence, cli.depth_bound)?;
    if cli.format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&trace.to_json(&wg.grammar))?
        );
    } else {
        for record in &trace.steps {
            println!(
                "after \"{}\" ({} states):",
                record.word,
                record.frontier.len()
            );
            for (state, weight) in &record.frontier {
                println!("  {} @ {}", wg.grammar.state_to_string(state), weight);
            }
        }
        println!("acceptance: {}", trace.acceptance);
    }
    Ok(if trace.acceptance.is_zero() { 1 } else { 0 })
}

fn cmd_language<S: Semiring>(cli: &Cli, wg: &WeightedGrammar<S>) -> stepgram::Result<u8> {
    let bound = cli
        .depth_bound
        .unwrap_or_else(|| Grammar::default_depth_bound(cli.max_len));
    let language = wg.grammar.language(cli.max_len, bound)?;
    if cli.format == Format::Json {
        let doc = serde_json::json!(language);
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for sentence in &language {
            println!("{}", sentence.join(" "));
        }
    }
    Ok(0)
}

fn cmd_equiv<S: Semiring>(
    cli: &Cli,
    left: &WeightedGrammar<S>,
    other: &std::path::Path,
    morphism: Option<&std::path::Path>,
) -> stepgram::Result<u8> {
    let right_grammar = load_grammar(&fs::read_to_string(other)?)?;
    let right = WeightedGrammar::<S>::new(right_grammar)?;

    let mut ok = true;
    if let Some(path) = morphism {
        let m = load_morphism(&fs::read_to_string(path)?, &left.grammar, &right.grammar)?;
        let preserving = check_weight_preserving(&m, left, &right, cli.tol);
        println!("weight preserving: {preserving}");
        let hom = check_coalgebra_hom(&m, left, &right, cli.max_len, cli.depth_bound, cli.tol)?;
        match &hom {
            HomCheck::Holds => println!("coalgebra homomorphism (depth {}): holds", cli.max_len),
            HomCheck::Violated(v) => {
                let word = v.word.clone().unwrap_or_else(|| "<output>".to_string());
                println!(
                    "coalgebra homomorphism (depth {}): fails at state `{}` on `{}`: {}",
                    cli.max_len,
                    left.grammar.state_to_string(&v.state),
                    word,
                    v.detail
                );
            }
        }
        ok = preserving && hom.holds();
    }

    if S::KIND == SemiringKind::Bool {
        let ta = truncate(
            &left.to_boolean_support(),
            cli.max_len,
            cli.depth_bound,
            DEFAULT_STATE_CAP,
        )?;
        let tb = truncate(
            &right.to_boolean_support(),
            cli.max_len,
            cli.depth_bound,
            DEFAULT_STATE_CAP,
        )?;
        let bisim = boolean_bisimilar(&ta, &tb)?;
        println!("bisimilar (depth {}): {bisim}", cli.max_len);
        if !bisim {
            if let LanguageEquiv::Counterexample {
                sentence,
                left: l,
                right: r,
            } = language_equiv(left, &right, cli.max_len, cli.tol, cli.depth_bound)?
            {
                println!("counterexample: \"{}\" ({l} vs {r})", sentence.join(" "));
            }
            ok = false;
        }
    } else {
        match language_equiv(left, &right, cli.max_len, cli.tol, cli.depth_bound)? {
            LanguageEquiv::Equivalent => {
                println!("language equivalent up to length {}", cli.max_len);
            }
            LanguageEquiv::Counterexample {
                sentence,
                left: l,
                right: r,
            } => {
                println!("counterexample: \"{}\" ({l} vs {r})", sentence.join(" "));
                ok = false;
            }
        }
    }
    println!(
        "verdict: {}",
        if ok { "equivalent" } else { "not equivalent" }
    );
    Ok(if ok { 0 } else { 1 })
}

fn cmd_fit<S: Semiring>(
    cli: &Cli,
    wg: &WeightedGrammar<S>,
    corpus: &std::path::Path,
    out: Option<&std::path::Path>,
    method: Method,
) -> stepgram::Result<u8> {
    let model = CorpusModel::load_json(&fs::read_to_string(corpus)?, &wg.grammar)?;
    let states = default_fit_states(&wg.grammar, &model)?;
    let method = match method {
        Method::NormalEquations => FitMethod::NormalEquations,
        Method::GradientDescent => FitMethod::GradientDescent,
    };
    let fit = fit_weights(&wg.grammar, &model, &states, method, FitParams::default())?;
    let fitted =
        WeightedGrammar::<NonNegReal>::with_weights(wg.grammar.clone(), fit.weights.clone());
    let weights_json = fitted.weights_to_json();

    if cli.format == Format::Json {
        let doc = serde_json::json!({
            "rows_used": fit.rows_used,
            "residual": fit.residual,
            "rank_deficient": fit.rank_deficient,
            "weights": weights_json,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("rows used: {}", fit.rows_used);
        println!("residual: {:e}", fit.residual);
        println!("rank deficient: {}", fit.rank_deficient);
        for (id, gen) in wg.grammar.signature().generators() {
            println!("  {} = {}", gen.name, fit.weights.get(id).0);
        }
    }
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&weights_json)? + "\n")?;
    }
    Ok(0)
}

fn cmd_render<S: Semiring>(
    cli: &Cli,
    wg: &WeightedGrammar<S>,
    sentence: &[String],
    index: usize,
) -> stepgram::Result<u8> {
    let bound = cli
        .depth_bound
        .unwrap_or_else(|| Grammar::default_depth_bound(sentence.len()));
    let parsings: Vec<_> = wg
        .grammar
        .enumerate_parsings(sentence, bound)?
        .into_iter()
        .collect();
    let parsing = parsings.get(index).ok_or_else(|| {
        EngineError::Corpus(format!(
            "parsing index {index} out of range ({} parsings)",
            parsings.len()
        ))
    })?;
    print!("{}", parse_state_dot(&wg.grammar, parsing));
    Ok(0)
}

fn cmd_weights<S: Semiring>(
    cli: &Cli,
    wg: &WeightedGrammar<S>,
    action: &WeightsAction,
) -> stepgram::Result<u8> {
    let _ = cli;
    match action {
        WeightsAction::Export { out } => {
            let json = serde_json::to_string_pretty(&wg.weights_to_json())? + "\n";
            match out {
                Some(path) => fs::write(path, &json)?,
                None => print!("{json}"),
            }
        }
        WeightsAction::Import { file } => {
            let mut merged = wg.clone();
            let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(file)?)?;
            merged.import_weights_json(&value)?;
            print!(
                "{}",
                serde_json::to_string_pretty(&merged.weights_to_json())? + "\n"
            );
        }
    }
    Ok(0)
}
