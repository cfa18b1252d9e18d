//! Command-line interface: match, compile-dump, differential fuzzing,
//! complexity benchmarks, and corpus feature stats.
//!
//! Exit codes: 0 = match / success, 1 = no match (or mismatches found by
//! `fuzz`), 2 = usage or compile error.

use clap::{Parser, Subcommand, ValueEnum};
use relin::backtrack::{bt_match, DEFAULT_STEP_BUDGET};
use relin::bench::{bench_family, rows_to_csv, Engine, Metric};
use relin::compile::{compile_main, CaptureMode, CompileOptions};
use relin::fuzz::{fuzz_campaign, FuzzProfile};
use relin::parser::parse;
use relin::pipeline::{full_match, MatchConfig, MatchResult, PipelineChoice};
use relin::stats::corpus_stats;
use relin::StoreKind;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "relin", about = "Linear-time regex engine with ECMAScript semantics", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Linear,
    Backtrack,
}

#[derive(Clone, Copy, ValueEnum)]
enum StoreArg {
    Array,
    List,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Auto,
    Oracle,
    Streaming,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Instructions,
    WallTime,
}

#[derive(Subcommand)]
enum Command {
    /// Match a pattern against a string and print group bindings.
    ///
    /// The pattern is taken verbatim: no delimiters, no flag suffix.
    /// Quote it in your shell (single quotes recommended).
    Match {
        pattern: String,
        string: String,
        #[arg(long, value_enum, default_value = "linear")]
        engine: EngineArg,
        #[arg(long, value_enum, default_value = "array")]
        store: StoreArg,
        #[arg(long, value_enum, default_value = "auto")]
        pipeline: PipelineArg,
        /// One structured object per line instead of text records.
        #[arg(long)]
        json: bool,
    },
    /// Dump the numbered bytecode listing of the main match program.
    Compile {
        pattern: String,
        /// Use the legacy per-iteration ClearReg capture-reset scheme.
        #[arg(long)]
        legacy: bool,
    },
    /// Run a differential fuzzing campaign against the backtracker.
    Fuzz {
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// JSON profile file overriding the generator defaults.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Directory for one-per-file reproducers (`pattern\nstring\n`).
        #[arg(long, default_value = "fuzz-failures")]
        out: PathBuf,
    },
    /// Run a complexity family and print a CSV table.
    Bench {
        #[arg(long)]
        family: String,
        /// Comma-separated sizes, e.g. 5,10,20,40.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value = "instructions")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "linear")]
        engine: EngineArg,
        /// Use the legacy ClearReg capture-reset scheme.
        #[arg(long)]
        legacy: bool,
        /// Use the exponential e+ → ee* expansion (reference mode).
        #[arg(long)]
        expand_plus: bool,
        #[arg(long, value_enum, default_value = "array")]
        store: StoreArg,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Feature stats over a corpus file (one pattern per line).
    Stats { corpus: PathBuf },
}

/// Serde mirror of the generator profile; absent fields keep defaults.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    max_depth: Option<usize>,
    max_nodes: Option<usize>,
    alphabet: Option<Vec<char>>,
    outside_char: Option<char>,
    max_string_len: Option<usize>,
    max_counted: Option<u32>,
    lookarounds: Option<bool>,
    anchors: Option<bool>,
    classes: Option<bool>,
    counted: Option<bool>,
    step_budget: Option<u64>,
}

impl ProfileFile {
    fn apply(self, mut p: FuzzProfile) -> FuzzProfile {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { p.$f = v; } )* };
        }
        take!(max_depth, max_nodes, alphabet, outside_char, max_string_len,
              max_counted, lookarounds, anchors, classes, counted, step_budget);
        p
    }
}

fn match_config(store: StoreArg, pipeline: PipelineArg) -> MatchConfig {
    MatchConfig {
        store: match store {
            StoreArg::Array => StoreKind::Array,
            StoreArg::List => StoreKind::List,
            StoreArg::Tree => StoreKind::Tree,
        },
        pipeline: match pipeline {
            PipelineArg::Auto => PipelineChoice::Auto,
            PipelineArg::Oracle => PipelineChoice::Oracle,
            PipelineArg::Streaming => PipelineChoice::Streaming,
        },
        compile: CompileOptions::default(),
    }
}

fn print_result(result: &MatchResult, json: bool) {
    if json {
        let obj: serde_json::Map<String, serde_json::Value> = result
            .groups
            .iter()
            .enumerate()
            .map(|(g, r)| {
                let v = match r {
                    Some((s, e)) => serde_json::json!([s, e]),
                    None => serde_json::Value::Null,
                };
                (g.to_string(), v)
            })
            .collect();
        println!("{}", serde_json::json!({ "match": true, "groups": obj }));
    } else {
        print!("{result}");
    }
}

fn cmd_match(
    pattern: &str,
    string: &str,
    engine: EngineArg,
    cfg: &MatchConfig,
    json: bool,
) -> ExitCode {
    let result = match engine {
        EngineArg::Linear => full_match(pattern, string, cfg),
        EngineArg::Backtrack => parse(pattern)
            .and_then(|ast| bt_match(&ast, string, DEFAULT_STEP_BUDGET))
            .map(|o| o.result.map(|groups| MatchResult { groups })),
    };
    match result {
        Ok(Some(m)) => {
            print_result(&m, json);
            ExitCode::SUCCESS
        }
        Ok(None) => {
            if json {
                println!("{}", serde_json::json!({ "match": false }));
            } else {
                println!("no match");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Match {
            pattern,
            string,
            engine,
            store,
            pipeline,
            json,
        } => Ok(cmd_match(
            &pattern,
            &string,
            engine,
            &match_config(store, pipeline),
            json,
        )),
        Command::Compile { pattern, legacy } => {
            let opts = CompileOptions {
                capture_mode: if legacy {
                    CaptureMode::LegacyClearReg
                } else {
                    CaptureMode::Clocks
                },
                ..CompileOptions::default()
            };
            let ast = parse(&pattern).map_err(|e| e.to_string())?;
            let prog = compile_main(&ast, &opts).map_err(|e| e.to_string())?;
            print!("{}", prog.listing());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzz {
            n,
            seed,
            profile,
            out,
        } => {
            let mut prof = FuzzProfile::default();
            if let Some(path) = profile {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let file: ProfileFile =
                    serde_json::from_str(&text).map_err(|e| format!("bad profile: {e}"))?;
                prof = file.apply(prof);
            }
            let report = fuzz_campaign(n, seed, &prof, &MatchConfig::default());
            println!(
                "cases: {}\nagreed: {}\nrejected (lazy nullable plus): {}\nskipped (step budget): {}\nmismatches: {}",
                report.cases,
                report.agreed,
                report.rejected,
                report.skipped,
                report.mismatches.len()
            );
            if report.mismatches.is_empty() {
                return Ok(ExitCode::SUCCESS);
            }
            std::fs::create_dir_all(&out)
                .map_err(|e| format!("cannot create {}: {e}", out.display()))?;
            for (i, r) in report.mismatches.iter().enumerate() {
                let path = out.join(format!("repro-{i:04}.txt"));
                std::fs::write(&path, r.serialize())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                println!(
                    "repro {}: pattern={:?} input={:?} linear=[{}] backtrack=[{}]",
                    path.display(),
                    r.pattern,
                    r.input,
                    r.linear,
                    r.backtrack
                );
            }
            Ok(ExitCode::from(1))
        }
        Command::Bench {
            family,
            sizes,
            metric,
            engine,
            legacy,
            expand_plus,
            store,
            csv,
        } => {
            if sizes.is_empty() {
                return Err("--sizes must list at least one size".into());
            }
            let mut cfg = match_config(store, PipelineArg::Auto);
            cfg.compile.capture_mode = if legacy {
                CaptureMode::LegacyClearReg
            } else {
                CaptureMode::Clocks
            };
            cfg.compile.expand_plus = expand_plus;
            let metric = match metric {
                MetricArg::Instructions => Metric::Instructions,
                MetricArg::WallTime => Metric::WallTime,
            };
            let engine = match engine {
                EngineArg::Linear => Engine::Linear,
                EngineArg::Backtrack => Engine::Backtrack,
            };
            let rows =
                bench_family(&family, &sizes, metric, engine, &cfg).map_err(|e| e.to_string())?;
            let table = rows_to_csv(&rows);
            match csv {
                Some(path) => std::fs::write(&path, table)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{table}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats { corpus } => {
            let text = std::fs::read_to_string(&corpus)
                .map_err(|e| format!("cannot read {}: {e}", corpus.display()))?;
            print!("{}", corpus_stats(&text).table());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
