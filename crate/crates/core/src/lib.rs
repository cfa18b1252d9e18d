//! A linear-time regex engine with ECMAScript semantics: parser, bytecode
//! compiler, Pike-style VM with clock-based capture filtering, a 3-phase
//! lookaround pipeline, a streaming lookbehind pipeline, a reference
//! backtracker, a differential fuzzer, and benchmark/corpus tooling.

pub mod ast;
pub mod backtrack;
pub mod bench;
pub mod bytecode;
pub mod compile;
pub mod desugar;
pub mod error;
pub mod fuzz;
pub mod parser;
pub mod pipeline;
pub mod regstore;
pub mod stats;
pub mod vm;

pub use ast::{
    annotate, is_nullable, nullability, reverse, AnnotatedRegex, AnchorKind, CharClass, LookKind,
    Nullability, QuantKind, RegexNode,
};
pub use backtrack::{bt_match, BtOutcome, DEFAULT_STEP_BUDGET};
pub use bytecode::{Direction, Inst, Program};
pub use compile::{
    compile_main, compile_oracle_pass, compile_streaming, CaptureMode, CompileOptions,
};
pub use desugar::{desugar_counted, DEFAULT_REP_LIMIT};
pub use error::{Error, Result};
pub use parser::parse;
pub use pipeline::{
    build_oracle, compile_regex, full_match, full_match_with_stats, CompiledRegex, MatchConfig,
    MatchResult, MatchStats, PipelineChoice,
};
pub use regstore::{RegStore, StoreKind};
pub use vm::{extract, run, Oracle, RunOutcome, RunParams, Winner};
