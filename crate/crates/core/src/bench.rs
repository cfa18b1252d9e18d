//! Complexity benchmark families with deterministic executed-instruction
//! counters and optional wall time.

use crate::backtrack::bt_match;
use crate::error::{Error, Result};
use crate::pipeline::{compile_regex, match_compiled, MatchConfig};
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Instructions,
    WallTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Linear,
    Backtrack,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub family: String,
    pub size: usize,
    pub bytecode: usize,
    pub instr_total: u64,
    pub instr_phase1: u64,
    pub instr_phase2: u64,
    pub instr_phase3: u64,
    pub forks: u64,
    pub slot_copies: u64,
    pub threads_peak: usize,
    pub wall_ns: u128,
}

pub const CSV_HEADER: &str = "family,size,bytecode,instr_total,instr_phase1,instr_phase2,instr_phase3,forks,slot_copies,threads_peak,wall_ns";

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.size,
            r.bytecode,
            r.instr_total,
            r.instr_phase1,
            r.instr_phase2,
            r.instr_phase3,
            r.forks,
            r.slot_copies,
            r.threads_peak,
            r.wall_ns
        );
    }
    out
}

/// Pattern/input pair for a family at size `n`.
pub fn family_case(family: &str, n: usize) -> Result<(String, String)> {
    let case = match family {
        // r0 = a, r_{k+1} = (r_k)*  on a^100
        "c1" => {
            let mut p = String::from("a");
            for _ in 0..n {
                p = format!("({p})*");
            }
            (p, "a".repeat(100))
        }
        // r0 = a, r_{k+1} = r_k+  on a^100
        "c2" => {
            let mut p = String::from("a");
            for i in 0..n {
                p = if i == 0 {
                    format!("{p}+")
                } else {
                    format!("(?:{p})+")
                };
            }
            (p, "a".repeat(100))
        }
        // r0 = a|(^), r_{k+1} = r_k+  on "b"
        "c3" => {
            let mut p = String::from("(?:a|(^))");
            for _ in 0..n {
                p = format!("(?:{p})+");
            }
            (p, "b".to_string())
        }
        // streaming lookbehind on ba^n
        "c4" => ("b(?:a(?<=ba*))*".to_string(), format!("b{}", "a".repeat(n))),
        // r0 = (a*)b, r_{k+1} = a(?=r_k)  on a^1000 b
        "c5-regex" => {
            let mut p = String::from("(a*)b");
            for _ in 0..n {
                p = format!("a(?={p})");
            }
            (p, format!("{}b", "a".repeat(1000)))
        }
        // fixed regex, string family ca^n b
        "c5-string" => (
            "c(?:a(?=a*(?<=c(a*))b))*".to_string(),
            format!("c{}b", "a".repeat(n)),
        ),
        // k optional groups inside one star, on a^1000
        "tradeoff" => {
            let groups = "(a)?".repeat(n.max(1));
            (format!("(?:{groups})*"), "a".repeat(1000))
        }
        other => {
            return Err(Error::Internal(format!("unknown benchmark family {other}")))
        }
    };
    Ok(case)
}

pub fn bench_family(
    family: &str,
    sizes: &[usize],
    metric: Metric,
    engine: Engine,
    config: &MatchConfig,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let (pattern, input) = family_case(family, n)?;
        let row = match engine {
            Engine::Linear => {
                let compiled = compile_regex(&pattern, config)?;
                let (_, stats) = match_compiled(&compiled, &input, config)?;
                let wall_ns = if metric == Metric::WallTime {
                    measure_wall(|| {
                        let _ = match_compiled(&compiled, &input, config);
                    })
                } else {
                    0
                };
                BenchRow {
                    family: family.to_string(),
                    size: n,
                    bytecode: stats.bytecode_total,
                    instr_total: stats.instr_total(),
                    instr_phase1: stats.instr_phase1,
                    instr_phase2: stats.instr_phase2,
                    instr_phase3: stats.instr_phase3,
                    forks: stats.forks,
                    slot_copies: stats.slot_copies,
                    threads_peak: stats.threads_peak,
                    wall_ns,
                }
            }
            Engine::Backtrack => {
                let ast = crate::parser::parse(&pattern)?;
                let outcome = bt_match_big_stack(&ast, &input)?;
                let wall_ns = if metric == Metric::WallTime {
                    measure_wall(|| {
                        let _ = bt_match_big_stack(&ast, &input);
                    })
                } else {
                    0
                };
                BenchRow {
                    family: family.to_string(),
                    size: n,
                    bytecode: 0,
                    instr_total: outcome.steps,
                    instr_phase1: 0,
                    instr_phase2: outcome.steps,
                    instr_phase3: 0,
                    forks: 0,
                    slot_copies: 0,
                    threads_peak: 1,
                    wall_ns,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// The CPS backtracker's recursion depth grows with the quadratic step
/// count on these adversarial families; give it a dedicated deep stack.
fn bt_match_big_stack(
    ast: &crate::ast::AnnotatedRegex,
    input: &str,
) -> Result<crate::backtrack::BtOutcome> {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(1 << 30)
            .spawn_scoped(scope, || bt_match(ast, input, u64::MAX))
            .map_err(|e| Error::Internal(format!("spawn failed: {e}")))?
            .join()
            .map_err(|_| Error::Internal("backtracker thread panicked".into()))?
    })
}

/// Median of 10 timed repetitions after 10 warmup repetitions.
fn measure_wall(mut f: impl FnMut()) -> u128 {
    for _ in 0..10 {
        f();
    }
    let mut samples: Vec<u128> = (0..10)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_nanos()
        })
        .collect();
    samples.sort_unstable();
    (samples[4] + samples[5]) / 2
}
