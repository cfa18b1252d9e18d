//! Full matching pipeline: pipeline selection, oracle construction,
//! main match, capture-reset filtering, and phase-3 reconstruction of
//! lookaround captures and nulled-plus captures.

use crate::ast::*;
use crate::bytecode::Program;
use crate::compile::*;
use crate::error::{Error, Result};
use crate::parser::parse;
use crate::regstore::StoreKind;
use crate::vm::{run, Oracle, RunOutcome, RunParams, RunStats, Winner};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

// ---------------------------------------------------------------------------
// Configuration and results
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineChoice {
    /// Streaming when eligible, 3-phase otherwise.
    Auto,
    /// Always the 3-phase oracle pipeline (handles everything).
    Oracle,
    /// Single-pass streaming; errors when the regex is ineligible.
    Streaming,
}

#[derive(Debug, Clone)]
pub struct MatchConfig {
    pub store: StoreKind,
    pub pipeline: PipelineChoice,
    pub compile: CompileOptions,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            store: StoreKind::Array,
            pipeline: PipelineChoice::Auto,
            compile: CompileOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    /// Index = group id; 0 is the whole match.
    pub groups: Vec<Option<(usize, usize)>>,
}

impl fmt::Display for MatchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, r) in self.groups.iter().enumerate() {
            match r {
                Some((s, e)) => writeln!(f, "group {g}: {s},{e}")?,
                None => writeln!(f, "group {g}: undefined")?,
            }
        }
        Ok(())
    }
}

/// Deterministic per-match cost accounting, aggregated across phases.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatchStats {
    /// Total instructions across all compiled programs used by this match.
    pub bytecode_total: usize,
    /// Bytecode size of the main (or streaming) program alone.
    pub bytecode_main: usize,
    pub instr_phase1: u64,
    pub instr_phase2: u64,
    pub instr_phase3: u64,
    pub forks: u64,
    pub slot_copies: u64,
    pub threads_peak: usize,
    /// Full-string passes: oracle rows + the main run (reconstruction runs
    /// are position-anchored, not passes).
    pub string_passes: u32,
    /// Runs where executed instructions exceeded |program| × positions.
    pub bound_violations: u32,
}

impl MatchStats {
    pub fn instr_total(&self) -> u64 {
        self.instr_phase1 + self.instr_phase2 + self.instr_phase3
    }

    fn absorb(&mut self, program: &Program, stats: &RunStats, phase: u8) {
        let c = &stats.counters;
        match phase {
            1 => self.instr_phase1 += c.executed,
            2 => self.instr_phase2 += c.executed,
            _ => self.instr_phase3 += c.executed,
        }
        self.forks += c.forks;
        self.slot_copies += c.slot_copies;
        self.threads_peak = self.threads_peak.max(c.threads_peak);
        if c.executed > (program.state_count() as u64) * (stats.positions as u64) {
            self.bound_violations += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Compiled regex
// ---------------------------------------------------------------------------

pub struct CompiledRegex {
    pub ast: AnnotatedRegex,
    pub main: Program,
    pub streaming: bool,
    /// Oracle-pass programs indexed by lookaround id - 1 (3-phase only).
    pub oracle_programs: Vec<Program>,
    looks: HashMap<LookId, LookInfo>,
    /// Bodies of greedy nullable plusses, for nulled reconstruction.
    nullable_plus_bodies: HashMap<QuantId, RegexNode>,
    opts: CompileOptions,
}

fn collect_nullable_plus_bodies(node: &RegexNode, out: &mut HashMap<QuantId, RegexNode>) {
    use RegexNode::*;
    if let Quantified {
        kind: QuantKind::GreedyPlus,
        quant_id,
        body,
    } = node
    {
        if is_nullable(body) {
            out.insert(*quant_id, (**body).clone());
        }
    }
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
        Concat(l, r) | Union(l, r) => {
            collect_nullable_plus_bodies(l, out);
            collect_nullable_plus_bodies(r, out);
        }
        Quantified { body, .. }
        | CountedRep { body, .. }
        | MandatoryIter { body, .. }
        | Group { body, .. }
        | NonCap(body)
        | Look { body, .. } => collect_nullable_plus_bodies(body, out),
        OptIter { body, tail, .. } => {
            collect_nullable_plus_bodies(body, out);
            collect_nullable_plus_bodies(tail, out);
        }
    }
}

pub fn compile_regex(pattern: &str, config: &MatchConfig) -> Result<CompiledRegex> {
    let ast = parse(pattern)?;
    compile_ast(ast, config)
}

pub fn compile_ast(ast: AnnotatedRegex, config: &MatchConfig) -> Result<CompiledRegex> {
    let streaming = match config.pipeline {
        PipelineChoice::Oracle => false,
        PipelineChoice::Streaming => {
            if let Err(reason) = streaming_eligibility(&ast) {
                return Err(Error::StreamingIneligible { reason });
            }
            true
        }
        PipelineChoice::Auto => ast.look_count > 0 && streaming_eligibility(&ast).is_ok(),
    };
    let mut looks_vec = Vec::new();
    collect_lookarounds(&ast.root, &mut looks_vec);
    let mut looks = HashMap::new();
    for l in &looks_vec {
        looks.insert(l.id, l.clone());
    }
    let mut nullable_plus_bodies = HashMap::new();
    collect_nullable_plus_bodies(&ast.root, &mut nullable_plus_bodies);

    let (main, oracle_programs) = if streaming {
        (compile_streaming(&ast, &config.compile)?, Vec::new())
    } else {
        let main = compile_main(&ast, &config.compile)?;
        let mut oracle_programs = Vec::with_capacity(ast.look_count);
        for id in 1..=ast.look_count {
            let info = looks
                .get(&id)
                .ok_or_else(|| Error::Internal(format!("missing lookaround {id}")))?;
            oracle_programs.push(compile_oracle_pass(info, &ast, &config.compile)?);
        }
        (main, oracle_programs)
    };
    Ok(CompiledRegex {
        ast,
        main,
        streaming,
        oracle_programs,
        looks,
        nullable_plus_bodies,
        opts: config.compile.clone(),
    })
}

// ---------------------------------------------------------------------------
// Phase 1: oracle construction
// ---------------------------------------------------------------------------

/// Builds the lookaround truth table, innermost (highest id) rows first so
/// outer passes can consult them through CheckOracle.
pub fn build_oracle(
    compiled: &CompiledRegex,
    input: &[char],
    store: StoreKind,
    stats: &mut MatchStats,
) -> Result<Oracle> {
    let mut oracle = Oracle::new(compiled.ast.look_count, input.len());
    for id in (1..=compiled.ast.look_count).rev() {
        let program = &compiled.oracle_programs[id - 1];
        let mut row = vec![false; input.len() + 1];
        let start = match program.direction {
            crate::bytecode::Direction::Forward => 0,
            crate::bytecode::Direction::Backward => input.len(),
        };
        let (_, run_stats) = run(RunParams {
            program,
            input,
            start,
            store_kind: store,
            oracle: Some(&oracle),
            oracle_row: Some(&mut row),
            epsilon_only: false,
        })?;
        stats.absorb(program, &run_stats, 1);
        stats.string_passes += 1;
        oracle.set_row(id, row);
    }
    Ok(oracle)
}

// ---------------------------------------------------------------------------
// Phase 3: filtering and reconstruction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Task {
    Look { id: LookId, pos: usize },
    Nulled { quant_id: QuantId, pos: usize },
}

/// Top-down capture-reset filter over one run's bindings.
///
/// A group survives only if its write clock beats the iteration clock of
/// the nearest enclosing live quantifier; stale quantifier subtrees are
/// cleared wholesale. Live used lookarounds and live nulled plusses are
/// emitted as reconstruction tasks; the walk does not descend into
/// lookaround bodies (those belong to the task's own run and scope).
fn filter_run(
    scope: &RegexNode,
    winner: &Winner,
    caps: &mut [Option<(usize, usize)>],
    tasks: &mut Vec<Task>,
) {
    walk_filter(scope, winner, caps, tasks, None, false);
}

fn walk_filter(
    node: &RegexNode,
    winner: &Winner,
    caps: &mut [Option<(usize, usize)>],
    tasks: &mut Vec<Task>,
    encl: Option<i64>,
    force_clear: bool,
) {
    use RegexNode::*;
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
        Concat(l, r) | Union(l, r) => {
            walk_filter(l, winner, caps, tasks, encl, force_clear);
            walk_filter(r, winner, caps, tasks, encl, force_clear);
        }
        NonCap(body) => walk_filter(body, winner, caps, tasks, encl, force_clear),
        Group { group_id, body } => {
            let stale = force_clear
                || encl.map_or(false, |e| winner.gclocks[*group_id] < e);
            if stale {
                caps[*group_id] = None;
            }
            walk_filter(body, winner, caps, tasks, encl, force_clear);
        }
        Look { kind, look_id, .. } => {
            if force_clear || !kind.is_positive() {
                return;
            }
            let used = winner.lookpos[*look_id] >= 0
                && encl.map_or(true, |e| winner.lookclk[*look_id] > e);
            if used {
                tasks.push(Task::Look {
                    id: *look_id,
                    pos: winner.lookpos[*look_id] as usize,
                });
            }
        }
        Quantified {
            kind,
            quant_id,
            body,
        } => {
            let qc = winner.qclocks[*quant_id];
            let dead = force_clear || encl.map_or(false, |e| qc < e);
            if dead {
                walk_filter(body, winner, caps, tasks, encl, true);
                return;
            }
            if *kind == QuantKind::GreedyPlus
                && is_nullable(body)
                && winner.plusnulled[*quant_id] >= 0
                && contains_group(body)
            {
                tasks.push(Task::Nulled {
                    quant_id: *quant_id,
                    pos: winner.plusnulled[*quant_id] as usize,
                });
            }
            walk_filter(body, winner, caps, tasks, Some(qc), false);
        }
        CountedRep { quant_id, body, .. }
        | MandatoryIter { quant_id, body } => {
            let qc = winner.qclocks[*quant_id];
            let dead = force_clear || encl.map_or(false, |e| qc < e);
            if dead {
                walk_filter(body, winner, caps, tasks, encl, true);
            } else {
                walk_filter(body, winner, caps, tasks, Some(qc), false);
            }
        }
        OptIter {
            quant_id,
            body,
            tail,
            ..
        } => {
            let qc = winner.qclocks[*quant_id];
            let dead = force_clear || encl.map_or(false, |e| qc < e);
            let (e2, f2) = if dead { (encl, true) } else { (Some(qc), false) };
            walk_filter(body, winner, caps, tasks, e2, f2);
            walk_filter(tail, winner, caps, tasks, e2, f2);
        }
    }
}

// ---------------------------------------------------------------------------
// Full match
// ---------------------------------------------------------------------------

pub fn full_match(pattern: &str, input: &str, config: &MatchConfig) -> Result<Option<MatchResult>> {
    full_match_with_stats(pattern, input, config).map(|(r, _)| r)
}

pub fn full_match_with_stats(
    pattern: &str,
    input: &str,
    config: &MatchConfig,
) -> Result<(Option<MatchResult>, MatchStats)> {
    let compiled = compile_regex(pattern, config)?;
    match_compiled(&compiled, input, config)
}

pub fn match_compiled(
    compiled: &CompiledRegex,
    input: &str,
    config: &MatchConfig,
) -> Result<(Option<MatchResult>, MatchStats)> {
    let chars: Vec<char> = input.chars().collect();
    let mut stats = MatchStats::default();
    stats.bytecode_main = compiled.main.insts.len();
    stats.bytecode_total = compiled.main.insts.len()
        + compiled
            .oracle_programs
            .iter()
            .map(|p| p.insts.len())
            .sum::<usize>();

    // Phase 1
    let oracle = if !compiled.streaming && compiled.ast.look_count > 0 {
        Some(build_oracle(compiled, &chars, config.store, &mut stats)?)
    } else {
        None
    };

    // Phase 2
    let (outcome, run_stats) = run(RunParams {
        program: &compiled.main,
        input: &chars,
        start: 0,
        store_kind: config.store,
        oracle: oracle.as_ref(),
        oracle_row: None,
        epsilon_only: false,
    })?;
    stats.absorb(&compiled.main, &run_stats, 2);
    stats.string_passes += 1;
    let winner = match outcome {
        RunOutcome::Match(w) => w,
        RunOutcome::NoMatch => return Ok((None, stats)),
    };

    // Phase 3: filter the main run, then reconstruct lookaround and
    // nulled-plus captures worklist-style, outermost first.
    let mut caps = crate::vm::extract(&winner, compiled.ast.group_count)?;
    let mut tasks = Vec::new();
    filter_run(&compiled.ast.root, &winner, &mut caps, &mut tasks);

    let mut queue: VecDeque<Task> = tasks.into();
    let mut done: HashSet<Task> = HashSet::new();
    while let Some(task) = queue.pop_front() {
        if !done.insert(task) {
            return Err(Error::Internal(format!("duplicate phase-3 task {task:?}")));
        }
        let (program, scope, pos) = match task {
            Task::Look { id, pos } => {
                let info = compiled
                    .looks
                    .get(&id)
                    .ok_or_else(|| Error::Internal(format!("unknown lookaround {id}")))?;
                let mut opts = compiled.opts.clone();
                opts.capture_mode = CaptureMode::Clocks;
                let program = compile_look_reconstruction(info, &compiled.ast, &opts)?;
                (program, info.body.clone(), pos)
            }
            Task::Nulled { quant_id, pos } => {
                let body = compiled
                    .nullable_plus_bodies
                    .get(&quant_id)
                    .ok_or_else(|| Error::Internal(format!("unknown nulled plus {quant_id}")))?;
                let mut opts = compiled.opts.clone();
                opts.capture_mode = CaptureMode::Clocks;
                let program = compile_nulled_reconstruction(body, &compiled.ast, &opts)?;
                (program, body.clone(), pos)
            }
        };
        let epsilon_only = matches!(task, Task::Nulled { .. });
        let (outcome, run_stats) = run(RunParams {
            program: &program,
            input: &chars,
            start: pos,
            store_kind: config.store,
            oracle: oracle.as_ref(),
            oracle_row: None,
            epsilon_only,
        })?;
        stats.absorb(&program, &run_stats, 3);
        stats.bytecode_total += program.insts.len();
        let sub = match outcome {
            RunOutcome::Match(w) => w,
            RunOutcome::NoMatch => {
                return Err(Error::Internal(format!(
                    "phase-3 run for {task:?} failed to match"
                )))
            }
        };
        let sub_caps = crate::vm::extract(&sub, compiled.ast.group_count)?;
        let mut sub_tasks = Vec::new();
        let mut merged = sub_caps.clone();
        filter_run(&scope, &sub, &mut merged, &mut sub_tasks);
        for (g, v) in merged.iter().enumerate() {
            if g > 0 && v.is_some() {
                caps[g] = *v;
            }
        }
        queue.extend(sub_tasks);
    }

    Ok((Some(MatchResult { groups: caps }), stats))
}
