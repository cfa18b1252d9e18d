//! The extended Pike VM: lockstep breadth-first NFA simulation with
//! priority-ordered thread stacks, per-position dedup, loop guards, the
//! capture-reset clock, oracle/LBtable instructions and nullable-plus
//! bookkeeping. Worst case O(|program| × |input|) per run.

use crate::ast::{is_word_char, AnchorKind, LookKind, QuantId, RegexNode};
use crate::bytecode::{Direction, Inst, Program};
use crate::error::{Error, Result};
use crate::regstore::{RegStore, StoreKind};
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

/// Lookaround truth table: `get(l, p)` says whether lookaround `l` holds at
/// string position `p` (for lookaheads: body match begins at p; for
/// lookbehinds: body match ends at p).
#[derive(Debug, Clone)]
pub struct Oracle {
    rows: Vec<Vec<bool>>,
    len: usize,
}

impl Oracle {
    pub fn new(look_count: usize, input_len: usize) -> Self {
        Oracle {
            rows: vec![vec![false; input_len + 1]; look_count],
            len: input_len,
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn input_len(&self) -> usize {
        self.len
    }

    pub fn get(&self, look_id: usize, pos: usize) -> bool {
        self.rows[look_id - 1][pos]
    }

    pub fn row(&self, look_id: usize) -> &[bool] {
        &self.rows[look_id - 1]
    }

    pub fn set_row(&mut self, look_id: usize, row: Vec<bool>) {
        debug_assert_eq!(row.len(), self.len + 1);
        self.rows[look_id - 1] = row;
    }
}

// ---------------------------------------------------------------------------
// Threads and counters
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Thread {
    pc: usize,
    /// False right after BeginLoop until the next consume; EndLoop kills
    /// threads whose current loop iteration consumed nothing.
    left: bool,
    regs: RegStore,
    /// Clock of the last write to each group's registers (index = group id).
    gclocks: Box<[i64]>,
    /// Clock of the last iteration entry of each quantifier (index = id-1...
    /// slot 0 unused; indexed by quantifier id directly).
    qclocks: Box<[i64]>,
    /// Position where the quantifier was last nulled, or -1.
    plusnulled: Box<[i64]>,
    /// Position where each lookaround was last checked, or -1.
    lookpos: Box<[i64]>,
    /// Clock of that last check.
    lookclk: Box<[i64]>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Counters {
    pub executed: u64,
    pub forks: u64,
    pub slot_copies: u64,
    pub threads_peak: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunStats {
    pub counters: Counters,
    /// Number of string positions this run processed (for the
    /// executed ≤ |program| × positions bound).
    pub positions: usize,
}

/// Snapshot of the accepting thread, with registers materialized.
#[derive(Debug, Clone)]
pub struct Winner {
    pub regs: Vec<Option<usize>>,
    pub gclocks: Vec<i64>,
    pub qclocks: Vec<i64>,
    pub plusnulled: Vec<i64>,
    pub lookpos: Vec<i64>,
    pub lookclk: Vec<i64>,
    pub direction: Direction,
}

#[derive(Debug)]
pub enum RunOutcome {
    Match(Winner),
    NoMatch,
}

// ---------------------------------------------------------------------------
// Run parameters
// ---------------------------------------------------------------------------

pub struct RunParams<'a> {
    pub program: &'a Program,
    pub input: &'a [char],
    /// First processed position. Forward runs walk start..=len, backward
    /// runs walk start..=0 (descending).
    pub start: usize,
    pub store_kind: StoreKind,
    pub oracle: Option<&'a Oracle>,
    /// Output row for WriteOracle programs.
    pub oracle_row: Option<&'a mut Vec<bool>>,
    /// Process only the starting position's epsilon closure (nulled-plus
    /// reconstruction).
    pub epsilon_only: bool,
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

pub fn run(params: RunParams<'_>) -> Result<(RunOutcome, RunStats)> {
    let RunParams {
        program,
        input,
        start,
        store_kind,
        oracle,
        mut oracle_row,
        epsilon_only,
    } = params;
    let insts = &program.insts;
    let len = input.len();
    let backward = program.direction == Direction::Backward;
    let slots = 2 * (program.group_count + 1);

    let mut counters = Counters::default();
    let mut clk: i64 = 0;
    let mut best: Option<Winner> = None;
    let mut nullable_memo: HashMap<(QuantId, usize), bool> = HashMap::new();

    let has_lb = insts
        .iter()
        .any(|i| matches!(i, Inst::WriteLB(_) | Inst::CheckLB(_) | Inst::NegCheckLB(_)));
    let mut lbtable = vec![false; program.look_count + 1];

    // Per-position dedup on (label, left), stamped to avoid refills.
    let mut stamp = vec![0u32; insts.len() * 2];
    let mut cur_stamp = 0u32;

    let proto = Thread {
        pc: 0,
        left: true,
        regs: RegStore::new(store_kind, slots),
        gclocks: vec![-1; program.group_count + 1].into_boxed_slice(),
        qclocks: vec![-1; program.quant_count + 1].into_boxed_slice(),
        plusnulled: vec![-1; program.quant_count + 1].into_boxed_slice(),
        lookpos: vec![-1; program.look_count + 1].into_boxed_slice(),
        lookclk: vec![-1; program.look_count + 1].into_boxed_slice(),
    };
    let mut active: Vec<Thread> = Vec::new();
    for &e in program.entry_points.iter().rev() {
        let mut t = proto.clone();
        t.pc = e;
        active.push(t);
    }
    let mut next: Vec<Thread> = Vec::new();

    let mut i = start;
    let mut positions = 0usize;
    loop {
        positions += 1;
        cur_stamp += 1;
        if has_lb {
            lbtable.iter_mut().for_each(|b| *b = false);
        }

        while let Some(mut t) = active.pop() {
            let key = t.pc * 2 + t.left as usize;
            if stamp[key] == cur_stamp {
                continue;
            }
            stamp[key] = cur_stamp;
            counters.executed += 1;
            clk += 1;
            let peak = active.len() + next.len() + 1;
            if peak > counters.threads_peak {
                counters.threads_peak = peak;
            }
            match &insts[t.pc] {
                Inst::Consume(c) => {
                    if consume_ok(input, i, backward, |x| x == *c) {
                        t.pc += 1;
                        t.left = true;
                        next.push(t);
                    }
                }
                Inst::ConsumeClass(cc) => {
                    if consume_ok(input, i, backward, |x| cc.matches(x)) {
                        t.pc += 1;
                        t.left = true;
                        next.push(t);
                    }
                }
                Inst::ConsumeAny => {
                    if consume_ok(input, i, backward, |_| true) {
                        t.pc += 1;
                        t.left = true;
                        next.push(t);
                    }
                }
                Inst::Jump(l) => {
                    t.pc = *l;
                    active.push(t);
                }
                Inst::Fork(high, low) => {
                    counters.forks += 1;
                    let (store, copied) = t.regs.fork();
                    counters.slot_copies += copied;
                    let mut forked = t.clone();
                    forked.regs = store;
                    forked.pc = *high;
                    t.pc = *low;
                    active.push(t);
                    active.push(forked); // explored first
                }
                Inst::Accept => {
                    best = Some(snapshot(&t, program));
                    active.clear();
                }
                Inst::SetReg(r) => {
                    if *r >= slots {
                        return Err(Error::Internal(format!("register {r} out of range")));
                    }
                    t.regs.set(*r, Some(i));
                    t.gclocks[r / 2] = clk;
                    t.pc += 1;
                    active.push(t);
                }
                Inst::ClearReg(g) => {
                    t.regs.set(2 * g, None);
                    t.regs.set(2 * g + 1, None);
                    t.pc += 1;
                    active.push(t);
                }
                Inst::BeginLoop => {
                    t.left = false;
                    t.pc += 1;
                    active.push(t);
                }
                Inst::EndLoop => {
                    if t.left {
                        t.pc += 1;
                        active.push(t);
                    }
                }
                Inst::SetQuant(q) => {
                    t.qclocks[*q] = clk;
                    t.plusnulled[*q] = -1;
                    t.pc += 1;
                    active.push(t);
                }
                Inst::SetNullPlus(q) => {
                    t.qclocks[*q] = clk;
                    t.plusnulled[*q] = i as i64;
                    t.pc += 1;
                    active.push(t);
                }
                Inst::CheckNull(q) => {
                    let body = program
                        .check_null_bodies
                        .get(q)
                        .ok_or_else(|| Error::Internal(format!("no CheckNull body for {q}")))?
                        .clone();
                    let ctx = NullCtx {
                        input,
                        oracle,
                        lbtable: if has_lb { Some(&lbtable) } else { None },
                    };
                    let ok = nullable_at_memo(*q, &body, i, &ctx, &mut nullable_memo)?;
                    if ok {
                        t.pc += 1;
                        active.push(t);
                    }
                }
                Inst::WriteOracle(l) => {
                    match oracle_row.as_deref_mut() {
                        Some(row) => row[i] = true,
                        None => {
                            return Err(Error::Internal(format!(
                                "WriteOracle {l} outside an oracle pass"
                            )))
                        }
                    }
                    // Kills only this thread; lower-priority threads keep
                    // exploring so the row covers all end positions.
                }
                Inst::CheckOracle(l) => {
                    let o = oracle.ok_or_else(|| {
                        Error::Internal(format!("CheckOracle {l} without an oracle"))
                    })?;
                    if o.get(*l, i) {
                        t.lookpos[*l] = i as i64;
                        t.lookclk[*l] = clk;
                        t.pc += 1;
                        active.push(t);
                    }
                }
                Inst::NegCheckOracle(l) => {
                    let o = oracle.ok_or_else(|| {
                        Error::Internal(format!("NegCheckOracle {l} without an oracle"))
                    })?;
                    if !o.get(*l, i) {
                        t.pc += 1;
                        active.push(t);
                    }
                }
                Inst::WriteLB(b) => {
                    lbtable[*b] = true;
                }
                Inst::CheckLB(b) => {
                    if lbtable[*b] {
                        t.pc += 1;
                        active.push(t);
                    }
                }
                Inst::NegCheckLB(b) => {
                    if !lbtable[*b] {
                        t.pc += 1;
                        active.push(t);
                    }
                }
                Inst::AssertAnchor(kind) => {
                    if anchor_holds(*kind, input, i) {
                        t.pc += 1;
                        active.push(t);
                    }
                }
            }
        }

        let done = if backward { i == 0 } else { i == len };
        if done || epsilon_only {
            break;
        }
        if backward {
            i -= 1;
        } else {
            i += 1;
        }
        std::mem::swap(&mut active, &mut next);
        active.reverse();
        if active.is_empty() {
            break;
        }
    }

    let outcome = match best {
        Some(w) => RunOutcome::Match(w),
        None => RunOutcome::NoMatch,
    };
    Ok((outcome, RunStats { counters, positions }))
}

fn consume_ok(input: &[char], i: usize, backward: bool, pred: impl Fn(char) -> bool) -> bool {
    if backward {
        i > 0 && pred(input[i - 1])
    } else {
        i < input.len() && pred(input[i])
    }
}

fn snapshot(t: &Thread, program: &Program) -> Winner {
    Winner {
        regs: t.regs.materialize(),
        gclocks: t.gclocks.to_vec(),
        qclocks: t.qclocks.to_vec(),
        plusnulled: t.plusnulled.to_vec(),
        lookpos: t.lookpos.to_vec(),
        lookclk: t.lookclk.to_vec(),
        direction: program.direction,
    }
}

/// Anchors are evaluated against absolute string coordinates, so the same
/// test is correct in forward and backward programs.
pub fn anchor_holds(kind: AnchorKind, input: &[char], i: usize) -> bool {
    match kind {
        AnchorKind::Begin => i == 0,
        AnchorKind::End => i == input.len(),
        AnchorKind::WordBoundary | AnchorKind::NonWordBoundary => {
            let before = i > 0 && is_word_char(input[i - 1]);
            let after = i < input.len() && is_word_char(input[i]);
            (before != after) == (kind == AnchorKind::WordBoundary)
        }
    }
}

// ---------------------------------------------------------------------------
// nullable_at
// ---------------------------------------------------------------------------

pub struct NullCtx<'a> {
    pub input: &'a [char],
    pub oracle: Option<&'a Oracle>,
    pub lbtable: Option<&'a [bool]>,
}

fn look_holds(ctx: &NullCtx<'_>, kind: LookKind, look_id: usize, i: usize) -> Result<bool> {
    let positive = if let Some(lb) = ctx.lbtable {
        debug_assert!(kind.is_behind());
        lb[look_id]
    } else {
        let o = ctx
            .oracle
            .ok_or_else(|| Error::Internal("nullability check needs lookaround truth".into()))?;
        o.get(look_id, i)
    };
    Ok(if kind.is_positive() { positive } else { !positive })
}

fn nullable_at_memo(
    q: QuantId,
    body: &RegexNode,
    i: usize,
    ctx: &NullCtx<'_>,
    memo: &mut HashMap<(QuantId, usize), bool>,
) -> Result<bool> {
    if let Some(&v) = memo.get(&(q, i)) {
        return Ok(v);
    }
    let v = nullable_at(body, i, ctx, memo)?;
    memo.insert((q, i), v);
    Ok(v)
}

/// Can `node` match the empty string starting and ending at position `i`?
/// Structural evaluation per the nullability semantics; lookarounds read
/// the oracle (or LBtable), anchors read the neighbors.
pub fn nullable_at(
    node: &RegexNode,
    i: usize,
    ctx: &NullCtx<'_>,
    memo: &mut HashMap<(QuantId, usize), bool>,
) -> Result<bool> {
    use RegexNode::*;
    Ok(match node {
        Char(_) | AnyChar | Class(_) => false,
        Epsilon => true,
        Concat(l, r) => nullable_at(l, i, ctx, memo)? && nullable_at(r, i, ctx, memo)?,
        Union(l, r) => nullable_at(l, i, ctx, memo)? || nullable_at(r, i, ctx, memo)?,
        Quantified {
            kind,
            quant_id,
            body,
        } => {
            if kind.is_plus() {
                nullable_at_memo(*quant_id, body, i, ctx, memo)?
            } else {
                true
            }
        }
        CountedRep {
            min,
            quant_id,
            body,
            ..
        } => {
            if *min == 0 {
                true
            } else {
                nullable_at_memo(*quant_id, body, i, ctx, memo)?
            }
        }
        MandatoryIter { quant_id, body } => nullable_at_memo(*quant_id, body, i, ctx, memo)?,
        OptIter { .. } => true,
        Group { body, .. } | NonCap(body) => nullable_at(body, i, ctx, memo)?,
        Look {
            kind, look_id, ..
        } => look_holds(ctx, *kind, *look_id, i)?,
        Anchor(kind) => anchor_holds(*kind, ctx.input, i),
    })
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

/// Materializes a winner's registers into per-group ranges. Backward runs
/// write entry/exit in mirrored order, so their slots are swapped here.
pub fn extract(winner: &Winner, group_count: usize) -> Result<Vec<Option<(usize, usize)>>> {
    let mut out = Vec::with_capacity(group_count + 1);
    for g in 0..=group_count {
        let (a, b) = (winner.regs[2 * g], winner.regs[2 * g + 1]);
        out.push(match (a, b) {
            (Some(x), Some(y)) => {
                let (lo, hi) = if winner.direction == Direction::Backward {
                    (y, x)
                } else {
                    (x, y)
                };
                if lo > hi {
                    return Err(Error::Internal(format!(
                        "group {g} has inverted range {lo}..{hi}"
                    )));
                }
                Some((lo, hi))
            }
            (None, None) => None,
            _ => {
                return Err(Error::Internal(format!(
                    "group {g} is half-defined"
                )))
            }
        });
    }
    Ok(out)
}
