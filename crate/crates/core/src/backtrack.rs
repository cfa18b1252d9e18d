//! Reference backtracking matcher, written as continuation-passing search
//! over the AST to stay close to the ECMA-262 pseudocode. It is the
//! ground-truth oracle for differential testing; correctness over speed.
//!
//! State is a single mutable capture vector with restore-on-failure at
//! every mutation site (groups, iteration resets, lookaround bodies),
//! which reproduces the spec's functional state threading.

use crate::ast::*;
use crate::error::{Error, Result};
use crate::vm::anchor_holds;

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct BtOutcome {
    /// Per-group ranges (index 0 = whole match), None per group when the
    /// group is unset, None overall when there is no match.
    pub result: Option<Vec<Option<(usize, usize)>>>,
    pub steps: u64,
}

struct Bt<'a> {
    chars: &'a [char],
    caps: Vec<Option<(usize, usize)>>,
    steps: u64,
    budget: u64,
}

type Cont<'c, 'a> = &'c mut dyn FnMut(&mut Bt<'a>, usize) -> Result<bool>;

impl<'a> Bt<'a> {
    fn step(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::StepBudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn snapshot_groups(&self, node: &RegexNode) -> Vec<(GroupId, Option<(usize, usize)>)> {
        let mut ids = Vec::new();
        collect_group_ids(node, &mut ids);
        ids.into_iter().map(|g| (g, self.caps[g])).collect()
    }

    fn restore(&mut self, saved: &[(GroupId, Option<(usize, usize)>)]) {
        for &(g, v) in saved {
            self.caps[g] = v;
        }
    }

    fn reset_groups(&mut self, node: &RegexNode) -> Vec<(GroupId, Option<(usize, usize)>)> {
        let saved = self.snapshot_groups(node);
        for &(g, _) in &saved {
            self.caps[g] = None;
        }
        saved
    }
}

/// Matches `node` at `pos`, calling `k` with each candidate end position in
/// ECMAScript priority order until `k` accepts.
fn m<'a>(bt: &mut Bt<'a>, node: &RegexNode, pos: usize, fwd: bool, k: Cont<'_, 'a>) -> Result<bool> {
    use RegexNode::*;
    bt.step()?;
    match node {
        Char(c) => consume(bt, pos, fwd, k, |x| x == *c),
        AnyChar => consume(bt, pos, fwd, k, |_| true),
        Class(cc) => consume(bt, pos, fwd, k, |x| cc.matches(x)),
        Epsilon => k(bt, pos),
        Concat(l, r) => {
            let (first, second) = if fwd { (l, r) } else { (r, l) };
            let mut k2 = |bt: &mut Bt<'a>, p: usize| m(bt, second, p, fwd, k);
            m(bt, first, pos, fwd, &mut k2)
        }
        Union(l, r) => {
            if m(bt, l, pos, fwd, k)? {
                return Ok(true);
            }
            m(bt, r, pos, fwd, k)
        }
        Group { group_id, body } => {
            let g = *group_id;
            let entry = pos;
            let mut k2 = |bt: &mut Bt<'a>, p: usize| -> Result<bool> {
                let old = bt.caps[g];
                bt.caps[g] = Some(if fwd { (entry, p) } else { (p, entry) });
                let r = k(bt, p)?;
                if !r {
                    bt.caps[g] = old;
                }
                Ok(r)
            };
            m(bt, body, pos, fwd, &mut k2)
        }
        NonCap(body) => m(bt, body, pos, fwd, k),
        Quantified { kind, body, .. } => {
            let (min, max) = if kind.is_plus() { (1, None) } else { (0, None) };
            repeat(bt, body, min, max, kind.is_greedy(), fwd, pos, k)
        }
        CountedRep {
            min, max, greedy, body, ..
        } => repeat(bt, body, *min, *max, *greedy, fwd, pos, k),
        MandatoryIter { body, .. } => repeat(bt, body, 1, Some(1), true, fwd, pos, k),
        OptIter {
            greedy, body, tail, ..
        } => {
            let layer = Concat(body.clone(), tail.clone());
            repeat(bt, &layer, 0, Some(1), *greedy, fwd, pos, k)
        }
        Look { kind, body, .. } => {
            let body_fwd = !kind.is_behind();
            let snap = bt.snapshot_groups(body);
            let mut accept = |_: &mut Bt<'a>, _: usize| Ok(true);
            let hit = m(bt, body, pos, body_fwd, &mut accept)?;
            if kind.is_positive() {
                if !hit {
                    bt.restore(&snap);
                    return Ok(false);
                }
                // Continue from the original position; the body's captures
                // stay bound unless the continuation fails.
                let r = k(bt, pos)?;
                if !r {
                    bt.restore(&snap);
                }
                Ok(r)
            } else {
                bt.restore(&snap);
                if hit {
                    return Ok(false);
                }
                k(bt, pos)
            }
        }
        Anchor(kind) => {
            if anchor_holds(*kind, bt.chars, pos) {
                k(bt, pos)
            } else {
                Ok(false)
            }
        }
    }
}

fn consume<'a>(
    bt: &mut Bt<'a>,
    pos: usize,
    fwd: bool,
    k: Cont<'_, 'a>,
    pred: impl Fn(char) -> bool,
) -> Result<bool> {
    if fwd {
        if pos < bt.chars.len() && pred(bt.chars[pos]) {
            k(bt, pos + 1)
        } else {
            Ok(false)
        }
    } else if pos > 0 && pred(bt.chars[pos - 1]) {
        k(bt, pos - 1)
    } else {
        Ok(false)
    }
}

/// The RepeatMatcher: `min`/`max` are the *remaining* iteration counts.
/// Entering an iteration resets the body's groups; an optional iteration
/// (min exhausted) that consumes nothing fails.
#[allow(clippy::too_many_arguments)]
fn repeat<'a>(
    bt: &mut Bt<'a>,
    body: &RegexNode,
    min: u32,
    max: Option<u32>,
    greedy: bool,
    fwd: bool,
    pos: usize,
    k: Cont<'_, 'a>,
) -> Result<bool> {
    bt.step()?;
    if max == Some(0) {
        return k(bt, pos);
    }
    if min > 0 {
        return iterate(bt, body, min, max, greedy, fwd, pos, k);
    }
    if greedy {
        if iterate(bt, body, 0, max, greedy, fwd, pos, k)? {
            return Ok(true);
        }
        k(bt, pos)
    } else {
        if k(bt, pos)? {
            return Ok(true);
        }
        iterate(bt, body, 0, max, greedy, fwd, pos, k)
    }
}

#[allow(clippy::too_many_arguments)]
fn iterate<'a>(
    bt: &mut Bt<'a>,
    body: &RegexNode,
    min: u32,
    max: Option<u32>,
    greedy: bool,
    fwd: bool,
    pos: usize,
    k: Cont<'_, 'a>,
) -> Result<bool> {
    let saved = bt.reset_groups(body);
    let start = pos;
    let mut kin = |bt: &mut Bt<'a>, p: usize| -> Result<bool> {
        if min == 0 && p == start {
            return Ok(false); // empty optional iteration
        }
        repeat(
            bt,
            body,
            min.saturating_sub(1),
            max.map(|x| x - 1),
            greedy,
            fwd,
            p,
            k,
        )
    };
    let r = m(bt, body, pos, fwd, &mut kin)?;
    if !r {
        bt.restore(&saved);
    }
    Ok(r)
}

/// First match per ECMAScript order over all start positions.
pub fn bt_match(ast: &AnnotatedRegex, input: &str, budget: u64) -> Result<BtOutcome> {
    let chars: Vec<char> = input.chars().collect();
    let mut bt = Bt {
        chars: &chars,
        caps: vec![None; ast.group_count + 1],
        steps: 0,
        budget,
    };
    for start in 0..=chars.len() {
        for c in bt.caps.iter_mut() {
            *c = None;
        }
        let mut end: Option<usize> = None;
        let mut accept = |_: &mut Bt, p: usize| {
            end = Some(p);
            Ok(true)
        };
        let hit = m(&mut bt, &ast.root, start, true, &mut accept)?;
        if hit {
            let mut caps = bt.caps.clone();
            caps[0] = Some((start, end.unwrap()));
            return Ok(BtOutcome {
                result: Some(caps),
                steps: bt.steps,
            });
        }
    }
    Ok(BtOutcome {
        result: None,
        steps: bt.steps,
    })
}

/// Does `body` match anchored at `pos` (forward for lookahead bodies,
/// backward for lookbehind bodies)? Used to brute-force oracle rows.
pub fn bt_anchored_body(body: &RegexNode, group_count: usize, input: &[char], pos: usize, fwd: bool, budget: u64) -> Result<bool> {
    let mut bt = Bt {
        chars: input,
        caps: vec![None; group_count + 1],
        steps: 0,
        budget,
    };
    let mut accept = |_: &mut Bt, _: usize| Ok(true);
    m(&mut bt, body, pos, fwd, &mut accept)
}
