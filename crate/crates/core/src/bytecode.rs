//! Bytecode instruction set and program container for the NFA simulation.

use crate::ast::{AnchorKind, CharClass, GroupId, LookId, QuantId, RegexNode};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Inst {
    Consume(char),
    ConsumeClass(Rc<CharClass>),
    ConsumeAny,
    Jump(usize),
    /// Fork(high, low): the high label is explored first.
    Fork(usize, usize),
    Accept,
    SetReg(usize),
    /// Legacy capture-reset mode only: clears both slots of the group.
    ClearReg(GroupId),
    BeginLoop,
    EndLoop,
    SetQuant(QuantId),
    WriteOracle(LookId),
    CheckOracle(LookId),
    NegCheckOracle(LookId),
    WriteLB(LookId),
    CheckLB(LookId),
    NegCheckLB(LookId),
    SetNullPlus(QuantId),
    CheckNull(QuantId),
    AssertAnchor(AnchorKind),
}

impl fmt::Display for Inst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inst::Consume(c) => write!(f, "Consume {c}"),
            Inst::ConsumeClass(cc) => {
                write!(f, "ConsumeClass [")?;
                if cc.negated {
                    write!(f, "^")?;
                }
                for &(lo, hi) in &cc.ranges {
                    if lo == hi {
                        write!(f, "{lo}")?;
                    } else {
                        write!(f, "{lo}-{hi}")?;
                    }
                }
                write!(f, "]")
            }
            Inst::ConsumeAny => write!(f, "ConsumeAny"),
            Inst::Jump(l) => write!(f, "Jump {l}"),
            Inst::Fork(h, l) => write!(f, "Fork {h} {l}"),
            Inst::Accept => write!(f, "Accept"),
            Inst::SetReg(r) => {
                let side = if r % 2 == 0 { "entry" } else { "exit" };
                write!(f, "SetReg #{}:{}", r / 2, side)
            }
            Inst::ClearReg(g) => write!(f, "ClearReg #{g}"),
            Inst::BeginLoop => write!(f, "BeginLoop"),
            Inst::EndLoop => write!(f, "EndLoop"),
            Inst::SetQuant(q) => write!(f, "SetQuant {q}"),
            Inst::WriteOracle(l) => write!(f, "WriteOracle {l}"),
            Inst::CheckOracle(l) => write!(f, "CheckOracle {l}"),
            Inst::NegCheckOracle(l) => write!(f, "NegCheckOracle {l}"),
            Inst::WriteLB(b) => write!(f, "WriteLB {b}"),
            Inst::CheckLB(b) => write!(f, "CheckLB {b}"),
            Inst::NegCheckLB(b) => write!(f, "NegCheckLB {b}"),
            Inst::SetNullPlus(q) => write!(f, "SetNullPlus {q}"),
            Inst::CheckNull(q) => write!(f, "CheckNull {q}"),
            Inst::AssertAnchor(k) => {
                let s = match k {
                    AnchorKind::Begin => "^",
                    AnchorKind::End => "$",
                    AnchorKind::WordBoundary => "\\b",
                    AnchorKind::NonWordBoundary => "\\B",
                };
                write!(f, "AssertAnchor {s}")
            }
        }
    }
}

/// A compiled program plus the metadata the VM and pipeline need.
///
/// Register/clock vectors are sized from the *whole* regex's counts even in
/// sub-programs (oracle passes, reconstructions), so bindings from different
/// runs can be merged by id.
#[derive(Debug, Clone)]
pub struct Program {
    pub insts: Vec<Inst>,
    pub direction: Direction,
    /// Initial threads, first entry explored first. Singleton except for
    /// streaming programs, where lookbehind sub-automata come first.
    pub entry_points: Vec<usize>,
    pub group_count: usize,
    pub quant_count: usize,
    pub look_count: usize,
    /// Bodies of CDN plus quantifiers, for `CheckNull` evaluation.
    pub check_null_bodies: HashMap<QuantId, Rc<RegexNode>>,
}

impl Program {
    pub fn listing(&self) -> String {
        let mut out = String::new();
        for (i, inst) in self.insts.iter().enumerate() {
            out.push_str(&format!("{i}: {inst}\n"));
        }
        out
    }

    /// Number of states in the quantifier-duplicated automaton this program
    /// denotes: instructions bracketed by BeginLoop/EndLoop exist in both
    /// the "may exit without consuming" and "must consume first" copies
    /// (threads distinguish them via the `left` flag), so they count twice.
    /// Per-position executed instructions are bounded by this, not by the
    /// raw listing length.
    pub fn state_count(&self) -> usize {
        let mut depth = 0usize;
        let mut states = 0usize;
        for inst in &self.insts {
            match inst {
                Inst::BeginLoop => {
                    states += if depth > 0 { 2 } else { 1 };
                    depth += 1;
                }
                Inst::EndLoop => {
                    states += if depth > 0 { 2 } else { 1 };
                    depth = depth.saturating_sub(1);
                }
                _ => states += if depth > 0 { 2 } else { 1 },
            }
        }
        states
    }

    /// Validates that every Jump/Fork target is a label of this program.
    pub fn check_labels(&self) -> bool {
        let n = self.insts.len();
        self.entry_points.iter().all(|&e| e < n)
            && self.insts.iter().all(|inst| match inst {
                Inst::Jump(l) => *l < n,
                Inst::Fork(a, b) => *a < n && *b < n,
                _ => true,
            })
    }
}
