//! Lowering from annotated ASTs to bytecode.
//!
//! One emitter serves every program kind: the main match program, the
//! group-stripped oracle passes, the streaming lookbehind program, and the
//! two reconstruction flavors (lookaround bodies and nulled-plus empty
//! paths). Backward programs are produced by reversing the AST first and
//! letting the VM walk the string right to left.

use crate::ast::*;
use crate::bytecode::{Direction, Inst, Program};
use crate::desugar::{desugar_counted, DEFAULT_REP_LIMIT};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaptureMode {
    /// Clock-stamped SetQuant with post-match filtering (linear bytecode).
    Clocks,
    /// Per-group ClearReg at each iteration entry (quadratic bytecode,
    /// kept for benchmark comparison).
    LegacyClearReg,
}

#[derive(Debug, Clone)]
pub struct CompileOptions {
    pub capture_mode: CaptureMode,
    /// Test-only: compile `e+` as `ee*`, the classic exponential expansion.
    pub expand_plus: bool,
    /// Test-only: swap alternation fork priority, a deliberate semantic
    /// mutant used to prove the differential fuzzer can catch bugs.
    pub swap_union: bool,
    pub rep_limit: u32,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            capture_mode: CaptureMode::Clocks,
            expand_plus: false,
            swap_union: false,
            rep_limit: DEFAULT_REP_LIMIT,
        }
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Compiles the full forward match program: unanchored prefix, group 0
/// registers, one Accept.
pub fn compile_main(ast: &AnnotatedRegex, opts: &CompileOptions) -> Result<Program> {
    reject_lazy_nullable_plus(&ast.root)?;
    let node = prepare(&ast.root, opts, false)?;
    let mut e = Emitter::new(ast, opts, EmitMode::keep());
    e.emit_prefix();
    e.push(Inst::SetReg(0));
    e.emit_node(&node)?;
    e.push(Inst::SetReg(1));
    e.push(Inst::Accept);
    Ok(e.finish(Direction::Forward, vec![0]))
}

/// Compiles the bare expression with no prefix and no group-0 wrapping;
/// used for golden listings and anchored sub-matching.
pub fn compile_fragment(ast: &AnnotatedRegex, opts: &CompileOptions) -> Result<Program> {
    reject_lazy_nullable_plus(&ast.root)?;
    let node = prepare(&ast.root, opts, false)?;
    let mut e = Emitter::new(ast, opts, EmitMode::keep());
    e.emit_node(&node)?;
    e.push(Inst::Accept);
    Ok(e.finish(Direction::Forward, vec![0]))
}

/// Compiles the oracle pass for one lookaround: capture-stripped body with
/// an unanchored prefix, terminated by WriteOracle. Lookaheads run backward
/// over the reversed body so the write lands on the match's begin position;
/// lookbehinds run forward so it lands on the end position.
pub fn compile_oracle_pass(
    look: &LookInfo,
    ast: &AnnotatedRegex,
    opts: &CompileOptions,
) -> Result<Program> {
    let backward = !look.kind.is_behind();
    let node = prepare(&look.body, opts, backward)?;
    let mut e = Emitter::new(ast, opts, EmitMode::strip());
    e.emit_prefix();
    e.emit_node(&node)?;
    e.push(Inst::WriteOracle(look.id));
    let dir = if backward {
        Direction::Backward
    } else {
        Direction::Forward
    };
    Ok(e.finish(dir, vec![0]))
}

/// Compiles the phase-3 program for a positive lookaround body: captures
/// kept, anchored at the recorded position (no prefix). Lookaheads run
/// forward from it, lookbehinds backward over the reversed body.
pub fn compile_look_reconstruction(
    look: &LookInfo,
    ast: &AnnotatedRegex,
    opts: &CompileOptions,
) -> Result<Program> {
    debug_assert!(look.kind.is_positive());
    let backward = look.kind.is_behind();
    let node = prepare(&look.body, opts, backward)?;
    let mut e = Emitter::new(ast, opts, EmitMode::keep());
    e.emit_node(&node)?;
    e.push(Inst::Accept);
    let dir = if backward {
        Direction::Backward
    } else {
        Direction::Forward
    };
    Ok(e.finish(dir, vec![0]))
}

/// Compiles the empty-path program of a nulled plus body: only paths that
/// consume nothing survive, nested nullable plusses keep just their null
/// branch (so each plus body is compiled at most once across the whole
/// reconstruction recursion).
pub fn compile_nulled_reconstruction(
    body: &RegexNode,
    ast: &AnnotatedRegex,
    opts: &CompileOptions,
) -> Result<Program> {
    let node = prepare(body, opts, false)?;
    let mut e = Emitter::new(ast, opts, EmitMode::nulled());
    e.emit_node(&node)?;
    e.push(Inst::Accept);
    Ok(e.finish(Direction::Forward, vec![0]))
}

/// Decides whether the streaming (single-pass) pipeline can handle this
/// regex. `Err` carries the reason for diagnostics.
pub fn streaming_eligibility(ast: &AnnotatedRegex) -> std::result::Result<(), String> {
    let mut looks = Vec::new();
    collect_lookarounds(&ast.root, &mut looks);
    for l in &looks {
        if !l.kind.is_behind() {
            return Err(format!("lookahead <{} requires the oracle pipeline", l.id));
        }
        if contains_group(&l.body) {
            return Err(format!("lookbehind <{} captures groups", l.id));
        }
    }
    // A nulled plus is reconstructed after the streaming run, when the
    // lookbehind table is gone; reject plusses whose reconstruction or
    // null-check would need lookaround truth values.
    if let Some(q) = find_plus_mixing_groups_and_looks(&ast.root) {
        return Err(format!(
            "nullable plus {q} mixes capture groups and lookarounds"
        ));
    }
    Ok(())
}

fn find_plus_mixing_groups_and_looks(node: &RegexNode) -> Option<QuantId> {
    use RegexNode::*;
    if let Quantified {
        kind: QuantKind::GreedyPlus,
        quant_id,
        body,
    } = node
    {
        if is_nullable(body) && contains_group(body) {
            let mut looks = Vec::new();
            collect_lookarounds(body, &mut looks);
            if !looks.is_empty() {
                return Some(*quant_id);
            }
        }
    }
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => None,
        Concat(l, r) | Union(l, r) => {
            find_plus_mixing_groups_and_looks(l).or_else(|| find_plus_mixing_groups_and_looks(r))
        }
        Quantified { body, .. }
        | CountedRep { body, .. }
        | MandatoryIter { body, .. }
        | Group { body, .. }
        | NonCap(body)
        | Look { body, .. } => find_plus_mixing_groups_and_looks(body),
        OptIter { body, tail, .. } => {
            find_plus_mixing_groups_and_looks(body).or_else(|| find_plus_mixing_groups_and_looks(tail))
        }
    }
}

/// Compiles the single combined streaming program: every lookbehind as a
/// capture-stripped sub-automaton with an any-char self-loop ending in
/// WriteLB, listed innermost (highest id) first, then the main expression
/// with lookbehinds lowered to CheckLB/NegCheckLB.
pub fn compile_streaming(ast: &AnnotatedRegex, opts: &CompileOptions) -> Result<Program> {
    if let Err(reason) = streaming_eligibility(ast) {
        return Err(Error::StreamingIneligible { reason });
    }
    reject_lazy_nullable_plus(&ast.root)?;
    let mut looks = Vec::new();
    collect_lookarounds(&ast.root, &mut looks);
    looks.sort_by(|a, b| b.id.cmp(&a.id));

    let mut e = Emitter::new(ast, opts, EmitMode::strip());
    e.mode.lb = true;
    let mut entries = Vec::new();
    for l in &looks {
        entries.push(e.here());
        e.emit_prefix();
        let node = prepare(&l.body, opts, false)?;
        e.emit_node(&node)?;
        e.push(Inst::WriteLB(l.id));
    }
    entries.push(e.here());
    e.mode = EmitMode::keep();
    e.mode.lb = true;
    e.emit_prefix();
    e.push(Inst::SetReg(0));
    let node = prepare(&ast.root, opts, false)?;
    e.emit_node(&node)?;
    e.push(Inst::SetReg(1));
    e.push(Inst::Accept);
    Ok(e.finish(Direction::Forward, entries))
}

// ---------------------------------------------------------------------------
// Shared pre-passes
// ---------------------------------------------------------------------------

fn reject_lazy_nullable_plus(node: &RegexNode) -> Result<()> {
    if find_lazy_nullable_plus(node).is_some() {
        Err(Error::LazyNullablePlus)
    } else {
        Ok(())
    }
}

fn prepare(node: &RegexNode, opts: &CompileOptions, backward: bool) -> Result<RegexNode> {
    let node = if backward { reverse(node) } else { node.clone() };
    let node = if opts.expand_plus {
        rewrite_plus_as_counted(&node)
    } else {
        node
    };
    desugar_counted(&node, opts.rep_limit)
}

/// `e+ → e{1,}`, which desugars to `ee*`: the body is emitted twice per
/// plus, giving the exponential bytecode growth of naive engines.
fn rewrite_plus_as_counted(node: &RegexNode) -> RegexNode {
    use RegexNode::*;
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => node.clone(),
        Concat(l, r) => Concat(
            Box::new(rewrite_plus_as_counted(l)),
            Box::new(rewrite_plus_as_counted(r)),
        ),
        Union(l, r) => Union(
            Box::new(rewrite_plus_as_counted(l)),
            Box::new(rewrite_plus_as_counted(r)),
        ),
        Quantified {
            kind,
            quant_id,
            body,
        } if kind.is_plus() => CountedRep {
            min: 1,
            max: None,
            greedy: kind.is_greedy(),
            quant_id: *quant_id,
            body: Box::new(rewrite_plus_as_counted(body)),
        },
        Quantified {
            kind,
            quant_id,
            body,
        } => Quantified {
            kind: *kind,
            quant_id: *quant_id,
            body: Box::new(rewrite_plus_as_counted(body)),
        },
        CountedRep {
            min,
            max,
            greedy,
            quant_id,
            body,
        } => CountedRep {
            min: *min,
            max: *max,
            greedy: *greedy,
            quant_id: *quant_id,
            body: Box::new(rewrite_plus_as_counted(body)),
        },
        MandatoryIter { quant_id, body } => MandatoryIter {
            quant_id: *quant_id,
            body: Box::new(rewrite_plus_as_counted(body)),
        },
        OptIter {
            greedy,
            quant_id,
            body,
            tail,
        } => OptIter {
            greedy: *greedy,
            quant_id: *quant_id,
            body: Box::new(rewrite_plus_as_counted(body)),
            tail: Box::new(rewrite_plus_as_counted(tail)),
        },
        Group { group_id, body } => Group {
            group_id: *group_id,
            body: Box::new(rewrite_plus_as_counted(body)),
        },
        NonCap(body) => NonCap(Box::new(rewrite_plus_as_counted(body))),
        Look {
            kind,
            look_id,
            body,
        } => Look {
            kind: *kind,
            look_id: *look_id,
            body: Box::new(rewrite_plus_as_counted(body)),
        },
    }
}

// ---------------------------------------------------------------------------
// Emitter
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct EmitMode {
    /// Drop SetReg/SetQuant/ClearReg/SetNullPlus (oracle passes and
    /// streaming lookbehind sub-automata).
    strip: bool,
    /// Emit only empty-string paths of quantifiers (nulled-plus programs).
    nulled: bool,
    /// Lower lookarounds to LBtable checks instead of oracle checks.
    lb: bool,
}

impl EmitMode {
    fn keep() -> Self {
        EmitMode {
            strip: false,
            nulled: false,
            lb: false,
        }
    }
    fn strip() -> Self {
        EmitMode {
            strip: true,
            nulled: false,
            lb: false,
        }
    }
    fn nulled() -> Self {
        EmitMode {
            strip: false,
            nulled: true,
            lb: false,
        }
    }
}

struct Emitter {
    insts: Vec<Inst>,
    mode: EmitMode,
    legacy: bool,
    swap_union: bool,
    group_count: usize,
    quant_count: usize,
    look_count: usize,
    check_null_bodies: HashMap<QuantId, Rc<RegexNode>>,
}

impl Emitter {
    fn new(ast: &AnnotatedRegex, opts: &CompileOptions, mode: EmitMode) -> Self {
        Emitter {
            insts: Vec::new(),
            mode,
            legacy: opts.capture_mode == CaptureMode::LegacyClearReg,
            swap_union: opts.swap_union,
            group_count: ast.group_count,
            quant_count: ast.quant_count,
            look_count: ast.look_count,
            check_null_bodies: HashMap::new(),
        }
    }

    fn finish(self, direction: Direction, entry_points: Vec<usize>) -> Program {
        let p = Program {
            insts: self.insts,
            direction,
            entry_points,
            group_count: self.group_count,
            quant_count: self.quant_count,
            look_count: self.look_count,
            check_null_bodies: self.check_null_bodies,
        };
        debug_assert!(p.check_labels());
        p
    }

    fn here(&self) -> usize {
        self.insts.len()
    }

    fn push(&mut self, inst: Inst) -> usize {
        self.insts.push(inst);
        self.insts.len() - 1
    }

    fn patch(&mut self, at: usize, target: usize) {
        match &mut self.insts[at] {
            Inst::Jump(l) => *l = target,
            Inst::Fork(h, l) => {
                if *h == usize::MAX {
                    *h = target;
                } else {
                    *l = target;
                }
            }
            _ => unreachable!("patching a non-jump instruction"),
        }
    }

    /// The unanchored `.*?` prefix: lowest-priority any-char loop.
    fn emit_prefix(&mut self) {
        let f = self.here();
        self.push(Inst::Fork(f + 3, f + 1));
        self.push(Inst::ConsumeAny);
        self.push(Inst::Jump(f));
    }

    /// SetQuant (default) or per-group ClearReg (legacy) at the start of a
    /// quantifier iteration. In legacy mode SetQuant is still required on
    /// nullable plusses, whose plusnulled register it resets.
    fn emit_iter_prologue(&mut self, quant_id: QuantId, body: &RegexNode, nullable_plus: bool) {
        if self.mode.strip {
            return;
        }
        if self.legacy {
            let mut ids = Vec::new();
            collect_group_ids(body, &mut ids);
            for g in ids {
                self.push(Inst::ClearReg(g));
            }
            if nullable_plus {
                self.push(Inst::SetQuant(quant_id));
            }
        } else {
            self.push(Inst::SetQuant(quant_id));
        }
    }

    fn emit_node(&mut self, node: &RegexNode) -> Result<()> {
        use RegexNode::*;
        match node {
            Char(c) => {
                self.push(Inst::Consume(*c));
            }
            AnyChar => {
                self.push(Inst::ConsumeAny);
            }
            Class(cc) => {
                self.push(Inst::ConsumeClass(Rc::new(cc.clone())));
            }
            Epsilon => {}
            Concat(l, r) => {
                self.emit_node(l)?;
                self.emit_node(r)?;
            }
            Union(l, r) => {
                let fork = self.push(Inst::Fork(usize::MAX, usize::MAX));
                let left = self.here();
                self.emit_node(l)?;
                let jump = self.push(Inst::Jump(usize::MAX));
                let right = self.here();
                self.emit_node(r)?;
                let end = self.here();
                if self.swap_union {
                    self.insts[fork] = Inst::Fork(right, left);
                } else {
                    self.insts[fork] = Inst::Fork(left, right);
                }
                self.patch(jump, end);
            }
            Group { group_id, body } => {
                if self.mode.strip {
                    self.emit_node(body)?;
                } else {
                    self.push(Inst::SetReg(2 * group_id));
                    self.emit_node(body)?;
                    self.push(Inst::SetReg(2 * group_id + 1));
                }
            }
            NonCap(body) => self.emit_node(body)?,
            Look {
                kind,
                look_id,
                body: _,
            } => {
                let inst = match (self.mode.lb, kind.is_positive()) {
                    (false, true) => Inst::CheckOracle(*look_id),
                    (false, false) => Inst::NegCheckOracle(*look_id),
                    (true, true) => Inst::CheckLB(*look_id),
                    (true, false) => Inst::NegCheckLB(*look_id),
                };
                self.push(inst);
            }
            Anchor(kind) => {
                self.push(Inst::AssertAnchor(*kind));
            }
            MandatoryIter { quant_id, body } => {
                // Exactly one iteration: no fork, no loop guard (mandatory
                // iterations may match empty).
                self.emit_iter_prologue(*quant_id, body, false);
                self.emit_node(body)?;
            }
            OptIter {
                greedy,
                quant_id,
                body,
                tail,
            } => {
                if self.mode.nulled {
                    // Optional layers cannot match empty, so the empty path
                    // skips the whole layer (including its tail).
                    return Ok(());
                }
                let fork = self.push(Inst::Fork(usize::MAX, usize::MAX));
                let enter = self.here();
                self.emit_iter_prologue(*quant_id, body, false);
                let wrap = is_nullable(body);
                if wrap {
                    self.push(Inst::BeginLoop);
                }
                self.emit_node(body)?;
                if wrap {
                    self.push(Inst::EndLoop);
                }
                self.emit_node(tail)?;
                let skip = self.here();
                self.insts[fork] = if *greedy {
                    Inst::Fork(enter, skip)
                } else {
                    Inst::Fork(skip, enter)
                };
            }
            Quantified {
                kind,
                quant_id,
                body,
            } => self.emit_quantified(*kind, *quant_id, body)?,
            CountedRep { .. } => {
                return Err(Error::Internal(
                    "counted repetition survived desugaring".into(),
                ))
            }
        }
        Ok(())
    }

    fn emit_quantified(&mut self, kind: QuantKind, quant_id: QuantId, body: &RegexNode) -> Result<()> {
        let nullable = is_nullable(body);
        if kind.is_plus() && nullable {
            if !kind.is_greedy() {
                return Err(Error::LazyNullablePlus);
            }
            return self.emit_nullable_plus(quant_id, body);
        }
        if self.mode.nulled {
            if kind.is_plus() {
                // A non-nullable plus has no empty path; emit the mandatory
                // iteration so the branch dies in the epsilon-only run
                // without disturbing priority order.
                self.emit_iter_prologue(quant_id, body, false);
                self.emit_node(body)?;
            }
            // Stars and optional layers contribute only their skip path.
            return Ok(());
        }
        if kind.is_plus() {
            // Fig.-12 shape: one mandatory pass through the body, then a
            // fork either looping back or falling out.
            let start = self.here();
            self.emit_iter_prologue(quant_id, body, false);
            self.emit_node(body)?;
            let exit = self.here() + 1;
            if kind.is_greedy() {
                self.push(Inst::Fork(start, exit));
            } else {
                self.push(Inst::Fork(exit, start));
            }
        } else {
            let head = self.push(Inst::Fork(usize::MAX, usize::MAX));
            let enter = self.here();
            self.emit_iter_prologue(quant_id, body, false);
            if nullable {
                self.push(Inst::BeginLoop);
            }
            self.emit_node(body)?;
            if nullable {
                self.push(Inst::EndLoop);
            }
            self.push(Inst::Jump(head));
            let exit = self.here();
            self.insts[head] = if kind.is_greedy() {
                Inst::Fork(enter, exit)
            } else {
                Inst::Fork(exit, enter)
            };
        }
        Ok(())
    }

    /// Greedy plus over a nullable (CIN or CDN) body: looped iterations that
    /// must consume, plus a lowest-priority null path that records the plus
    /// as nulled for phase-3 reconstruction. CDN bodies get a CheckNull
    /// guard, evaluated against the position's context.
    fn emit_nullable_plus(&mut self, quant_id: QuantId, body: &RegexNode) -> Result<()> {
        let cdn = nullability(body) == Nullability::CDN;
        if cdn {
            self.check_null_bodies
                .insert(quant_id, Rc::new(body.clone()));
        }
        if self.mode.nulled {
            if cdn {
                self.push(Inst::CheckNull(quant_id));
            }
            if !self.mode.strip {
                self.push(Inst::SetNullPlus(quant_id));
            }
            return Ok(());
        }
        let entry = self.push(Inst::Fork(usize::MAX, usize::MAX));
        let body_l = self.here();
        self.emit_iter_prologue(quant_id, body, true);
        self.push(Inst::BeginLoop);
        self.emit_node(body)?;
        self.push(Inst::EndLoop);
        let loop_fork = self.push(Inst::Fork(body_l, usize::MAX));
        let null_l = self.here();
        if cdn {
            self.push(Inst::CheckNull(quant_id));
        }
        if !self.mode.strip {
            self.push(Inst::SetNullPlus(quant_id));
        }
        let exit = self.here();
        self.insts[entry] = Inst::Fork(body_l, null_l);
        self.patch(loop_fork, exit);
        Ok(())
    }
}
