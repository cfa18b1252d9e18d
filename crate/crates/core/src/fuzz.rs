//! Grammar-directed differential fuzzer: generates random regex/string
//! pairs over the supported grammar, compares the linear engine against
//! the reference backtracker, and shrinks any mismatch to a minimal
//! reproducer.

use crate::ast::*;
use crate::backtrack::{bt_match, DEFAULT_STEP_BUDGET};
use crate::error::Error;
use crate::pipeline::{full_match, MatchConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct FuzzProfile {
    pub max_depth: usize,
    pub max_nodes: usize,
    pub alphabet: Vec<char>,
    /// One character outside the pattern alphabet mixed into test strings.
    pub outside_char: char,
    pub max_string_len: usize,
    pub max_counted: u32,
    pub lookarounds: bool,
    pub anchors: bool,
    pub classes: bool,
    pub counted: bool,
    pub step_budget: u64,
}

impl Default for FuzzProfile {
    fn default() -> Self {
        FuzzProfile {
            max_depth: 6,
            max_nodes: 25,
            alphabet: vec!['a', 'b', 'c'],
            outside_char: 'd',
            max_string_len: 12,
            max_counted: 5,
            lookarounds: true,
            anchors: true,
            classes: true,
            counted: true,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reproducer {
    pub pattern: String,
    pub input: String,
    pub linear: String,
    pub backtrack: String,
}

impl Reproducer {
    /// One-per-file serialization: `pattern\nstring\n`.
    pub fn serialize(&self) -> String {
        format!("{}\n{}\n", self.pattern, self.input)
    }
}

#[derive(Debug, Clone, Default)]
pub struct FuzzReport {
    pub cases: u64,
    pub agreed: u64,
    /// Lazy nullable plus correctly rejected by the linear engine
    /// (error-path check, excluded from result comparison).
    pub rejected: u64,
    /// Backtracker exceeded its step budget.
    pub skipped: u64,
    pub mismatches: Vec<Reproducer>,
    /// Generator-side errors (a mismatch of a different kind: the linear
    /// engine refused a pattern the grammar says it must support).
    pub engine_errors: Vec<(String, String)>,
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Deterministic pattern for (seed, default profile); case index 0.
pub fn gen_regex(seed: u64, profile: &FuzzProfile) -> String {
    let mut rng = case_rng(seed, 0);
    to_pattern(&gen_node_tree(&mut rng, profile))
}

fn gen_node_tree(rng: &mut ChaCha8Rng, profile: &FuzzProfile) -> RegexNode {
    let mut budget = profile.max_nodes;
    gen_node(rng, profile, profile.max_depth, &mut budget)
}

fn gen_literal(rng: &mut ChaCha8Rng, profile: &FuzzProfile) -> RegexNode {
    RegexNode::Char(*profile.alphabet.choose(rng).unwrap())
}

fn gen_class(rng: &mut ChaCha8Rng, profile: &FuzzProfile) -> RegexNode {
    let n = rng.gen_range(1..=profile.alphabet.len());
    let mut picks: Vec<char> = profile.alphabet.clone();
    picks.shuffle(rng);
    picks.truncate(n);
    picks.sort_unstable();
    RegexNode::Class(CharClass {
        ranges: picks.into_iter().map(|c| (c, c)).collect(),
        negated: rng.gen_bool(0.25),
    })
}

/// Weighted recursive generation. Quantifier bodies are biased toward
/// nullability (union-with-empty wrapping) so capture-reset and nulled-plus
/// paths get real coverage.
fn gen_node(rng: &mut ChaCha8Rng, profile: &FuzzProfile, depth: usize, budget: &mut usize) -> RegexNode {
    use RegexNode::*;
    if *budget == 0 || depth == 0 {
        return gen_literal(rng, profile);
    }
    *budget = budget.saturating_sub(1);
    let mut weights: Vec<(u32, u8)> = vec![
        (5, 0), // literal
        (1, 1), // any char
        (4, 2), // concat
        (3, 3), // union
        (5, 4), // quantifier
        (3, 5), // capture group
        (1, 6), // non-capturing group
    ];
    if profile.classes {
        weights.push((2, 7));
    }
    if profile.counted {
        weights.push((2, 8));
    }
    if profile.lookarounds {
        weights.push((2, 9));
    }
    if profile.anchors {
        weights.push((1, 10));
    }
    let total: u32 = weights.iter().map(|(w, _)| *w).sum();
    let mut roll = rng.gen_range(0..total);
    let mut pick = 0;
    for (w, tag) in &weights {
        if roll < *w {
            pick = *tag;
            break;
        }
        roll -= *w;
    }
    match pick {
        0 => gen_literal(rng, profile),
        1 => AnyChar,
        2 => Concat(
            Box::new(gen_node(rng, profile, depth - 1, budget)),
            Box::new(gen_node(rng, profile, depth - 1, budget)),
        ),
        3 => {
            let l = gen_node(rng, profile, depth - 1, budget);
            // Empty right branch at a healthy rate: `x|` is the simplest
            // nullable construct and the printer represents it exactly.
            let r = if rng.gen_bool(0.3) {
                Epsilon
            } else {
                gen_node(rng, profile, depth - 1, budget)
            };
            Union(Box::new(l), Box::new(r))
        }
        4 => {
            let body = gen_quant_body(rng, profile, depth, budget);
            let kind = match rng.gen_range(0..10) {
                0..=3 => QuantKind::GreedyStar,
                4..=6 => QuantKind::GreedyPlus,
                7..=8 => QuantKind::LazyStar,
                _ => QuantKind::LazyPlus,
            };
            Quantified {
                kind,
                quant_id: 0,
                body: Box::new(body),
            }
        }
        5 => Group {
            group_id: 0,
            body: Box::new(gen_node(rng, profile, depth - 1, budget)),
        },
        6 => NonCap(Box::new(gen_node(rng, profile, depth - 1, budget))),
        7 => gen_class(rng, profile),
        8 => {
            let min = rng.gen_range(0..=profile.max_counted);
            let max = if rng.gen_bool(0.3) {
                None
            } else {
                Some(rng.gen_range(min..=profile.max_counted))
            };
            CountedRep {
                min,
                max,
                greedy: !rng.gen_bool(0.2),
                quant_id: 0,
                body: Box::new(quantifiable(gen_node(rng, profile, depth - 1, budget))),
            }
        }
        9 => {
            let kind = match rng.gen_range(0..4) {
                0 => LookKind::PosAhead,
                1 => LookKind::NegAhead,
                2 => LookKind::PosBehind,
                _ => LookKind::NegBehind,
            };
            Look {
                kind,
                look_id: 0,
                body: Box::new(gen_node(rng, profile, depth - 1, budget)),
            }
        }
        _ => Anchor(match rng.gen_range(0..4) {
            0 => AnchorKind::Begin,
            1 => AnchorKind::End,
            2 => AnchorKind::WordBoundary,
            _ => AnchorKind::NonWordBoundary,
        }),
    }
}

fn gen_quant_body(rng: &mut ChaCha8Rng, profile: &FuzzProfile, depth: usize, budget: &mut usize) -> RegexNode {
    let body = quantifiable(gen_node(rng, profile, depth - 1, budget));
    if !is_nullable(&body) && rng.gen_bool(0.4) {
        // Nullable-quantifier bias: wrap as `body|`.
        RegexNode::Union(Box::new(body), Box::new(RegexNode::Epsilon))
    } else {
        body
    }
}

/// Assertions cannot carry a quantifier directly; wrap them.
fn quantifiable(body: RegexNode) -> RegexNode {
    match body {
        b @ (RegexNode::Look { .. } | RegexNode::Anchor(_)) => RegexNode::NonCap(Box::new(b)),
        b => b,
    }
}

fn gen_string(rng: &mut ChaCha8Rng, profile: &FuzzProfile) -> String {
    let len = rng.gen_range(0..=profile.max_string_len);
    let mut pool = profile.alphabet.clone();
    pool.push(profile.outside_char);
    (0..len).map(|_| *pool.choose(rng).unwrap()).collect()
}

/// Does the pattern contain a quantifier over a nullable body? (Generator
/// bias metric.)
pub fn has_nullable_quantifier(node: &RegexNode) -> bool {
    use RegexNode::*;
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => false,
        Quantified { body, .. } => is_nullable(body) || has_nullable_quantifier(body),
        CountedRep { body, .. } => is_nullable(body) || has_nullable_quantifier(body),
        MandatoryIter { body, .. } => has_nullable_quantifier(body),
        OptIter { body, tail, .. } => {
            has_nullable_quantifier(body) || has_nullable_quantifier(tail)
        }
        Concat(l, r) | Union(l, r) => has_nullable_quantifier(l) || has_nullable_quantifier(r),
        Group { body, .. } | NonCap(body) | Look { body, .. } => has_nullable_quantifier(body),
    }
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseOutcome {
    Agree,
    Mismatch { linear: String, backtrack: String },
    /// Linear engine rejected a lazy nullable plus, as it must.
    Rejected,
    /// Backtracker step budget exceeded.
    Skipped,
    EngineError(String),
}

fn render(result: &Option<Vec<Option<(usize, usize)>>>) -> String {
    match result {
        None => "no match".to_string(),
        Some(groups) => groups
            .iter()
            .enumerate()
            .map(|(g, r)| match r {
                Some((s, e)) => format!("group {g}: {s},{e}"),
                None => format!("group {g}: undefined"),
            })
            .collect::<Vec<_>>()
            .join("; "),
    }
}

pub fn compare_case(
    pattern: &str,
    input: &str,
    config: &MatchConfig,
    budget: u64,
) -> CaseOutcome {
    let ast = match crate::parser::parse(pattern) {
        Ok(a) => a,
        Err(e) => return CaseOutcome::EngineError(format!("parse: {e}")),
    };
    let linear = match full_match(pattern, input, config) {
        Ok(r) => Some(r.map(|m| m.groups)),
        Err(Error::LazyNullablePlus) => None,
        Err(e) => return CaseOutcome::EngineError(format!("linear: {e}")),
    };
    let linear = match linear {
        Some(r) => r,
        None => {
            return if find_lazy_nullable_plus(&ast.root).is_some() {
                CaseOutcome::Rejected
            } else {
                CaseOutcome::EngineError("spurious lazy-plus rejection".into())
            }
        }
    };
    let bt = match bt_match(&ast, input, budget) {
        Ok(o) => o.result,
        Err(Error::StepBudgetExceeded { .. }) => return CaseOutcome::Skipped,
        Err(e) => return CaseOutcome::EngineError(format!("backtrack: {e}")),
    };
    if linear == bt {
        CaseOutcome::Agree
    } else {
        CaseOutcome::Mismatch {
            linear: render(&linear),
            backtrack: render(&bt),
        }
    }
}

// ---------------------------------------------------------------------------
// Shrinking
// ---------------------------------------------------------------------------

/// Single-step structural simplifications: replace a node by one of its
/// children, drop union/concat arms, or simplify quantifiers.
fn shrink_ast(node: &RegexNode) -> Vec<RegexNode> {
    use RegexNode::*;
    let mut out = Vec::new();
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
        Concat(l, r) | Union(l, r) => {
            out.push((**l).clone());
            out.push((**r).clone());
            for s in shrink_ast(l) {
                out.push(rebuild2(node, s, (**r).clone()));
            }
            for s in shrink_ast(r) {
                out.push(rebuild2(node, (**l).clone(), s));
            }
        }
        Quantified { kind, body, .. } => {
            out.push((**body).clone());
            if kind.is_plus() {
                out.push(Quantified {
                    kind: if kind.is_greedy() {
                        QuantKind::GreedyStar
                    } else {
                        QuantKind::LazyStar
                    },
                    quant_id: 0,
                    body: body.clone(),
                });
            }
            for s in shrink_ast(body) {
                out.push(Quantified {
                    kind: *kind,
                    quant_id: 0,
                    body: Box::new(s),
                });
            }
        }
        CountedRep {
            min, max, greedy, body, ..
        } => {
            out.push((**body).clone());
            if *min > 0 {
                out.push(CountedRep {
                    min: min - 1,
                    max: *max,
                    greedy: *greedy,
                    quant_id: 0,
                    body: body.clone(),
                });
            }
            if let Some(m) = max {
                if *m > *min {
                    out.push(CountedRep {
                        min: *min,
                        max: Some(m - 1),
                        greedy: *greedy,
                        quant_id: 0,
                        body: body.clone(),
                    });
                }
            }
            for s in shrink_ast(body) {
                out.push(CountedRep {
                    min: *min,
                    max: *max,
                    greedy: *greedy,
                    quant_id: 0,
                    body: Box::new(s),
                });
            }
        }
        MandatoryIter { body, .. } => out.push((**body).clone()),
        OptIter { body, tail, .. } => {
            out.push((**body).clone());
            out.push((**tail).clone());
        }
        Group { body, .. } => {
            out.push((**body).clone());
            for s in shrink_ast(body) {
                out.push(Group {
                    group_id: 0,
                    body: Box::new(s),
                });
            }
        }
        NonCap(body) => {
            out.push((**body).clone());
            for s in shrink_ast(body) {
                out.push(NonCap(Box::new(s)));
            }
        }
        Look { kind, body, .. } => {
            out.push((**body).clone());
            for s in shrink_ast(body) {
                out.push(Look {
                    kind: *kind,
                    look_id: 0,
                    body: Box::new(s),
                });
            }
        }
    }
    out
}

fn rebuild2(template: &RegexNode, l: RegexNode, r: RegexNode) -> RegexNode {
    match template {
        RegexNode::Concat(..) => RegexNode::Concat(Box::new(l), Box::new(r)),
        RegexNode::Union(..) => RegexNode::Union(Box::new(l), Box::new(r)),
        _ => unreachable!(),
    }
}

fn still_mismatches(pattern: &str, input: &str, config: &MatchConfig, budget: u64) -> bool {
    matches!(
        compare_case(pattern, input, config, budget),
        CaseOutcome::Mismatch { .. }
    )
}

/// Greedy shrink loop: try AST deletions and string truncations until no
/// single step preserves the mismatch.
pub fn shrink(
    pattern: &str,
    input: &str,
    config: &MatchConfig,
    budget: u64,
) -> (String, String) {
    let mut pat = pattern.to_string();
    let mut s = input.to_string();
    loop {
        let mut improved = false;
        if let Ok(ast) = crate::parser::parse(&pat) {
            for cand in shrink_ast(&ast.root) {
                let cand_pat = to_pattern(&cand);
                if cand_pat.len() < pat.len()
                    && crate::parser::parse(&cand_pat).is_ok()
                    && still_mismatches(&cand_pat, &s, config, budget)
                {
                    pat = cand_pat;
                    improved = true;
                    break;
                }
            }
        }
        if !improved && !s.is_empty() {
            let shorter_tail: String = s.chars().take(s.chars().count() - 1).collect();
            let shorter_head: String = s.chars().skip(1).collect();
            if still_mismatches(&pat, &shorter_tail, config, budget) {
                s = shorter_tail;
                improved = true;
            } else if still_mismatches(&pat, &shorter_head, config, budget) {
                s = shorter_head;
                improved = true;
            }
        }
        if !improved {
            return (pat, s);
        }
    }
}

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

pub fn fuzz_campaign(n: u64, seed: u64, profile: &FuzzProfile, config: &MatchConfig) -> FuzzReport {
    let mut report = FuzzReport::default();
    for i in 0..n {
        let mut rng = case_rng(seed, i);
        let ast = gen_node_tree(&mut rng, profile);
        let pattern = to_pattern(&ast);
        let input = gen_string(&mut rng, profile);
        report.cases += 1;
        match compare_case(&pattern, &input, config, profile.step_budget) {
            CaseOutcome::Agree => report.agreed += 1,
            CaseOutcome::Rejected => report.rejected += 1,
            CaseOutcome::Skipped => report.skipped += 1,
            CaseOutcome::EngineError(e) => report.engine_errors.push((pattern, e)),
            CaseOutcome::Mismatch { .. } => {
                let (pat, s) = shrink(&pattern, &input, config, profile.step_budget);
                let (linear, backtrack) = match compare_case(&pat, &s, config, profile.step_budget)
                {
                    CaseOutcome::Mismatch { linear, backtrack } => (linear, backtrack),
                    _ => ("<unstable>".into(), "<unstable>".into()),
                };
                report.mismatches.push(Reproducer {
                    pattern: pat,
                    input: s,
                    linear,
                    backtrack,
                });
            }
        }
    }
    report
}
