//! Regex syntax trees: node definitions, id annotation, nullability
//! analysis, reversal and pattern printing.
//!
//! Ids (group, quantifier, lookaround) are assigned in a preorder walk,
//! each family counted independently and starting at 1. Group 0 is
//! reserved for the whole match and never appears in the tree.

use std::fmt::Write as _;

pub type GroupId = usize;
pub type QuantId = usize;
pub type LookId = usize;

// ---------------------------------------------------------------------------
// Node definitions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantKind {
    GreedyStar,
    LazyStar,
    GreedyPlus,
    LazyPlus,
}

impl QuantKind {
    pub fn is_greedy(self) -> bool {
        matches!(self, QuantKind::GreedyStar | QuantKind::GreedyPlus)
    }
    pub fn is_plus(self) -> bool {
        matches!(self, QuantKind::GreedyPlus | QuantKind::LazyPlus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookKind {
    PosAhead,
    NegAhead,
    PosBehind,
    NegBehind,
}

impl LookKind {
    pub fn is_positive(self) -> bool {
        matches!(self, LookKind::PosAhead | LookKind::PosBehind)
    }
    pub fn is_behind(self) -> bool {
        matches!(self, LookKind::PosBehind | LookKind::NegBehind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorKind {
    Begin,
    End,
    WordBoundary,
    NonWordBoundary,
}

/// Character class as a union of inclusive code-point ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharClass {
    pub ranges: Vec<(char, char)>,
    pub negated: bool,
}

impl CharClass {
    pub fn matches(&self, c: char) -> bool {
        let inside = self.ranges.iter().any(|&(lo, hi)| lo <= c && c <= hi);
        inside != self.negated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegexNode {
    Char(char),
    AnyChar,
    Class(CharClass),
    Epsilon,
    Concat(Box<RegexNode>, Box<RegexNode>),
    Union(Box<RegexNode>, Box<RegexNode>),
    Quantified {
        kind: QuantKind,
        quant_id: QuantId,
        body: Box<RegexNode>,
    },
    CountedRep {
        min: u32,
        max: Option<u32>,
        greedy: bool,
        quant_id: QuantId,
        body: Box<RegexNode>,
    },
    /// One mandatory iteration of a counted repetition (desugared form).
    /// Shares the quantifier id of the repetition it came from.
    MandatoryIter {
        quant_id: QuantId,
        body: Box<RegexNode>,
    },
    /// One optional layer of a counted repetition (desugared form):
    /// `(?: body tail )?` where `tail` is the next inner layer.
    OptIter {
        greedy: bool,
        quant_id: QuantId,
        body: Box<RegexNode>,
        tail: Box<RegexNode>,
    },
    Group {
        group_id: GroupId,
        body: Box<RegexNode>,
    },
    NonCap(Box<RegexNode>),
    Look {
        kind: LookKind,
        look_id: LookId,
        body: Box<RegexNode>,
    },
    Anchor(AnchorKind),
}

use RegexNode::*;

// ---------------------------------------------------------------------------
// Annotation
// ---------------------------------------------------------------------------

/// A regex with ids assigned and per-family counts recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedRegex {
    pub root: RegexNode,
    pub group_count: usize,
    pub quant_count: usize,
    pub look_count: usize,
}

/// Assigns preorder ids to groups, quantifiers and lookarounds.
/// Overwrites any ids already present.
pub fn annotate(mut root: RegexNode) -> AnnotatedRegex {
    struct Counters {
        groups: usize,
        quants: usize,
        looks: usize,
    }
    fn walk(node: &mut RegexNode, c: &mut Counters) {
        match node {
            Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
            Concat(l, r) | Union(l, r) => {
                walk(l, c);
                walk(r, c);
            }
            Quantified { quant_id, body, .. } => {
                c.quants += 1;
                *quant_id = c.quants;
                walk(body, c);
            }
            CountedRep { quant_id, body, .. } => {
                c.quants += 1;
                *quant_id = c.quants;
                walk(body, c);
            }
            MandatoryIter { quant_id, body } => {
                c.quants += 1;
                *quant_id = c.quants;
                walk(body, c);
            }
            OptIter {
                quant_id,
                body,
                tail,
                ..
            } => {
                c.quants += 1;
                *quant_id = c.quants;
                walk(body, c);
                walk(tail, c);
            }
            Group { group_id, body } => {
                c.groups += 1;
                *group_id = c.groups;
                walk(body, c);
            }
            NonCap(body) => walk(body, c),
            Look { look_id, body, .. } => {
                c.looks += 1;
                *look_id = c.looks;
                walk(body, c);
            }
        }
    }
    let mut c = Counters {
        groups: 0,
        quants: 0,
        looks: 0,
    };
    walk(&mut root, &mut c);
    AnnotatedRegex {
        root,
        group_count: c.groups,
        quant_count: c.quants,
        look_count: c.looks,
    }
}

// ---------------------------------------------------------------------------
// Nullability
// ---------------------------------------------------------------------------

/// Nullability classes, ordered CIN < CDN < NN.
///
/// NN: never matches empty. CIN: matches empty at every position.
/// CDN: matches empty depending on position (anchors, lookarounds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Nullability {
    CIN,
    CDN,
    NN,
}

pub fn nullability(node: &RegexNode) -> Nullability {
    use Nullability::*;
    match node {
        Char(_) | AnyChar | Class(_) => NN,
        Epsilon => CIN,
        Concat(l, r) => nullability(l).max(nullability(r)),
        Union(l, r) => nullability(l).min(nullability(r)),
        Quantified { kind, body, .. } => {
            if kind.is_plus() {
                nullability(body)
            } else {
                CIN
            }
        }
        CountedRep { min, body, .. } => {
            if *min == 0 {
                CIN
            } else {
                nullability(body)
            }
        }
        MandatoryIter { body, .. } => nullability(body),
        OptIter { .. } => CIN,
        Group { body, .. } | NonCap(body) => nullability(body),
        Look { .. } => CDN,
        Anchor(_) => CDN,
    }
}

/// True when the node's body can never match the empty string.
pub fn is_nullable(node: &RegexNode) -> bool {
    nullability(node) != Nullability::NN
}

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

pub fn node_count(node: &RegexNode) -> usize {
    1 + match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => 0,
        Concat(l, r) | Union(l, r) => node_count(l) + node_count(r),
        Quantified { body, .. }
        | CountedRep { body, .. }
        | MandatoryIter { body, .. }
        | Group { body, .. }
        | NonCap(body)
        | Look { body, .. } => node_count(body),
        OptIter { body, tail, .. } => node_count(body) + node_count(tail),
    }
}

/// Collects every group id in the subtree, including those inside
/// lookaround bodies.
pub fn collect_group_ids(node: &RegexNode, out: &mut Vec<GroupId>) {
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
        Concat(l, r) | Union(l, r) => {
            collect_group_ids(l, out);
            collect_group_ids(r, out);
        }
        Quantified { body, .. }
        | CountedRep { body, .. }
        | MandatoryIter { body, .. }
        | NonCap(body)
        | Look { body, .. } => collect_group_ids(body, out),
        OptIter { body, tail, .. } => {
            collect_group_ids(body, out);
            collect_group_ids(tail, out);
        }
        Group { group_id, body } => {
            out.push(*group_id);
            collect_group_ids(body, out);
        }
    }
}

pub fn contains_group(node: &RegexNode) -> bool {
    let mut ids = Vec::new();
    collect_group_ids(node, &mut ids);
    !ids.is_empty()
}

/// Information about one lookaround occurrence.
#[derive(Debug, Clone)]
pub struct LookInfo {
    pub id: LookId,
    pub kind: LookKind,
    pub body: RegexNode,
}

/// Collects all lookarounds in preorder (so ids come out ascending).
pub fn collect_lookarounds(node: &RegexNode, out: &mut Vec<LookInfo>) {
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
        Concat(l, r) | Union(l, r) => {
            collect_lookarounds(l, out);
            collect_lookarounds(r, out);
        }
        Quantified { body, .. }
        | CountedRep { body, .. }
        | MandatoryIter { body, .. }
        | Group { body, .. }
        | NonCap(body) => collect_lookarounds(body, out),
        OptIter { body, tail, .. } => {
            collect_lookarounds(body, out);
            collect_lookarounds(tail, out);
        }
        Look { kind, look_id, body } => {
            out.push(LookInfo {
                id: *look_id,
                kind: *kind,
                body: (**body).clone(),
            });
            collect_lookarounds(body, out);
        }
    }
}

/// Finds a lazy plus whose body is nullable, if any. The linear engine
/// rejects such regexes at compile time.
pub fn find_lazy_nullable_plus(node: &RegexNode) -> Option<QuantId> {
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => None,
        Concat(l, r) | Union(l, r) => {
            find_lazy_nullable_plus(l).or_else(|| find_lazy_nullable_plus(r))
        }
        Quantified {
            kind,
            quant_id,
            body,
        } => {
            if *kind == QuantKind::LazyPlus && is_nullable(body) {
                Some(*quant_id)
            } else {
                find_lazy_nullable_plus(body)
            }
        }
        CountedRep { body, .. } | MandatoryIter { body, .. } => find_lazy_nullable_plus(body),
        OptIter { body, tail, .. } => {
            find_lazy_nullable_plus(body).or_else(|| find_lazy_nullable_plus(tail))
        }
        Group { body, .. } | NonCap(body) | Look { body, .. } => find_lazy_nullable_plus(body),
    }
}

// ---------------------------------------------------------------------------
// Reversal
// ---------------------------------------------------------------------------

/// Mirrors the regex: every concatenation swaps its children, everything
/// else recurses. Ids are preserved and lookaround kinds are left alone
/// (direction handling belongs to the compiler).
pub fn reverse(node: &RegexNode) -> RegexNode {
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => node.clone(),
        Concat(l, r) => Concat(Box::new(reverse(r)), Box::new(reverse(l))),
        Union(l, r) => Union(Box::new(reverse(l)), Box::new(reverse(r))),
        Quantified {
            kind,
            quant_id,
            body,
        } => Quantified {
            kind: *kind,
            quant_id: *quant_id,
            body: Box::new(reverse(body)),
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
            body: Box::new(reverse(body)),
        },
        MandatoryIter { quant_id, body } => MandatoryIter {
            quant_id: *quant_id,
            body: Box::new(reverse(body)),
        },
        OptIter {
            greedy,
            quant_id,
            body,
            tail,
        } => OptIter {
            greedy: *greedy,
            quant_id: *quant_id,
            // The layer is (?: body tail )?, a concatenation inside, so
            // reversal swaps body and tail. The iteration stays `body`.
            body: Box::new(reverse(body)),
            tail: Box::new(reverse(tail)),
        },
        Group { group_id, body } => Group {
            group_id: *group_id,
            body: Box::new(reverse(body)),
        },
        NonCap(body) => NonCap(Box::new(reverse(body))),
        Look { kind, look_id, body } => Look {
            kind: *kind,
            look_id: *look_id,
            body: Box::new(reverse(body)),
        },
    }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn is_atom(node: &RegexNode) -> bool {
    matches!(
        node,
        Char(_) | AnyChar | Class(_) | Group { .. } | NonCap(_) | Look { .. }
    )
}

fn escape_literal(c: char, out: &mut String) {
    match c {
        '\\' | '.' | '*' | '+' | '?' | '(' | ')' | '[' | ']' | '{' | '}' | '|' | '^' | '$' => {
            out.push('\\');
            out.push(c);
        }
        '\n' => out.push_str("\\n"),
        '\r' => out.push_str("\\r"),
        '\t' => out.push_str("\\t"),
        _ => out.push(c),
    }
}

fn escape_in_class(c: char, out: &mut String) {
    match c {
        '\\' | ']' | '^' | '-' => {
            out.push('\\');
            out.push(c);
        }
        '\n' => out.push_str("\\n"),
        '\r' => out.push_str("\\r"),
        '\t' => out.push_str("\\t"),
        _ => out.push(c),
    }
}

fn write_quantified_body(node: &RegexNode, out: &mut String) {
    if is_atom(node) {
        write_node(node, out, 2);
    } else {
        out.push_str("(?:");
        write_node(node, out, 0);
        out.push(')');
    }
}

//// prec: 0 = union context, 1 = concat context, 2 = atom context.
fn write_node(node: &RegexNode, out: &mut String, prec: u8) {
    match node {
        Char(c) => escape_literal(*c, out),
        AnyChar => out.push('.'),
        Class(cc) => {
            out.push('[');
            if cc.negated {
                out.push('^');
            }
            for &(lo, hi) in &cc.ranges {
                escape_in_class(lo, out);
                if hi != lo {
                    out.push('-');
                    escape_in_class(hi, out);
                }
            }
            out.push(']');
        }
        Epsilon => {
            if prec >= 1 {
                // Inside concatenation or atom position an empty string is
                // unrepresentable bare; use an empty non-capturing group.
                out.push_str("(?:)");
            }
        }
        Concat(l, r) => {
            if prec > 1 {
                out.push_str("(?:");
                write_node(l, out, 1);
                write_node(r, out, 1);
                out.push(')');
            } else {
                write_node(l, out, 1);
                write_node(r, out, 1);
            }
        }
        Union(l, r) => {
            if prec > 0 {
                out.push_str("(?:");
                write_node(l, out, 0);
                out.push('|');
                write_node(r, out, 0);
                out.push(')');
            } else {
                write_node(l, out, 0);
                out.push('|');
                write_node(r, out, 0);
            }
        }
        Quantified { kind, body, .. } => {
            write_quantified_body(body, out);
            out.push_str(match kind {
                QuantKind::GreedyStar => "*",
                QuantKind::LazyStar => "*?",
                QuantKind::GreedyPlus => "+",
                QuantKind::LazyPlus => "+?",
            });
        }
        CountedRep {
            min, max, greedy, body, ..
        } => {
            write_quantified_body(body, out);
            if *min == 0 && *max == Some(1) {
                out.push('?');
            } else {
                match max {
                    Some(m) if *m == *min => {
                        let _ = write!(out, "{{{min}}}");
                    }
                    Some(m) => {
                        let _ = write!(out, "{{{min},{m}}}");
                    }
                    None => {
                        let _ = write!(out, "{{{min},}}");
                    }
                }
            }
            if !greedy {
                out.push('?');
            }
        }
        MandatoryIter { body, .. } => {
            // Desugared nodes print as their {1} equivalent.
            write_quantified_body(body, out);
            out.push_str("{1}");
        }
        OptIter { greedy, body, tail, .. } => {
            out.push_str("(?:");
            write_node(body, out, 1);
            write_node(tail, out, 1);
            out.push_str(")?");
            if !greedy {
                out.push('?');
            }
        }
        Group { body, .. } => {
            out.push('(');
            write_node(body, out, 0);
            out.push(')');
        }
        NonCap(body) => {
            out.push_str("(?:");
            write_node(body, out, 0);
            out.push(')');
        }
        Look { kind, body, .. } => {
            out.push_str(match kind {
                LookKind::PosAhead => "(?=",
                LookKind::NegAhead => "(?!",
                LookKind::PosBehind => "(?<=",
                LookKind::NegBehind => "(?<!",
            });
            write_node(body, out, 0);
            out.push(')');
        }
        Anchor(kind) => out.push_str(match kind {
            AnchorKind::Begin => "^",
            AnchorKind::End => "$",
            AnchorKind::WordBoundary => "\\b",
            AnchorKind::NonWordBoundary => "\\B",
        }),
    }
}

/// Prints the AST back to pattern text. Reparsing the output yields a
/// structurally identical tree.
pub fn to_pattern(node: &RegexNode) -> String {
    let mut out = String::new();
    write_node(node, &mut out, 0);
    out
}

// ---------------------------------------------------------------------------

pub fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}
