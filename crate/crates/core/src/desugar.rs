//! Counted-repetition desugaring.
//!
//! `e{n,m}` becomes n mandatory copies of `e` followed by `m - n` nested
//! optional layers `(?: e (?: e ... )? )?`; `e{n,}` ends in a star instead
//! of the optional layers. Every copy keeps the original group ids and the
//! repetition's own quantifier id, so capture slots and capture-reset
//! clocks still refer to the source regex.

use crate::ast::*;
use crate::error::{Error, Result};

pub const DEFAULT_REP_LIMIT: u32 = 1000;

pub fn desugar_counted(node: &RegexNode, limit: u32) -> Result<RegexNode> {
    use RegexNode::*;
    Ok(match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => node.clone(),
        Concat(l, r) => Concat(
            Box::new(desugar_counted(l, limit)?),
            Box::new(desugar_counted(r, limit)?),
        ),
        Union(l, r) => Union(
            Box::new(desugar_counted(l, limit)?),
            Box::new(desugar_counted(r, limit)?),
        ),
        Quantified {
            kind,
            quant_id,
            body,
        } => Quantified {
            kind: *kind,
            quant_id: *quant_id,
            body: Box::new(desugar_counted(body, limit)?),
        },
        MandatoryIter { quant_id, body } => MandatoryIter {
            quant_id: *quant_id,
            body: Box::new(desugar_counted(body, limit)?),
        },
        OptIter {
            greedy,
            quant_id,
            body,
            tail,
        } => OptIter {
            greedy: *greedy,
            quant_id: *quant_id,
            body: Box::new(desugar_counted(body, limit)?),
            tail: Box::new(desugar_counted(tail, limit)?),
        },
        Group { group_id, body } => Group {
            group_id: *group_id,
            body: Box::new(desugar_counted(body, limit)?),
        },
        NonCap(body) => NonCap(Box::new(desugar_counted(body, limit)?)),
        Look {
            kind,
            look_id,
            body,
        } => Look {
            kind: *kind,
            look_id: *look_id,
            body: Box::new(desugar_counted(body, limit)?),
        },
        CountedRep {
            min,
            max,
            greedy,
            quant_id,
            body,
        } => {
            check_limit(*min, limit)?;
            if let Some(m) = max {
                check_limit(*m, limit)?;
            }
            let body = desugar_counted(body, limit)?;
            expand(*min, *max, *greedy, *quant_id, &body)
        }
    })
}

fn check_limit(bound: u32, limit: u32) -> Result<()> {
    if bound > limit {
        Err(Error::RepetitionTooLarge { bound, limit })
    } else {
        Ok(())
    }
}

fn expand(min: u32, max: Option<u32>, greedy: bool, quant_id: QuantId, body: &RegexNode) -> RegexNode {
    use RegexNode::*;
    let tail = match max {
        None => Some(Quantified {
            kind: if greedy {
                QuantKind::GreedyStar
            } else {
                QuantKind::LazyStar
            },
            quant_id,
            body: Box::new(body.clone()),
        }),
        Some(m) => {
            // Build the optional layers innermost-out.
            let mut layer: Option<RegexNode> = None;
            for _ in 0..(m - min) {
                layer = Some(OptIter {
                    greedy,
                    quant_id,
                    body: Box::new(body.clone()),
                    tail: Box::new(layer.unwrap_or(Epsilon)),
                });
            }
            layer
        }
    };
    let mut parts: Vec<RegexNode> = (0..min)
        .map(|_| MandatoryIter {
            quant_id,
            body: Box::new(body.clone()),
        })
        .collect();
    if let Some(t) = tail {
        parts.push(t);
    }
    let mut it = parts.into_iter().rev();
    let mut node = match it.next() {
        Some(n) => n,
        None => return Epsilon, // e{0,0}
    };
    for p in it {
        node = Concat(Box::new(p), Box::new(node));
    }
    node
}
