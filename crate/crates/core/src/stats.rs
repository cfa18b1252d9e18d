//! Corpus feature analysis: per-pattern feature presence counts over a
//! list of regexes, one pattern per line.

use crate::ast::*;
use crate::fuzz::has_nullable_quantifier;
use crate::parser::parse;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub total: usize,
    pub parsed: usize,
    pub parse_failed: usize,
    pub nullable_quantifiers: usize,
    pub capture_in_quantifiers: usize,
    pub nonnullable_plus: usize,
    pub cin_greedy_plus: usize,
    pub cdn_greedy_plus: usize,
    pub cin_lazy_plus: usize,
    pub cdn_lazy_plus: usize,
    pub lookarounds: usize,
    pub captureless_lookbehinds: usize,
}

struct Features {
    capture_in_quant: bool,
    nonnullable_plus: bool,
    cin_greedy_plus: bool,
    cdn_greedy_plus: bool,
    cin_lazy_plus: bool,
    cdn_lazy_plus: bool,
    captureless_lookbehind: bool,
}

fn scan(node: &RegexNode, f: &mut Features) {
    use RegexNode::*;
    match node {
        Char(_) | AnyChar | Class(_) | Epsilon | Anchor(_) => {}
        Concat(l, r) | Union(l, r) => {
            scan(l, f);
            scan(r, f);
        }
        NonCap(body) | Group { body, .. } => scan(body, f),
        Look { kind, body, .. } => {
            if kind.is_behind() && !contains_group(body) {
                f.captureless_lookbehind = true;
            }
            scan(body, f);
        }
        Quantified { kind, body, .. } => {
            if contains_group(body) {
                f.capture_in_quant = true;
            }
            if kind.is_plus() {
                match (nullability(body), kind.is_greedy()) {
                    (Nullability::NN, _) => f.nonnullable_plus = true,
                    (Nullability::CIN, true) => f.cin_greedy_plus = true,
                    (Nullability::CDN, true) => f.cdn_greedy_plus = true,
                    (Nullability::CIN, false) => f.cin_lazy_plus = true,
                    (Nullability::CDN, false) => f.cdn_lazy_plus = true,
                }
            }
            scan(body, f);
        }
        CountedRep { body, .. } | MandatoryIter { body, .. } => {
            if contains_group(body) {
                f.capture_in_quant = true;
            }
            scan(body, f);
        }
        OptIter { body, tail, .. } => {
            scan(body, f);
            scan(tail, f);
        }
    }
}

/// One pattern per line; blank lines are skipped.
pub fn corpus_stats(lines: &str) -> CorpusStats {
    let mut s = CorpusStats::default();
    for line in lines.lines() {
        if line.is_empty() {
            continue;
        }
        s.total += 1;
        let ast = match parse(line) {
            Ok(a) => a,
            Err(_) => {
                s.parse_failed += 1;
                continue;
            }
        };
        s.parsed += 1;
        if has_nullable_quantifier(&ast.root) {
            s.nullable_quantifiers += 1;
        }
        if ast.look_count > 0 {
            s.lookarounds += 1;
        }
        let mut f = Features {
            capture_in_quant: false,
            nonnullable_plus: false,
            cin_greedy_plus: false,
            cdn_greedy_plus: false,
            cin_lazy_plus: false,
            cdn_lazy_plus: false,
            captureless_lookbehind: false,
        };
        scan(&ast.root, &mut f);
        s.capture_in_quantifiers += f.capture_in_quant as usize;
        s.nonnullable_plus += f.nonnullable_plus as usize;
        s.cin_greedy_plus += f.cin_greedy_plus as usize;
        s.cdn_greedy_plus += f.cdn_greedy_plus as usize;
        s.cin_lazy_plus += f.cin_lazy_plus as usize;
        s.cdn_lazy_plus += f.cdn_lazy_plus as usize;
        s.captureless_lookbehinds += f.captureless_lookbehind as usize;
    }
    s
}

impl CorpusStats {
    /// `category,count,percent` table over successfully parsed patterns.
    pub fn table(&self) -> String {
        let mut out = String::from("category,count,percent\n");
        let pct = |c: usize| {
            if self.parsed == 0 {
                0.0
            } else {
                100.0 * c as f64 / self.parsed as f64
            }
        };
        let rows = [
            ("nullable quantifiers", self.nullable_quantifiers),
            ("capture in quantifiers", self.capture_in_quantifiers),
            ("nonnullable plus", self.nonnullable_plus),
            ("CIN greedy plus", self.cin_greedy_plus),
            ("CDN greedy plus", self.cdn_greedy_plus),
            ("CIN lazy plus", self.cin_lazy_plus),
            ("CDN lazy plus", self.cdn_lazy_plus),
            ("lookarounds", self.lookarounds),
            ("captureless lookbehinds", self.captureless_lookbehinds),
        ];
        for (name, count) in rows {
            let _ = writeln!(out, "{name},{count},{:.1}", pct(count));
        }
        let _ = writeln!(out, "parsed,{},-", self.parsed);
        let _ = writeln!(out, "parse failures,{},-", self.parse_failed);
        out
    }
}
