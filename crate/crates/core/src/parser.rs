//! Recursive-descent parser for the supported ECMAScript regex subset.
//!
//! Supported: literals, `.`, classes `[...]`, escapes `\d \D \w \W \s \S`
//! and control escapes, alternation, concatenation, `* *? + +? ? ??`,
//! `{n} {n,} {n,m}` (optionally lazy), `( )`, `(?: )`, the four lookaround
//! forms, and anchors `^ $ \b \B`. Backreferences, named groups, flags and
//! unicode escapes produce an unsupported-feature error.

use crate::ast::*;
use crate::error::{Error, Result};

pub fn parse(pattern: &str) -> Result<AnnotatedRegex> {
    let mut p = Parser {
        chars: pattern.chars().collect(),
        pos: 0,
    };
    let node = p.parse_disjunction()?;
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(annotate(node))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn unsupported(&self, construct: &str) -> Error {
        Error::Unsupported {
            pos: self.pos,
            construct: construct.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // -- grammar ------------------------------------------------------------

    fn parse_disjunction(&mut self) -> Result<RegexNode> {
        let mut alts = vec![self.parse_alternative()?];
        while self.eat('|') {
            alts.push(self.parse_alternative()?);
        }
        // Right-fold keeps the leftmost alternative outermost-left, which
        // preserves left-branch-first priority under left-to-right forks.
        let mut it = alts.into_iter().rev();
        let mut node = it.next().unwrap();
        for alt in it {
            node = RegexNode::Union(Box::new(alt), Box::new(node));
        }
        Ok(node)
    }

    fn parse_alternative(&mut self) -> Result<RegexNode> {
        let mut terms: Vec<RegexNode> = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            terms.push(self.parse_term()?);
        }
        let mut it = terms.into_iter().rev();
        let mut node = match it.next() {
            Some(n) => n,
            None => return Ok(RegexNode::Epsilon),
        };
        for t in it {
            node = RegexNode::Concat(Box::new(t), Box::new(node));
        }
        Ok(node)
    }

    fn parse_term(&mut self) -> Result<RegexNode> {
        // Assertions are not quantifiable in this subset.
        match self.peek() {
            Some('^') => {
                self.bump();
                return Ok(RegexNode::Anchor(AnchorKind::Begin));
            }
            Some('$') => {
                self.bump();
                return Ok(RegexNode::Anchor(AnchorKind::End));
            }
            Some('\\') if matches!(self.peek_at(1), Some('b') | Some('B')) => {
                self.bump();
                let kind = if self.bump() == Some('b') {
                    AnchorKind::WordBoundary
                } else {
                    AnchorKind::NonWordBoundary
                };
                return Ok(RegexNode::Anchor(kind));
            }
            _ => {}
        }
        let is_look = self.peek() == Some('(')
            && self.peek_at(1) == Some('?')
            && matches!(self.peek_at(2), Some('=') | Some('!') | Some('<'));
        let atom = self.parse_atom()?;
        if is_look {
            if matches!(self.peek(), Some('*') | Some('+') | Some('?') | Some('{')) {
                return Err(self.err("quantifier on a lookaround assertion is not supported"));
            }
            return Ok(atom);
        }
        self.parse_quantifier(atom)
    }

    fn parse_quantifier(&mut self, atom: RegexNode) -> Result<RegexNode> {
        let (min, max) = match self.peek() {
            Some('*') => {
                self.bump();
                let kind = if self.eat('?') {
                    QuantKind::LazyStar
                } else {
                    QuantKind::GreedyStar
                };
                return Ok(RegexNode::Quantified {
                    kind,
                    quant_id: 0,
                    body: Box::new(atom),
                });
            }
            Some('+') => {
                self.bump();
                let kind = if self.eat('?') {
                    QuantKind::LazyPlus
                } else {
                    QuantKind::GreedyPlus
                };
                return Ok(RegexNode::Quantified {
                    kind,
                    quant_id: 0,
                    body: Box::new(atom),
                });
            }
            Some('?') => {
                self.bump();
                (0, Some(1))
            }
            Some('{') => match self.try_parse_braces()? {
                Some(b) => b,
                // ECMAScript treats a `{` that does not start a valid
                // quantifier as a literal; we reject it for clarity.
                None => return Err(self.err("malformed {n,m} quantifier")),
            },
            _ => return Ok(atom),
        };
        if let Some(m) = max {
            if m < min {
                return Err(self.err("repetition range out of order"));
            }
        }
        let greedy = !self.eat('?');
        Ok(RegexNode::CountedRep {
            min,
            max,
            greedy,
            quant_id: 0,
            body: Box::new(atom),
        })
    }

    fn try_parse_braces(&mut self) -> Result<Option<(u32, Option<u32>)>> {
        debug_assert_eq!(self.peek(), Some('{'));
        self.bump();
        let min = match self.parse_number()? {
            Some(n) => n,
            None => return Ok(None),
        };
        if self.eat('}') {
            return Ok(Some((min, Some(min))));
        }
        if !self.eat(',') {
            return Ok(None);
        }
        if self.eat('}') {
            return Ok(Some((min, None)));
        }
        let max = match self.parse_number()? {
            Some(n) => n,
            None => return Ok(None),
        };
        if !self.eat('}') {
            return Ok(None);
        }
        Ok(Some((min, Some(max))))
    }

    fn parse_number(&mut self) -> Result<Option<u32>> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Ok(None);
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<u32>()
            .map(Some)
            .map_err(|_| self.err("repetition count too large"))
    }

    fn parse_atom(&mut self) -> Result<RegexNode> {
        match self.peek() {
            Some('.') => {
                self.bump();
                Ok(RegexNode::AnyChar)
            }
            Some('[') => self.parse_class(),
            Some('(') => self.parse_group(),
            Some('\\') => self.parse_escape(),
            Some(c @ ('*' | '+' | '?')) => {
                let _ = c;
                Err(self.err("quantifier with nothing to repeat"))
            }
            Some(')') | None => Err(self.err("expected an atom")),
            Some('{') => Err(self.err("unexpected '{'")),
            Some(']') | Some('}') => {
                // ECMAScript Annex B allows these as literals; keep them so
                // plain text patterns work.
                let c = self.bump().unwrap();
                Ok(RegexNode::Char(c))
            }
            Some(c) => {
                self.bump();
                Ok(RegexNode::Char(c))
            }
        }
    }

    fn parse_group(&mut self) -> Result<RegexNode> {
        debug_assert_eq!(self.peek(), Some('('));
        self.bump();
        if self.eat('?') {
            let node = match self.peek() {
                Some(':') => {
                    self.bump();
                    let body = self.parse_disjunction()?;
                    RegexNode::NonCap(Box::new(body))
                }
                Some('=') => {
                    self.bump();
                    self.finish_look(LookKind::PosAhead)?
                }
                Some('!') => {
                    self.bump();
                    self.finish_look(LookKind::NegAhead)?
                }
                Some('<') => match self.peek_at(1) {
                    Some('=') => {
                        self.bump();
                        self.bump();
                        self.finish_look(LookKind::PosBehind)?
                    }
                    Some('!') => {
                        self.bump();
                        self.bump();
                        self.finish_look(LookKind::NegBehind)?
                    }
                    _ => return Err(self.unsupported("named capture group")),
                },
                _ => return Err(self.err("unrecognized group modifier")),
            };
            if !matches!(node, RegexNode::NonCap(_)) {
                return Ok(node);
            }
            if !self.eat(')') {
                return Err(self.err("unclosed group"));
            }
            return Ok(node);
        }
        let body = self.parse_disjunction()?;
        if !self.eat(')') {
            return Err(self.err("unclosed group"));
        }
        Ok(RegexNode::Group {
            group_id: 0,
            body: Box::new(body),
        })
    }

    fn finish_look(&mut self, kind: LookKind) -> Result<RegexNode> {
        let body = self.parse_disjunction()?;
        if !self.eat(')') {
            return Err(self.err("unclosed lookaround"));
        }
        Ok(RegexNode::Look {
            kind,
            look_id: 0,
            body: Box::new(body),
        })
    }

    fn parse_escape(&mut self) -> Result<RegexNode> {
        debug_assert_eq!(self.peek(), Some('\\'));
        self.bump();
        let c = match self.bump() {
            Some(c) => c,
            None => return Err(self.err("trailing backslash")),
        };
        match c {
            'd' | 'D' | 'w' | 'W' | 's' | 'S' => Ok(RegexNode::Class(class_escape(c))),
            'n' => Ok(RegexNode::Char('\n')),
            'r' => Ok(RegexNode::Char('\r')),
            't' => Ok(RegexNode::Char('\t')),
            'f' => Ok(RegexNode::Char('\u{c}')),
            'v' => Ok(RegexNode::Char('\u{b}')),
            '0' => Ok(RegexNode::Char('\0')),
            '1'..='9' => {
                self.pos -= 1;
                Err(self.unsupported("backreference"))
            }
            'k' => {
                self.pos -= 1;
                Err(self.unsupported("named backreference"))
            }
            'u' | 'x' => {
                self.pos -= 1;
                Err(self.unsupported("unicode/hex escape"))
            }
            'p' | 'P' => {
                self.pos -= 1;
                Err(self.unsupported("unicode property escape"))
            }
            'c' => {
                self.pos -= 1;
                Err(self.unsupported("control-letter escape"))
            }
            c if c.is_ascii_alphanumeric() => {
                self.pos -= 1;
                Err(self.err("unknown escape"))
            }
            c => Ok(RegexNode::Char(c)),
        }
    }

    fn parse_class(&mut self) -> Result<RegexNode> {
        debug_assert_eq!(self.peek(), Some('['));
        self.bump();
        let negated = self.eat('^');
        let mut ranges: Vec<(char, char)> = Vec::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unclosed character class")),
                Some(']') => {
                    self.bump();
                    break;
                }
                _ => {}
            }
            let item = self.parse_class_item()?;
            match item {
                ClassItem::Single(lo) => {
                    // A `-` forms a range only when both ends are single
                    // code points and `]` does not follow immediately.
                    if self.peek() == Some('-') && self.peek_at(1) != Some(']') && self.peek_at(1).is_some() {
                        self.bump();
                        match self.parse_class_item()? {
                            ClassItem::Single(hi) => {
                                if hi < lo {
                                    return Err(self.err("range out of order in class"));
                                }
                                ranges.push((lo, hi));
                            }
                            ClassItem::Ranges(_) => {
                                return Err(self.err("class escape cannot bound a range"));
                            }
                        }
                    } else {
                        ranges.push((lo, lo));
                    }
                }
                ClassItem::Ranges(rs) => ranges.extend(rs),
            }
        }
        Ok(RegexNode::Class(CharClass { ranges, negated }))
    }

    fn parse_class_item(&mut self) -> Result<ClassItem> {
        let c = self.bump().ok_or_else(|| self.err("unclosed character class"))?;
        if c != '\\' {
            return Ok(ClassItem::Single(c));
        }
        let e = self.bump().ok_or_else(|| self.err("trailing backslash"))?;
        match e {
            'd' | 'D' | 'w' | 'W' | 's' | 'S' => Ok(ClassItem::Ranges(class_escape_ranges(e))),
            'n' => Ok(ClassItem::Single('\n')),
            'r' => Ok(ClassItem::Single('\r')),
            't' => Ok(ClassItem::Single('\t')),
            'f' => Ok(ClassItem::Single('\u{c}')),
            'v' => Ok(ClassItem::Single('\u{b}')),
            'b' => Ok(ClassItem::Single('\u{8}')),
            '0' => Ok(ClassItem::Single('\0')),
            'u' | 'x' | 'p' | 'P' | 'c' => {
                self.pos -= 1;
                Err(self.unsupported("unicode/hex escape"))
            }
            c if c.is_ascii_alphanumeric() => {
                self.pos -= 1;
                Err(self.err("unknown escape in class"))
            }
            c => Ok(ClassItem::Single(c)),
        }
    }
}

enum ClassItem {
    Single(char),
    Ranges(Vec<(char, char)>),
}

fn class_escape(c: char) -> CharClass {
    CharClass {
        ranges: class_escape_ranges(c),
        negated: false,
    }
}

/// Expands `\d \D \w \W \s \S` to explicit range lists so negated forms
/// can participate in larger classes.
fn class_escape_ranges(c: char) -> Vec<(char, char)> {
    let digit = vec![('0', '9')];
    let word = vec![('0', '9'), ('A', 'Z'), ('_', '_'), ('a', 'z')];
    let space = vec![
        ('\t', '\r'),
        (' ', ' '),
        ('\u{a0}', '\u{a0}'),
        ('\u{1680}', '\u{1680}'),
        ('\u{2000}', '\u{200a}'),
        ('\u{2028}', '\u{2029}'),
        ('\u{202f}', '\u{202f}'),
        ('\u{205f}', '\u{205f}'),
        ('\u{3000}', '\u{3000}'),
        ('\u{feff}', '\u{feff}'),
    ];
    match c {
        'd' => digit,
        'w' => word,
        's' => space,
        'D' => complement(&digit),
        'W' => complement(&word),
        'S' => complement(&space),
        _ => unreachable!(),
    }
}

fn complement(ranges: &[(char, char)]) -> Vec<(char, char)> {
    let mut out = Vec::new();
    let mut next = 0u32;
    for &(lo, hi) in ranges {
        let (lo, hi) = (lo as u32, hi as u32);
        if lo > next {
            push_range(&mut out, next, lo - 1);
        }
        next = hi + 1;
    }
    if next <= char::MAX as u32 {
        push_range(&mut out, next, char::MAX as u32);
    }
    out
}

fn push_range(out: &mut Vec<(char, char)>, lo: u32, hi: u32) {
    // Skip the surrogate gap, which is not representable as `char`.
    const SUR_LO: u32 = 0xD800;
    const SUR_HI: u32 = 0xDFFF;
    if lo > hi {
        return;
    }
    if lo < SUR_LO && hi > SUR_HI {
        out.push((char::from_u32(lo).unwrap(), char::from_u32(SUR_LO - 1).unwrap()));
        out.push((char::from_u32(SUR_HI + 1).unwrap(), char::from_u32(hi).unwrap()));
        return;
    }
    if (SUR_LO..=SUR_HI).contains(&lo) && (SUR_LO..=SUR_HI).contains(&hi) {
        return;
    }
    let lo = if (SUR_LO..=SUR_HI).contains(&lo) { SUR_HI + 1 } else { lo };
    let hi = if (SUR_LO..=SUR_HI).contains(&hi) { SUR_LO - 1 } else { hi };
    if lo <= hi {
        out.push((char::from_u32(lo).unwrap(), char::from_u32(hi).unwrap()));
    }
}
