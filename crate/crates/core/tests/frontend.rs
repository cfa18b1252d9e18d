//! Parser, nullability, reversal, printing, and counted-repetition
//! desugaring.

use relin::ast::*;
use relin::desugar::desugar_counted;
use relin::error::Error;
use relin::fuzz::FuzzProfile;
use relin::parser::parse;
use relin::Nullability::{CDN, CIN, NN};

#[test]
fn parse_errors() {
    assert!(matches!(parse("(a*)b\\1"), Err(Error::Unsupported { .. })));
    assert!(matches!(parse("(?<name>a)"), Err(Error::Unsupported { .. })));
    assert!(matches!(parse("a{3,2}"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("a)"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("(a"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("(?=a)*"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("*a"), Err(Error::Syntax { .. })));
    let err = parse("(a*)b\\1").unwrap_err().to_string();
    assert!(err.contains("backreference"), "message was: {err}");
}

#[test]
fn annotation_assigns_preorder_ids() {
    let ast = parse("(a)((b)*(?=c))").unwrap();
    assert_eq!(ast.group_count, 3);
    assert_eq!(ast.quant_count, 1);
    assert_eq!(ast.look_count, 1);
}

#[test]
fn nullability_classification() {
    let cases = [
        ("a", NN),
        ("ab", NN),
        ("a|b", NN),
        ("a*", CIN),
        ("a+", NN),
        ("(?:a|)+", CIN),
        ("(?:a|(^))+", CDN),
        ("(?=a)", CDN),
        ("^", CDN),
        ("a|", CIN),
        ("(?:a|)(?=b)", CDN), // concat takes the max
        ("(?:a|)|(?=b)", CIN), // union takes the min
        ("a{0,3}", CIN),
        ("(a+)", NN),
    ];
    for (pat, want) in cases {
        let ast = parse(pat).unwrap();
        assert_eq!(nullability(&ast.root), want, "nullability of {pat}");
    }
}

#[test]
fn reverse_is_an_involution() {
    for seed in 0..500u64 {
        let pat = relin::fuzz::gen_regex(seed, &FuzzProfile::default());
        let ast = parse(&pat).unwrap();
        let back = reverse(&reverse(&ast.root));
        assert_eq!(back, ast.root, "reverse∘reverse on {pat}");
    }
}

#[test]
fn reverse_swaps_concat() {
    let ast = parse("ab").unwrap();
    assert_eq!(to_pattern(&reverse(&ast.root)), "ba");
}

#[test]
fn print_parse_roundtrip() {
    for seed in 0..2000u64 {
        let pat = relin::fuzz::gen_regex(seed, &FuzzProfile::default());
        let ast = parse(&pat)
            .unwrap_or_else(|e| panic!("generated pattern failed to parse: {pat}: {e}"));
        let printed = to_pattern(&ast.root);
        let reparsed = parse(&printed)
            .unwrap_or_else(|e| panic!("printed pattern failed to parse: {printed}: {e}"));
        assert_eq!(
            to_pattern(&reparsed.root),
            printed,
            "print∘parse not idempotent for {pat}"
        );
    }
}

#[test]
fn char_class_semantics() {
    let ast = parse("[a-cx]").unwrap();
    if let RegexNode::Class(cc) = &ast.root {
        assert!(cc.matches('a') && cc.matches('c') && cc.matches('x'));
        assert!(!cc.matches('d'));
    } else {
        panic!("expected class");
    }
    let ast = parse("[^a-c]").unwrap();
    if let RegexNode::Class(cc) = &ast.root {
        assert!(!cc.matches('b'));
        assert!(cc.matches('z'));
    } else {
        panic!("expected class");
    }
}

fn count_mandatory(node: &RegexNode) -> usize {
    use RegexNode::*;
    match node {
        MandatoryIter { body, .. } => 1 + count_mandatory(body),
        Concat(l, r) | Union(l, r) => count_mandatory(l) + count_mandatory(r),
        Quantified { body, .. } | Group { body, .. } | NonCap(body) | Look { body, .. } => {
            count_mandatory(body)
        }
        OptIter { body, tail, .. } => count_mandatory(body) + count_mandatory(tail),
        CountedRep { body, .. } => count_mandatory(body),
        _ => 0,
    }
}

fn count_optional(node: &RegexNode) -> usize {
    use RegexNode::*;
    match node {
        OptIter { body, tail, .. } => 1 + count_optional(body) + count_optional(tail),
        Concat(l, r) | Union(l, r) => count_optional(l) + count_optional(r),
        Quantified { body, .. } | Group { body, .. } | NonCap(body) | Look { body, .. } => {
            count_optional(body)
        }
        MandatoryIter { body, .. } => count_optional(body),
        CountedRep { body, .. } => count_optional(body),
        _ => 0,
    }
}

#[test]
fn counted_desugaring_shapes() {
    let ast = parse("a{3}").unwrap();
    let d = desugar_counted(&ast.root, 1000).unwrap();
    assert_eq!(count_mandatory(&d), 3);
    assert_eq!(count_optional(&d), 0);

    let ast = parse("a{2,5}").unwrap();
    let d = desugar_counted(&ast.root, 1000).unwrap();
    assert_eq!(count_mandatory(&d), 2);
    assert_eq!(count_optional(&d), 3);

    let ast = parse("a{0,0}").unwrap();
    let d = desugar_counted(&ast.root, 1000).unwrap();
    assert_eq!(d, RegexNode::Epsilon);

    // a{2,} = two mandatory copies followed by a star on the same id.
    let ast = parse("a{2,}").unwrap();
    let d = desugar_counted(&ast.root, 1000).unwrap();
    assert_eq!(count_mandatory(&d), 2);
    let has_star = {
        fn star(node: &RegexNode) -> bool {
            use RegexNode::*;
            match node {
                Quantified { kind, .. } => *kind == QuantKind::GreedyStar,
                Concat(l, r) => star(l) || star(r),
                MandatoryIter { body, .. } | NonCap(body) => star(body),
                _ => false,
            }
        }
        star(&d)
    };
    assert!(has_star);

    assert!(matches!(
        desugar_counted(&parse("a{2000}").unwrap().root, 1000),
        Err(Error::RepetitionTooLarge { .. })
    ));
}

#[test]
fn lazy_nullable_plus_detection() {
    assert!(find_lazy_nullable_plus(&parse("(?:a|)+?").unwrap().root).is_some());
    assert!(find_lazy_nullable_plus(&parse("(?:a|)+").unwrap().root).is_none());
    assert!(find_lazy_nullable_plus(&parse("a+?").unwrap().root).is_none());
}
