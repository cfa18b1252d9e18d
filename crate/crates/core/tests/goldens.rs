//! Frozen bytecode listings and oracle tables for the worked examples.

use relin::ast::collect_lookarounds;
use relin::compile::*;
use relin::parser::parse;
use relin::pipeline::{build_oracle, compile_regex, MatchConfig, MatchStats};
use relin::StoreKind;

fn listing(text: &str) -> String {
    let ast = parse(text).unwrap();
    compile_main(&ast, &CompileOptions::default())
        .unwrap()
        .listing()
}

#[test]
fn fragment_listing_union_capture() {
    let ast = parse("(a|.)b").unwrap();
    let got = compile_fragment(&ast, &CompileOptions::default())
        .unwrap()
        .listing();
    let want = "\
0: SetReg #1:entry
1: Fork 2 4
2: Consume a
3: Jump 5
4: ConsumeAny
5: SetReg #1:exit
6: Consume b
7: Accept
";
    assert_eq!(got, want);
}

#[test]
fn main_listing_lookaround_example() {
    let want = "\
0: Fork 3 1
1: ConsumeAny
2: Jump 0
3: SetReg #0:entry
4: SetReg #1:entry
5: Consume c
6: SetReg #1:exit
7: Fork 8 12
8: SetQuant 1
9: Consume a
10: CheckOracle 1
11: Jump 7
12: SetReg #0:exit
13: Accept
";
    assert_eq!(listing("(c)(?:a(?=a*(?<=c(a*))b))*"), want);
}

#[test]
fn oracle_pass_listings() {
    let cfg = MatchConfig::default();
    let compiled = compile_regex("(c)(?:a(?=a*(?<=c(a*))b))*", &cfg).unwrap();
    // Lookahead pass runs backward over the reversed body; the inner
    // lookbehind is consulted through the already-built row 2.
    let want1 = "\
0: Fork 3 1
1: ConsumeAny
2: Jump 0
3: Consume b
4: CheckOracle 2
5: Fork 6 8
6: Consume a
7: Jump 5
8: WriteOracle 1
";
    let want2 = "\
0: Fork 3 1
1: ConsumeAny
2: Jump 0
3: Consume c
4: Fork 5 7
5: Consume a
6: Jump 4
7: WriteOracle 2
";
    assert_eq!(compiled.oracle_programs[0].listing(), want1);
    assert_eq!(compiled.oracle_programs[1].listing(), want2);
}

#[test]
fn reconstruction_listings() {
    let opts = CompileOptions::default();
    let ast = parse("(c)(?:a(?=a*(?<=c(a*))b))*").unwrap();
    let mut looks = Vec::new();
    collect_lookarounds(&ast.root, &mut looks);
    let want = [
        "\
0: Fork 1 4
1: SetQuant 2
2: Consume a
3: Jump 0
4: CheckOracle 2
5: Consume b
6: Accept
",
        "\
0: SetReg #2:entry
1: Fork 2 5
2: SetQuant 3
3: Consume a
4: Jump 1
5: SetReg #2:exit
6: Consume c
7: Accept
",
    ];
    for (l, want) in looks.iter().zip(want) {
        let got = compile_look_reconstruction(l, &ast, &opts).unwrap().listing();
        assert_eq!(got, want, "reconstruction for lookaround {}", l.id);
    }
}

#[test]
fn legacy_clearreg_listing() {
    let ast = parse("((a)*b)*").unwrap();
    let legacy = CompileOptions {
        capture_mode: CaptureMode::LegacyClearReg,
        ..CompileOptions::default()
    };
    let want = "\
0: Fork 3 1
1: ConsumeAny
2: Jump 0
3: SetReg #0:entry
4: Fork 5 17
5: ClearReg #1
6: ClearReg #2
7: SetReg #1:entry
8: Fork 9 14
9: ClearReg #2
10: SetReg #2:entry
11: Consume a
12: SetReg #2:exit
13: Jump 8
14: Consume b
15: SetReg #1:exit
16: Jump 4
17: SetReg #0:exit
18: Accept
";
    assert_eq!(compile_main(&ast, &legacy).unwrap().listing(), want);
}

#[test]
fn oracle_rows_for_lookaround_example() {
    let cfg = MatchConfig::default();
    let compiled = compile_regex("(c)(?:a(?=a*(?<=c(a*))b))*", &cfg).unwrap();
    let chars: Vec<char> = "caab".chars().collect();
    let mut stats = MatchStats::default();
    let oracle = build_oracle(&compiled, &chars, StoreKind::Array, &mut stats).unwrap();
    for id in [1, 2] {
        let truthy: Vec<usize> = (0..=chars.len()).filter(|&p| oracle.get(id, p)).collect();
        assert_eq!(truthy, vec![1, 2, 3], "oracle row {id}");
    }
    assert_eq!(stats.string_passes, 2);
}

#[test]
fn nonnullable_plus_single_copy() {
    // e+ compiles with one body copy and a back-edge, not as ee*.
    let plus = listing("(?:ab)+");
    let star = listing("(?:ab)(?:ab)*");
    assert!(plus.lines().count() < star.lines().count());
    let ast = parse("(?:ab)+").unwrap();
    let expanded = CompileOptions {
        expand_plus: true,
        ..CompileOptions::default()
    };
    let p = compile_main(&ast, &expanded).unwrap();
    let q = compile_main(&ast, &CompileOptions::default()).unwrap();
    assert!(p.insts.len() > q.insts.len());
}
