//! Frozen ECMAScript semantics vectors, verified against V8 (`RegExp` with
//! the `d` flag, `.exec().indices`). Every case is checked on the linear
//! engine (default pipeline and forced 3-phase) and on the reference
//! backtracker.

use relin::backtrack::bt_match;
use relin::parser::parse;
use relin::{full_match, MatchConfig, PipelineChoice};

type Expected = Option<Vec<Option<(usize, usize)>>>;

fn vectors() -> Vec<(&'static str, &'static str, Expected)> {
    vec![
        (r"(c)(?:a(?=a*(?<=c(a*))b))*", "caab", Some(vec![Some((0, 3)), Some((0, 1)), Some((1, 3))])),
        (r"(a*)b", "caabd", Some(vec![Some((1, 4)), Some((1, 3))])),
        (r"(a|a*)", "aa", Some(vec![Some((0, 1)), Some((0, 1))])),
        (r"((a)|(b))*", "ab", Some(vec![Some((0, 2)), Some((1, 2)), None, Some((1, 2))])),
        (r"(?:(?:a|)(?:|b))*", "ab", Some(vec![Some((0, 2))])),
        (r"(?:|.)+", "a", Some(vec![Some((0, 1))])),
        (r"(?:a|(^))+", "b", Some(vec![Some((0, 0)), Some((0, 0))])),
        (r"(?:(?=(a)).|b)*", "ab", Some(vec![Some((0, 2)), None])),
        (r"b(?:a(?<=ba*))*", "baaa", Some(vec![Some((0, 4))])),
        (r"(a)|(b)", "b", Some(vec![Some((0, 1)), None, Some((0, 1))])),
        (r"(a)(b)?", "a", Some(vec![Some((0, 1)), Some((0, 1)), None])),
        (r"(a+)(a*)", "aaa", Some(vec![Some((0, 3)), Some((0, 3)), Some((3, 3))])),
        (r"(a+?)(a*)", "aaa", Some(vec![Some((0, 3)), Some((0, 1)), Some((1, 3))])),
        (r"((a)*b)*", "aabab", Some(vec![Some((0, 5)), Some((3, 5)), Some((3, 4))])),
        (r"(?:(a)|(b))*", "abba", Some(vec![Some((0, 4)), Some((3, 4)), None])),
        (r"(a?)*", "aa", Some(vec![Some((0, 2)), Some((1, 2))])),
        (r"(a|b)*c", "ababc", Some(vec![Some((0, 5)), Some((3, 4))])),
        (r"a{2,4}", "aaaaa", Some(vec![Some((0, 4))])),
        (r"(a{0,2})b", "aab", Some(vec![Some((0, 3)), Some((0, 2))])),
        (r"(a|aa){1,3}", "aaaa", Some(vec![Some((0, 3)), Some((2, 3))])),
        (r"x(?=(ab))a", "xab", Some(vec![Some((0, 2)), Some((1, 3))])),
        (r"(?=(a*))a", "aaa", Some(vec![Some((0, 1)), Some((0, 3))])),
        (r"(?!(a))b", "b", Some(vec![Some((0, 1)), None])),
        (r"(?!(a))b|(a)b", "ab", Some(vec![Some((0, 2)), None, Some((0, 1))])),
        (r"(?<=(a))b", "ab", Some(vec![Some((1, 2)), Some((0, 1))])),
        (r"(?<=(a*))b", "aaab", Some(vec![Some((3, 4)), Some((0, 3))])),
        (r"(?<!(a))b", "cb", Some(vec![Some((1, 2)), None])),
        (r"c(?:a(?=a*(?<=c(a*))b))*", "caab", Some(vec![Some((0, 3)), Some((1, 3))])),
        (r"^(a*)b$", "aab", Some(vec![Some((0, 3)), Some((0, 2))])),
        (r"\b(a+)\b", "xx aa yy", Some(vec![Some((3, 5)), Some((3, 5))])),
        (r"\B(a)", "ba", Some(vec![Some((1, 2)), Some((1, 2))])),
        (r"([abc]+)d", "cabd", Some(vec![Some((0, 4)), Some((0, 3))])),
        (r"([^ab]+)", "aaxyb", Some(vec![Some((2, 4)), Some((2, 4))])),
        (r"(\w+)\s(\d*)", "ab 12", Some(vec![Some((0, 5)), Some((0, 2)), Some((3, 5))])),
        (r"(.)(.)", "ab", Some(vec![Some((0, 2)), Some((0, 1)), Some((1, 2))])),
        (r"((((a))))", "a", Some(vec![Some((0, 1)), Some((0, 1)), Some((0, 1)), Some((0, 1)), Some((0, 1))])),
        (r"(a(b(c)?)?)+", "abcab", Some(vec![Some((0, 5)), Some((3, 5)), Some((4, 5)), None])),
        (r"(?:a|(b))+?b", "abb", Some(vec![Some((0, 2)), None])),
        (r"(a*)(a*)(a)", "aaa", Some(vec![Some((0, 3)), Some((0, 2)), Some((2, 2)), Some((2, 3))])),
        (r"(|a)*", "aa", Some(vec![Some((0, 2)), Some((1, 2))])),
        (r"(a||b)+", "ab", Some(vec![Some((0, 2)), Some((1, 2))])),
        (r"(?:(a)|)+", "aa", Some(vec![Some((0, 2)), Some((1, 2))])),
        (r"((?=(a))a|b)*", "ab", Some(vec![Some((0, 2)), Some((1, 2)), None])),
        (r"(?:(?=(a))ab?)*", "aab", Some(vec![Some((0, 3)), Some((1, 2))])),
        (r"(?:(?<=(a))b|a)*", "aab", Some(vec![Some((0, 3)), Some((1, 2))])),
        (r"(a{2}){2}", "aaaa", Some(vec![Some((0, 4)), Some((2, 4))])),
        (r"(a+)+b", "aaab", Some(vec![Some((0, 4)), Some((0, 3))])),
        (r"(?:a(?=b(c)?))+", "abac", Some(vec![Some((0, 1)), None])),
        (r"(z)?(a)", "a", Some(vec![Some((0, 1)), None, Some((0, 1))])),
        (r"(?:(a)(b)?)*", "abaa", Some(vec![Some((0, 4)), Some((3, 4)), None])),
    ]
}

#[test]
fn linear_engine_matches_v8_vectors() {
    let default_cfg = MatchConfig::default();
    let oracle_cfg = MatchConfig {
        pipeline: PipelineChoice::Oracle,
        ..MatchConfig::default()
    };
    for (pattern, input, expected) in vectors() {
        for cfg in [&default_cfg, &oracle_cfg] {
            let got = full_match(pattern, input, cfg)
                .unwrap_or_else(|e| panic!("{pattern} on {input:?}: {e}"))
                .map(|m| m.groups);
            assert_eq!(got, expected, "linear: {pattern} on {input:?}");
        }
    }
}

#[test]
fn backtracker_matches_v8_vectors() {
    for (pattern, input, expected) in vectors() {
        let ast = parse(pattern).unwrap();
        let got = bt_match(&ast, input, 10_000_000).unwrap().result;
        assert_eq!(got, expected, "backtracker: {pattern} on {input:?}");
    }
}
