//! VM, register-store, pipeline, and fuzzer properties.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use relin::compile::streaming_eligibility;
use relin::fuzz::*;
use relin::parser::parse;
use relin::pipeline::full_match_with_stats;
use relin::regstore::{RegStore, StoreKind};
use relin::{full_match, Error, MatchConfig, PipelineChoice};

// ---------------------------------------------------------------------------
// Register stores
// ---------------------------------------------------------------------------

#[test]
fn register_stores_agree_with_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let slots = rng.gen_range(1..=16);
        let mut model = vec![None; slots];
        let mut stores: Vec<RegStore> = [StoreKind::Array, StoreKind::List, StoreKind::Tree]
            .iter()
            .map(|&k| RegStore::new(k, slots))
            .collect();
        // Interleave sets with forks; mutate the fork and check the
        // original is unchanged (persistence).
        for _ in 0..rng.gen_range(0..40) {
            let idx = rng.gen_range(0..slots);
            let val = if rng.gen_bool(0.8) {
                Some(rng.gen_range(0..100))
            } else {
                None
            };
            if rng.gen_bool(0.3) {
                for s in &mut stores {
                    let (mut forked, _) = s.fork();
                    forked.set(idx, val);
                    assert_eq!(s.materialize(), model, "fork mutated the parent");
                }
            }
            model[idx] = val;
            for s in &mut stores {
                s.set(idx, val);
            }
        }
        for s in &stores {
            assert_eq!(s.materialize(), model);
        }
    }
}

#[test]
fn fork_copy_counts() {
    let mut a = RegStore::new(StoreKind::Array, 8);
    a.set(3, Some(1));
    assert_eq!(a.fork().1, 8);
    let mut l = RegStore::new(StoreKind::List, 8);
    l.set(3, Some(1));
    assert_eq!(l.fork().1, 0);
    let mut t = RegStore::new(StoreKind::Tree, 8);
    t.set(3, Some(1));
    assert_eq!(t.fork().1, 0);
}

// ---------------------------------------------------------------------------
// Store and pipeline equivalence
// ---------------------------------------------------------------------------

#[test]
fn all_stores_give_identical_results() {
    let profile = FuzzProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for seed in 0..400u64 {
        let pattern = gen_regex(seed, &profile);
        let len = rng.gen_range(0..=8);
        let input: String = (0..len)
            .map(|_| *['a', 'b', 'c', 'd'].choose(&mut rng).unwrap())
            .collect();
        let mut results = Vec::new();
        for store in [StoreKind::Array, StoreKind::List, StoreKind::Tree] {
            let cfg = MatchConfig {
                store,
                ..MatchConfig::default()
            };
            match full_match(&pattern, &input, &cfg) {
                Ok(r) => results.push(r),
                Err(Error::LazyNullablePlus) => break,
                Err(e) => panic!("{pattern} on {input:?}: {e}"),
            }
        }
        if results.len() == 3 {
            assert_eq!(results[0], results[1], "{pattern} on {input:?}");
            assert_eq!(results[1], results[2], "{pattern} on {input:?}");
            compared += 1;
        }
    }
    assert!(compared > 300);
}

#[test]
fn streaming_agrees_with_oracle_pipeline() {
    // Every eligible generated regex must give the same result both ways.
    let profile = FuzzProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut compared = 0;
    for seed in 0..3000u64 {
        let pattern = gen_regex(seed, &profile);
        let ast = match parse(&pattern) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if ast.look_count == 0 || streaming_eligibility(&ast).is_err() {
            continue;
        }
        let len = rng.gen_range(0..=10);
        let input: String = (0..len)
            .map(|_| *['a', 'b', 'c', 'd'].choose(&mut rng).unwrap())
            .collect();
        let mk = |p| MatchConfig {
            pipeline: p,
            ..MatchConfig::default()
        };
        let s = full_match(&pattern, &input, &mk(PipelineChoice::Streaming));
        let o = full_match(&pattern, &input, &mk(PipelineChoice::Oracle));
        match (s, o) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a, b, "{pattern} on {input:?}");
                compared += 1;
            }
            (Err(Error::LazyNullablePlus), Err(Error::LazyNullablePlus)) => {}
            (a, b) => panic!("{pattern} on {input:?}: {a:?} vs {b:?}"),
        }
    }
    assert!(compared > 100, "only {compared} eligible cases compared");
}

#[test]
fn streaming_rejects_ineligible_regexes() {
    for pat in ["a(?=b)", "(?<=(a))b", "x(?<=y)(?=z)"] {
        let cfg = MatchConfig {
            pipeline: PipelineChoice::Streaming,
            ..MatchConfig::default()
        };
        assert!(
            matches!(full_match(pat, "ab", &cfg), Err(Error::StreamingIneligible { .. })),
            "{pat} should be ineligible"
        );
    }
    // Captureless lookbehind: eligible.
    let cfg = MatchConfig {
        pipeline: PipelineChoice::Streaming,
        ..MatchConfig::default()
    };
    assert!(full_match("b(?:a(?<=ba*))*", "baa", &cfg).unwrap().is_some());
}

#[test]
fn auto_pipeline_selection() {
    let cfg = MatchConfig::default();
    let streaming = relin::pipeline::compile_regex("b(?:a(?<=ba*))*", &cfg).unwrap();
    assert!(streaming.streaming);
    let oracle = relin::pipeline::compile_regex("a(?=(b))", &cfg).unwrap();
    assert!(!oracle.streaming);
    let plain = relin::pipeline::compile_regex("(a*)b", &cfg).unwrap();
    assert!(!plain.streaming);
}

// ---------------------------------------------------------------------------
// Error paths
// ---------------------------------------------------------------------------

#[test]
fn lazy_nullable_plus_is_rejected() {
    assert!(matches!(
        full_match("(?:a|)+?", "a", &MatchConfig::default()),
        Err(Error::LazyNullablePlus)
    ));
}

// ---------------------------------------------------------------------------
// Instruction bound
// ---------------------------------------------------------------------------

#[test]
fn instruction_bound_holds_on_fuzzed_inputs() {
    let profile = FuzzProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..1500u64 {
        let pattern = gen_regex(seed, &profile);
        let len = rng.gen_range(0..=10);
        let input: String = (0..len)
            .map(|_| *['a', 'b', 'c', 'd'].choose(&mut rng).unwrap())
            .collect();
        match full_match_with_stats(&pattern, &input, &MatchConfig::default()) {
            Ok((_, stats)) => assert_eq!(
                stats.bound_violations, 0,
                "bound violated: {pattern} on {input:?}"
            ),
            Err(Error::LazyNullablePlus) => {}
            Err(e) => panic!("{pattern} on {input:?}: {e}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Fuzzer self-tests
// ---------------------------------------------------------------------------

#[test]
fn generator_is_deterministic() {
    let profile = FuzzProfile::default();
    assert_eq!(gen_regex(0, &profile), gen_regex(0, &profile));
    assert_ne!(gen_regex(0, &profile), gen_regex(1, &profile));
}

#[test]
fn lookaround_toggle_respected() {
    let profile = FuzzProfile {
        lookarounds: false,
        ..FuzzProfile::default()
    };
    for seed in 0..500u64 {
        let p = gen_regex(seed, &profile);
        assert!(!p.contains("(?=") && !p.contains("(?!") && !p.contains("(?<"), "{p}");
    }
}

#[test]
fn nullable_quantifier_bias() {
    let profile = FuzzProfile::default();
    let mut hits = 0;
    let n = 10_000;
    for seed in 0..n {
        let p = gen_regex(seed, &profile);
        let ast = parse(&p).unwrap();
        if has_nullable_quantifier(&ast.root) {
            hits += 1;
        }
    }
    assert!(
        hits * 100 >= n * 30,
        "only {hits}/{n} patterns have a nullable quantifier"
    );
}

#[test]
fn mutant_engine_is_caught() {
    // Swapped alternation priority is a real semantic bug; the campaign
    // must find it and shrink a reproducer that still mismatches.
    let profile = FuzzProfile {
        step_budget: 200_000,
        ..FuzzProfile::default()
    };
    let mutant = MatchConfig {
        compile: relin::CompileOptions {
            swap_union: true,
            ..relin::CompileOptions::default()
        },
        ..MatchConfig::default()
    };
    let report = fuzz_campaign(3000, 5, &profile, &mutant);
    assert!(!report.mismatches.is_empty(), "mutant survived");
    for r in &report.mismatches {
        assert!(matches!(
            compare_case(&r.pattern, &r.input, &mutant, profile.step_budget),
            CaseOutcome::Mismatch { .. }
        ));
        assert_eq!(r.serialize(), format!("{}\n{}\n", r.pattern, r.input));
    }
}

#[test]
fn appendix_example_campaign_clean() {
    let cfg = MatchConfig::default();
    for s in ["", "c", "ca", "caab"] {
        assert!(matches!(
            compare_case("(c)(?:a(?=a*(?<=c(a*))b))*", s, &cfg, 1_000_000),
            CaseOutcome::Agree
        ));
    }
}
