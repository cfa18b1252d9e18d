//! Criterion wall-time benchmarks over the complexity families. The gated
//! acceptance assertions use deterministic instruction counters instead;
//! these timings are informational (store-tradeoff plots etc.).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use relin::bench::family_case;
use relin::pipeline::{compile_regex, match_compiled};
use relin::{MatchConfig, StoreKind};

fn bench_linear_families(c: &mut Criterion) {
    let cfg = MatchConfig::default();
    for (family, sizes) in [
        ("c1", &[5usize, 10, 20][..]),
        ("c2", &[5, 10, 20][..]),
        ("c3", &[5, 10, 20][..]),
        ("c4", &[250, 500, 1000][..]),
        ("c5-string", &[250, 500, 1000][..]),
    ] {
        let mut group = c.benchmark_group(family);
        for &n in sizes {
            let (pattern, input) = family_case(family, n).unwrap();
            let compiled = compile_regex(&pattern, &cfg).unwrap();
            group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
                b.iter(|| match_compiled(&compiled, &input, &cfg).unwrap())
            });
        }
        group.finish();
    }
}

fn bench_store_tradeoff(c: &mut Criterion) {
    let (pattern, input) = family_case("tradeoff", 10).unwrap();
    let mut group = c.benchmark_group("tradeoff-k10");
    for (name, store) in [
        ("array", StoreKind::Array),
        ("list", StoreKind::List),
        ("tree", StoreKind::Tree),
    ] {
        let cfg = MatchConfig {
            store,
            ..MatchConfig::default()
        };
        let compiled = compile_regex(&pattern, &cfg).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| match_compiled(&compiled, &input, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_linear_families, bench_store_tradeoff);
criterion_main!(benches);
