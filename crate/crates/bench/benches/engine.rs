use criterion::{black_box, criterion_group, criterion_main, Criterion};

use penney_core::markov::{build_chain, first_occurrence_prob};
use penney_core::odds::{conway_odds, prob_matrix, win_prob};
use penney_core::pattern::PatternString;
use penney_core::sequence::{alpha, CnStream, CnTable};
use penney_core::stats::p_rand_opt;
use penney_core::strategy::{best_response, optimal_strings_csirik};

fn correlation_scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("correlation");
    group.bench_function("conway-odds-n10-all-pairs", |b| {
        let strings: Vec<PatternString> = PatternString::enumerate(10).unwrap().collect();
        b.iter(|| {
            let mut acc = 0u64;
            for a in &strings[..64] {
                for s in &strings {
                    if s != a {
                        let (x, y) = conway_odds(s, a).unwrap();
                        acc = acc.wrapping_add(x ^ y);
                    }
                }
            }
            black_box(acc)
        });
    });
    group.finish();
}

fn probabilities(c: &mut Criterion) {
    let mut group = c.benchmark_group("odds");
    let a = PatternString::parse("HTHHTHTH").unwrap();
    let b = PatternString::parse("THTHHTHH").unwrap();
    group.bench_function("win-prob-n8", |bench| {
        bench.iter(|| win_prob(black_box(&a), black_box(&b)).unwrap())
    });
    group.bench_function("matrix-n5", |bench| bench.iter(|| prob_matrix(5).unwrap()));
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("markov");
    let a = PatternString::parse("HTHHTHTH").unwrap();
    let b = PatternString::parse("THTHHTHH").unwrap();
    group.bench_function("chain-solve-n8", |bench| {
        bench.iter(|| {
            let chain = build_chain(black_box(&a), black_box(&b)).unwrap();
            first_occurrence_prob(&chain).unwrap()
        })
    });
    group.finish();
}

fn strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("strategy");
    let a = PatternString::parse("HTHHTHTHHTHH").unwrap();
    group.bench_function("best-response-n12", |bench| {
        bench.iter(|| best_response(black_box(&a)))
    });
    group.bench_function("csirik-set-n18", |bench| {
        bench.iter(|| optimal_strings_csirik(18).unwrap())
    });
    group.finish();
}

fn sequences(c: &mut Criterion) {
    let mut group = c.benchmark_group("sequence");
    group.bench_function("cn-table-to-2000", |bench| {
        bench.iter(|| {
            let table = CnTable::new();
            table.c(2000).unwrap()
        })
    });
    group.bench_function("cn-stream-to-2000", |bench| {
        bench.iter(|| {
            let mut stream = CnStream::new();
            loop {
                let (n, value) = stream.step();
                if n == 2000 {
                    break black_box(value.bits());
                }
            }
        })
    });
    group.bench_function("alpha-1024-bits", |bench| bench.iter(|| alpha(1024).unwrap()));
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("stats");
    group.sample_size(10);
    group.bench_function("p-rand-opt-n10", |bench| bench.iter(|| p_rand_opt(10).unwrap()));
    group.finish();
}

criterion_group!(
    benches,
    correlation_scans,
    probabilities,
    oracle,
    strategies,
    sequences,
    sweeps
);
criterion_main!(benches);
