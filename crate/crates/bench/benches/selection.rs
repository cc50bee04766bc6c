use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entrofy::{
    build_matrix, entrofy_mc, greedy_select, marginal_gain, objective, CandidateTable,
    SelectionParams,
};
use entrofy_bench::{pool, pool_csv, schema};

fn objective_eval(c: &mut Criterion) {
    let m = pool(1000, 1);
    let ids = m.candidate_ids();
    let chosen: Vec<&String> = ids.iter().step_by(10).collect();
    let p = SelectionParams::new(100);
    c.bench_function("objective/1000x19/|X|=100", |b| {
        b.iter(|| objective(&m, black_box(&chosen), &p).unwrap())
    });
    c.bench_function("marginal_gain/1000x19/|X|=100", |b| {
        b.iter(|| marginal_gain(&m, black_box(&chosen), &ids[1], &p).unwrap())
    });
}

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_select");
    for n in [100, 1000, 5000] {
        let m = pool(n, 2);
        let p = SelectionParams::new(n / 10).with_seed(1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| greedy_select(m, &p).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("entrofy_mc");
    group.sample_size(10);
    let m = pool(1000, 3);
    for trials in [1, 15, 50] {
        let p = SelectionParams::new(100)
            .with_quantile(0.95)
            .with_trials(trials)
            .with_seed(1);
        group.bench_with_input(BenchmarkId::new("n=1000,k=100", trials), &p, |b, p| {
            b.iter(|| entrofy_mc(&m, p).unwrap())
        });
    }
    group.finish();
}

fn encoding(c: &mut Criterion) {
    let csv = pool_csv(5000, 4);
    let specs = schema();
    c.bench_function("parse_and_encode/5000", |b| {
        b.iter(|| {
            let t = CandidateTable::from_csv(black_box(csv.as_bytes()), None).unwrap();
            build_matrix(&t, &specs).unwrap()
        })
    });
}

criterion_group!(benches, objective_eval, greedy, monte_carlo, encoding);
criterion_main!(benches);
