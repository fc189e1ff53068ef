use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use onlinify::converters::mixture_mass;
use onlinify::diagnostics::{check_tc, regret_exact};
use onlinify::{
    Completion, MixtureConfig, OfflineEstimator, OnlinePredictor, Predictor, Prior, Scheme,
    Truncation,
};
use onlinify_bench::skewed;

fn exhaustive_regret(c: &mut Criterion) {
    let mut group = c.benchmark_group("regret_exact/naive_norm");
    group.sample_size(10);
    for e in [OfflineEstimator::good_turing(2).unwrap(), OfflineEstimator::ristad(2).unwrap()] {
        let p = OnlinePredictor::new(e.clone(), Scheme::NaiveNorm);
        group.bench_function(BenchmarkId::new(e.name(), 10), |b| {
            b.iter(|| regret_exact(&e, &p, black_box(10)).unwrap())
        });
    }
    group.finish();
}

fn mixture(c: &mut Criterion) {
    let e = OfflineEstimator::good_turing(2).unwrap();
    let x = skewed(2, 4);
    let mut group = c.benchmark_group("mixture_mass/good_turing");
    for s in [8, 16, 32] {
        let cfg = MixtureConfig {
            prior: Prior::Dense,
            completion: Completion::Uniform,
            truncation: Truncation::Horizon(s),
        };
        group.bench_with_input(BenchmarkId::from_parameter(s), &cfg, |b, cfg| {
            b.iter(|| mixture_mass(&e, cfg, black_box(&x)).unwrap())
        });
    }
    group.finish();
}

fn distributions(c: &mut Criterion) {
    let x = skewed(8, 500);
    let e = OfflineEstimator::good_turing(8).unwrap();
    for scheme in [Scheme::Ratio, Scheme::NaiveNorm] {
        let p = OnlinePredictor::new(e.clone(), scheme);
        c.bench_function(&format!("distribution/good_turing/{}", p.scheme().name()), |b| {
            b.iter(|| p.distribution(black_box(&x)).unwrap())
        });
    }
}

fn tc_check(c: &mut Criterion) {
    let e = OfflineEstimator::laplace(3).unwrap();
    c.bench_function("check_tc/laplace/d3/depth6", |b| b.iter(|| check_tc(&e, black_box(6)).unwrap()));
}

criterion_group!(benches, exhaustive_regret, mixture, distributions, tc_check);
criterion_main!(benches);
