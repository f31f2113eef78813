use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use w1simplex::bourn_recurrence::{build_grid, build_l_integer, l_double_sum};
use w1simplex::exact_math::{sum_a_direct, sum_a_recursive};
use w1simplex::moment_engine::{first_moment, MomentPolys};
use w1simplex::simplex_mc::{estimate_moments, sample_cdf, w1};
use w1simplex::McConfig;

fn first_moment_routes(c: &mut Criterion) {
    let mut g = c.benchmark_group("first_moment");
    for n in [10u32, 20, 40] {
        g.bench_with_input(BenchmarkId::new("polynomial_recursion", n), &n, |b, &n| {
            b.iter(|| MomentPolys::up_to(black_box(n)))
        });
        g.bench_with_input(BenchmarkId::new("recurrence_grid", n), &n, |b, &n| {
            b.iter(|| build_grid(black_box(n), n))
        });
        g.bench_with_input(BenchmarkId::new("closed_form", n), &n, |b, &n| {
            b.iter(|| first_moment(black_box(n)))
        });
    }
    g.finish();
}

fn recurrence(c: &mut Criterion) {
    let mut g = c.benchmark_group("recurrence");
    g.bench_function("l_integer_40", |b| {
        b.iter(|| build_l_integer(black_box(40), 40))
    });
    g.bench_function("l_double_sum_39", |b| {
        b.iter(|| l_double_sum(black_box(39), 39))
    });
    g.finish();
}

fn binomial_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("binomial_sums");
    g.bench_function("direct_n30_p6", |b| {
        b.iter(|| sum_a_direct(black_box(30), 6))
    });
    g.bench_function("recursive_n30_p6", |b| {
        b.iter(|| sum_a_recursive(black_box(30), 6))
    });
    g.finish();
}

fn distance(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut g = c.benchmark_group("w1");
    for n in [10usize, 100, 1000] {
        let mu = sample_cdf(n, &mut rng);
        let nu = sample_cdf(n, &mut rng);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| w1(black_box(&mu), black_box(&nu)))
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    for threads in [1usize, 4] {
        let cfg = McConfig {
            n: 10,
            samples: 100_000,
            seed: 7,
            bins: 50,
            threads: Some(threads),
        };
        g.bench_with_input(BenchmarkId::new("n10_100k", threads), &cfg, |b, cfg| {
            b.iter(|| estimate_moments(black_box(cfg)))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    first_moment_routes,
    recurrence,
    binomial_sums,
    distance,
    monte_carlo
);
criterion_main!(benches);
