//! Pricing and simulation throughput. The Monte Carlo group is the one that
//! splits work across rayon workers; run once with default features and once
//! with `--no-default-features` to compare the parallel and sequential
//! builds — the group names carry the build flavour so the reports line up.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use std::time::Duration;

use asianq::mc::{fast_exp, simulate_asian, McConfig, Payoff};
use asianq::pricer::{case_market, price, Method};
use asianq::specfun::{whittaker_w_log_mag, WhittakerIndex};
use num_complex::Complex64;

fn flavour() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn bench_pricing(c: &mut Criterion) {
    let mut g = c.benchmark_group("pricing");
    g.sample_size(20);
    let case2 = case_market(2).unwrap();
    g.bench_function("laguerre_case2_n64", |b| {
        b.iter(|| price(black_box(&case2), Method::Laguerre, 64).unwrap())
    });
    let case1 = case_market(1).unwrap();
    g.bench_function("laguerre_case1_n200", |b| {
        b.iter(|| price(black_box(&case1), Method::Laguerre, 200).unwrap())
    });
    let case7 = case_market(7).unwrap();
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    g.bench_function("trapezoid_case7_n20000", |b| {
        b.iter(|| price(black_box(&case7), Method::Trapezoid, 20_000).unwrap())
    });
    g.finish();
}

fn bench_whittaker(c: &mut Criterion) {
    let mut g = c.benchmark_group("whittaker");
    let idx = WhittakerIndex::new(-1.2, Complex64::new(0.0, 3.0));
    g.bench_function("w_log_mag_oscillatory", |b| {
        b.iter(|| whittaker_w_log_mag(black_box(idx), black_box(22.2)).unwrap())
    });
    g.finish();
}

fn bench_mc(c: &mut Criterion) {
    let mut g = c.benchmark_group(format!("mc_{}", flavour()));
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    let market = case_market(5).unwrap();
    let cfg = McConfig {
        paths: 20_000,
        steps: 100,
        seed: 9,
        antithetic: false,
    };
    g.bench_function("case5_20k_paths", |b| {
        b.iter(|| simulate_asian(black_box(&market), black_box(&cfg), Payoff::Call).unwrap())
    });
    let anti = McConfig {
        antithetic: true,
        ..cfg
    };
    g.bench_function("case5_20k_paths_antithetic", |b| {
        b.iter(|| simulate_asian(black_box(&market), black_box(&anti), Payoff::Call).unwrap())
    });
    g.finish();
}

fn bench_exp(c: &mut Criterion) {
    let mut g = c.benchmark_group("exp");
    let xs: Vec<f64> = (0..1024).map(|i| -8.0 + i as f64 * (16.0 / 1024.0)).collect();
    g.bench_function("fast_exp_1024", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for &x in &xs {
                s += fast_exp(black_box(x));
            }
            s
        })
    });
    g.bench_function("libm_exp_1024", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for &x in &xs {
                s += black_box(x).exp();
            }
            s
        })
    });
    g.finish();
}

criterion_group!(benches, bench_pricing, bench_whittaker, bench_mc, bench_exp);
criterion_main!(benches);
