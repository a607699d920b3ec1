use asianq::mc::{simulate_asian, McConfig, Payoff};
use asianq::pricer::case_market;
use std::time::Instant;

const QUAD_CALL: [f64; 7] = [
    0.0559968558698675989430,
    0.2183875465955682429392,
    0.1722687384166216016910,
    0.1931459861530763782535,
    0.2463981292071246238756,
    0.3062092452185299874597,
    0.3481391470608648743438,
];

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seeds: Vec<u64> = if args.len() > 1 {
        args[1..].iter().map(|s| s.parse().unwrap()).collect()
    } else {
        vec![42]
    };
    let full = std::env::var("FULL").is_ok();
    for seed in seeds {
        let cases: Vec<u32> = if full { (1..=7).collect() } else { vec![7] };
        let t0 = Instant::now();
        let mut worst = 0.0_f64;
        for case in cases {
            let market = case_market(case).unwrap();
            let cfg = McConfig {
                paths: 1_000_000,
                steps: 1000,
                seed,
                antithetic: false,
            };
            let est = simulate_asian(&market, &cfg, Payoff::Call).unwrap();
            let sigmas = (est.mean - QUAD_CALL[case as usize - 1]) / est.std_error;
            worst = worst.max(sigmas.abs());
            println!(
                "seed {seed} case {case}: mean={:.6} se={:.2e} dev={:+.2}σ",
                est.mean, est.std_error, sigmas
            );
        }
        println!(
            "seed {seed}: worst {:.2}σ, {:.1}s",
            worst,
            t0.elapsed().as_secs_f64()
        );
    }
}
