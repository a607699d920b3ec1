use asianq::quadrature::{gauss_laguerre_rule, integrate_laguerre};
use proptest::prelude::*;

/// Σᵢ wᵢ xᵢ^j against j!, both sides in log space so that high moments of the
/// large rules stay representable (x^j overflows f64 well before j = 2n−1).
/// log_weights stores ln wᵢ + xᵢ (the raw-integrand convention), so the
/// weighted moment subtracts the node back out.
fn moment_rel_error(n: usize, j: u32) -> f64 {
    let rule = gauss_laguerre_rule(n).unwrap();
    let logs: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.log_weights)
        .map(|(&x, &lw)| lw - x + j as f64 * x.ln())
        .collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|&l| (l - m).exp()).sum();
    let log_moment = m + sum.ln();
    let log_factorial: f64 = (1..=j).map(|i| (i as f64).ln()).sum();
    ((log_moment - log_factorial).exp() - 1.0).abs()
}

#[test]
fn monomial_exactness_up_to_degree_2n_minus_1() {
    for &n in &[4usize, 8, 16, 32, 64] {
        let mut worst = (0.0f64, 0u32);
        for j in 0..=(2 * n as u32 - 1) {
            let e = moment_rel_error(n, j);
            if e > worst.0 {
                worst = (e, j);
            }
        }
        assert!(worst.0 < 1e-11, "n={n}: worst rel {:.3e} at j={}", worst.0, worst.1);
    }
}

#[test]
fn degree_2n_is_not_exact() {
    // the rule must fail one degree past its guarantee, otherwise the
    // exactness test above is vacuous
    let e = moment_rel_error(4, 8);
    assert!(e > 1e-6, "n=4 j=8 unexpectedly exact: {e:.3e}");
}

#[test]
fn laguerre_rule_rejects_out_of_range_orders() {
    assert!(gauss_laguerre_rule(0).is_err());
    assert!(gauss_laguerre_rule(513).is_err());
    assert!(gauss_laguerre_rule(512).is_ok());
}

proptest! {
    #[test]
    fn nodes_positive_increasing_weights_positive(n in 1usize..=64) {
        let rule = gauss_laguerre_rule(n).unwrap();
        prop_assert!(rule.nodes[0] > 0.0);
        for w in &rule.weights {
            prop_assert!(*w > 0.0);
        }
        for pair in rule.nodes.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn consecutive_rules_interlace(n in 1usize..=64) {
        let lo = gauss_laguerre_rule(n).unwrap();
        let hi = gauss_laguerre_rule(n + 1).unwrap();
        // x_{n+1,i} < x_{n,i} < x_{n+1,i+1}
        for i in 0..n {
            prop_assert!(hi.nodes[i] < lo.nodes[i]);
            prop_assert!(lo.nodes[i] < hi.nodes[i + 1]);
        }
    }

    #[test]
    fn weighted_affine_integrands_are_exact(a in -10.0f64..10.0, b in -10.0f64..10.0, n in 1usize..=80) {
        // ∫₀^∞ (a+bx)e^{-x} dx = a + b; the rule folds the weight back out,
        // so the raw integrand carries it explicitly
        let r = integrate_laguerre(|x| (a + b * x) * (-x).exp(), n, 1.0).unwrap();
        prop_assert!((r.value - (a + b)).abs() < 1e-10 * (a.abs() + b.abs() + 1.0));
    }

    #[test]
    fn scale_parameter_is_a_substitution(s in 0.2f64..5.0) {
        // ∫₀^∞ e^{-t/s}(2+3t) dt = 2s + 3s², exact for every rule order once
        // the nodes are stretched to match the decay rate
        let r = integrate_laguerre(|t| (-t / s).exp() * (2.0 + 3.0 * t), 64, s).unwrap();
        let want = 2.0 * s + 3.0 * s * s;
        prop_assert!((r.value / want - 1.0).abs() < 1e-10);
    }
}
