//! Gauss-Laguerre rules plus the two generic integrators (composite
//! trapezoid, adaptive Simpson) everything else leans on.

use crate::error::{Error, Result};
use std::cell::Cell;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub n: usize,
    /// roots of L_n, strictly increasing
    pub nodes: Vec<f64>,
    /// Gauss-Laguerre weights w_i (underflow to 0 past x_i ≈ 745 is expected;
    /// `log_weights` carries the information losslessly)
    pub weights: Vec<f64>,
    /// ln(w_i) + x_i, i.e. the log of the weight with e^{-x} divided back out
    pub log_weights: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct IntegrationResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
}

/// Laguerre recurrence up to L_{n+1} at x, rescaled on the fly; returns
/// (L_n, L_{n-1}, L_{n+1}, log of the common scale factor)
fn laguerre_scaled(n: usize, x: f64) -> (f64, f64, f64, f64) {
    let mut logscale = 0.0_f64;
    let mut pm1 = 1.0_f64; // L_0
    let mut p = 1.0 - x; // L_1
    if n == 0 {
        return (1.0, 0.0, 1.0 - x, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let pn = ((2.0 * kf + 1.0 - x) * p - kf * pm1) / (kf + 1.0);
        pm1 = p;
        p = pn;
        let m = p.abs().max(pm1.abs());
        if m > 1e100 {
            p /= m;
            pm1 /= m;
            logscale += m.ln();
        }
    }
    let nf = n as f64;
    let pnp1 = ((2.0 * nf + 1.0 - x) * p - nf * pm1) / (nf + 1.0);
    (p, pm1, pnp1, logscale)
}

pub fn gauss_laguerre_rule(n: usize) -> Result<QuadratureRule> {
    if !(1..=512).contains(&n) {
        return Err(Error::Domain(format!(
            "gauss_laguerre_rule supports 1 <= n <= 512, got {n}"
        )));
    }
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut log_weights = Vec::with_capacity(n);
    let mut z = 0.0_f64;
    for i in 0..n {
        // Stroud-Secrest style initial guesses
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2]);
        }
        let mut converged = false;
        let mut prev_step = f64::INFINITY;
        for it in 0..100 {
            let (pn, pnm1, _, _) = laguerre_scaled(n, z);
            // L_n'(x) = n(L_n - L_{n-1})/x
            let dz = pn * z / (nf * (pn - pnm1));
            z -= dz;
            // quadratic convergence either reaches the relative target or
            // stalls at the recurrence's cancellation noise floor, which for
            // the innermost nodes of large rules sits above 1e-14·z
            if dz.abs() <= 1e-14 * z.abs() || (it >= 5 && dz.abs() >= prev_step) {
                converged = true;
                break;
            }
            prev_step = dz.abs();
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Newton failed to locate Laguerre node {i} of rule n={n}"
            )));
        }
        let (_, _, pnp1, logscale) = laguerre_scaled(n, z);
        let log_w = z.ln() - 2.0 * (nf + 1.0).ln() - 2.0 * (pnp1.abs().ln() + logscale);
        nodes.push(z);
        weights.push(log_w.exp());
        log_weights.push(log_w + z);
    }
    for w in nodes.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Quadrature(format!(
                "Laguerre nodes out of order for n={n}"
            )));
        }
    }
    Ok(QuadratureRule {
        n,
        nodes,
        weights,
        log_weights,
    })
}

impl QuadratureRule {
    /// s·Σ w_i e^{x_i} f(s·x_i): the quadrature of the raw integrand f over
    /// [0,∞), with the e^{-x} weight divided back out and nodes stretched by s
    pub fn integrate<F>(&self, f: F, s: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let terms = map_nodes(&self.nodes, &self.log_weights, &f, s);
        let mut sum = 0.0;
        for t in terms {
            if !t.is_finite() {
                return Err(Error::NonFinite("integrate_laguerre node".into()));
            }
            sum += t;
        }
        Ok(s * sum)
    }
}

#[cfg(feature = "parallel")]
fn map_nodes<F>(nodes: &[f64], log_weights: &[f64], f: &F, s: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    use rayon::prelude::*;
    if nodes.len() >= 32 {
        return nodes
            .par_iter()
            .zip(log_weights.par_iter())
            .map(|(&x, &lw)| weigh(f(s * x), lw))
            .collect();
    }
    map_nodes_seq(nodes, log_weights, f, s)
}

#[cfg(not(feature = "parallel"))]
fn map_nodes<F>(nodes: &[f64], log_weights: &[f64], f: &F, s: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    map_nodes_seq(nodes, log_weights, f, s)
}

fn map_nodes_seq<F>(nodes: &[f64], log_weights: &[f64], f: &F, s: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    nodes
        .iter()
        .zip(log_weights.iter())
        .map(|(&x, &lw)| weigh(f(s * x), lw))
        .collect()
}

#[inline]
fn weigh(fx: f64, lw: f64) -> f64 {
    if fx == 0.0 {
        0.0
    } else {
        lw.exp() * fx
    }
}

pub fn integrate_laguerre<F>(f: F, n: usize, s: f64) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(s > 0.0) {
        return Err(Error::Domain(format!("laguerre scale must be > 0, got {s}")));
    }
    let rule = gauss_laguerre_rule(n)?;
    let value = rule.integrate(&f, s)?;
    let m = (3 * n).div_ceil(4).max(1);
    let est_error = if m == n {
        0.0
    } else {
        let coarse = gauss_laguerre_rule(m)?.integrate(&f, s)?;
        (value - coarse).abs()
    };
    Ok(IntegrationResult {
        value,
        est_error,
        evaluations: n + if m == n { 0 } else { m },
    })
}

pub fn integrate_trapezoid<F>(f: F, a: f64, b: f64, n: usize) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(a < b) || n < 2 {
        return Err(Error::Domain(format!(
            "trapezoid needs a < b and n >= 2, got a={a}, b={b}, n={n}"
        )));
    }
    let h = (b - a) / n as f64;
    let values = eval_grid(&f, a, h, n);
    let mut sum = 0.5 * (values[0] + values[n]);
    for &v in &values[1..n] {
        sum += v;
    }
    let value = sum * h;
    if !value.is_finite() {
        return Err(Error::NonFinite("integrate_trapezoid".into()));
    }
    let est_error = if n % 2 == 0 {
        let mut coarse = 0.5 * (values[0] + values[n]);
        for i in (2..n).step_by(2) {
            coarse += values[i];
        }
        (value - coarse * 2.0 * h).abs() / 3.0
    } else {
        value.abs() * f64::EPSILON
    };
    Ok(IntegrationResult {
        value,
        est_error,
        evaluations: n + 1,
    })
}

#[cfg(feature = "parallel")]
fn eval_grid<F>(f: &F, a: f64, h: f64, n: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    use rayon::prelude::*;
    if n >= 512 {
        return (0..=n)
            .into_par_iter()
            .map(|i| f(a + i as f64 * h))
            .collect();
    }
    (0..=n).map(|i| f(a + i as f64 * h)).collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_grid<F>(f: &F, a: f64, h: f64, n: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    (0..=n).map(|i| f(a + i as f64 * h)).collect()
}

/// limit of a convergent sequence of partial sums by iterated pairwise
/// averaging (Euler transform); on alternating tails each pass roughly
/// halves the error, so ~50 terms buy far more than the terms alone carry
pub(crate) fn euler_sum(terms: &[f64]) -> f64 {
    let mut s: Vec<f64> = terms
        .iter()
        .scan(0.0, |acc, &t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    while s.len() > 1 {
        for i in 0..s.len() - 1 {
            s[i] = 0.5 * (s[i] + s[i + 1]);
        }
        s.pop();
    }
    s.first().copied().unwrap_or(0.0)
}

/// Legendre nodes and weights on [-1, 1] by Newton iteration from the
/// Chebyshev guess; symmetric pairs are solved once and mirrored
pub(crate) fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pd = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 1..n {
                let kf = k as f64;
                (p1, p0) = (((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0), p1);
            }
            pd = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / pd;
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - t * t) * pd * pd);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// fixed composite Gauss-Legendre rule: `panels` equal panels of an n-point
/// rule each. For analytic integrands the error is spectral in n, so this is
/// the tool of choice when an oscillation count is known a priori and the
/// adaptive rule's term-by-term tolerance bookkeeping would be waste.
pub(crate) fn integrate_gauss_legendre<F>(f: F, a: f64, b: f64, panels: usize, n: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let (x, w) = gauss_legendre_nodes(n);
    let width = (b - a) / panels.max(1) as f64;
    let mut total = 0.0;
    for panel in 0..panels.max(1) {
        let (lo, hi) = (a + panel as f64 * width, a + (panel + 1) as f64 * width);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (&xi, &wi) in x.iter().zip(&w) {
            total += wi * half * f(mid + half * xi);
        }
    }
    total
}

pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "adaptive needs a < b and tol > 0, got a={a}, b={b}, tol={tol}"
        )));
    }
    let evals = Cell::new(0usize);
    let err_acc = Cell::new(0.0f64);
    let g = |x: f64| {
        evals.set(evals.get() + 1);
        f(x)
    };
    fn rec<G: Fn(f64) -> f64>(
        g: &G,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
        err_acc: &Cell<f64>,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let flm = g(0.5 * (a + m));
        let frm = g(0.5 * (m + b));
        let h = b - a;
        let left = (fa + 4.0 * flm + fm) * (h / 12.0);
        let right = (fm + 4.0 * frm + fb) * (h / 12.0);
        if !left.is_finite() || !right.is_finite() {
            return Err(Error::NonFinite("integrate_adaptive".into()));
        }
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || h < 1e-13 * (a.abs() + b.abs() + 1.0) {
            err_acc.set(err_acc.get() + delta.abs() / 15.0);
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::MaxDepth { depth: 60 });
        }
        let l = rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err_acc)?;
        let r = rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_acc)?;
        Ok(l + r)
    }
    let fa = g(a);
    let fm = g(0.5 * (a + b));
    let fb = g(b);
    let whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
    let value = rec(&g, a, b, fa, fm, fb, whole, tol, 60, &err_acc)?;
    Ok(IntegrationResult {
        value,
        est_error: err_acc.get(),
        evaluations: evals.get(),
    })
}
