//! Fixed-strike Asian option prices from the spectral representation
//!
//!   P(k,τ) = e^{-ν²τ/2}·(2k)^{-κ}·e^{-1/(4k)}/(8π²) ·
//!            ∫₀^∞ e^{-p²τ/2} W_{κ,ip/2}(1/(2k)) |Γ((ν+ip)/2)|² sinh(πp) p dp
//!
//! with ν = 2r/σ² − 1, τ = Tσ²/4, k = τK/S₀, κ = −(ν+3)/2. The normalized
//! put P maps to currency as V_p = e^{-rT}(4S₀/(σ²T))·P and the call follows
//! from parity. The integrand spans hundreds of orders of magnitude across
//! its factors (each factor alone overflows or underflows in the
//! low-volatility regime), so it is assembled as a sum of log-magnitudes
//! with one final exponentiation.

use crate::error::{Error, Result};
use crate::quadrature::{gauss_laguerre_rule, integrate_adaptive, integrate_trapezoid};
use crate::specfun::{laguerre_poly, log_gamma_complex, real_gamma, whittaker_w_log_mag, WhittakerIndex};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarketParams {
    pub r: f64,
    pub sigma: f64,
    pub t: f64,
    pub s0: f64,
    pub k: f64,
}

impl MarketParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.t > 0.0 && self.s0 > 0.0 && self.k > 0.0)
            || !self.r.is_finite()
        {
            return Err(Error::Domain(format!(
                "market params need sigma, T, S0, K > 0 and finite r; got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedParams {
    pub nu: f64,
    pub tau: f64,
    pub k: f64,
    pub kappa: f64,
}

pub fn normalize(market: &MarketParams) -> Result<NormalizedParams> {
    market.validate()?;
    let nu = 2.0 * market.r / (market.sigma * market.sigma) - 1.0;
    let tau = market.t * market.sigma * market.sigma / 4.0;
    let k = tau * market.k / market.s0;
    Ok(NormalizedParams {
        nu,
        tau,
        k,
        kappa: -(nu + 3.0) / 2.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Laguerre,
    Trapezoid,
    MonteCarlo,
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "laguerre" => Ok(Method::Laguerre),
            "trapezoid" => Ok(Method::Trapezoid),
            "monte_carlo" | "mc" => Ok(Method::MonteCarlo),
            other => Err(format!(
                "unknown method '{other}' (expected laguerre, trapezoid or monte_carlo)"
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PriceResult {
    pub call: f64,
    pub discrete_term: f64,
    pub method: Method,
    pub nodes_used: usize,
    pub normalized_put: f64,
    pub put: f64,
    #[serde(skip)]
    pub diagnostics: BTreeMap<String, f64>,
}

/// the spectral integrand of P(k,τ) at frequency p
pub fn continuous_integrand(p: f64, np: &NormalizedParams) -> Result<f64> {
    if p < 0.0 {
        return Err(Error::Domain(format!("integrand needs p >= 0, got {p}")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    // The measure grows like e^{πp/4} times powers of p before the Gaussian
    // takes over: the Γ-pair carries e^{-πp/2}, sinh adds e^{πp}, and the
    // Whittaker factor decays at least as fast as e^{-πp/4}. Points whose
    // envelope exponent sits 170 ln-units under its maximum at p = π/(4τ)
    // contribute nothing at working precision, so they are zeroed without
    // consulting the Whittaker engine — whose index range would otherwise cut
    // high-order rules short in the small-τ regime.
    let poly = np.nu.abs() + np.kappa.abs() + 2.0;
    let envelope = |q: f64| 0.25 * PI * q - 0.5 * np.tau * q * q + poly * q.ln_1p();
    if envelope(p) - envelope(0.25 * PI / np.tau) < -170.0 {
        return Ok(0.0);
    }
    let z = 1.0 / (2.0 * np.k);
    let (w_log, w_sign) = whittaker_w_log_mag(WhittakerIndex::imaginary(np.kappa, 0.5 * p), z)?;
    let lg = log_gamma_complex(Complex64::new(0.5 * np.nu, 0.5 * p))?;
    // ln(sinh πp) = πp + ln(1 − e^{-2πp}) − ln 2
    let ln_sinh = PI * p + (-(-2.0 * PI * p).exp()).ln_1p() - LN_2;
    let log_total = -0.5 * np.nu * np.nu * np.tau
        - np.kappa * (2.0 * np.k).ln()
        - 1.0 / (4.0 * np.k)
        - (8.0 * PI * PI).ln()
        - 0.5 * p * p * np.tau
        + 2.0 * lg.re
        + ln_sinh
        + p.ln()
        + w_log;
    if log_total > 700.0 {
        return Err(Error::Overflow(format!(
            "integrand log-magnitude {log_total:.1} at p={p} exceeds f64 range"
        )));
    }
    Ok(w_sign * log_total.exp())
}

/// Discrete-spectrum contribution applied to the price: zero.
///
/// The drift index ν > 0 admits a finite family of bound states and a
/// candidate correction term (see [`discrete_candidate`]). Pricing both ways
/// against the reference tables and against the exact large-strike moment
/// limit P → k − E[A_τ] shows the spectral integral above already carries the
/// full price, and adding the candidate breaks both checks — so the applied
/// correction is identically zero and the candidate is surfaced only through
/// diagnostics. The audit lives in tests/pricing.rs.
pub fn discrete_correction(_np: &NormalizedParams) -> f64 {
    0.0
}

/// the candidate bound-state sum Σ_{n≤⌊ν/2⌋} e^{-2n(ν-n)τ}·(-1)ⁿ·2(ν-2n)/Γ(1+ν-n)
/// ·∫₀^k (k-y)(2y)^{n-1-ν} e^{-1/(2y)} L_n^{(ν-2n)}(1/(2y)) dy, for ν > 0
pub fn discrete_candidate(np: &NormalizedParams) -> Result<f64> {
    if np.nu <= 0.0 {
        return Ok(0.0);
    }
    let nu = np.nu;
    let mut total = 0.0;
    for n in 0..=(nu / 2.0).floor() as usize {
        let nf = n as f64;
        let alpha = nu - 2.0 * nf;
        let density = |y: f64| {
            if y <= 0.0 {
                return 0.0;
            }
            let log_pow = (nf - 1.0 - nu) * (2.0 * y).ln() - 1.0 / (2.0 * y);
            if log_pow < -700.0 {
                return 0.0;
            }
            (np.k - y) * log_pow.exp() * laguerre_poly(n, alpha, 1.0 / (2.0 * y))
        };
        let integral = integrate_adaptive(density, 0.0, np.k, 1e-16 * np.k.max(1e-6))?.value;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let coef = (-2.0 * nf * (nu - nf) * np.tau).exp() * sign * 2.0 * (nu - 2.0 * nf)
            / real_gamma(1.0 + nu - nf)?;
        total += coef * integral;
    }
    Ok(total)
}

/// truncation point where the Gaussian envelope e^{-p²τ/2} reaches 1e-41
pub fn trapezoid_p_max(np: &NormalizedParams) -> f64 {
    (2.0 * 41.0 * std::f64::consts::LN_10 / np.tau).sqrt().min(500.0)
}

/// quadrature order policy: 64 nodes except in the slow-decay small-τ regime
pub fn default_nodes(np: &NormalizedParams) -> usize {
    if np.tau >= 0.02 {
        64
    } else {
        200
    }
}

struct QuadratureOutcome {
    value: f64,
    est_error: f64,
    evaluations: usize,
}

fn put_normalized_quadrature(
    np: &NormalizedParams,
    method: Method,
    n: usize,
) -> Result<QuadratureOutcome> {
    let f = |p: f64| match continuous_integrand(p, np) {
        Ok(v) => v,
        Err(_) => f64::NAN,
    };
    let r = match method {
        Method::Laguerre => {
            if n < 4 {
                return Err(Error::Domain(format!(
                    "laguerre pricing needs n >= 4, got {n}"
                )));
            }
            let rule = gauss_laguerre_rule(n)?;
            let value = rule.integrate(&f, 1.0)?;
            let m = (3 * n).div_ceil(4);
            let coarse = gauss_laguerre_rule(m)?.integrate(&f, 1.0)?;
            QuadratureOutcome {
                value,
                est_error: (value - coarse).abs(),
                evaluations: n + m,
            }
        }
        Method::Trapezoid => {
            if n < 4 {
                return Err(Error::Domain(format!(
                    "trapezoid pricing needs n >= 4 panels, got {n}"
                )));
            }
            let out = integrate_trapezoid(&f, 0.0, trapezoid_p_max(np), n)?;
            QuadratureOutcome {
                value: out.value,
                est_error: out.est_error,
                evaluations: out.evaluations,
            }
        }
        Method::MonteCarlo => {
            return Err(Error::Domain(
                "price() handles quadrature methods; use the mc module for monte_carlo".into(),
            ))
        }
    };
    Ok(QuadratureOutcome {
        value: r.value + discrete_correction(np),
        ..r
    })
}

pub fn price_put_normalized(np: &NormalizedParams, method: Method, n: usize) -> Result<f64> {
    Ok(put_normalized_quadrature(np, method, n)?.value)
}

/// (1−e^{−rT})S₀/(rT) − e^{−rT}K, with the removable r→0 singularity expanded
pub fn parity_gap(market: &MarketParams) -> f64 {
    let x = market.r * market.t;
    let ratio = if x.abs() < 1e-8 {
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    };
    ratio * market.s0 - (-x).exp() * market.k
}

pub fn price(market: &MarketParams, method: Method, n: usize) -> Result<PriceResult> {
    let np = normalize(market)?;
    let q = put_normalized_quadrature(&np, method, n)?;
    let rescale = (-market.r * market.t).exp() * 4.0 * market.s0 / (market.sigma * market.sigma * market.t);
    let put = rescale * q.value;
    let call = put + parity_gap(market);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("est_error".into(), q.est_error * rescale);
    diagnostics.insert("evaluations".into(), q.evaluations as f64);
    if np.nu > 0.0 {
        diagnostics.insert("discrete_candidate".into(), discrete_candidate(&np)?);
    }
    Ok(PriceResult {
        call,
        discrete_term: discrete_correction(&np),
        method,
        nodes_used: n,
        normalized_put: q.value,
        put,
        diagnostics,
    })
}

pub fn convergence_scan(
    market: &MarketParams,
    n_values: &[usize],
) -> Result<Vec<(usize, f64, f64)>> {
    if n_values.is_empty() {
        return Err(Error::Domain("convergence scan needs at least one n".into()));
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let pr = price(market, Method::Laguerre, n)?;
        rows.push((n, pr.put, pr.call));
    }
    Ok(rows)
}

/// E[A_τ^{(ν)}] = (e^{2(ν+1)τ} − 1)/(2(ν+1)); the k→∞ put limit is k − mean
pub fn normalized_mean(nu: f64, tau: f64) -> f64 {
    let a = 2.0 * (nu + 1.0);
    if a.abs() < 1e-10 {
        tau * (1.0 + 0.5 * a * tau)
    } else {
        (a * tau).exp_m1() / a
    }
}

/// the reference parameter sets used throughout the tests and the CLI
pub fn case_market(id: u32) -> Option<MarketParams> {
    let m = |r, sigma, t, s0, k| MarketParams { r, sigma, t, s0, k };
    match id {
        1 => Some(m(0.02, 0.10, 1.0, 2.0, 2.0)),
        2 => Some(m(0.18, 0.30, 1.0, 2.0, 2.0)),
        3 => Some(m(0.0125, 0.25, 2.0, 2.0, 2.0)),
        4 => Some(m(0.05, 0.50, 1.0, 1.9, 2.0)),
        5 => Some(m(0.05, 0.50, 1.0, 2.0, 2.0)),
        6 => Some(m(0.05, 0.50, 1.0, 2.1, 2.0)),
        7 => Some(m(0.05, 0.50, 2.0, 2.0, 2.0)),
        _ => None,
    }
}

pub const CASE_COUNT: u32 = 7;
