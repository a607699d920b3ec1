//! Modified Bessel K of imaginary and real order.
//!
//! Three routes cover K_{ip}(x), picked by where each stays accurate:
//!
//! * cosh integral ∫₀^∞ e^{-x cosh t} cos(pt) dt in half-period chunks. The
//!   chunks are O(e^{-x}) while the result is O(e^{-πp/2}), so roundoff in
//!   the cancellation caps the usable region at πp/2 ≲ x + 23.
//! * ascending series in x through 1/Γ(1+ip+k), for x < 0.4. The e^{-πp/2}
//!   smallness enters through a division (by sinh πp), not cancellation, so
//!   this is uniformly accurate in p.
//! * rotated contour for large order: pushing t → t + iπ/2 in the cosh
//!   integral peels the exponential factor off analytically,
//!   e^{πp/2}·K_{ip}(x) = Re ∫₀^∞ e^{i(pσ − x sinh σ)} dσ, leaving a
//!   unit-amplitude oscillatory integral whose stationary point carries the
//!   answer. Euler acceleration sums the half-period tail.
//!
//! The log-magnitude variant exists because spectral-measure integrands pair
//! K's e^{-πp/2} decay against e^{+πp/2} growth from sinh·|Γ|² weights;
//! multiplying finished f64 values would underflow long before the product
//! does.

use super::gamma::log_gamma_complex;
use crate::error::{Error, Result};
use crate::quadrature::{euler_sum, integrate_adaptive};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

fn ln_sinh(a: f64) -> f64 {
    a + (-(-2.0 * a).exp()).ln_1p() - LN_2
}

/// K_{ip}(x)
pub fn bessel_k_imag(p: f64, x: f64) -> Result<f64> {
    let (log_mag, sign) = bessel_k_imag_log(p, x)?;
    if sign == 0.0 {
        return Ok(0.0);
    }
    Ok(sign * log_mag.exp())
}

/// (ln|K_{ip}(x)|, sign); sign 0.0 means the value is an exact numerical zero
pub(crate) fn bessel_k_imag_log(p: f64, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_k_imag needs x > 0, got {x}")));
    }
    let p = p.abs();
    if x >= 745.0 {
        // integrand below the f64 floor everywhere; 0 is the honest answer
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    if x < 0.4 && p > 1e-3 {
        return k_small_x_log(p, x);
    }
    if p >= 0.6366 * x + 8.0 {
        let scaled = k_phase_scaled(p, x)?;
        if scaled == 0.0 {
            return Ok((f64::NEG_INFINITY, 0.0));
        }
        return Ok((scaled.abs().ln() - 0.5 * PI * p, scaled.signum()));
    }
    let t_top = (745.0 / x).acosh();
    let f = |t: f64| (-x * t.cosh()).exp() * (p * t).cos();
    let v = chunked_oscillatory(&f, t_top, p)?;
    if v == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok((v.abs().ln(), v.signum()))
}

/// K_{ip}(x) = −π·Im[(x/2)^{ip} Σ_k (x²/4)^k/(k!·Γ(1+ip+k))]/sinh(πp)
fn k_small_x_log(p: f64, x: f64) -> Result<(f64, f64)> {
    let lg = log_gamma_complex(Complex64::new(1.0, p))?;
    let mut c = (-lg).exp();
    let q = 0.25 * x * x;
    let mut term = c;
    let mut sum = term;
    for k in 0..60 {
        let kf = k as f64;
        c /= (kf + 1.0) * Complex64::new(1.0 + kf, p);
        term = c * q.powi(k as i32 + 1);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    let phase = Complex64::new(0.0, p * (0.5 * x).ln()).exp();
    let im = (phase * sum).im;
    if im == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok(((PI * im.abs()).ln() - ln_sinh(PI * p), -im.signum()))
}

const PHASE_SEGMENTS: usize = 48;

/// e^{πp/2}·K_{ip}(x) = Re ∫₀^∞ e^{i(pσ − x sinh σ)} dσ: resolved quadrature
/// through the stationary point, then Euler-accelerated half-period segments
fn k_phase_scaled(p: f64, x: f64) -> Result<f64> {
    let psi = |s: f64| p * s - x * s.sinh();
    let dpsi = |s: f64| p - x * s.cosh();
    let f = |s: f64| psi(s).cos();
    let s_star = if p > x { (p / x).acosh() } else { 0.0 };
    let head = if s_star > 0.0 {
        integrate_adaptive(&f, 0.0, s_star, 2e-13 * (1.0 + s_star))?.value
    } else {
        0.0
    };
    let psi0 = psi(s_star);
    let mut segments = Vec::with_capacity(PHASE_SEGMENTS);
    let mut left = s_star;
    for k in 1..=PHASE_SEGMENTS {
        let target = psi0 - k as f64 * PI;
        // ψ is strictly decreasing past the stationary point: bracket the
        // phase target and bisect
        let slope = -dpsi(left);
        let width = if slope > 1e-9 {
            PI / slope
        } else {
            // quadratic phase at the stationary point, ψ'' = −x·sinh σ*
            (2.0 * PI / (x * s_star.sinh().max(1e-12))).sqrt()
        };
        let (mut lo, mut hi) = (left, left + width);
        while psi(hi) > target {
            lo = hi;
            hi = left + 2.0 * (hi - left);
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if psi(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        segments.push(integrate_adaptive(&f, left, s, 1e-13)?.value);
        left = s;
    }
    Ok(head + euler_sum(&segments))
}

/// K_λ(x) = ∫₀^∞ e^{-x cosh t} cosh(λt) dt for real order λ ≥ 0
pub fn bessel_k_real(lambda: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || lambda < 0.0 {
        return Err(Error::Domain(format!(
            "bessel_k_real needs x > 0 and lambda >= 0, got lambda={lambda}, x={x}"
        )));
    }
    // truncate where x·cosh t − λt > 745: fixed point of t = acosh((745+λt)/x)
    let mut t_top = ((745.0 / x).max(1.0)).acosh().max(1.0);
    for _ in 0..4 {
        t_top = ((745.0 + lambda * t_top) / x).max(1.0).acosh().max(1e-3);
    }
    let f = |t: f64| (-x * t.cosh()).exp() * (lambda * t).cosh();
    let scale = probe_scale(&f, t_top);
    let r = integrate_adaptive(f, 0.0, t_top, 1e-14 * scale.max(1e-300) * t_top)?;
    Ok(r.value)
}

fn probe_scale(f: &dyn Fn(f64) -> f64, t_top: f64) -> f64 {
    (0..=64)
        .map(|i| f(t_top * i as f64 / 64.0).abs())
        .fold(0.0, f64::max)
}

/// adaptive Simpson in stretches no wider than a half oscillation period, so
/// the local error estimate never sees full cancellation
fn chunked_oscillatory(f: &dyn Fn(f64) -> f64, t_top: f64, p: f64) -> Result<f64> {
    let scale = probe_scale(f, t_top);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let width = (PI / (2.0 * p.max(1.0))).min(1.0);
    let chunks = ((t_top / width).ceil() as usize).max(1);
    let h = t_top / chunks as f64;
    let tol = 1e-14 * scale * h;
    let mut sum = 0.0;
    for i in 0..chunks {
        let a = i as f64 * h;
        sum += integrate_adaptive(f, a, a + h, tol)?.value;
    }
    Ok(sum)
}
