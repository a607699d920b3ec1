//! Conical (Mehler-Fock) function P^μ_{ip-1/2} on the window 1 < z < 3 where
//! its Gauss series converges, plus the Mehler integral used as its oracle.

use super::gamma::real_gamma;
use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use std::f64::consts::PI;

/// ₂F₁(1/2-ip, 1/2+ip; 1-μ; (1-z)/2), the series part of P^μ_{ip-1/2}(z);
/// successive coefficient ratio is (j(j+1)+p²+1/4)/((j+1-μ)(j+1))
pub(crate) fn gauss_series(mu: f64, p: f64, z: f64) -> Result<f64> {
    let x = (1.0 - z) / 2.0;
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for j in 0..6000 {
        let jf = j as f64;
        term *= (jf * (jf + 1.0) + p * p + 0.25) / ((jf + 1.0 - mu) * (jf + 1.0)) * x;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { terms: 6000 })
}

pub fn conical_p(mu: f64, p: f64, z: f64) -> Result<f64> {
    if !(z > 1.0 && z < 3.0) {
        return Err(Error::Domain(format!(
            "conical_p converges on 1 < z < 3, got {z}"
        )));
    }
    if mu >= 1.0 {
        return Err(Error::Domain(format!("conical_p needs mu < 1, got {mu}")));
    }
    let series = gauss_series(mu, p, z)?;
    Ok(((z + 1.0) / (z - 1.0)).powf(mu / 2.0) / real_gamma(1.0 - mu)? * series)
}

/// Mehler's representation of P⁰_{ip-1/2}(cosh α):
/// (2/π)∫₀^α cos(pt)/√(2cosh α − 2cosh t) dt, with the square-root endpoint
/// removed by t = α − s².  The difference of coshes is factored as
/// 4 sinh(α − s²/2) sinh(s²/2); computing it directly loses all precision
/// near t = α and the noise forces the adaptive rule down to its width
/// floor over the whole endpoint region.
pub fn mehler_integral(p: f64, z: f64) -> Result<f64> {
    if !(z > 1.0) {
        return Err(Error::Domain(format!("mehler_integral needs z > 1, got {z}")));
    }
    let alpha = z.acosh();
    let f = |s: f64| {
        let half = 0.5 * s * s;
        if half < 1e-150 {
            return (p * alpha).cos() * (2.0 / alpha.sinh()).sqrt();
        }
        (p * (alpha - s * s)).cos() * s / ((alpha - half).sinh() * half.sinh()).sqrt()
    };
    let r = integrate_adaptive(f, 0.0, alpha.sqrt(), 1e-13)?;
    Ok(2.0 / PI * r.value)
}
