//! Orthogonal-polynomial families: generalized Laguerre, physicists'
//! Hermite, and the generalized Bessel polynomials y_n(x; a, b).

use crate::error::{Error, Result};

/// generalized Laguerre L_n^{(α)}(x) by the three-term recurrence
pub fn laguerre_poly(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm1 = 1.0_f64;
    let mut p = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * p - (kf + alpha) * pm1) / (kf + 1.0);
        pm1 = p;
        p = next;
    }
    p
}

/// physicists' Hermite H_n(x)
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut hm1 = 1.0_f64;
    let mut h = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * h - 2.0 * k as f64 * hm1;
        hm1 = h;
        h = next;
    }
    h
}

/// generalized Bessel polynomial y_n(x; a, b) = (-1)ⁿ n! (x/b)ⁿ L_n^{(1-2n-a)}(b/x)
pub fn bessel_poly(n: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_poly needs x > 0, got {x}")));
    }
    if b == 0.0 {
        return Err(Error::Domain("bessel_poly needs b != 0".into()));
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let nfact: f64 = (2..=n).map(|k| k as f64).product();
    let alpha = 1.0 - 2.0 * n as f64 - a;
    Ok(sign * nfact * (x / b).powi(n as i32) * laguerre_poly(n, alpha, b / x))
}

/// coefficients c_k of y_n(x; a, b) = Σ_k c_k x^k,
/// c_k = C(n,k)·(n+a-1)(n+a)···(n+a-2+k)·b^{-k}
pub fn bessel_poly_coeffs(n: usize, a: f64, b: f64) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = 1.0_f64;
    coeffs.push(c);
    for k in 0..n {
        let kf = k as f64;
        let nf = n as f64;
        c *= (nf - kf) / (kf + 1.0) * (nf + a - 1.0 + kf) / b;
        coeffs.push(c);
    }
    coeffs
}
