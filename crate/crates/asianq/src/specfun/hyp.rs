//! Confluent hypergeometric M and U.
//!
//! M is the plain power series with the Kummer transformation for negative
//! argument. U has two routes: the real-axis Laplace integral (taken whenever
//! Re a > 0, which covers every call the pricer makes) and the M-M connection
//! formula accumulated in double-double, kept as an independent cross-check
//! because its two halves cancel like e^z.

use super::dd::Cdd;
use super::gamma::log_gamma_complex;
use crate::error::{Error, Result};
use num_complex::Complex64;

const MAX_TERMS: usize = 10_000;

fn is_nonpositive_int(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

pub fn kummer_m(a: Complex64, b: Complex64, z: f64) -> Result<Complex64> {
    if is_nonpositive_int(b) {
        return Err(Error::Pole {
            what: format!("kummer_m at b={b}"),
        });
    }
    if z < 0.0 {
        // M(a,b,z) = e^z M(b-a,b,-z); the right side has no alternating
        // cancellation, the left does
        return Ok(z.exp() * kummer_m(b - a, b, -z)?);
    }
    kummer_sum(a, b, z)
}

pub(crate) fn kummer_sum(a: Complex64, b: Complex64, z: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term = term * ((a + kf) / (b + kf)) * (z / (kf + 1.0));
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

fn kummer_sum_dd(a: Complex64, b: Complex64, z: f64) -> Result<Cdd> {
    let mut term = Cdd::one();
    let mut sum = term;
    let zc = Cdd::new(Complex64::new(z, 0.0));
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let num = Cdd::new(a + kf).mul(zc);
        let den = Cdd::new((b + kf) * (kf + 1.0));
        term = term.mul(num.div(den));
        sum = sum.add(term);
        if term.abs_approx() < 1e-34 * sum.abs_approx() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// U(a,b,z) via (1/Γ(a))·∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, rewritten in
/// s = zt so the truncation point is argument-independent.
fn u_integral(a: Complex64, b: Complex64, z: f64) -> Result<Complex64> {
    let c = b - a - 1.0;
    let g = |s: f64| -> Complex64 {
        if s <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        ((a - 1.0) * s.ln() + c * (s / z).ln_1p() - s).exp()
    };
    // s^{a-1} is singular at 0 for Re a < 1; the power substitution s = u^m
    // makes the integrand vanish like u^{m·Re a - 1}
    let m = ((2.5 / a.re).ceil() as i32).clamp(1, 40);
    let mf = f64::from(m);
    let near = |u: f64| -> Complex64 {
        if u <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = u.powi(m);
        mf * u.powi(m - 1) * g(s)
    };
    let scale = (0..=32)
        .map(|i| near(i as f64 / 32.0).norm())
        .fold(0.0_f64, f64::max)
        .max((1..=32).map(|i| g(1.0 + i as f64).norm()).fold(0.0, f64::max));
    let tol = 1e-13 * scale.max(1e-290);
    let head = simpson_complex(&near, 0.0, 1.0, tol)?;
    let tail = simpson_complex(&g, 1.0, 800.0, tol)?;
    let pref = (-a * z.ln() - log_gamma_complex(a)?).exp();
    Ok(pref * (head + tail))
}

pub fn tricomi_u(a: Complex64, b: Complex64, z: f64) -> Result<Complex64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("tricomi_u needs z > 0, got {z}")));
    }
    if a.re > 0.0 {
        u_integral(a, b, z)
    } else {
        tricomi_u_connection(a, b, z)
    }
}

/// U from the M-M connection formula, series summed in double-double.
pub fn tricomi_u_connection(a: Complex64, b: Complex64, z: f64) -> Result<Complex64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("tricomi_u needs z > 0, got {z}")));
    }
    if b.im == 0.0 && (b.re - b.re.round()).abs() < 1e-9 {
        return Err(Error::PrecisionLoss(
            "connection formula degenerates at integer b".into(),
        ));
    }
    let one = Complex64::new(1.0, 0.0);
    let coef = |num: Complex64, den: Complex64| -> Result<Complex64> {
        if is_nonpositive_int(den) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok((log_gamma_complex(num)? - log_gamma_complex(den)?).exp())
    };
    let c1 = coef(one - b, a - b + 1.0)?;
    let c2 = coef(b - one, a)? * ((one - b) * z.ln()).exp();
    let mut sum = Cdd::new(Complex64::new(0.0, 0.0));
    let mut budget = 0.0_f64;
    if c1.norm() > 0.0 {
        let m1 = kummer_sum_dd(a, b, z)?;
        let t = Cdd::new(c1).mul(m1);
        budget += t.abs_approx();
        sum = sum.add(t);
    }
    if c2.norm() > 0.0 {
        let m2 = kummer_sum_dd(a - b + one, 2.0 * one - b, z)?;
        let t = Cdd::new(c2).mul(m2);
        budget += t.abs_approx();
        sum = sum.add(t);
    }
    let val = sum.value();
    if !val.is_finite() {
        return Err(Error::NonFinite("tricomi_u_connection".into()));
    }
    if val.norm() < 1e-25 * budget {
        return Err(Error::PrecisionLoss(
            "connection formula cancellation exceeds double-double budget".into(),
        ));
    }
    Ok(val)
}

/// adaptive Simpson for complex integrands, error measured in the complex norm
fn simpson_complex(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    fn rec(
        f: &dyn Fn(f64) -> Complex64,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: usize,
    ) -> Result<Complex64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let h = b - a;
        let left = (fa + 4.0 * flm + fm) * (h / 12.0);
        let right = (fm + 4.0 * frm + fb) * (h / 12.0);
        let delta = left + right - whole;
        if !left.is_finite() || !right.is_finite() {
            return Err(Error::NonFinite("simpson_complex".into()));
        }
        if delta.norm() <= 15.0 * tol || h.abs() < 1e-14 * (a.abs() + b.abs() + 1.0) {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::MaxDepth { depth: 60 });
        }
        let l = rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
        let r = rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
        Ok(l + r)
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
    rec(f, a, b, fa, fm, fb, whole, tol, 60)
}
