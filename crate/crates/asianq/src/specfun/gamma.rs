//! Complex log-gamma (Lanczos, g = 7, 9 coefficients) and the |Γ|² helper
//! that every spectral measure in this crate is built from.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

/// log sin(πz) without overflow for large |Im z|; branch may differ from the
/// principal one by 2πi·k, which cancels wherever the reflection formula is
/// used under exp or Re.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let s = PI * z;
    let i = Complex64::new(0.0, 1.0);
    if s.im.abs() < 20.0 {
        return s.sin().ln();
    }
    if s.im > 0.0 {
        // sin s = -e^{-is}(1 - e^{2is})/(2i),  |e^{2is}| < 1
        -i * s + (Complex64::new(1.0, 0.0) - (2.0 * i * s).exp()).ln() + (i / 2.0).ln()
    } else {
        i * s + (Complex64::new(1.0, 0.0) - (-2.0 * i * s).exp()).ln() - (2.0 * i).ln()
    }
}

pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            what: format!("gamma({z})"),
        });
    }
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π/sin(πz)
        let rest = log_gamma_complex(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - rest);
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(COEF[0], 0.0);
    for (k, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (zm1 + k as f64);
    }
    let t = zm1 + G + 0.5;
    let sqrt_2pi = (2.0 * PI).sqrt();
    Ok((zm1 + 0.5) * t.ln() - t + (sqrt_2pi * acc).ln())
}

/// |Γ(σ + ip)|²
pub fn gamma_abs_sq(sigma: f64, p: f64) -> Result<f64> {
    let lg = log_gamma_complex(Complex64::new(sigma, p))?;
    Ok((2.0 * lg.re).exp())
}

/// Γ(x) for real x, poles excluded.
pub fn real_gamma(x: f64) -> Result<f64> {
    if x >= 0.5 {
        let lg = log_gamma_complex(Complex64::new(x, 0.0))?;
        return Ok(lg.re.exp());
    }
    if x == x.floor() {
        return Err(Error::Pole {
            what: format!("gamma({x})"),
        });
    }
    Ok(PI / ((PI * x).sin() * real_gamma(1.0 - x)?))
}
