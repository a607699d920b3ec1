//! Parabolic cylinder D_ν through the Whittaker bridge
//! D_ν(z) = 2^{ν/2} W_{ν/2+1/4, 1/4}(z²/2) (z²/2)^{-1/4},
//! with upward recurrence D_{ν+1} = z·D_ν − ν·D_{ν-1} for ν ≥ 1 so the
//! bridge only ever runs where its U integral is well-conditioned (ν < 1).

use super::whittaker::{whittaker_w, WhittakerIndex};
use crate::error::{Error, Result};

fn d_bridge(nu: f64, z: f64) -> Result<f64> {
    let x = z * z / 2.0;
    let w = whittaker_w(WhittakerIndex::real(nu / 2.0 + 0.25, 0.25), x)?;
    Ok(2.0_f64.powf(nu / 2.0) * w.re * x.powf(-0.25))
}

pub fn parabolic_d(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("parabolic_d needs z > 0, got {z}")));
    }
    if nu < 1.0 {
        return d_bridge(nu, z);
    }
    let m = nu.floor() as usize;
    let nu0 = nu - m as f64;
    let mut below = d_bridge(nu0 - 1.0, z)?;
    let mut here = d_bridge(nu0, z)?;
    let mut order = nu0;
    for _ in 0..m {
        let next = z * here - order * below;
        below = here;
        here = next;
        order += 1.0;
    }
    Ok(here)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermite(n: usize, x: f64) -> f64 {
        let mut hm = 1.0;
        let mut h = 2.0 * x;
        if n == 0 {
            return 1.0;
        }
        for k in 1..n {
            let next = 2.0 * x * h - 2.0 * k as f64 * hm;
            hm = h;
            h = next;
        }
        h
    }

    #[test]
    fn ground_state() {
        for &z in &[0.4, 1.0, 2.3] {
            let got = parabolic_d(0.0, z).unwrap();
            let want = (-z * z / 4.0).exp();
            assert!((got / want - 1.0).abs() < 1e-11, "z={z}");
        }
    }

    #[test]
    fn hermite_link() {
        // D_n(√2 x) = 2^{-n/2} e^{-x²/2} H_n(x)
        for n in 1..=3usize {
            for &x in &[0.3, 1.0] {
                let got = parabolic_d(n as f64, 2.0_f64.sqrt() * x).unwrap();
                let want = 2.0_f64.powf(-(n as f64) / 2.0) * (-x * x / 2.0).exp() * hermite(n, x);
                assert!(
                    (got / want - 1.0).abs() < 1e-10,
                    "n={n} x={x}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn small_argument_limit_matches_hermite_scaling() {
        // D₂(0⁺) → 2^{-1} e^0 H₂(0) = -1 under the √2 rescaling
        let x = 1e-4;
        let got = parabolic_d(2.0, 2.0_f64.sqrt() * x).unwrap();
        let want = 0.5 * (-x * x / 2.0).exp() * hermite(2, x);
        assert!((got / want - 1.0).abs() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn domain() {
        assert!(parabolic_d(0.5, 0.0).is_err());
    }
}
