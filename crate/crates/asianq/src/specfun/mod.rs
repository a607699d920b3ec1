//! Special-function core. Everything here is self-contained: the only
//! numerical primitives used from outside are `f64` arithmetic and the
//! quadrature module's adaptive Simpson rule.

mod bessel;
mod conical;
mod cylinder;
mod dd;
mod gamma;
mod hyp;
mod poly;
mod whittaker;

pub use bessel::{bessel_k_imag, bessel_k_real};
pub use conical::{conical_p, mehler_integral};
pub use cylinder::parabolic_d;
pub use gamma::{gamma_abs_sq, log_gamma_complex, real_gamma};
pub use hyp::{kummer_m, tricomi_u, tricomi_u_connection};
pub use poly::{bessel_poly, bessel_poly_coeffs, hermite_poly, laguerre_poly};
pub use whittaker::{whittaker_w, whittaker_w_log_mag, WhittakerIndex};

pub(crate) use bessel::bessel_k_imag_log;
pub(crate) use hyp::kummer_sum;
