//! Pricing of fixed-strike Asian options by quadrature of a spectral integral
//! whose kernel is built from Whittaker functions with imaginary second index.
//!
//! The crate is organised bottom-up: `specfun` holds the special-function
//! core (complex log-gamma, confluent hypergeometrics, Whittaker W, modified
//! Bessel of imaginary order, conical and parabolic-cylinder functions, the
//! orthogonal-polynomial families), `quadrature` the Gauss-Laguerre /
//! trapezoid / adaptive-Simpson rules, `pricer` the normalised put formula
//! and case registry, `mc` the Monte Carlo oracle, and `identities` the
//! verification suite tying the pieces to independently computable facts.

pub mod error;
pub mod identities;
pub mod mc;
pub mod pricer;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
