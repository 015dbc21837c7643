//! Special functions needed by the closed-form transforms: Gamma and Beta,
//! Bessel J and Y (Neumann), Struve H, Gauss 2F1 and the associated Legendre
//! function of the first kind on `z > 1`.
//!
//! Every routine reports an error estimate alongside its value so that the
//! closed-form layer can refuse results it cannot vouch for.

use num_complex::Complex64;
use serde::Serialize;

mod bessel;
mod gamma;
mod hypergeometric;
mod legendre;
mod struve;

pub use bessel::{bessel_j, bessel_jy, bessel_y};
pub use gamma::{beta_fn, gamma_fn, gamma_real, ln_gamma, rgamma};
pub use hypergeometric::gauss_2f1;
pub use legendre::legendre_p;
pub use struve::struve_h;

/// How a special-function value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Transformation,
    Reflection,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecFunResult {
    pub value: Complex64,
    /// Estimated absolute error of `value`.
    pub est_error: f64,
    pub method: Method,
}

impl SpecFunResult {
    pub(crate) fn real(value: f64, est_error: f64, method: Method) -> Self {
        SpecFunResult {
            value: Complex64::new(value, 0.0),
            est_error,
            method,
        }
    }

    /// Real part; every routine here except `gamma_fn` is real-valued.
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn rel_error(&self) -> f64 {
        self.est_error / self.value.norm().max(f64::MIN_POSITIVE)
    }
}
