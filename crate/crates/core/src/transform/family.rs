//! Normalised power-window families sharing one fixed-index transform.
//!
//! With `beta = 1/(q-1)` the kernel factor `x^(1 - beta(q-1))` is constant, so
//! every window `(lambda/x)^beta` on `[a, b]` of unit mass has the transform
//! `e_q(-p lambda)` at index `q`, whatever `a` and `b` are.

use super::FunctionSpec;
use crate::error::{Error, Result};

/// `int_a^b (lambda/x)^beta dx`.
pub fn window_mass(lambda: f64, beta: f64, a: f64, b: f64) -> f64 {
    if beta == 1.0 {
        lambda * (b / a).ln()
    } else {
        lambda.powf(beta) * (a.powf(1.0 - beta) - b.powf(1.0 - beta)) / (beta - 1.0)
    }
}

/// Unit-mass power windows with `beta = 1/(q-1)` and common `lambda`, one per
/// left edge in `a_values`; each right edge `b` solves
/// `lambda^beta (a^(1-beta) - b^(1-beta))/(beta-1) = 1`.
pub fn equivalence_family(lambda: f64, q: f64, a_values: &[f64]) -> Result<Vec<FunctionSpec>> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "equivalence family needs 1 < q < 2 (got {q})"
        )));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive")));
    }
    let beta = 1.0 / (q - 1.0);
    a_values
        .iter()
        .map(|&a| {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::InvalidParameter(format!("window edge a = {a} must be positive")));
            }
            let rhs = a.powf(1.0 - beta) - (beta - 1.0) * lambda.powf(-beta);
            if !(rhs > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "no unit-mass window starts at a = {a}: the whole tail beyond a has mass {} < 1",
                    window_mass(lambda, beta, a, f64::INFINITY)
                )));
            }
            let b = rhs.powf(1.0 / (1.0 - beta));
            Ok(FunctionSpec::PowerWindow { lambda, beta, a, b })
        })
        .collect()
}
