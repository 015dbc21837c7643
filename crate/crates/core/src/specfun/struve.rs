// Struve function H_nu(z) for real order and 0 < z <= 60.
//
// Ascending series, terms summed in log space so that the Gamma poles at
// k + nu + 3/2 = 0, -1, ... simply drop out. When the series loses too much
// to cancellation (large z) the difference H - Y is taken from its Laplace
// integral and Y added back.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma};
use super::{bessel_y, Method, SpecFunResult};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, real, Decay, QuadratureConfig};

const MAX_ORDER: f64 = 50.0;
const MAX_ARG: f64 = 60.0;
const ACCURACY: f64 = 1e-8;
const SERIES_MAX_Z: f64 = 20.0;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn series(nu: f64, z: f64) -> (f64, f64) {
    let lh = (0.5 * z).ln();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let b = kf + nu + 1.5;
        if !is_pole(b) {
            let (la, _) = ln_gamma(kf + 1.5);
            let (lb, sb) = ln_gamma(b);
            let mag = ((2.0 * kf + nu + 1.0) * lh - la - lb).exp();
            let sign = if k % 2 == 0 { sb } else { -sb };
            sum += sign * mag;
            abs_sum += mag;
            // past the peak of the terms and below round-off
            if kf > 0.5 * z && b > 0.0 && mag <= f64::EPSILON * 1e-2 * sum.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        k += 1;
        if k > 500 {
            break;
        }
    }
    (sum, 8.0 * f64::EPSILON * abs_sum)
}

/// `H_nu(z) - Y_nu(z)` from `2 (z/2)^nu / (sqrt(pi) Gamma(nu+1/2)) *
/// int_0^inf exp(-z t) (1+t^2)^(nu-1/2) dt`.
fn struve_minus_neumann(nu: f64, z: f64) -> Result<(f64, f64)> {
    let pre = 2.0 * (0.5 * z).powf(nu) * rgamma(nu + 0.5) / PI.sqrt();
    if pre == 0.0 {
        return Ok((0.0, 0.0));
    }
    let cfg = QuadratureConfig {
        rel_tol: 1e-14,
        abs_tol: 1e-300,
        ..QuadratureConfig::default()
    };
    let e = nu - 0.5;
    let r = integrate_semi_infinite(
        real(|t| (-z * t).exp() * (1.0 + t * t).powf(e)),
        Decay::Exponential,
        &[1.0 / z],
        &cfg,
    )?;
    Ok((pre * r.value.re, (pre * r.abs_err).abs() + 4.0 * f64::EPSILON * (pre * r.value.re).abs()))
}

/// Struve function `H_nu(z)` for `|nu| <= 50`, `0 < z <= 60`.
pub fn struve_h(nu: f64, z: f64) -> Result<SpecFunResult> {
    if !(z > 0.0) || !nu.is_finite() {
        return Err(Error::Domain {
            function: "struve_h",
            detail: format!("requires z > 0 and finite order (nu = {nu}, z = {z})"),
        });
    }
    if nu.abs() > MAX_ORDER || z > MAX_ARG {
        return Err(Error::Accuracy {
            function: "struve_h",
            est_error: f64::INFINITY,
        });
    }
    if z <= SERIES_MAX_Z {
        let (v, est) = series(nu, z);
        if v.is_finite() && est <= 1e-3 * ACCURACY * v.abs().max(1.0) {
            return Ok(SpecFunResult::real(v, est, Method::Series));
        }
    }
    let (k, kerr) = struve_minus_neumann(nu, z)?;
    let y = bessel_y(nu, z)?;
    let v = k + y.re();
    let est = kerr + y.est_error;
    if !v.is_finite() || est > ACCURACY * v.abs().max(1.0) {
        return Err(Error::Accuracy {
            function: "struve_h",
            est_error: est,
        });
    }
    Ok(SpecFunResult::real(v, est, Method::Integral))
}
