// Gauss hypergeometric function 2F1(a, b; c; z) for real parameters.
//
// Terminating series when a or b is a non-positive integer, the power series
// for |z| <= 0.9, and the Pfaff transformation
//   2F1(a, b; c; z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1))
// for -9 <= z < -0.9. Everything else is reported as unsupported.

use super::{Method, SpecFunResult};
use crate::error::{Error, Result};

const SERIES_RADIUS: f64 = 0.9;
const PFAFF_MIN: f64 = -9.0;
const MAX_TERMS: usize = 20_000;
const ACCURACY: f64 = 1e-8;

fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x == x.round() && x > -1e6).then(|| (-x) as usize)
}

/// Sum of the power series, truncated after `limit` terms if given.
/// Returns the value and the sum of absolute terms.
fn power_series(a: f64, b: f64, c: f64, z: f64, limit: Option<usize>) -> Result<(f64, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut small = 0;
    let max = limit.map_or(MAX_TERMS, |n| n + 1);
    for k in 0..max {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok((sum, abs_sum));
        }
        if limit.is_none() && term.abs() <= f64::EPSILON * sum.abs() {
            // require two quiet terms past the point where terms shrink
            let ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * z).abs();
            if ratio < 1.0 {
                small += 1;
                if small >= 2 {
                    return Ok((sum, abs_sum));
                }
            }
        } else {
            small = 0;
        }
    }
    if limit.is_some() {
        Ok((sum, abs_sum))
    } else {
        Err(Error::Accuracy {
            function: "gauss_2f1",
            est_error: f64::INFINITY,
        })
    }
}

fn finish(value: f64, abs_sum: f64, scale: f64, method: Method) -> Result<SpecFunResult> {
    let est = 16.0 * f64::EPSILON * abs_sum * scale.abs();
    if !value.is_finite() || est > ACCURACY * value.abs().max(1.0) {
        return Err(Error::Accuracy {
            function: "gauss_2f1",
            est_error: est,
        });
    }
    Ok(SpecFunResult::real(value, est, method))
}

pub(crate) fn pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<SpecFunResult> {
    let w = z / (z - 1.0);
    let scale = (1.0 - z).powf(-a);
    let limit = nonpositive_integer(a).or(nonpositive_integer(c - b));
    let (s, abs_sum) = power_series(a, c - b, c, w, limit)?;
    finish(scale * s, abs_sum, scale, Method::Transformation)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<SpecFunResult> {
    if ![a, b, c, z].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gauss_2f1 needs finite arguments (a={a}, b={b}, c={c}, z={z})"
        )));
    }
    if nonpositive_integer(c).is_some() {
        return Err(Error::Pole {
            function: "gauss_2f1",
            at: c,
        });
    }
    if z == 0.0 {
        return Ok(SpecFunResult::real(1.0, 0.0, Method::Series));
    }
    if let Some(n) = nonpositive_integer(a).or(nonpositive_integer(b)) {
        let (s, abs_sum) = power_series(a, b, c, z, Some(n))?;
        return finish(s, abs_sum, 1.0, Method::Series);
    }
    if z.abs() <= SERIES_RADIUS {
        let (s, abs_sum) = power_series(a, b, c, z, None)?;
        return finish(s, abs_sum, 1.0, Method::Series);
    }
    if (PFAFF_MIN..-SERIES_RADIUS).contains(&z) {
        return pfaff(a, b, c, z);
    }
    Err(Error::Unsupported {
        function: "gauss_2f1",
        detail: format!("z = {z} outside [-9, 0.9]"),
    })
}
