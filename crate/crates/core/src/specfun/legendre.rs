// Associated Legendre function of the first kind on the cut-free ray z > 1:
//   P^mu_nu(z) = ((z+1)/(z-1))^(mu/2) / Gamma(1-mu) * 2F1(-nu, nu+1; 1-mu; (1-z)/2)

use super::gamma::rgamma;
use super::hypergeometric::gauss_2f1;
use super::SpecFunResult;
use crate::error::{Error, Result};

pub fn legendre_p(mu: f64, nu: f64, z: f64) -> Result<SpecFunResult> {
    if !(z > 1.0) || !mu.is_finite() || !nu.is_finite() {
        return Err(Error::Domain {
            function: "legendre_p",
            detail: format!("requires z > 1 and finite degree and order (mu={mu}, nu={nu}, z={z})"),
        });
    }
    let c = 1.0 - mu;
    if c <= 0.0 && c == c.round() {
        return Err(Error::Pole {
            function: "legendre_p",
            at: mu,
        });
    }
    let f = gauss_2f1(-nu, nu + 1.0, c, 0.5 * (1.0 - z))?;
    let pre = ((z + 1.0) / (z - 1.0)).powf(0.5 * mu) * rgamma(c);
    Ok(SpecFunResult::real(
        pre * f.re(),
        (pre * f.est_error).abs() + 4.0 * f64::EPSILON * (pre * f.re()).abs(),
        f.method,
    ))
}
