// Bessel functions of the first and second kind for real order and positive
// real argument.
//
// For order nu >= 0: the ratio J'/J from the first continued fraction (CF1)
// and downward recurrence to a reduced order |mu| <= 1/2; at mu, Temme's
// series for x < 2 or Steed's complex continued fraction (CF2) for x >= 2
// fixes the normalisation through the Wronskian; Y is then recurred upward.
// Negative orders use the reflection formulas.

use std::f64::consts::PI;

use super::gamma::{cospi, sinpi};
use super::{Method, SpecFunResult};
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const XMIN: f64 = 2.0;

const MAX_ORDER: f64 = 50.0;
const MAX_ARG: f64 = 100.0;
const ACCURACY: f64 = 1e-8;

// Taylor coefficients of 1/Gamma(1 + x) = sum_j RG[j] x^j.
const RG: [f64; 28] = [
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -2.013_485_478_078_823_865_6e-5,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
];

/// `(gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu))` for `|mu| <= 1/2`, where
/// `gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)` and
/// `gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut even = 0.0;
    let mut odd = 0.0;
    for j in (0..RG.len()).rev() {
        if j % 2 == 0 {
            even = even * mu2 + RG[j];
        } else {
            odd = odd * mu2 + RG[j];
        }
    }
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, even + mu * odd, even - mu * odd)
}

/// `(J_nu, Y_nu, J'_nu, Y'_nu)` for `nu >= 0`, `x > 0`.
fn jy_nonneg(nu: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    let nl = if x < XMIN {
        (nu + 0.5) as usize
    } else {
        (nu - x + 1.5).max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1 for J'_nu / J_nu, modified Lentz
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Accuracy {
            function: "bessel_jy",
            est_error: f64::INFINITY,
        });
    }

    // downward recurrence from nu to xmu with an arbitrary normalisation
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        // Temme's series
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Accuracy {
                function: "bessel_jy",
                est_error: f64::INFINITY,
            });
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // Steed's CF2 for p + iq = (J' + iY')/(J + iY)
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::Accuracy {
                function: "bessel_jy",
                est_error: f64::INFINITY,
            });
        }
        let gam = (p - f) / q;
        let mut j = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            j = -j;
        }
        rjmu = j;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let fact = rjmu / rjl;
    let rj = rjl1 * fact;
    let rjp = rjp1 * fact;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let ry = rymu;
    let ryp = nu * xi * rymu - ry1;
    Ok((rj, ry, rjp, ryp))
}

fn check_envelope(function: &'static str, nu: f64, z: f64) -> Result<()> {
    if !(z > 0.0) || !nu.is_finite() {
        return Err(Error::Domain {
            function,
            detail: format!("requires z > 0 and finite order (nu = {nu}, z = {z})"),
        });
    }
    if nu.abs() > MAX_ORDER || z > MAX_ARG {
        return Err(Error::Unsupported {
            function,
            detail: format!("outside |nu| <= {MAX_ORDER}, z <= {MAX_ARG} (nu = {nu}, z = {z})"),
        });
    }
    Ok(())
}

/// `(J_nu, Y_nu, J'_nu, Y'_nu)` for any real order within `|nu| <= 50` and
/// `0 < z <= 100`. Values are raw; see [`bessel_j`] and [`bessel_y`] for the
/// error-reporting wrappers.
pub fn bessel_jy(nu: f64, z: f64) -> Result<(f64, f64, f64, f64)> {
    check_envelope("bessel_jy", nu, z)?;
    if nu >= 0.0 {
        return jy_nonneg(nu, z);
    }
    let m = -nu;
    let (j, y, jp, yp) = jy_nonneg(m, z)?;
    let (c, s) = (cospi(m), sinpi(m));
    Ok((
        c * j - s * y,
        s * j + c * y,
        c * jp - s * yp,
        s * jp + c * yp,
    ))
}

fn wrap(function: &'static str, nu: f64, value: f64, parts: f64) -> Result<SpecFunResult> {
    if !value.is_finite() {
        return Err(Error::Accuracy {
            function,
            est_error: f64::INFINITY,
        });
    }
    let est_error = 32.0 * f64::EPSILON * (1.0 + nu.abs()) * parts.max(value.abs());
    if est_error > ACCURACY * value.abs().max(1.0) {
        return Err(Error::Accuracy {
            function,
            est_error,
        });
    }
    let method = if nu < 0.0 {
        Method::Reflection
    } else {
        Method::Series
    };
    Ok(SpecFunResult::real(value, est_error, method))
}

/// Bessel function of the first kind `J_nu(z)`.
pub fn bessel_j(nu: f64, z: f64) -> Result<SpecFunResult> {
    check_envelope("bessel_j", nu, z)?;
    if nu >= 0.0 {
        let (j, ..) = jy_nonneg(nu, z)?;
        wrap("bessel_j", nu, j, j.abs())
    } else {
        let m = -nu;
        let (j, y, ..) = jy_nonneg(m, z)?;
        let (c, s) = (cospi(m), sinpi(m));
        wrap("bessel_j", nu, c * j - s * y, (c * j).abs() + (s * y).abs())
    }
}

/// Bessel function of the second kind (Neumann function) `Y_nu(z)`.
pub fn bessel_y(nu: f64, z: f64) -> Result<SpecFunResult> {
    check_envelope("bessel_y", nu, z)?;
    if nu >= 0.0 {
        let (_, y, ..) = jy_nonneg(nu, z)?;
        wrap("bessel_y", nu, y, y.abs())
    } else {
        let m = -nu;
        let (j, y, ..) = jy_nonneg(m, z)?;
        let (c, s) = (cospi(m), sinpi(m));
        wrap("bessel_y", nu, s * j + c * y, (s * j).abs() + (c * y).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ascending series for J, used as an independent oracle at small z.
    fn j_series(nu: f64, z: f64) -> f64 {
        let h = 0.5 * z;
        let mut sum = 0.0;
        for k in 0..60 {
            let k = k as f64;
            sum += (-1f64).powf(k) * h.powf(2.0 * k + nu)
                * crate::specfun::rgamma(k + 1.0)
                * crate::specfun::rgamma(k + nu + 1.0);
        }
        sum
    }

    #[test]
    fn half_integer_closed_forms() {
        for &z in &[0.05, 0.3, 1.0, 1.999, 2.0, 3.7, 10.0, 25.0, 60.0, 99.0] {
            let s = (2.0 / (PI * z)).sqrt();
            let j = bessel_j(0.5, z).unwrap().re();
            let y = bessel_y(0.5, z).unwrap().re();
            assert!((j - s * z.sin()).abs() < 1e-10, "J z={z}");
            assert!((y + s * z.cos()).abs() < 1e-10, "Y z={z}");
            // J_{-1/2} = sqrt(2/(pi z)) cos z, Y_{-1/2} = sqrt(2/(pi z)) sin z
            let jm = bessel_j(-0.5, z).unwrap().re();
            let ym = bessel_y(-0.5, z).unwrap().re();
            assert!((jm - s * z.cos()).abs() < 1e-10, "J- z={z}");
            assert!((ym - s * z.sin()).abs() < 1e-10, "Y- z={z}");
        }
    }

    #[test]
    fn small_argument_limits() {
        assert!((bessel_j(0.0, 1e-8).unwrap().re() - 1.0).abs() < 1e-15);
        assert!(bessel_j(2.5, 1e-6).unwrap().re().abs() < 1e-14);
    }

    #[test]
    fn matches_ascending_series() {
        for &nu in &[0.0, 0.3, 1.0, 2.5, 7.2, -0.3, -1.7, -3.5] {
            for &z in &[0.2, 1.0, 1.9, 2.1, 4.0, 8.0] {
                let a = bessel_j(nu, z).unwrap().re();
                let b = j_series(nu, z);
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "nu={nu} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn integer_orders_reference() {
        // mpmath besselj/bessely
        let cases = [
            (0.0, 1.0, 0.765_197_686_557_966_55, 0.088_256_964_215_676_958),
            (1.0, 2.5, 0.497_094_102_464_274_04, 0.145_918_137_966_785_8),
            (2.0, 0.7, 0.058_786_944_364_191_706, -2.961_477_561_827_272),
            (-2.0, 3.1, 0.486_207_014_167_508_91, -0.117_535_481_439_855_33),
            (5.0, 40.0, 0.122_573_465_977_117_79, 0.031_869_448_780_850_364),
        ];
        for (nu, z, j, y) in cases {
            let jj = bessel_j(nu, z).unwrap().re();
            let yy = bessel_y(nu, z).unwrap().re();
            assert!((jj - j).abs() < 1e-13 * j.abs().max(1.0), "J nu={nu} z={z}: {jj}");
            assert!((yy - y).abs() < 1e-13 * y.abs().max(1.0), "Y nu={nu} z={z}: {yy}");
        }
    }

    #[test]
    fn envelope() {
        assert!(matches!(bessel_j(0.0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(60.0, 1.0), Err(Error::Unsupported { .. })));
        assert!(matches!(bessel_j(1.0, 150.0), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn wronskian() {
        // five-point central differences
        let h = 1e-3;
        let d = |f: &dyn Fn(f64) -> f64, z: f64| {
            (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h)
        };
        for &nu in &[-2.5, -1.5, -0.4, 0.0, 0.5, 1.0, 2.7] {
            for &z in &[1.0, 3.0, 9.0, 30.0] {
                let j = |x| bessel_j(nu, x).unwrap().re();
                let y = |x| bessel_y(nu, x).unwrap().re();
                let w = j(z) * d(&y, z) - d(&j, z) * y(z);
                let exact = 2.0 / (PI * z);
                assert!((w - exact).abs() < 1e-8 * exact.max(1.0), "nu={nu} z={z}: {w}");
                let (jj, yy, jd, yd) = bessel_jy(nu, z).unwrap();
                assert!((jj * yd - jd * yy - exact).abs() < 1e-12 * exact.max(1.0));
            }
        }
    }
}
