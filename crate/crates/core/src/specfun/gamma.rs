// Lanczos approximation (g = 7, n = 9) with the reflection formula for
// Re(z) < 1/2.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Method, SpecFunResult};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with exact zeros at the integers.
pub(crate) fn sinpi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `cos(pi x)` with exact zeros at the half-integers.
pub(crate) fn cospi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    if r.abs() == 0.5 {
        return 0.0;
    }
    let c = (PI * r).cos();
    if (n as i64) % 2 == 0 {
        c
    } else {
        -c
    }
}

fn sinpi_c(z: Complex64) -> Complex64 {
    Complex64::new(
        sinpi(z.re) * (PI * z.im).cosh(),
        cospi(z.re) * (PI * z.im).sinh(),
    )
}

fn lanczos_c(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    ((z + 0.5) * t.ln() - t + LN_SQRT_2PI).exp() * x
}

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS_COEF
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEF[0], |s, (i, &c)| s + c / (z - 1.0 + i as f64))
}

/// Gamma function of a complex argument.
pub fn gamma_fn(z: Complex64) -> Result<SpecFunResult> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole {
            function: "gamma",
            at: z.re,
        });
    }
    let (value, method) = if z.re < 0.5 {
        (
            PI / (sinpi_c(z) * lanczos_c(Complex64::new(1.0, 0.0) - z)),
            Method::Reflection,
        )
    } else {
        (lanczos_c(z), Method::Series)
    };
    let est_error = value.norm() * f64::EPSILON * (8.0 + 2.0 * z.norm());
    Ok(SpecFunResult {
        value,
        est_error,
        method,
    })
}

/// Gamma function of a real argument; `inf` at the poles.
pub fn gamma_real(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sinpi(x) * gamma_real(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let t = x - 0.5 + LANCZOS_G;
    // split the power to delay overflow
    let half = t.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(x)
}

/// `ln |Gamma(x)|` and the sign of `Gamma(x)`.
pub fn ln_gamma(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1.0);
    }
    if x < 0.5 {
        let s = sinpi(x);
        let (lg, sg) = ln_gamma(1.0 - x);
        return ((PI / s.abs()).ln() - lg, s.signum() * sg);
    }
    let t = x - 0.5 + LANCZOS_G;
    (LN_SQRT_2PI + (x - 0.5) * t.ln() - t + lanczos_sum(x).ln(), 1.0)
}

/// `1/Gamma(x)`, an entire function: exactly zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        return sinpi(x) * gamma_real(1.0 - x) / PI;
    }
    if x > 170.0 {
        return (-ln_gamma(x).0).exp();
    }
    1.0 / gamma_real(x)
}

/// Beta function `Gamma(a) Gamma(b) / Gamma(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<SpecFunResult> {
    for v in [a, b] {
        if is_nonpositive_integer(v) {
            return Err(Error::Pole {
                function: "beta",
                at: v,
            });
        }
    }
    let s = a + b;
    let small = a.abs() < 100.0 && b.abs() < 100.0 && s.abs() < 100.0;
    let value = if small {
        gamma_real(a) * gamma_real(b) * rgamma(s)
    } else {
        // log space: Gamma(a) and Gamma(b) overflow long before B does
        let (la, sa) = ln_gamma(a);
        let (lb, sb) = ln_gamma(b);
        if is_nonpositive_integer(s) {
            0.0
        } else {
            let (ls, ss) = ln_gamma(s);
            sa * sb * ss * (la + lb - ls).exp()
        }
    };
    let scale = 8.0 + a.abs() + b.abs();
    Ok(SpecFunResult::real(
        value,
        value.abs() * f64::EPSILON * scale,
        Method::Series,
    ))
}
