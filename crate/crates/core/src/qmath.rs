//! q-deformed elementary functions and the transform kernel.
//!
//! The q-exponential is `e_q(u) = [1 + (1-q) u]^{1/(1-q)}` under the principal
//! branch of the complex power, with an explicit `exp` branch at `q = 1`. The
//! transform kernel `{1 - (1-q) p x f^{q-1}}^{1/(1-q)}` is `e_q(-p x f^{q-1})`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun;

/// Transform variable `p` (or the inverse temperature `B` of the partition
/// function).
pub type ComplexPoint = Complex64;

/// Which Heaviside factor is active for a given transform variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    /// `Re(p) > 0`: the `H[Re(p)]` factor.
    Right,
    /// `Re(p) < 0`: the `H[-Re(p)]` factor.
    Left,
    /// `Re(p) = 0`.
    Axis,
}

pub fn half_plane(p: ComplexPoint) -> HalfPlane {
    if p.re > 0.0 {
        HalfPlane::Right
    } else if p.re < 0.0 {
        HalfPlane::Left
    } else {
        HalfPlane::Axis
    }
}

/// The entropic index, restricted to the window `1 <= q < 2` where the factor
/// `H(q-1) - H(q-2)` is one.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QIndex(f64);

impl QIndex {
    /// The classical limit marker.
    pub const ONE: QIndex = QIndex(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if Self::in_window(q) {
            Ok(QIndex(q))
        } else {
            Err(Error::InvalidParameter(format!(
                "entropic index q = {q} outside [1, 2)"
            )))
        }
    }

    /// Whether `H(q-1) - H(q-2)` equals one. False for NaN.
    pub fn in_window(q: f64) -> bool {
        (1.0..2.0).contains(&q)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }

    /// `q - 1`.
    #[inline]
    pub fn excess(self) -> f64 {
        self.0 - 1.0
    }
}

impl TryFrom<f64> for QIndex {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        QIndex::new(q)
    }
}

impl From<QIndex> for f64 {
    fn from(q: QIndex) -> f64 {
        q.0
    }
}

impl fmt::Display for QIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// q-exponential `[1 + (1-q) u]^{1/(1-q)}`, `exp(u)` at `q = 1`.
pub fn q_exp(u: Complex64, q: QIndex) -> Result<Complex64> {
    if q.is_classical() {
        return Ok(u.exp());
    }
    let one_minus_q = 1.0 - q.value();
    let w = u * one_minus_q;
    if w == Complex64::new(-1.0, 0.0) {
        return Err(Error::Domain {
            function: "q_exp",
            detail: format!("1 + (1-q)u = 0 at u = {u}, q = {q}"),
        });
    }
    Ok((ln_1p(w) / one_minus_q).exp())
}

/// `ln(1 + w)` on the principal branch, accurate for small `w`.
fn ln_1p(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re > -1.0 {
        return Complex64::new(w.re.ln_1p(), 0.0);
    }
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}

/// `exp(w) - 1`, accurate for small `w`.
fn exp_m1(w: Complex64) -> Complex64 {
    let s = (0.5 * w.im).sin();
    Complex64::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * s * s,
        w.re.exp() * w.im.sin(),
    )
}

/// q-logarithm `(v^{1-q} - 1)/(1-q)`, `ln v` at `q = 1`.
pub fn q_log(v: Complex64, q: QIndex) -> Result<Complex64> {
    if v == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain {
            function: "q_log",
            detail: "argument is zero".into(),
        });
    }
    if q.is_classical() {
        return Ok(v.ln());
    }
    let one_minus_q = 1.0 - q.value();
    Ok(exp_m1(v.ln() * one_minus_q) / one_minus_q)
}

/// Transform kernel `{1 - (1-q) p x fx^{q-1}}^{1/(1-q)}`.
///
/// `fx` is the value of the transformed function at `x`. With `fx = 0` and
/// `q > 1` the kernel is 1 by continuity.
pub fn kernel(x: f64, p: ComplexPoint, q: QIndex, fx: f64) -> Result<Complex64> {
    if fx < 0.0 || fx.is_nan() {
        return Err(Error::Domain {
            function: "kernel",
            detail: format!("f(x) = {fx} is negative"),
        });
    }
    if x == 0.0 || (fx == 0.0 && !q.is_classical()) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let weight = if q.is_classical() {
        1.0
    } else {
        fx.powf(q.excess())
    };
    q_exp(-p * (x * weight), q)
}

/// Kernel evaluation for the quadrature inner loops, where `Re(p x) >= 0` is
/// guaranteed by the caller; real arguments stay on the real `powf` path.
#[inline]
pub(crate) fn kernel_fast(x: f64, p: ComplexPoint, q: QIndex, fx: f64) -> Complex64 {
    if x == 0.0 || (fx == 0.0 && !q.is_classical()) {
        return Complex64::new(1.0, 0.0);
    }
    if q.is_classical() {
        return (-p * x).exp();
    }
    let s = q.excess();
    let y = x * fx.powf(s);
    if p.im == 0.0 {
        let base = 1.0 + s * p.re * y;
        return Complex64::new(base.powf(-1.0 / s), 0.0);
    }
    let base = Complex64::new(1.0 + s * p.re * y, s * p.im * y);
    debug_assert!(base.re >= 1.0 || p.re * x < 0.0, "kernel base left the right half-plane");
    principal_pow(base, -1.0 / s)
}

/// `z^e` on the principal branch; real positive `z` avoids the polar detour.
#[inline]
pub(crate) fn principal_pow(z: Complex64, e: f64) -> Complex64 {
    if z.im == 0.0 && z.re > 0.0 {
        Complex64::new(z.re.powf(e), 0.0)
    } else {
        let (r, theta) = z.to_polar();
        Complex64::from_polar(r.powf(e), theta * e)
    }
}

/// Width and index of a q-Gaussian density, together with its normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QGaussianParams {
    pub alpha: f64,
    pub qprime: QIndex,
    pub c_q: f64,
}

impl QGaussianParams {
    pub fn new(alpha: f64, qprime: QIndex) -> Result<Self> {
        Ok(QGaussianParams {
            alpha,
            qprime,
            c_q: c_q(alpha, qprime)?,
        })
    }
}

/// Normalisation `C_{q'}` of the q-Gaussian:
/// `sqrt((q'-1) alpha) / B(1/2, 1/(q'-1) - 1/2)`, or `sqrt(alpha/pi)` at `q' = 1`.
pub fn c_q(alpha: f64, qprime: QIndex) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "q-Gaussian width alpha = {alpha} must be positive"
        )));
    }
    if qprime.is_classical() {
        return Ok((alpha / std::f64::consts::PI).sqrt());
    }
    let s = qprime.excess();
    let b_arg = 1.0 / s - 0.5;
    if b_arg <= 0.0 {
        return Err(Error::Domain {
            function: "c_q",
            detail: format!("beta argument 1/(q'-1) - 1/2 = {b_arg} is not positive"),
        });
    }
    let b = specfun::beta_fn(0.5, b_arg)?;
    Ok((s * alpha).sqrt() / b.value.re)
}

/// q-Gaussian density `C [1 + (q'-1) alpha x^2]^{1/(1-q')}`.
pub fn q_gaussian(x: f64, params: &QGaussianParams) -> f64 {
    let s = params.qprime.excess();
    if s == 0.0 {
        params.c_q * (-params.alpha * x * x).exp()
    } else {
        params.c_q * (1.0 + s * params.alpha * x * x).powf(-1.0 / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(v: f64) -> QIndex {
        QIndex::new(v).unwrap()
    }

    #[test]
    fn q_index_window() {
        assert!(QIndex::new(1.0).is_ok());
        assert!(QIndex::new(1.999).is_ok());
        assert!(QIndex::new(2.0).is_err());
        assert!(QIndex::new(0.999).is_err());
        assert!(QIndex::new(f64::NAN).is_err());
    }

    #[test]
    fn q_exp_values() {
        assert_eq!(q_exp(c(0.0, 0.0), q(1.5)).unwrap(), c(1.0, 0.0));
        // 1.5^-2
        let v = q_exp(c(-1.0, 0.0), q(1.5)).unwrap();
        assert!((v.re - 0.444_444_444_444_444_4).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn q_exp_classical_limit() {
        let qq = q(1.0 + 1e-8);
        for i in 0..=40 {
            let u = -2.0 + 0.1 * i as f64;
            for im in [0.0, 0.7, -1.3] {
                let z = c(u, im);
                if z.norm() > 2.0 {
                    continue;
                }
                let a = q_exp(z, qq).unwrap();
                let b = z.exp();
                assert!((a - b).norm() / b.norm() < 1e-6, "u = {z}");
            }
        }
        assert_eq!(q_exp(c(0.3, 0.2), QIndex::ONE).unwrap(), c(0.3, 0.2).exp());
    }

    #[test]
    fn q_exp_pole() {
        // 1 + (1 - 1.5) * 2 = 0
        assert!(matches!(
            q_exp(c(2.0, 0.0), q(1.5)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn q_log_values() {
        assert!(q_log(c(1.0, 0.0), q(1.5)).unwrap().norm() < 1e-16);
        let v = q_exp(c(0.7, 0.0), q(1.3)).unwrap();
        assert!((q_log(v, q(1.3)).unwrap() - c(0.7, 0.0)).norm() < 1e-12);
        let l = q_log(c(2.5, 0.0), q(1.0 + 1e-9)).unwrap();
        assert!((l.re - 2.5f64.ln()).abs() < 1e-8);
        assert!(q_log(c(0.0, 0.0), q(1.2)).is_err());
    }

    #[test]
    fn kernel_edge_cases() {
        let p = c(1.3, -0.4);
        for qq in [1.0, 1.3, 1.9] {
            assert_eq!(kernel(0.0, p, q(qq), 0.7).unwrap(), c(1.0, 0.0));
        }
        assert_eq!(kernel(2.0, p, q(1.5), 0.0).unwrap(), c(1.0, 0.0));
        let k = kernel(1.7, p, q(1.4), 1.0).unwrap();
        let e = q_exp(-p * 1.7, q(1.4)).unwrap();
        assert!((k - e).norm() < 1e-15);
        assert!(kernel(1.0, p, q(1.4), -0.1).is_err());
    }

    #[test]
    fn kernel_classical_limit() {
        let qq = q(1.0 + 1e-8);
        for i in 0..50 {
            let x = 0.2 * i as f64;
            let k = kernel(x, c(1.0, 0.0), qq, 0.3).unwrap();
            assert!((k.re - (-x).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn kernel_converges_linearly_in_q_minus_one() {
        // sup_x |kernel(x,1,q,1) - e^{-x}| on [0,10] against (q-1)
        let eps = [1e-1, 1e-2, 1e-3, 1e-4];
        let errs: Vec<f64> = eps
            .iter()
            .map(|&e| {
                (0..=1000)
                    .map(|i| {
                        let x = 0.01 * i as f64;
                        (kernel(x, c(1.0, 0.0), q(1.0 + e), 1.0).unwrap().re - (-x).exp()).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        let slope = crate::stats::loglog_slope(&eps, &errs);
        assert!((slope - 1.0).abs() <= 0.2, "slope {slope}");
    }

    #[test]
    fn kernel_fast_matches_kernel() {
        for &qq in &[1.0, 1.2, 1.7] {
            for &p in &[c(0.5, 0.0), c(2.0, 1.0), c(1.0, -3.0)] {
                for &fx in &[0.0, 0.3, 1.0, 4.0] {
                    for i in 0..20 {
                        let x = 0.37 * i as f64;
                        let a = kernel(x, p, q(qq), fx).unwrap();
                        let b = kernel_fast(x, p, q(qq), fx);
                        assert!((a - b).norm() <= 1e-14 * a.norm().max(1e-300));
                    }
                }
            }
        }
    }

    #[test]
    fn c_q_values() {
        assert!((c_q(1.0, QIndex::ONE).unwrap() - 0.564_189_583_547_756_3).abs() < 1e-15);
        assert!((c_q(4.0, QIndex::ONE).unwrap() - 2.0 * c_q(1.0, QIndex::ONE).unwrap()).abs() < 1e-15);
        // sqrt(0.5) / B(1/2, 3/2) = sqrt(0.5) / (pi/2)
        let expected = 0.5f64.sqrt() / (std::f64::consts::PI / 2.0);
        assert!((c_q(1.0, q(1.5)).unwrap() - expected).abs() < 1e-14);
        assert!(c_q(0.0, q(1.5)).is_err());
    }

    #[test]
    fn q_gaussian_has_unit_mass() {
        use crate::quadrature::{integrate_semi_infinite, Decay, QuadratureConfig};
        for &(alpha, qp) in &[(1.0, 1.0), (0.7, 1.2), (1.0, 1.5), (2.5, 1.8), (1.0, 1.95)] {
            let g = QGaussianParams::new(alpha, q(qp)).unwrap();
            let decay = if qp == 1.0 { Decay::Exponential } else { Decay::PowerLaw(2.0 / (qp - 1.0)) };
            let half = integrate_semi_infinite(|x| Ok(q_gaussian(x, &g).into()), decay, &[], &QuadratureConfig::default()).unwrap();
            assert!((2.0 * half.value.re - 1.0).abs() < 1e-9, "alpha {alpha} q' {qp}: {}", 2.0 * half.value.re);
        }
    }

    #[test]
    fn q_gaussian_shape() {
        let g = QGaussianParams::new(1.0, q(1.5)).unwrap();
        assert_eq!(q_gaussian(0.0, &g), g.c_q);
        assert_eq!(q_gaussian(1.3, &g), q_gaussian(-1.3, &g));
        let near = QGaussianParams::new(1.0, q(1.0 + 1e-9)).unwrap();
        for i in 0..30 {
            let x = 0.1 * i as f64;
            let classical = (1.0 / std::f64::consts::PI).sqrt() * (-x * x).exp();
            assert!((q_gaussian(x, &near) - classical).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn q_exp_q_log_round_trip(re in 0.05f64..5.0, im in -5.0f64..5.0, qq in 1.0f64..1.95) {
            let v = c(re, im);
            let qq = q(qq);
            let back = q_exp(q_log(v, qq).unwrap(), qq).unwrap();
            prop_assert!((back - v).norm() <= 1e-10 * v.norm().max(1.0));
        }

        #[test]
        fn kernel_factorises_through_q_exp(x in 0.0f64..20.0, fx in 1e-6f64..10.0,
                                           re in 0.0f64..5.0, im in -5.0f64..5.0, qq in 1.0f64..1.95) {
            let p = c(re, im);
            let qq = q(qq);
            let k = kernel(x, p, qq, fx).unwrap();
            let e = q_exp(-p * x * fx.powf(qq.excess()), qq).unwrap();
            prop_assert!((k - e).norm() <= 1e-13 * e.norm().max(1e-300));
        }
    }
}
