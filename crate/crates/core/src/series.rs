//! Expansion of the transform in powers of `q - 1`.
//!
//! The kernel is written as `h = exp(sum_n g(x,p,n) (q-1)^n)` with
//!
//! ```text
//! g(x,p,n) = sum_{m=0}^{n} (-1)^(n+1-m) (n-m+1)^(m-1) / m! (p x)^(n-m+1) ln^m f(x),
//! ```
//!
//! and the first-order transform is
//! `L = G(p) + [p^2/2 G''(p) + p d/dp d/dbeta G(p, beta)]_(beta=1) (q-1)`,
//! where `G(p, beta)` is the branch-windowed classical transform of `f^beta`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{self, ComplexPoint, HalfPlane, QIndex};
use crate::quadrature::{integrate_semi_infinite, Decay, QuadratureConfig};
use crate::transform::{self, FunctionSpec, Prepared, Tail};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 12;
/// Largest `q - 1` accepted by [`first_order_transform`].
pub const FIRST_ORDER_MAX_EXCESS: f64 = 0.15;
/// Step of the central difference in `beta`.
pub const BETA_STEP: f64 = 1e-5;

/// Truncation order `N` of the exponent sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesOrder(usize);

impl SeriesOrder {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "series order {n_max} exceeds {MAX_ORDER}"
            )));
        }
        Ok(SeriesOrder(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// Coefficient `g(x, p, n)` of `(q-1)^n` in the exponent of the kernel, for
/// `f(x) = fx > 0`.
pub fn g_coeff(x: f64, p: ComplexPoint, n: usize, fx: f64) -> Result<Complex64> {
    if !(fx > 0.0) {
        return Err(Error::Domain {
            function: "g_coeff",
            detail: format!("ln f(x) needs f(x) > 0 (got {fx})"),
        });
    }
    let px = p * x;
    let lf = fx.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..=n {
        let k = n - m + 1;
        let sign = if (n + 1 - m) % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * (k as f64).powi(m as i32 - 1) / factorial(m) * lf.powi(m as i32);
        sum += px.powu(k as u32) * c;
    }
    Ok(sum)
}

/// Kernel from the exponent series truncated after `(q-1)^N`.
///
/// Fails with [`Error::Unstable`] when the last retained term is larger than
/// the first, i.e. the series is not converging at this `(x, p, q)`.
pub fn kernel_series(x: f64, p: ComplexPoint, q: QIndex, fx: f64, order: SeriesOrder) -> Result<Complex64> {
    let s = q.excess();
    let first = g_coeff(x, p, 0, fx)?;
    let mut exponent = first;
    let mut last = first;
    let mut w = 1.0;
    for n in 1..=order.n_max() {
        w *= s;
        last = g_coeff(x, p, n, fx)? * w;
        exponent += last;
    }
    if order.n_max() > 0 && last.norm() > first.norm() {
        return Err(Error::Unstable(format!(
            "term of order {} ({:e}) exceeds the leading term ({:e}) at x = {x}, p = {p}, q = {q}",
            order.n_max(),
            last.norm(),
            first.norm()
        )));
    }
    Ok(exponent.exp())
}

/// `G(p)`: branch-windowed classical transform of `f`.
pub fn g_big(f: &FunctionSpec, p: ComplexPoint, cfg: &QuadratureConfig) -> Result<Complex64> {
    Ok(transform::classical_laplace(f, p, cfg)?.value)
}

/// `G(p, beta)`: branch-windowed classical transform of `f^beta`.
pub fn g_big_beta(f: &FunctionSpec, p: ComplexPoint, beta: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    Ok(transform::classical_laplace_powered(f, p, beta, cfg)?.value)
}

/// Branch-windowed classical transform of `w(f(x))` for a pointwise map `w`
/// with `w(0) = 0` that preserves the tail class of `f`.
fn classical_mapped<W>(f: &Prepared, p: ComplexPoint, w: W, cfg: &QuadratureConfig) -> Result<Complex64>
where
    W: Fn(f64) -> f64,
{
    let (g, p, sign) = match qmath::half_plane(p) {
        HalfPlane::Right => (f.clone(), p, 1.0),
        HalfPlane::Left => (f.mirrored(), -p, -1.0),
        HalfPlane::Axis => return Err(Error::DegenerateAxis { re: p.re, im: p.im }),
    };
    let decay = match g.tail() {
        Tail::Zero => return Ok(Complex64::new(0.0, 0.0)),
        Tail::Compact(end) => Decay::Compact(end),
        _ => Decay::Exponential,
    };
    let integrand = |x: f64| -> Result<Complex64> {
        let fx = g.eval(x);
        if fx == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = (-p * x).exp() * w(fx);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { x })
        }
    };
    let r = integrate_semi_infinite(integrand, decay, &g.breakpoints(), cfg)?;
    Ok(r.value * sign)
}

/// First-order transform `G + [p^2/2 G'' + p d/dp d/dbeta G]_(beta=1) (q-1)`.
///
/// `G''` uses the five-point stencil with step `1e-3 max(1, |p|)`. The
/// `beta` derivative is the central difference with step [`BETA_STEP`],
/// taken under the integral, and is then differentiated in `p` by the
/// five-point first-derivative stencil.
pub fn first_order_transform(
    f: &FunctionSpec,
    p: ComplexPoint,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let q = QIndex::new(q)?;
    let s = q.excess();
    if s > FIRST_ORDER_MAX_EXCESS {
        return Err(Error::Unsupported {
            function: "first_order_transform",
            detail: format!("q - 1 = {s} exceeds {FIRST_ORDER_MAX_EXCESS}"),
        });
    }
    let prep = f.prepare()?;
    // the differences below need a few more digits than the final value
    let tight = QuadratureConfig {
        rel_tol: cfg.rel_tol.min(1e-13),
        abs_tol: cfg.abs_tol.min(1e-15),
        max_subdivisions: cfg.max_subdivisions.max(4000),
        ..*cfg
    };
    let g = |z: ComplexPoint| classical_mapped(&prep, z, |v| v, &tight);
    let g0 = g(p)?;
    if s == 0.0 {
        return Ok(g0);
    }
    let h = 1e-3 * p.norm().max(1.0);
    if p.re.abs() <= 2.0 * h {
        return Err(Error::Unsupported {
            function: "first_order_transform",
            detail: format!("stencil around p = {p} would cross Re(p) = 0"),
        });
    }
    let stencil = |k: f64| p + Complex64::new(k * h, 0.0);
    let (gm2, gm1, gp1, gp2) = (g(stencil(-2.0))?, g(stencil(-1.0))?, g(stencil(1.0))?, g(stencil(2.0))?);
    let g2 = (-gp2 + gp1 * 16.0 - g0 * 30.0 + gm1 * 16.0 - gm2) / (12.0 * h * h);

    let d = BETA_STEP;
    let gb = |z: ComplexPoint| {
        classical_mapped(&prep, z, |v| (v.powf(1.0 + d) - v.powf(1.0 - d)) / (2.0 * d), &tight)
    };
    let (bm2, bm1, bp1, bp2) = (gb(stencil(-2.0))?, gb(stencil(-1.0))?, gb(stencil(1.0))?, gb(stencil(2.0))?);
    let gpb = (bm2 - bm1 * 8.0 + bp1 * 8.0 - bp2) / (12.0 * h);

    Ok(g0 + (p * p * 0.5 * g2 + p * gpb) * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::kernel;
    use crate::stats::loglog_slope;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(v: f64) -> QIndex {
        QIndex::new(v).unwrap()
    }

    #[test]
    fn low_order_coefficients() {
        let p = c(1.3, -0.7);
        let (x, fx) = (0.8, 2.5);
        assert!((g_coeff(x, p, 0, fx).unwrap() + p * x).norm() < 1e-15);
        let px = p * x;
        let g1 = px * px / 2.0 - px * fx.ln();
        assert!((g_coeff(x, p, 1, fx).unwrap() - g1).norm() < 1e-14);
        for n in 0..6 {
            assert_eq!(g_coeff(0.0, p, n, fx).unwrap(), c(0.0, 0.0));
        }
        assert!(g_coeff(1.0, p, 2, 0.0).is_err());
    }

    #[test]
    fn order_zero_is_exponential() {
        let p = c(0.9, 0.4);
        for i in 0..20 {
            let x = 0.25 * i as f64;
            let v = kernel_series(x, p, q(1.3), 0.7, SeriesOrder::new(0).unwrap()).unwrap();
            assert_eq!(v, (-p * x).exp());
        }
        assert!(SeriesOrder::new(13).is_err());
    }

    #[test]
    fn order_six_matches_kernel() {
        let n6 = SeriesOrder::new(6).unwrap();
        for &p in &[c(1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)] {
            for i in 0..=50 {
                let x = 5.0 / p.norm() * i as f64 / 50.0;
                let a = kernel_series(x, p, q(1.05), 1.0, n6).unwrap();
                let b = kernel(x, p, q(1.05), 1.0).unwrap();
                assert!((a - b).norm() < 1e-6, "p={p} x={x}: {}", (a - b).norm());
            }
        }
    }

    #[test]
    fn truncation_error_slopes() {
        let qs = [0.01, 0.02, 0.04, 0.06, 0.08, 0.1];
        for n in 1..=3 {
            let order = SeriesOrder::new(n).unwrap();
            let errs: Vec<f64> = qs
                .iter()
                .map(|&s| {
                    (0..=200)
                        .map(|i| {
                            let x = 5.0 * i as f64 / 200.0;
                            let a = kernel_series(x, c(1.0, 0.0), q(1.0 + s), 1.0, order).unwrap();
                            let b = kernel(x, c(1.0, 0.0), q(1.0 + s), 1.0).unwrap();
                            (a - b).norm()
                        })
                        .fold(0.0, f64::max)
                })
                .collect();
            let slope = loglog_slope(&qs, &errs);
            assert!((slope - (n as f64 + 1.0)).abs() <= 0.3, "N={n}: slope {slope}");
        }
    }

    #[test]
    fn unstable_series_is_reported() {
        let r = kernel_series(30.0, c(1.0, 0.0), q(1.5), 1.0, SeriesOrder::new(4).unwrap());
        assert!(matches!(r, Err(Error::Unstable(_))));
    }

    /// Kernel from the exponential expanded into products of coefficients,
    /// `e^{-px} [1 + sum_l (1/l!) sum_{compositions} prod g (q-1)^s]`,
    /// truncated at total order `n`.
    fn multinomial_kernel(x: f64, p: Complex64, s: f64, fx: f64, n: usize) -> Complex64 {
        fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
            if parts == 0 {
                if total == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for first in 1..=total {
                cur.push(first);
                compositions(total - first, parts - 1, out, cur);
                cur.pop();
            }
        }
        let g: Vec<Complex64> = (0..=n).map(|k| g_coeff(x, p, k, fx).unwrap()).collect();
        let mut sum = c(1.0, 0.0);
        for l in 1..=n {
            for total in l..=n {
                let mut comps = Vec::new();
                compositions(total, l, &mut comps, &mut Vec::new());
                for comp in comps {
                    let prod: Complex64 = comp.iter().map(|&k| g[k]).product();
                    sum += prod * s.powi(total as i32) / factorial(l);
                }
            }
        }
        (-p * x).exp() * sum
    }

    #[test]
    fn multinomial_form_agrees_to_order() {
        let (x, p, fx) = (1.3, c(0.8, 0.2), 1.7);
        for n in 1..=3 {
            let order = SeriesOrder::new(n).unwrap();
            let diffs: Vec<f64> = [0.01, 0.02, 0.04]
                .iter()
                .map(|&s| (multinomial_kernel(x, p, s, fx, n) - kernel_series(x, p, q(1.0 + s), fx, order).unwrap()).norm())
                .collect();
            let slope = loglog_slope(&[0.01, 0.02, 0.04], &diffs);
            assert!(slope > n as f64 + 0.7, "N={n}: slope {slope}");
        }
    }

    #[test]
    fn beta_collapse() {
        let cfg = QuadratureConfig::default();
        for f in [
            FunctionSpec::HeavisideStep,
            FunctionSpec::q_gaussian(1.0, 1.5),
            FunctionSpec::q_exp_density(1.0, 1.3),
            FunctionSpec::PowerWindow {
                lambda: 1.0,
                beta: 2.0,
                a: 0.5,
                b: 1.5,
            },
        ] {
            let p = c(1.2, 0.3);
            let a = g_big_beta(&f, p, 1.0, &cfg).unwrap();
            let b = g_big(&f, p, &cfg).unwrap();
            assert!((a - b).norm() <= 1e-10 * b.norm());
        }
        let step = g_big_beta(&FunctionSpec::HeavisideStep, c(2.0, 0.0), 2.7, &cfg).unwrap();
        assert!((step.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn first_order_at_classical_index() {
        let cfg = QuadratureConfig::default();
        let f = FunctionSpec::q_gaussian(1.0, 1.5);
        let a = first_order_transform(&f, c(1.0, 0.0), 1.0, &cfg).unwrap();
        let b = g_big(&f, c(1.0, 0.0), &cfg).unwrap();
        assert!((a - b).norm() < 1e-10);
        assert!(first_order_transform(&f, c(1.0, 0.0), 1.2, &cfg).is_err());
    }

    #[test]
    fn first_order_residual_is_quadratic() {
        let cfg = QuadratureConfig::default();
        let qs = [0.02, 0.04, 0.06, 0.08, 0.1];
        for (f, p) in [
            (FunctionSpec::HeavisideStep, c(2.0, 0.0)),
            (FunctionSpec::HeavisideStep, c(1.0, 0.0)),
            (FunctionSpec::q_gaussian(1.0, 1.5), c(1.0, 0.0)),
        ] {
            let errs: Vec<f64> = qs
                .iter()
                .map(|&s| {
                    let a = first_order_transform(&f, p, 1.0 + s, &cfg).unwrap();
                    let b = transform::q_laplace_bilateral(&f, p, 1.0 + s, &cfg).unwrap().value;
                    (a - b).norm()
                })
                .collect();
            let slope = loglog_slope(&qs, &errs);
            assert!((slope - 2.0).abs() <= 0.2, "{f:?}: slope {slope}, errors {errs:?}");
        }
    }

    #[test]
    fn first_order_q_gaussian_close_to_quadrature() {
        let cfg = QuadratureConfig::default();
        let f = FunctionSpec::q_gaussian(1.0, 1.5);
        let a = first_order_transform(&f, c(1.0, 0.0), 1.05, &cfg).unwrap();
        let b = transform::q_laplace_bilateral(&f, c(1.0, 0.0), 1.05, &cfg).unwrap().value;
        assert!((a - b).norm() < 5e-3 * b.norm());
    }

    proptest! {
        #[test]
        fn first_coefficient_matches_closed_expression(x in 0.0f64..10.0, re in -3.0f64..3.0, im in -3.0f64..3.0, fx in 1e-3f64..50.0) {
            let p = c(re, im);
            let px = p * x;
            let expected = px * px / 2.0 - px * fx.ln();
            let got = g_coeff(x, p, 1, fx).unwrap();
            prop_assert!((got - expected).norm() <= 1e-13 * expected.norm().max(1.0));
        }
    }
}
