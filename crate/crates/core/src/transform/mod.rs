//! The q-Laplace transform
//!
//! ```text
//! L(p, q) = [H(q-1) - H(q-2)] { H[Re p] int_0^inf f(x) K(x) dx
//!                              - H[-Re p] int_-inf^0 f(x) K(x) dx },
//! K(x) = {1 - (1-q) p x f(x)^(q-1)}^(1/(1-q)),
//! ```
//!
//! evaluated by adaptive quadrature, together with its unilateral, fixed-index,
//! equivalence-class and classical (`q = 1`) variants.
//!
//! Every entry point takes the raw index `q`: outside `[1, 2)` the window
//! factor vanishes and the value is zero with [`Branch::OutsideQWindow`].
//! On the left half-plane the integral over `(-inf, 0]` is computed as the
//! right-branch integral of the mirrored function at `-p`.

mod family;
mod function;

use num_complex::Complex64;
use serde::Serialize;

pub use family::{equivalence_family, window_mass};
pub use function::FunctionSpec;
pub(crate) use function::{Prepared, Tail};

pub use crate::quadrature::{integrate_semi_infinite, Decay, Integral, QuadratureConfig, TailPolicy};

use crate::error::{Error, Result};
use crate::qmath::{self, ComplexPoint, HalfPlane, QIndex};

/// Integrals whose integrand decays no faster than `x^-MIN_DECAY` are
/// rejected as divergent.
pub const MIN_DECAY: f64 = 1.05;

/// Which Heaviside factor produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Right,
    Left,
    /// `p = 0`: the kernel is one and both half-lines contribute.
    Both,
    OutsideQWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformValue {
    pub value: Complex64,
    pub abs_err: f64,
    /// False when `abs_err` exceeds the requested tolerance; `value` is still
    /// the best estimate.
    pub converged: bool,
    pub branch: Branch,
}

impl TransformValue {
    fn zero(branch: Branch) -> Self {
        TransformValue {
            value: Complex64::new(0.0, 0.0),
            abs_err: 0.0,
            converged: true,
            branch,
        }
    }

    /// Turns a non-converged value into [`Error::NotConverged`].
    pub fn require_converged(self, cfg: &QuadratureConfig) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                abs_err: self.abs_err,
                tolerance: cfg.tolerance(self.value),
                subdivisions: cfg.max_subdivisions,
            })
        }
    }
}

/// Checks `q` and returns `None` when the window factor vanishes.
fn window(q: f64) -> Result<Option<QIndex>> {
    if q.is_nan() {
        return Err(Error::InvalidParameter("entropic index q is NaN".into()));
    }
    Ok(QIndex::new(q).ok())
}

fn check_point(p: ComplexPoint) -> Result<()> {
    if !p.re.is_finite() || !p.im.is_finite() {
        return Err(Error::InvalidParameter(format!("transform variable p = {p} is not finite")));
    }
    Ok(())
}

/// Decay of `f(x) K(x)` given the tail of `f`, for `Re(p) > 0`.
fn integrand_decay(tail: Tail, q: QIndex) -> Result<Option<Decay>> {
    let gamma = match tail {
        Tail::Zero => return Ok(None),
        Tail::Compact(end) => return Ok(Some(Decay::Compact(end))),
        Tail::Exponential => return Ok(Some(Decay::Exponential)),
        _ if q.is_classical() => return Ok(Some(Decay::Exponential)),
        Tail::Flat => 1.0 / q.excess(),
        // x f^(q-1) grows unless f falls off as fast as x^(-1/(q-1))
        Tail::Power(delta) => {
            if delta * q.excess() < 1.0 {
                1.0 / q.excess()
            } else {
                delta
            }
        }
    };
    if gamma <= MIN_DECAY {
        return Err(Error::Divergence(format!(
            "integrand decays like x^-{gamma:.4}, needs an exponent above {MIN_DECAY} (q = {q})"
        )));
    }
    Ok(Some(Decay::PowerLaw(gamma)))
}

/// Decay of `f` alone, for the `p = 0` integral.
fn function_decay(tail: Tail) -> Result<Option<Decay>> {
    match tail {
        Tail::Zero => Ok(None),
        Tail::Compact(end) => Ok(Some(Decay::Compact(end))),
        Tail::Exponential => Ok(Some(Decay::Exponential)),
        Tail::Flat => Err(Error::Divergence(
            "at p = 0 the transform is the integral of f, which does not exist for a non-vanishing tail".into(),
        )),
        Tail::Power(d) if d <= MIN_DECAY => Err(Error::Divergence(format!(
            "at p = 0 the integrand decays like x^-{d:.4}"
        ))),
        Tail::Power(d) => Ok(Some(Decay::PowerLaw(d))),
    }
}

/// `int_0^inf f(x) K(x, p, q, f(x)) dx` for `Re(p) > 0`, or `int_0^inf f`
/// at `p = 0`.
pub(crate) fn right_integral(
    f: &Prepared,
    p: ComplexPoint,
    q: QIndex,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let zero = p == Complex64::new(0.0, 0.0);
    let decay = if zero {
        function_decay(f.tail())?
    } else {
        integrand_decay(f.tail(), q)?
    };
    let Some(decay) = decay else {
        return Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            abs_err: 0.0,
            converged: true,
            subdivisions: 0,
        });
    };
    let mut bps = f.breakpoints();
    if !zero {
        let scale = 1.0 / p.norm();
        if scale.is_finite() && scale > 1e-3 && scale < 1e3 {
            bps.push(scale);
            bps.sort_by(f64::total_cmp);
        }
    }
    let integrand = |x: f64| -> Result<Complex64> {
        let fx = f.eval(x);
        if fx == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = if zero {
            Complex64::new(fx, 0.0)
        } else {
            qmath::kernel_fast(x, p, q, fx) * fx
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { x })
        }
    };
    integrate_semi_infinite(integrand, decay, &bps, cfg)
}

fn value_from(i: Integral, sign: f64, branch: Branch, cfg: &QuadratureConfig) -> TransformValue {
    let value = i.value * sign;
    TransformValue {
        value,
        abs_err: i.abs_err,
        converged: i.abs_err <= cfg.tolerance(value),
        branch,
    }
}

/// Bilateral transform of an already prepared function.
pub(crate) fn bilateral_prepared(
    f: &Prepared,
    p: ComplexPoint,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    cfg.validate()?;
    check_point(p)?;
    let Some(q) = window(q)? else {
        return Ok(TransformValue::zero(Branch::OutsideQWindow));
    };
    if p == Complex64::new(0.0, 0.0) {
        let r = right_integral(f, p, q, cfg)?;
        let l = right_integral(&f.mirrored(), p, q, cfg)?;
        // judge convergence per half-line: the difference may cancel
        return Ok(TransformValue {
            value: r.value - l.value,
            abs_err: r.abs_err + l.abs_err,
            converged: r.abs_err <= cfg.tolerance(r.value) && l.abs_err <= cfg.tolerance(l.value),
            branch: Branch::Both,
        });
    }
    match qmath::half_plane(p) {
        HalfPlane::Right => Ok(value_from(right_integral(f, p, q, cfg)?, 1.0, Branch::Right, cfg)),
        HalfPlane::Left => Ok(value_from(
            right_integral(&f.mirrored(), -p, q, cfg)?,
            -1.0,
            Branch::Left,
            cfg,
        )),
        HalfPlane::Axis => Err(Error::DegenerateAxis { re: p.re, im: p.im }),
    }
}

/// Unilateral transform of an already prepared function.
pub(crate) fn unilateral_prepared(
    f: &Prepared,
    p: ComplexPoint,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    cfg.validate()?;
    check_point(p)?;
    let Some(q) = window(q)? else {
        return Ok(TransformValue::zero(Branch::OutsideQWindow));
    };
    if p == Complex64::new(0.0, 0.0) {
        return Ok(value_from(right_integral(f, p, q, cfg)?, 1.0, Branch::Right, cfg));
    }
    match qmath::half_plane(p) {
        HalfPlane::Right => Ok(value_from(right_integral(f, p, q, cfg)?, 1.0, Branch::Right, cfg)),
        HalfPlane::Left => Ok(TransformValue::zero(Branch::Right)),
        HalfPlane::Axis => Err(Error::DegenerateAxis { re: p.re, im: p.im }),
    }
}

/// Bilateral q-Laplace transform `L(p, q)`.
///
/// `Re(p) > 0` integrates `f K` over `[0, inf)`; `Re(p) < 0` gives minus the
/// integral over `(-inf, 0]`; `Re(p) = 0` with `p != 0` is an error. At
/// `p = 0` the kernel is one and the value is `int_0^inf f - int_-inf^0 f`.
pub fn q_laplace_bilateral(
    f: &FunctionSpec,
    p: ComplexPoint,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    bilateral_prepared(&f.prepare()?, p, q, cfg)
}

/// Unilateral transform: the right branch only, zero for `Re(p) < 0`.
pub fn q_laplace_unilateral(
    f: &FunctionSpec,
    p: ComplexPoint,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    unilateral_prepared(&f.prepare()?, p, q, cfg)
}

/// The transform taken at the function's own index: `f` is rebound to index
/// `qprime` (for kinds that carry one) and transformed at `q = qprime`.
pub fn q_laplace_fixed(
    f: &FunctionSpec,
    p: ComplexPoint,
    qprime: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    q_laplace_bilateral(&f.with_index(qprime), p, qprime, cfg)
}

/// The fixed-index transform regarded as a map on equivalence classes: the
/// value on any representative. Identical in value to [`q_laplace_fixed`].
pub fn q_laplace_class(
    representative: &FunctionSpec,
    p: ComplexPoint,
    qprime: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    q_laplace_fixed(representative, p, qprime, cfg)
}

/// Classical bilateral Laplace transform, the `q = 1` member of the family.
pub fn classical_laplace(f: &FunctionSpec, p: ComplexPoint, cfg: &QuadratureConfig) -> Result<TransformValue> {
    q_laplace_bilateral(f, p, 1.0, cfg)
}

/// Classical bilateral transform of `f^beta` (`beta > 0`).
pub fn classical_laplace_powered(
    f: &FunctionSpec,
    p: ComplexPoint,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<TransformValue> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("power beta = {beta} must be positive")));
    }
    bilateral_prepared(&f.prepare()?.powered(beta), p, 1.0, cfg)
}
