//! Closed-form q-Laplace transforms, used as regression targets for the
//! quadrature engine.
//!
//! Every formula reports `supported = false` outside the envelope where it has
//! been validated; the value is NaN then and must not be used.

use num_complex::Complex64;
use serde::Serialize;

use crate::qmath::{self, ComplexPoint, HalfPlane, QIndex};
use crate::specfun::{bessel_y, gamma_real, gauss_2f1, legendre_p, struve_h};
use crate::transform::window_mass;

/// Range of `q'` where the first-order `G` formulas are validated.
pub const G_QPRIME_RANGE: (f64, f64) = (1.3, 1.9);
/// Largest Struve argument accepted by the `G` formulas.
pub const G_MAX_ARGUMENT: f64 = 60.0;
/// Distance from a Gamma pole below which `G` is interpolated in the order.
pub const G_POLE_RADIUS: f64 = 0.05;
const G_POLE_NODES: [f64; 6] = [-0.15, -0.10, -0.05, 0.05, 0.10, 0.15];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormulaId {
    #[serde(rename = "step")]
    Step,
    #[serde(rename = "left_step")]
    LeftStep,
    #[serde(rename = "one")]
    One,
    #[serde(rename = "scaled_step")]
    ScaledStep,
    #[serde(rename = "power_window")]
    PowerWindow,
    #[serde(rename = "power_window_special")]
    PowerWindowSpecial,
    #[serde(rename = "qgauss_fixed")]
    QgaussFixed,
    #[serde(rename = "qgauss_firstorder_G")]
    QgaussFirstorderG,
    #[serde(rename = "qgauss_firstorder_Gbeta")]
    QgaussFirstorderGbeta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormResult {
    pub value: Complex64,
    pub formula_id: FormulaId,
    pub supported: bool,
    /// Why the formula was refused, when `supported` is false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl ClosedFormResult {
    fn ok(value: Complex64, formula_id: FormulaId) -> Self {
        ClosedFormResult {
            value,
            formula_id,
            supported: true,
            reason: None,
        }
    }

    fn real(value: f64, formula_id: FormulaId) -> Self {
        Self::ok(Complex64::new(value, 0.0), formula_id)
    }

    pub(crate) fn unsupported(formula_id: FormulaId, reason: impl Into<String>) -> Self {
        ClosedFormResult {
            value: Complex64::new(f64::NAN, f64::NAN),
            formula_id,
            supported: false,
            reason: Some(reason.into()),
        }
    }

    /// The value if supported.
    pub fn supported_value(&self) -> Option<Complex64> {
        self.supported.then_some(self.value)
    }
}

/// Which step-like function is transformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepVariant {
    /// `H(x)`
    Right,
    /// `H(-x)`
    Left,
    /// `1`
    One,
}

/// Bilateral transform, or the unilateral one keeping the right branch only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sidedness {
    Bilateral,
    Unilateral,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Transform of `H(x)`, `H(-x)` or `1`: `H[+-Re p] / ((2-q) p)`.
pub fn step_transform(p: ComplexPoint, q: QIndex, variant: StepVariant) -> ClosedFormResult {
    let id = match variant {
        StepVariant::Right => FormulaId::Step,
        StepVariant::Left => FormulaId::LeftStep,
        StepVariant::One => FormulaId::One,
    };
    let plane = qmath::half_plane(p);
    if plane == HalfPlane::Axis {
        return ClosedFormResult::unsupported(id, "Re(p) = 0");
    }
    let full = 1.0 / ((2.0 - q.value()) * p);
    let value = match (variant, plane) {
        (StepVariant::Right, HalfPlane::Left) | (StepVariant::Left, HalfPlane::Right) => ZERO,
        _ => full,
    };
    ClosedFormResult::ok(value, id)
}

/// Transform of `q' H(x)` at index `q`: `q'^(2-q) / (2-q) H[Re p] / p`.
pub fn scaled_step_transform(p: ComplexPoint, q: QIndex, qprime: f64) -> ClosedFormResult {
    let id = FormulaId::ScaledStep;
    if !(qprime > 0.0) || !qprime.is_finite() {
        return ClosedFormResult::unsupported(id, format!("scale q' = {qprime} must be positive"));
    }
    match qmath::half_plane(p) {
        HalfPlane::Axis => ClosedFormResult::unsupported(id, "Re(p) = 0"),
        HalfPlane::Left => ClosedFormResult::ok(ZERO, id),
        HalfPlane::Right => {
            let two_q = 2.0 - q.value();
            ClosedFormResult::ok(qprime.powf(two_q) / two_q / p, id)
        }
    }
}

/// [`scaled_step_transform`] with the transform index tied to the scale,
/// `q = q'`.
pub fn scaled_step_class(p: ComplexPoint, qprime: QIndex) -> ClosedFormResult {
    scaled_step_transform(p, qprime, qprime.value())
}

/// Transform of the power window `lambda^beta x^-beta` on `[a, b]`.
///
/// For `s = 1 - beta (q-1) > 0` the hypergeometric functions are taken in
/// `-1/(K x^s)`, for `s < 0` in `-K x^s`, with `K = (q-1) p lambda^(beta (q-1))`.
/// If the preferred representation leaves the supported region of `2F1`
/// the other one is tried. At `s = 0` the kernel is constant on the window
/// and the value is `q_exp(-p lambda) * mass`.
pub fn power_window_transform(
    p: ComplexPoint,
    q: QIndex,
    lambda: f64,
    beta: f64,
    a: f64,
    b: f64,
) -> ClosedFormResult {
    let id = FormulaId::PowerWindow;
    let params_ok = lambda > 0.0 && a > 0.0 && b > a && beta > 0.0 && [lambda, beta, a, b].iter().all(|v| v.is_finite());
    if !params_ok {
        return ClosedFormResult::unsupported(id, "needs lambda > 0, beta > 0 and 0 < a < b");
    }
    match qmath::half_plane(p) {
        HalfPlane::Axis => return ClosedFormResult::unsupported(id, "Re(p) = 0"),
        HalfPlane::Left => return ClosedFormResult::ok(ZERO, id),
        HalfPlane::Right => {}
    }
    if q.is_classical() {
        return ClosedFormResult::unsupported(id, "q = 1");
    }
    let e = q.excess();
    let s = 1.0 - beta * e;
    if s.abs() <= 1e-12 {
        let mass = window_mass(lambda, beta, a, b);
        return match qmath::q_exp(-p * lambda, q) {
            Ok(v) => ClosedFormResult::ok(v * mass, FormulaId::PowerWindowSpecial),
            Err(err) => ClosedFormResult::unsupported(FormulaId::PowerWindowSpecial, err.to_string()),
        };
    }
    if beta == 1.0 {
        return ClosedFormResult::unsupported(id, "beta = 1 gives a logarithmic window");
    }
    if p.im != 0.0 {
        return ClosedFormResult::unsupported(id, "complex p");
    }
    let p = p.re;
    let m = 1.0 / e;
    let k = e * p * lambda.powf(beta * e);
    // x^(1-beta)/(1-beta) 2F1(m, c/s; 1 + c/s; -K x^s), c = 1 - beta
    let small = || -> crate::Result<f64> {
        let c = 1.0 - beta;
        let prim = |x: f64| -> crate::Result<f64> {
            let f = gauss_2f1(m, c / s, 1.0 + c / s, -k * x.powf(s))?;
            Ok(x.powf(c) / c * f.re())
        };
        Ok(lambda.powf(beta) * (prim(b)? - prim(a)?))
    };
    // K^-m x^c/c 2F1(m, c/(-s); 1 + c/(-s); -x^-s / K), c = 1 - m
    let large = || -> crate::Result<f64> {
        let c = 1.0 - m;
        let r = c / -s;
        let prim = |x: f64| -> crate::Result<f64> {
            let f = gauss_2f1(m, r, 1.0 + r, -x.powf(-s) / k)?;
            Ok(x.powf(c) / c * f.re())
        };
        Ok((e * p).powf(-m) * (prim(b)? - prim(a)?))
    };
    let attempt = if s > 0.0 {
        large().or_else(|_| small())
    } else {
        small().or_else(|_| large())
    };
    match attempt {
        Ok(v) => ClosedFormResult::real(v, id),
        Err(err) => ClosedFormResult::unsupported(id, err.to_string()),
    }
}

/// Parameters `gamma` and `mu` of the Legendre form of the q-Gaussian
/// transform at `q' = q`.
pub fn qgauss_fixed_parameters(q: QIndex, alpha: f64) -> crate::Result<(f64, f64)> {
    let cq = qmath::c_q(alpha, q)?;
    let e = q.excess();
    let gamma = cq.powf(e) / 2.0 * (e / alpha).sqrt();
    let mu = 1.0 / (1.0 - q.value()) + 0.5;
    Ok((gamma, mu))
}

/// Transform of the q-Gaussian of index `q` at the same index `q`, through
/// the associated Legendre function of the first kind.
pub fn qgauss_fixed_transform(p: ComplexPoint, q: QIndex, alpha: f64, sidedness: Sidedness) -> ClosedFormResult {
    let id = FormulaId::QgaussFixed;
    if q.is_classical() {
        return ClosedFormResult::unsupported(id, "q = 1");
    }
    let sign = match qmath::half_plane(p) {
        HalfPlane::Axis => return ClosedFormResult::unsupported(id, "Re(p) = 0"),
        HalfPlane::Right => 1.0,
        HalfPlane::Left if sidedness == Sidedness::Unilateral => return ClosedFormResult::ok(ZERO, id),
        HalfPlane::Left => -1.0,
    };
    if p.im != 0.0 {
        return ClosedFormResult::unsupported(id, "complex p");
    }
    let pr = p.re.abs();
    let eval = || -> crate::Result<Option<f64>> {
        let (gamma, mu) = qgauss_fixed_parameters(q, alpha)?;
        let z = gamma * pr;
        if z <= 1.0 {
            return Ok(None);
        }
        let cq = qmath::c_q(alpha, q)?;
        let leg = legendre_p(mu, -1.0 - mu, z)?;
        let pref = cq * gamma_real(-mu) / (q.excess() * alpha).sqrt() * 2f64.powf(-mu - 1.0);
        Ok(Some(pref * (z * z - 1.0).powf(mu / 2.0) * leg.re()))
    };
    match eval() {
        Ok(Some(v)) => ClosedFormResult::real(sign * v, id),
        Ok(None) => ClosedFormResult::unsupported(id, "gamma p <= 1"),
        Err(err) => ClosedFormResult::unsupported(id, err.to_string()),
    }
}

/// `Gamma(nu + 1/2) (2/z)^nu [H_nu(z) - Y_nu(z)]` and the number of digits
/// lost to cancellation in the difference.
fn struve_kernel(nu: f64, z: f64) -> crate::Result<(f64, f64)> {
    let h = struve_h(nu, z)?.re();
    let y = bessel_y(nu, z)?.re();
    let k = h - y;
    let loss = (h.abs().max(y.abs()) / k.abs()).log10().max(0.0);
    Ok((gamma_real(nu + 0.5) * (2.0 / z).powf(nu) * k, loss))
}

/// First-order `G` with its cancellation loss in decimal digits.
///
/// `G(p, q', beta)` is the transform of `f^beta` for the q-Gaussian `f` of
/// index `q'`,
/// `C^beta a^(-1/2) (sqrt(pi)/2) Gamma(nu+1/2) (2/z)^nu [H_nu - Y_nu](z)`
/// with `a = (q'-1) alpha`, `z = p / sqrt(a)`, `nu = 1/2 - beta/(q'-1)`.
/// Within [`G_POLE_RADIUS`] of a pole of `Gamma(nu+1/2)` the product is
/// interpolated in `nu` from six nodes on both sides.
pub fn qgauss_firstorder_g_with_loss(
    p: ComplexPoint,
    qprime: QIndex,
    alpha: f64,
    beta: Option<f64>,
    sidedness: Sidedness,
) -> (ClosedFormResult, f64) {
    let id = if beta.is_some() {
        FormulaId::QgaussFirstorderGbeta
    } else {
        FormulaId::QgaussFirstorderG
    };
    let beta = beta.unwrap_or(1.0);
    let qv = qprime.value();
    if !(G_QPRIME_RANGE.0..=G_QPRIME_RANGE.1).contains(&qv) {
        return (ClosedFormResult::unsupported(id, format!("q' = {qv} outside [1.3, 1.9]")), f64::NAN);
    }
    if !(beta > 0.0) || !beta.is_finite() || !(alpha > 0.0) || !alpha.is_finite() {
        return (ClosedFormResult::unsupported(id, "needs alpha > 0 and beta > 0"), f64::NAN);
    }
    let sign = match qmath::half_plane(p) {
        HalfPlane::Axis => return (ClosedFormResult::unsupported(id, "Re(p) = 0"), f64::NAN),
        HalfPlane::Right => 1.0,
        HalfPlane::Left if sidedness == Sidedness::Unilateral => return (ClosedFormResult::ok(ZERO, id), 0.0),
        HalfPlane::Left => -1.0,
    };
    if p.im != 0.0 {
        return (ClosedFormResult::unsupported(id, "complex p"), f64::NAN);
    }
    let pr = p.re.abs();
    let a = (qv - 1.0) * alpha;
    let z = pr / a.sqrt();
    if z > G_MAX_ARGUMENT || pr / a > G_MAX_ARGUMENT {
        return (ClosedFormResult::unsupported(id, format!("argument {z} too large")), f64::NAN);
    }
    let nu = 0.5 - beta / (qv - 1.0);
    let eval = || -> crate::Result<(f64, f64)> {
        let cq = qmath::c_q(alpha, qprime)?;
        let pref = cq.powf(beta) / a.sqrt() * std::f64::consts::PI.sqrt() / 2.0;
        let pole = (nu + 0.5).round();
        let (phi, loss) = if pole <= 0.0 && (nu + 0.5 - pole).abs() < G_POLE_RADIUS {
            let centre = pole - 0.5;
            let mut nodes = Vec::with_capacity(G_POLE_NODES.len());
            let mut loss: f64 = 0.0;
            for d in G_POLE_NODES {
                let (v, l) = struve_kernel(centre + d, z)?;
                nodes.push((centre + d, v));
                loss = loss.max(l);
            }
            (lagrange(&nodes, nu), loss)
        } else {
            struve_kernel(nu, z)?
        };
        Ok((pref * phi, loss))
    };
    match eval() {
        Ok((v, loss)) if v.is_finite() => (ClosedFormResult::real(sign * v, id), loss),
        Ok(_) => (ClosedFormResult::unsupported(id, "non-finite value"), f64::NAN),
        Err(err) => (ClosedFormResult::unsupported(id, err.to_string()), f64::NAN),
    }
}

/// First-order `G(p, q')`, or `G(p, q', beta)` when `beta` is given.
pub fn qgauss_firstorder_g(
    p: ComplexPoint,
    qprime: QIndex,
    alpha: f64,
    beta: Option<f64>,
    sidedness: Sidedness,
) -> ClosedFormResult {
    qgauss_firstorder_g_with_loss(p, qprime, alpha, beta, sidedness).0
}

fn lagrange(nodes: &[(f64, f64)], x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .map(|(i, &(xi, yi))| {
            let w: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(xj, _))| (x - xj) / (xi - xj))
                .product();
            w * yi
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{g_big, g_big_beta};
    use crate::transform::{equivalence_family, q_laplace_bilateral, q_laplace_unilateral, FunctionSpec, QuadratureConfig};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(v: f64) -> QIndex {
        QIndex::new(v).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn step_values() {
        let r = step_transform(c(2.0, 0.0), q(1.5), StepVariant::Right);
        assert!(r.supported && (r.value - c(1.0, 0.0)).norm() < 1e-15);
        let p = c(0.7, -1.2);
        assert!((step_transform(p, QIndex::ONE, StepVariant::Right).value - 1.0 / p).norm() < 1e-15);
        assert_eq!(step_transform(c(-1.0, 0.3), q(1.2), StepVariant::Right).value, ZERO);
        assert_eq!(step_transform(c(1.0, 0.3), q(1.2), StepVariant::Left).value, ZERO);
        assert!(!step_transform(c(0.0, 1.0), q(1.2), StepVariant::One).supported);
    }

    #[test]
    fn step_matches_quadrature() {
        for &(pv, qv) in &[(c(2.0, 0.0), 1.5), (c(0.5, 1.5), 1.3), (c(-1.2, 0.4), 1.7), (c(3.0, -2.0), 1.0)] {
            for (variant, f) in [
                (StepVariant::Right, FunctionSpec::HeavisideStep),
                (StepVariant::Left, FunctionSpec::LeftStep),
                (StepVariant::One, FunctionSpec::Constant { c: 1.0 }),
            ] {
                let exact = step_transform(pv, q(qv), variant).value;
                let num = q_laplace_bilateral(&f, pv, qv, &cfg()).unwrap();
                assert!((exact - num.value).norm() <= (1e-6f64).max(10.0 * num.abs_err), "{variant:?} p={pv} q={qv}");
            }
        }
    }

    #[test]
    fn step_branch_parity() {
        for &pv in &[c(1.3, 0.2), c(-0.8, -1.1)] {
            let qv = q(1.4);
            let one = step_transform(pv, qv, StepVariant::One).value;
            let sum = step_transform(pv, qv, StepVariant::Right).value + step_transform(pv, qv, StepVariant::Left).value;
            assert!((one - sum).norm() < 1e-15);
        }
    }

    #[test]
    fn scaled_step_values() {
        let r = scaled_step_class(c(1.0, 0.0), q(1.5));
        assert!((r.value.re - 2.0 * 1.5f64.sqrt()).abs() < 1e-14);
        let p = c(1.7, 0.4);
        assert!((scaled_step_transform(p, q(1.3), 1.0).value - step_transform(p, q(1.3), StepVariant::Right).value).norm() < 1e-15);
        assert!((scaled_step_transform(p, QIndex::ONE, 2.5).value - 2.5 / p).norm() < 1e-15);
        let num = q_laplace_bilateral(&FunctionSpec::ScaledStep { c: 1.8 }, p, 1.35, &cfg()).unwrap().value;
        assert!((scaled_step_transform(p, q(1.35), 1.8).value - num).norm() < 1e-6);
        let class = q_laplace_bilateral(&FunctionSpec::ScaledStep { c: 1.5 }, c(1.0, 0.0), 1.5, &cfg()).unwrap().value;
        assert!((r.value - class).norm() < 1e-6);
    }

    fn window(lambda: f64, beta: f64, a: f64, b: f64) -> FunctionSpec {
        FunctionSpec::PowerWindow { lambda, beta, a, b }
    }

    #[test]
    fn power_window_matches_quadrature() {
        let cases = [
            (1.5, 1.0, 3.0, 1.0, 2.0, 1.0),
            (1.2, 1.0, 2.0, 0.5, 3.0, 1.0),
            (1.25, 1.3, 2.5, 0.2, 0.9, 2.0),
            (1.7, 0.8, 4.0, 1.0, 5.0, 0.5),
            (1.1, 1.0, 0.5, 1.0, 4.0, 3.0),
        ];
        for &(qv, lambda, beta, a, b, pv) in &cases {
            let exact = power_window_transform(c(pv, 0.0), q(qv), lambda, beta, a, b);
            assert!(exact.supported, "{:?}", exact.reason);
            let num = q_laplace_bilateral(&window(lambda, beta, a, b), c(pv, 0.0), qv, &cfg()).unwrap();
            let diff = (exact.value - num.value).norm();
            assert!(diff <= 1e-7 * num.value.norm().max(1.0), "q={qv} beta={beta}: {} vs {}", exact.value, num.value);
        }
    }

    #[test]
    fn power_window_special_is_q_exponential() {
        for &(qv, lambda) in &[(1.25, 1.0), (1.5, 1.0), (1.5, 0.7)] {
            let members = equivalence_family(lambda, qv, &[0.1, 0.05]).unwrap();
            for f in members {
                let FunctionSpec::PowerWindow { lambda, beta, a, b } = f else { unreachable!() };
                for &pv in &[c(1.0, 0.0), c(0.4, 0.9)] {
                    let r = power_window_transform(pv, q(qv), lambda, beta, a, b);
                    assert_eq!(r.formula_id, FormulaId::PowerWindowSpecial);
                    let expected = qmath::q_exp(-pv * lambda, q(qv)).unwrap();
                    assert!((r.value - expected).norm() < 1e-10, "q={qv} a={a} b={b}: {} vs {expected}", r.value);
                }
            }
        }
    }

    #[test]
    fn power_window_edges() {
        let v = power_window_transform(c(1.0, 0.0), q(1.5), 1.0, 3.0, 1.0, 1.0 + 1e-9).value.re;
        assert!(v.abs() < 1e-8);
        assert!(!power_window_transform(c(1.0, 0.0), QIndex::ONE, 1.0, 3.0, 1.0, 2.0).supported);
        assert!(!power_window_transform(c(1.0, 0.0), q(1.5), 1.0, 1.0, 1.0, 2.0).supported);
        assert!(!power_window_transform(c(1.0, 0.5), q(1.5), 1.0, 3.0, 1.0, 2.0).supported);
        assert!(!power_window_transform(c(1.0, 0.0), q(1.5), 1.0, 3.0, 2.0, 1.0).supported);
        assert_eq!(power_window_transform(c(-1.0, 0.0), q(1.5), 1.0, 3.0, 1.0, 2.0).value, ZERO);
    }

    #[test]
    fn fixed_parameters() {
        let (gamma, mu) = qgauss_fixed_parameters(q(1.5), 1.0).unwrap();
        let cq = qmath::c_q(1.0, q(1.5)).unwrap();
        assert!((mu + 1.5).abs() < 1e-15);
        assert!((gamma - cq.sqrt() / 2.0 * 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fixed_transform_matches_quadrature() {
        for &(qv, alpha, gp) in &[(1.5, 1.0, 2.0), (1.5, 1.0, 1.3), (1.4, 2.0, 3.0), (1.6, 0.5, 2.5), (1.3, 1.0, 5.0)] {
            let (gamma, _) = qgauss_fixed_parameters(q(qv), alpha).unwrap();
            let pv = c(gp / gamma, 0.0);
            let exact = qgauss_fixed_transform(pv, q(qv), alpha, Sidedness::Bilateral);
            assert!(exact.supported, "{:?}", exact.reason);
            let num = crate::transform::q_laplace_fixed(&FunctionSpec::q_gaussian(alpha, 1.0), pv, qv, &cfg()).unwrap();
            assert!((exact.value - num.value).norm() < 1e-5, "q={qv}: {} vs {}", exact.value, num.value);
            let neg = qgauss_fixed_transform(-pv, q(qv), alpha, Sidedness::Bilateral).value;
            assert!((neg + exact.value).norm() < 1e-15);
            let uni = q_laplace_unilateral(&FunctionSpec::q_gaussian(alpha, qv), pv, qv, &cfg()).unwrap();
            assert!((qgauss_fixed_transform(pv, q(qv), alpha, Sidedness::Unilateral).value - uni.value).norm() < 1e-5);
        }
        assert_eq!(qgauss_fixed_transform(c(-2.0, 0.0), q(1.5), 1.0, Sidedness::Unilateral).value, ZERO);
        assert!(!qgauss_fixed_transform(c(0.1, 0.0), q(1.5), 1.0, Sidedness::Bilateral).supported);
        assert!(!qgauss_fixed_transform(c(5.0, 1.0), q(1.5), 1.0, Sidedness::Bilateral).supported);
    }

    #[test]
    fn first_order_g_matches_quadrature() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-12,
            ..cfg()
        };
        for &(qv, alpha, pv) in &[(1.5, 1.0, 1.0), (1.7, 1.0, 1.0), (1.4, 2.0, 0.6), (1.3, 0.5, 3.0), (1.9, 1.0, 0.2)] {
            let f = FunctionSpec::q_gaussian(alpha, qv);
            let num = g_big(&f, c(pv, 0.0), &cfg).unwrap();
            let r = qgauss_firstorder_g(c(pv, 0.0), q(qv), alpha, None, Sidedness::Bilateral);
            assert!(r.supported, "{:?}", r.reason);
            assert!((r.value - num).norm() < 1e-5, "q'={qv}: {} vs {num}", r.value);
            for beta in [2.0, 1.5] {
                let num = g_big_beta(&f, c(pv, 0.0), beta, &cfg).unwrap();
                let r = qgauss_firstorder_g(c(pv, 0.0), q(qv), alpha, Some(beta), Sidedness::Bilateral);
                assert!(r.supported, "{:?}", r.reason);
                assert!((r.value - num).norm() < 1e-5, "q'={qv} beta={beta}: {} vs {num}", r.value);
            }
        }
    }

    #[test]
    fn first_order_g_beta_one_collapses() {
        let a = qgauss_firstorder_g(c(1.3, 0.0), q(1.7), 1.0, None, Sidedness::Bilateral);
        let b = qgauss_firstorder_g(c(1.3, 0.0), q(1.7), 1.0, Some(1.0), Sidedness::Bilateral);
        assert_eq!(a.value, b.value);
        assert_eq!(a.formula_id, FormulaId::QgaussFirstorderG);
        assert_eq!(b.formula_id, FormulaId::QgaussFirstorderGbeta);
    }

    #[test]
    fn first_order_g_envelope() {
        assert!(!qgauss_firstorder_g(c(1.0, 0.0), q(1.2), 1.0, None, Sidedness::Bilateral).supported);
        assert!(!qgauss_firstorder_g(c(100.0, 0.0), q(1.5), 1.0, None, Sidedness::Bilateral).supported);
        assert!(!qgauss_firstorder_g(c(1.0, 1.0), q(1.5), 1.0, None, Sidedness::Bilateral).supported);
        assert_eq!(qgauss_firstorder_g(c(-1.0, 0.0), q(1.5), 1.0, None, Sidedness::Unilateral).value, ZERO);
        let r = qgauss_firstorder_g(c(1.0, 0.0), q(1.7), 1.0, None, Sidedness::Bilateral).value;
        let l = qgauss_firstorder_g(c(-1.0, 0.0), q(1.7), 1.0, None, Sidedness::Bilateral).value;
        assert_eq!(l, -r);
    }

    #[test]
    fn unsupported_value_is_nan() {
        let r = step_transform(c(0.0, 2.0), q(1.5), StepVariant::Right);
        assert!(r.value.re.is_nan() && r.supported_value().is_none() && r.reason.is_some());
    }

    proptest! {
        #[test]
        fn step_matches_formula(re in 0.05f64..5.0, im in -5.0f64..5.0, qv in 1.0f64..1.95) {
            let p = c(re, im);
            let v = step_transform(p, q(qv), StepVariant::Right).value;
            prop_assert!((v * p * (2.0 - qv) - c(1.0, 0.0)).norm() < 1e-13);
        }
    }
}
