//! Numerical inversion of the classical Laplace transform, used to recover a
//! function from its q-Laplace transform in the limit `q -> 1+`.
//!
//! Two contours are available. The fixed Talbot contour needs the transform
//! analytically continued into the left half-plane; the Bromwich trapezoid
//! rule with Euler summation only evaluates it on `Re(p) > 0`, which is all a
//! unilateral q-Laplace transform provides.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::ComplexPoint;
use crate::transform::{q_laplace_unilateral, FunctionSpec, QuadratureConfig, Tail};

/// Damping exponent of the Bromwich trapezoid rule; discretisation error is
/// about `exp(-A)`.
const BROMWICH_A: f64 = 25.0;
/// Number of partial sums averaged by Euler summation.
const EULER_TERMS: usize = 11;
const MIN_NODES: usize = 8;
/// Cap on `r t` for the default Talbot radius, keeping the rounding
/// amplification `exp(r t)` near `1.6e5`.
const TALBOT_MAX_RT: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionMethod {
    Talbot,
    BromwichTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InversionConfig {
    pub method: InversionMethod,
    pub node_count: usize,
    /// Contour scale in units of `1/t`: the Talbot radius is
    /// `contour_scale * node_count / t` and the Bromwich abscissa
    /// `contour_scale / t`. `None` picks `min(2/5, 12/node_count)` and `A/2`
    /// respectively.
    pub contour_scale: Option<f64>,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            method: InversionMethod::BromwichTrapezoid,
            node_count: 48,
            contour_scale: None,
        }
    }
}

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < MIN_NODES {
            return Err(Error::InvalidParameter(format!(
                "node_count = {} must be at least {MIN_NODES}",
                self.node_count
            )));
        }
        if self.method == InversionMethod::BromwichTrapezoid && self.node_count / 4 <= EULER_TERMS {
            return Err(Error::InvalidParameter(format!(
                "bromwich_trapezoid needs node_count >= {}",
                4 * (EULER_TERMS + 1)
            )));
        }
        if let Some(s) = self.contour_scale {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidParameter(format!("contour_scale = {s} must be positive")));
            }
        }
        Ok(())
    }
}

/// Inverted value with its node-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inversion {
    pub value: f64,
    pub est_error: f64,
}

fn eval_nodes<F>(lfn: &F, nodes: &[Complex64]) -> Result<Vec<Complex64>>
where
    F: Fn(ComplexPoint) -> Result<Complex64> + Sync,
{
    nodes.par_iter().map(|&p| lfn(p)).collect()
}

/// Fixed Talbot rule with `m` nodes; returns the value and the magnitude of
/// the largest summand, which sets the rounding floor.
fn talbot<F>(lfn: &F, t: f64, m: usize, scale: f64) -> Result<(f64, f64)>
where
    F: Fn(ComplexPoint) -> Result<Complex64> + Sync,
{
    let r = scale * m as f64 / t;
    let mut nodes = vec![Complex64::new(r, 0.0)];
    let mut weights = vec![Complex64::new(0.5 * (r * t).exp(), 0.0)];
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        nodes.push(s);
        weights.push((s * t).exp() * Complex64::new(1.0, sigma));
    }
    let values = eval_nodes(lfn, &nodes)?;
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    for (w, v) in weights.iter().zip(&values) {
        let term = (w * v).re;
        sum += term;
        largest = largest.max(term.abs());
    }
    let f = r / m as f64;
    Ok((f * sum, f * largest))
}

/// Bromwich trapezoid rule with `n` terms of Euler summation.
fn bromwich<F>(lfn: &F, t: f64, n: usize, scale: f64) -> Result<(f64, f64)>
where
    F: Fn(ComplexPoint) -> Result<Complex64> + Sync,
{
    let a = 2.0 * scale;
    let total = n + EULER_TERMS;
    let nodes: Vec<Complex64> = (0..=total)
        .map(|k| Complex64::new(a, 2.0 * k as f64 * std::f64::consts::PI) / (2.0 * t))
        .collect();
    let values = eval_nodes(lfn, &nodes)?;
    let pref = (a / 2.0).exp() / t;
    let mut partial = Vec::with_capacity(total + 1);
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    for (k, v) in values.iter().enumerate() {
        let term = if k == 0 {
            0.5 * v.re
        } else if k % 2 == 0 {
            v.re
        } else {
            -v.re
        };
        sum += term;
        largest = largest.max(term.abs());
        partial.push(sum);
    }
    let mut binom = 1.0;
    let mut euler = 0.0;
    for j in 0..=EULER_TERMS {
        euler += binom * partial[n + j];
        binom *= (EULER_TERMS - j) as f64 / (j + 1) as f64;
    }
    euler /= 2f64.powi(EULER_TERMS as i32);
    Ok((pref * euler, pref * largest))
}

/// Inverse Laplace transform of `lfn` at `t > 0`.
///
/// The rule is evaluated with `node_count`, half and a quarter of it. The
/// estimate is the last difference plus rounding and discretisation floors;
/// if that difference is larger than the previous one and not already at the
/// rounding floor the result is rejected as oscillating.
pub fn inverse_laplace<F>(lfn: F, t: f64, cfg: &InversionConfig) -> Result<Inversion>
where
    F: Fn(ComplexPoint) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("inversion time t = {t} must be positive")));
    }
    let n = cfg.node_count;
    let run = |nodes: usize| match cfg.method {
        InversionMethod::Talbot => {
            let scale = cfg.contour_scale.unwrap_or((TALBOT_MAX_RT / n as f64).min(0.4));
            talbot(&lfn, t, nodes, scale)
        }
        InversionMethod::BromwichTrapezoid => {
            bromwich(&lfn, t, nodes - EULER_TERMS - 1, cfg.contour_scale.unwrap_or(BROMWICH_A / 2.0))
        }
    };
    let (f1, _) = run(n / 4)?;
    let (f2, _) = run(n / 2)?;
    let (f3, largest) = run(n)?;
    if !f3.is_finite() {
        return Err(Error::NonFinite { x: t });
    }
    let d_prev = (f2 - f1).abs();
    let d_last = (f3 - f2).abs();
    let mut floor = 64.0 * f64::EPSILON * largest;
    if cfg.method == InversionMethod::BromwichTrapezoid {
        let a = 2.0 * cfg.contour_scale.unwrap_or(BROMWICH_A / 2.0);
        floor += (-a).exp() * f3.abs().max(1.0);
    }
    if d_last > d_prev && d_last > floor.max(1e-6 * f3.abs().max(1.0)) {
        return Err(Error::Oscillation {
            t,
            detail: format!("node doubling raised the difference from {d_prev:e} to {d_last:e}"),
        });
    }
    Ok(Inversion {
        value: f3,
        est_error: d_last + floor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripSample {
    pub t: f64,
    pub recovered: f64,
    pub exact: f64,
    pub error: f64,
    pub est_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub epsilon: f64,
    pub samples: Vec<RoundtripSample>,
    pub sup_error: f64,
}

/// Inverts `p -> q_laplace_unilateral(f, p, 1 + epsilon)` on `t_grid` and
/// compares with `f(t)`.
///
/// The transform is zero on `Re(p) < 0`, so the Bromwich rule is used
/// whatever `cfg.method` says.
pub fn roundtrip_check(
    f: &FunctionSpec,
    t_grid: &[f64],
    epsilon: f64,
    cfg: &InversionConfig,
    quad: &QuadratureConfig,
) -> Result<RoundtripReport> {
    if !(epsilon > 0.0 && epsilon <= 1e-2) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must lie in (0, 1e-2]")));
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty t grid".into()));
    }
    let prep = f.prepare()?;
    if prep.mirrored().tail() != Tail::Zero {
        return Err(Error::InvalidParameter("roundtrip needs f = 0 on x < 0".into()));
    }
    let cfg = InversionConfig {
        method: InversionMethod::BromwichTrapezoid,
        ..*cfg
    };
    let q = 1.0 + epsilon;
    let lfn = |p: ComplexPoint| -> Result<Complex64> { Ok(q_laplace_unilateral(f, p, q, quad)?.value) };
    let samples = t_grid
        .iter()
        .map(|&t| {
            let inv = inverse_laplace(lfn, t, &cfg)?;
            let exact = prep.eval(t);
            Ok(RoundtripSample {
                t,
                recovered: inv.value,
                exact,
                error: (inv.value - exact).abs(),
                est_error: inv.est_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup_error = samples.iter().map(|s| s.error).fold(0.0, f64::max);
    Ok(RoundtripReport {
        epsilon,
        samples,
        sup_error,
    })
}

/// `n` equally spaced points on `[a, b]`.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
