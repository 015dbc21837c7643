//! Grid sweeps: rows are evaluated in parallel and emitted p-major, then q,
//! then method, so the output is independent of scheduling.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{MethodKind, SweepRequest, Variant};
use crate::closedform::{
    power_window_transform, qgauss_firstorder_g, qgauss_fixed_transform, scaled_step_transform, step_transform,
    ClosedFormResult, FormulaId, Sidedness, StepVariant,
};
use crate::error::Result;
use crate::partition::{q_partition, q_partition_pr, DensityOfStates};
use crate::qmath::{self, ComplexPoint, HalfPlane, QIndex};
use crate::series::first_order_transform;
use crate::transform::{self, FunctionSpec, QuadratureConfig};

pub const CSV_HEADER: [&str; 9] = ["re_p", "im_p", "q", "re_L", "im_L", "abs_err", "converged", "method", "rel_diff"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub re_p: f64,
    pub im_p: f64,
    pub q: f64,
    #[serde(rename = "re_L")]
    pub re_l: f64,
    #[serde(rename = "im_L")]
    pub im_l: f64,
    pub abs_err: f64,
    pub converged: bool,
    pub method: MethodKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_diff: Option<f64>,
    /// Message of a failed evaluation; not part of the CSV schema.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Whether [`closed_form`] knows a formula for this function and variant.
pub fn has_closed_form(f: &FunctionSpec, variant: Variant, pr: bool) -> bool {
    use FunctionSpec as F;
    if variant == Variant::Partition || pr {
        return matches!(f, F::HeavisideStep) || matches!(f, F::Constant { c } if *c > 0.0);
    }
    match f {
        F::HeavisideStep | F::ScaledStep { .. } => true,
        F::LeftStep => variant != Variant::Unilateral,
        F::Constant { c } => *c > 0.0,
        F::PowerWindow { .. } => variant != Variant::Classical,
        F::QGaussian { .. } => true,
        F::QExpDensity { .. } | F::Tabulated { .. } => false,
    }
}

/// Closed-form counterpart of a sweep point, if one exists.
pub fn closed_form(f: &FunctionSpec, variant: Variant, pr: bool, p: ComplexPoint, q: f64) -> Option<ClosedFormResult> {
    use FunctionSpec as F;
    if !has_closed_form(f, variant, pr) {
        return None;
    }
    let q = QIndex::new(q).ok()?;
    let qc = if variant == Variant::Classical { QIndex::ONE } else { q };
    let step = |v| step_transform(p, qc, v);
    let right_only = matches!(variant, Variant::Unilateral | Variant::Partition);
    let sided = if right_only {
        Sidedness::Unilateral
    } else {
        Sidedness::Bilateral
    };
    Some(match *f {
        F::HeavisideStep => step(StepVariant::Right),
        F::LeftStep => step(StepVariant::Left),
        F::Constant { c } => {
            if right_only {
                scaled_step_transform(p, qc, c)
            } else {
                let mut r = step(StepVariant::One);
                r.value *= c.powf(2.0 - qc.value());
                r
            }
        }
        F::ScaledStep { c } => scaled_step_transform(p, qc, c),
        F::PowerWindow { lambda, beta, a, b } => power_window_transform(p, qc, lambda, beta, a, b),
        F::QGaussian { alpha, qprime } => match variant {
            Variant::Classical => match QIndex::new(qprime) {
                Ok(qp) => qgauss_firstorder_g(p, qp, alpha, None, Sidedness::Bilateral),
                Err(e) => ClosedFormResult::unsupported(FormulaId::QgaussFirstorderG, e.to_string()),
            },
            Variant::Fixed | Variant::Class => qgauss_fixed_transform(p, q, alpha, Sidedness::Bilateral),
            _ if qprime == q.value() => qgauss_fixed_transform(p, q, alpha, sided),
            _ => ClosedFormResult::unsupported(FormulaId::QgaussFixed, "function index differs from q"),
        },
        F::QExpDensity { .. } | F::Tabulated { .. } => return None,
    })
}

fn quadrature(req: &SweepRequest, p: ComplexPoint, q: f64) -> Result<transform::TransformValue> {
    let f = &req.function;
    let cfg = &req.quadrature;
    match req.variant {
        Variant::Bilateral => transform::q_laplace_bilateral(f, p, q, cfg),
        Variant::Unilateral => transform::q_laplace_unilateral(f, p, q, cfg),
        Variant::Fixed => transform::q_laplace_fixed(f, p, q, cfg),
        Variant::Class => transform::q_laplace_class(f, p, q, cfg),
        Variant::Classical => transform::classical_laplace(f, p, cfg),
        Variant::Partition => {
            let dos = DensityOfStates::new(f.clone(), req.pr)?;
            if req.pr {
                q_partition_pr(&dos, p, q, cfg)
            } else {
                q_partition(&dos, p, q, cfg)
            }
        }
    }
}

fn series1(req: &SweepRequest, p: ComplexPoint, q: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if req.variant == Variant::Unilateral && qmath::half_plane(p) == HalfPlane::Left {
        return Ok(Complex64::new(0.0, 0.0));
    }
    first_order_transform(&req.function, p, q, cfg)
}

fn evaluate(req: &SweepRequest, p: ComplexPoint, q: f64, method: MethodKind) -> SweepRow {
    let mut row = SweepRow {
        re_p: p.re,
        im_p: p.im,
        q,
        re_l: f64::NAN,
        im_l: f64::NAN,
        abs_err: f64::NAN,
        converged: false,
        method,
        rel_diff: None,
        error: None,
    };
    let closed = || closed_form(&req.function, req.variant, req.pr, p, q);
    let outcome: Result<()> = (|| {
        match method {
            MethodKind::Quadrature => {
                let v = quadrature(req, p, q)?;
                row.re_l = v.value.re;
                row.im_l = v.value.im;
                row.abs_err = v.abs_err;
                row.converged = v.converged;
            }
            MethodKind::Series1 => {
                let v = series1(req, p, q, &req.quadrature)?;
                row.re_l = v.re;
                row.im_l = v.im;
                row.converged = true;
            }
            MethodKind::Closedform => {
                if let Some(c) = closed() {
                    row.re_l = c.value.re;
                    row.im_l = c.value.im;
                    row.abs_err = if c.supported { 0.0 } else { f64::NAN };
                    row.converged = c.supported;
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
        return row;
    }
    if req.compare && method != MethodKind::Closedform {
        if let Some(c) = closed().and_then(|c| c.supported_value()) {
            let v = Complex64::new(row.re_l, row.im_l);
            row.rel_diff = Some((v - c).norm() / c.norm().max(1e-300));
        }
    }
    row
}

/// All rows of a sweep, p-major, then q, then method.
pub fn run_sweep(req: &SweepRequest) -> Vec<SweepRow> {
    let jobs: Vec<(ComplexPoint, f64, MethodKind)> = req
        .p_grid
        .iter()
        .flat_map(|&p| req.q_grid.iter().flat_map(move |&q| req.methods.iter().map(move |&m| (p, q, m))))
        .collect();
    jobs.par_iter().map(|&(p, q, m)| evaluate(req, p, q, m)).collect()
}

/// C-style `%.12e`: twelve mantissa digits and an exponent of at least two
/// digits with explicit sign.
pub fn format_e(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn render_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            format_e(r.re_p),
            format_e(r.im_p),
            format_e(r.q),
            format_e(r.re_l),
            format_e(r.im_l),
            format_e(r.abs_err),
            r.converged.to_string(),
            r.method.as_str().to_string(),
            r.rel_diff.map(format_e).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn render_json(rows: &[SweepRow]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}
