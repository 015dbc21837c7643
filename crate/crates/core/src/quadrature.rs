//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands on
//! finite intervals and on `[0, inf)`.
//!
//! The semi-infinite driver splits the half-line at a point `X` and maps the
//! tail `[X, inf)` onto a unit interval, either by `x = X + X t/(1-t)` or, for
//! integrands with a known algebraic decay `x^-gamma`, by `x = X u^(-r)` with
//! `r = 1/(gamma - 1)`, which makes the mapped tail integrand nearly constant.
//! All panels share one priority queue so the error budget is global.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// How the unbounded tail of a semi-infinite integral is mapped to a finite
/// interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// `x = X + X t/(1-t)`, `t in [0, 1)`. Cannot resolve tails decaying
    /// slower than about `x^-2` in double precision.
    Compactify,
    /// `x = X u^(-r)` matched to the decay exponent; falls back to
    /// compactification for fast (gamma >= 4 or exponential) decay.
    #[default]
    PowerLawExtrapolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_policy: TailPolicy,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 2000,
            tail_policy: TailPolicy::PowerLawExtrapolate,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(format!(
                "quadrature config needs rel_tol > 0, abs_tol > 0, max_subdivisions >= 1 (got {}, {}, {})",
                self.rel_tol, self.abs_tol, self.max_subdivisions
            )));
        }
        Ok(())
    }

    pub(crate) fn tolerance(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Large-x behaviour of an integrand on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Zero beyond the given abscissa.
    Compact(f64),
    /// `|g(x)| ~ x^-gamma` with `gamma > 1`.
    PowerLaw(f64),
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub abs_err: f64,
    pub converged: bool,
    pub subdivisions: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F>(g: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    fv[7] = g(c)?;
    for j in 0..7 {
        fv[j] = g(c - h * XGK[j])?;
        fv[14 - j] = g(c + h * XGK[j])?;
    }
    let mut resk = fv[7] * WGK[7];
    let mut resg = fv[7] * WG[3];
    let mut resabs = fv[7].norm() * WGK[7];
    for j in 0..7 {
        let pair = fv[j] + fv[14 - j];
        resk += pair * WGK[j];
        resabs += (fv[j].norm() + fv[14 - j].norm()) * WGK[j];
        if j % 2 == 1 {
            resg += pair * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = (fv[7] - mean).norm() * WGK[7];
    for j in 0..7 {
        resasc += ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm()) * WGK[j];
    }
    let value = resk * h;
    resabs *= h.abs();
    resasc *= h.abs();
    let mut err = ((resk - resg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite { x: c });
    }
    Ok(Panel { a, b, value, err })
}

/// Adaptive integration over the union of consecutive intervals given by
/// `edges` (sorted, at least two entries). The integrand must report
/// non-finite values as errors itself or return finite numbers.
pub fn integrate_panels<F>(mut g: F, edges: &[f64], cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    cfg.validate()?;
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in edges.windows(2) {
        if w[1] > w[0] {
            let p = gk15(&mut g, w[0], w[1])?;
            total += p.value;
            err += p.err;
            heap.push(p);
        }
    }
    let mut subdivisions = 0;
    while err > cfg.tolerance(total) && subdivisions < cfg.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs() {
            // cannot refine further; keep it and stop
            heap.push(worst);
            break;
        }
        let left = gk15(&mut g, worst.a, mid)?;
        let right = gk15(&mut g, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // resum to shed accumulated cancellation in the running totals
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
    total = heap.iter().map(|p| p.value).sum();
    err = heap.iter().map(|p| p.err).sum();
    Ok(Integral {
        value: total,
        abs_err: err,
        converged: err <= cfg.tolerance(total),
        subdivisions,
    })
}

/// Adaptive integration of `g` over `[a, b]`.
pub fn integrate<F>(g: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    integrate_panels(g, &[a, b], cfg)
}

/// Adaptive integration of `g` over `[0, inf)`.
///
/// `breakpoints` are interior abscissae where `g` has kinks or jumps; the
/// integration panels start there. `decay` tells the driver how the tail
/// behaves and, for algebraic decay, which substitution to use.
pub fn integrate_semi_infinite<F>(
    mut g: F,
    decay: Decay,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut edges: Vec<f64> = std::iter::once(0.0)
        .chain(breakpoints.iter().copied().filter(|&x| x > 0.0 && x.is_finite()))
        .collect();
    if let Decay::Compact(end) = decay {
        edges.push(end.max(0.0));
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        edges.retain(|&x| x <= end);
        return integrate_panels(g, &edges, cfg);
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let split = edges.last().copied().unwrap_or(0.0).max(1.0);
    if *edges.last().unwrap() < split {
        edges.push(split);
    }
    let tail_start = split;
    edges.push(split + 1.0);

    let power = match (decay, cfg.tail_policy) {
        (Decay::PowerLaw(gamma), TailPolicy::PowerLawExtrapolate) if gamma < 4.0 => {
            Some(1.0 / (gamma - 1.0))
        }
        _ => None,
    };
    let mapped = move |s: f64| -> Result<Complex64> {
        if s <= tail_start {
            return g(s);
        }
        let t = s - tail_start;
        let (x, jac) = match power {
            Some(r) => {
                let u = 1.0 - t;
                (split * u.powf(-r), split * r * u.powf(-r - 1.0))
            }
            None => {
                let w = 1.0 - t;
                (split + split * t / w, split / (w * w))
            }
        };
        if !x.is_finite() || !jac.is_finite() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = g(x)?;
        if v == Complex64::new(0.0, 0.0) {
            return Ok(v);
        }
        let out = v * jac;
        if out.re.is_finite() && out.im.is_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite { x })
        }
    };
    integrate_panels(mapped, &edges, cfg)
}

/// Wraps a real integrand for the complex drivers, rejecting non-finite
/// values.
pub fn real<F>(mut f: F) -> impl FnMut(f64) -> Result<Complex64>
where
    F: FnMut(f64) -> f64,
{
    move |x| {
        let v = f(x);
        if v.is_finite() {
            Ok(Complex64::new(v, 0.0))
        } else {
            Err(Error::NonFinite { x })
        }
    }
}
