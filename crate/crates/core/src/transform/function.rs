//! The catalog of input functions and their evaluation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{self, QGaussianParams, QIndex};

fn one() -> f64 {
    1.0
}

/// An input function `f(x) >= 0`.
///
/// The JSON form is a tagged union on `kind`, e.g.
/// `{"kind": "power_window", "lambda": 1, "beta": 2, "a": 0.1, "b": 0.111}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `f(x) = c` on the whole line.
    Constant { c: f64 },
    /// `H(x)`.
    HeavisideStep,
    /// `H(-x)`.
    LeftStep,
    /// `c H(x)`.
    ScaledStep { c: f64 },
    /// `(lambda/x)^beta` on `[a, b]`, zero elsewhere.
    PowerWindow {
        lambda: f64,
        beta: f64,
        a: f64,
        b: f64,
    },
    /// `C [1 + (q'-1) alpha x^2]^{1/(1-q')}`.
    QGaussian { alpha: f64, qprime: f64 },
    /// `[1 + (q'-1) alpha u]^{1/(1-q')} H(u)`; `exp(-alpha u) H(u)` at `q' = 1`.
    QExpDensity {
        alpha: f64,
        #[serde(default = "one")]
        qprime: f64,
    },
    /// Piecewise-linear interpolation of samples, zero outside their range.
    /// Samples may be given inline or as a two-column CSV file.
    Tabulated {
        #[serde(default)]
        samples: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
    },
}

impl FunctionSpec {
    pub fn q_gaussian(alpha: f64, qprime: f64) -> Self {
        FunctionSpec::QGaussian { alpha, qprime }
    }

    pub fn q_exp_density(alpha: f64, qprime: f64) -> Self {
        FunctionSpec::QExpDensity { alpha, qprime }
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Self {
        FunctionSpec::Tabulated {
            samples,
            path: None,
        }
    }

    /// Reads a two-column CSV (`x,f`, optional header) into a tabulated spec.
    pub fn tabulated_from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut samples = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::Config(format!(
                    "{}: line {} needs two columns",
                    path.display(),
                    i + 1
                )));
            }
            match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                (Ok(x), Ok(f)) => samples.push((x, f)),
                // a header line
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::Config(format!(
                        "{}: line {} is not numeric",
                        path.display(),
                        i + 1
                    )))
                }
            }
        }
        let spec = FunctionSpec::tabulated(samples);
        spec.validate()?;
        Ok(spec)
    }

    /// Loads a tabulated `path` (relative paths are taken from `base`) into
    /// inline samples; other kinds are returned unchanged.
    pub fn resolve(self, base: &Path) -> Result<Self> {
        match self {
            FunctionSpec::Tabulated {
                samples,
                path: Some(p),
            } => {
                if !samples.is_empty() {
                    return Err(Error::Config(
                        "tabulated function has both samples and path".into(),
                    ));
                }
                let full = if p.is_absolute() { p } else { base.join(p) };
                FunctionSpec::tabulated_from_csv(&full)
            }
            other => Ok(other),
        }
    }

    /// The index `q'` the function itself carries, if any.
    pub fn own_index(&self) -> Option<f64> {
        match self {
            FunctionSpec::QGaussian { qprime, .. } | FunctionSpec::QExpDensity { qprime, .. } => {
                Some(*qprime)
            }
            _ => None,
        }
    }

    /// The same function with its own index replaced by `qprime`; kinds
    /// without an index are returned unchanged.
    pub fn with_index(&self, qprime: f64) -> Self {
        match self {
            FunctionSpec::QGaussian { alpha, .. } => FunctionSpec::QGaussian {
                alpha: *alpha,
                qprime,
            },
            FunctionSpec::QExpDensity { alpha, .. } => FunctionSpec::QExpDensity {
                alpha: *alpha,
                qprime,
            },
            other => other.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.prepare().map(|_| ())
    }

    /// `f(x)`. Panics only on an invalid spec; call [`validate`](Self::validate)
    /// first for untrusted input.
    pub fn eval(&self, x: f64) -> f64 {
        self.prepare().expect("invalid function spec").eval(x)
    }

    pub(crate) fn prepare(&self) -> Result<Prepared> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let shape = match *self {
            FunctionSpec::Constant { c } => {
                if !(c >= 0.0) || !c.is_finite() {
                    return bad(format!("constant c = {c} must be finite and >= 0"));
                }
                Shape::Constant(c)
            }
            FunctionSpec::HeavisideStep => Shape::Step(1.0),
            FunctionSpec::LeftStep => Shape::LeftStep(1.0),
            FunctionSpec::ScaledStep { c } => {
                if !(c > 0.0) || !c.is_finite() {
                    return bad(format!("scaled step c = {c} must be positive"));
                }
                Shape::Step(c)
            }
            FunctionSpec::PowerWindow { lambda, beta, a, b } => {
                if !(lambda > 0.0) || !beta.is_finite() || !(a > 0.0) || !(b > a) || !b.is_finite() {
                    return bad(format!(
                        "power window needs lambda > 0, finite beta, 0 < a < b (got {lambda}, {beta}, {a}, {b})"
                    ));
                }
                Shape::Window { lambda, beta, a, b }
            }
            FunctionSpec::QGaussian { alpha, qprime } => {
                Shape::QGauss(QGaussianParams::new(alpha, QIndex::new(qprime)?)?)
            }
            FunctionSpec::QExpDensity { alpha, qprime } => {
                if !(alpha >= 0.0) || !alpha.is_finite() {
                    return bad(format!("density alpha = {alpha} must be >= 0"));
                }
                Shape::QExp {
                    alpha,
                    qprime: QIndex::new(qprime)?,
                }
            }
            FunctionSpec::Tabulated { ref samples, ref path } => {
                if path.is_some() {
                    return Err(Error::Config(
                        "tabulated path not loaded; call resolve first".into(),
                    ));
                }
                if samples.len() < 2 {
                    return bad("tabulated function needs at least two samples".into());
                }
                for w in samples.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return bad("tabulated abscissae must be strictly increasing".into());
                    }
                }
                if let Some(s) = samples.iter().find(|s| !(s.1 >= 0.0) || !s.1.is_finite() || !s.0.is_finite()) {
                    return bad(format!("tabulated sample ({}, {}) is negative or not finite", s.0, s.1));
                }
                Shape::Table(samples.clone())
            }
        };
        Ok(Prepared {
            shape,
            power: 1.0,
            mirror: false,
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Shape {
    Constant(f64),
    Step(f64),
    LeftStep(f64),
    Window {
        lambda: f64,
        beta: f64,
        a: f64,
        b: f64,
    },
    QGauss(QGaussianParams),
    QExp {
        alpha: f64,
        qprime: QIndex,
    },
    Table(Vec<(f64, f64)>),
}

/// Large-x behaviour of `f` on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tail {
    /// Identically zero on the half-line.
    Zero,
    /// Zero beyond the abscissa.
    Compact(f64),
    /// Tends to a positive constant.
    Flat,
    /// `~ x^-delta`.
    Power(f64),
    Exponential,
}

/// A validated function, possibly mirrored (`x -> -x`) and raised to a power,
/// restricted in use to the half-line `[0, inf)`.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    shape: Shape,
    power: f64,
    mirror: bool,
}

impl Prepared {
    pub fn mirrored(&self) -> Self {
        Prepared {
            mirror: !self.mirror,
            ..self.clone()
        }
    }

    pub fn powered(&self, beta: f64) -> Self {
        Prepared {
            power: self.power * beta,
            ..self.clone()
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = if self.mirror { -x } else { x };
        let v = self.base(x);
        if self.power == 1.0 || v == 0.0 {
            v
        } else {
            v.powf(self.power)
        }
    }

    fn base(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Step(c) => {
                if x >= 0.0 {
                    *c
                } else {
                    0.0
                }
            }
            Shape::LeftStep(c) => {
                if x <= 0.0 {
                    *c
                } else {
                    0.0
                }
            }
            Shape::Window { lambda, beta, a, b } => {
                if (*a..=*b).contains(&x) {
                    (lambda / x).powf(*beta)
                } else {
                    0.0
                }
            }
            Shape::QGauss(g) => qmath::q_gaussian(x, g),
            Shape::QExp { alpha, qprime } => {
                if x < 0.0 {
                    0.0
                } else if qprime.is_classical() {
                    (-alpha * x).exp()
                } else {
                    let s = qprime.excess();
                    (1.0 + s * alpha * x).powf(-1.0 / s)
                }
            }
            Shape::Table(s) => interpolate(s, x),
        }
    }

    /// Abscissae in `(0, inf)` where `f` has kinks or jumps, in the
    /// (possibly mirrored) frame.
    pub fn breakpoints(&self) -> Vec<f64> {
        let sign = if self.mirror { -1.0 } else { 1.0 };
        let raw: Vec<f64> = match &self.shape {
            Shape::Window { a, b, .. } => vec![*a, *b],
            Shape::QGauss(g) => vec![1.0 / g.alpha.sqrt()],
            Shape::QExp { alpha, .. } if *alpha > 0.0 => vec![1.0 / alpha],
            Shape::Table(s) => s.iter().map(|p| p.0).collect(),
            _ => Vec::new(),
        };
        let mut out: Vec<f64> = raw.into_iter().map(|x| sign * x).filter(|&x| x > 0.0).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Tail of `f` (already powered) on the half-line.
    pub fn tail(&self) -> Tail {
        let pw = self.power;
        let t = match (&self.shape, self.mirror) {
            (Shape::Constant(c), _) => {
                if *c == 0.0 {
                    Tail::Zero
                } else {
                    Tail::Flat
                }
            }
            (Shape::Step(_), false) | (Shape::LeftStep(_), true) => Tail::Flat,
            (Shape::Step(_), true) | (Shape::LeftStep(_), false) => Tail::Zero,
            (Shape::Window { b, .. }, false) => Tail::Compact(*b),
            (Shape::Window { .. }, true) => Tail::Zero,
            (Shape::QGauss(g), _) => {
                if g.qprime.is_classical() {
                    Tail::Exponential
                } else {
                    Tail::Power(2.0 / g.qprime.excess())
                }
            }
            (Shape::QExp { alpha, qprime }, false) => {
                if *alpha == 0.0 {
                    Tail::Flat
                } else if qprime.is_classical() {
                    Tail::Exponential
                } else {
                    Tail::Power(1.0 / qprime.excess())
                }
            }
            (Shape::QExp { .. }, true) => Tail::Zero,
            (Shape::Table(s), mirror) => {
                let end = if mirror { -s[0].0 } else { s[s.len() - 1].0 };
                if end <= 0.0 {
                    Tail::Zero
                } else {
                    Tail::Compact(end)
                }
            }
        };
        match t {
            Tail::Power(d) => Tail::Power(d * pw),
            other => other,
        }
    }
}

fn interpolate(s: &[(f64, f64)], x: f64) -> f64 {
    let (x0, xn) = (s[0].0, s[s.len() - 1].0);
    if !(x >= x0 && x <= xn) {
        return 0.0;
    }
    let i = s.partition_point(|p| p.0 <= x);
    if i == s.len() {
        return s[s.len() - 1].1;
    }
    let (xa, fa) = s[i - 1];
    let (xb, fb) = s[i];
    fa + (fb - fa) * (x - xa) / (xb - xa)
}
