//! JSON request formats of the `sweep` and `invert` commands.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::inversion::{linear_grid, InversionConfig};
use crate::qmath::ComplexPoint;
use crate::transform::{FunctionSpec, QuadratureConfig};

/// Which transform a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Bilateral,
    Unilateral,
    /// Bilateral transform with the function's own index set to `q`.
    Fixed,
    /// Same integral as `fixed`, read as the class transform.
    Class,
    /// Classical Laplace transform; `q_grid` must be `[1]`.
    Classical,
    /// q-partition function of a density of states; `p` plays the role of `B`.
    Partition,
}

/// How a row value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Quadrature,
    Closedform,
    Series1,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Quadrature => "quadrature",
            MethodKind::Closedform => "closedform",
            MethodKind::Series1 => "series1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// A grid point given as a number, a `[re, im]` pair or `{"re", "im"}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Real(f64),
    Pair([f64; 2]),
    Parts {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

fn points<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ComplexPoint>, D::Error> {
    let raw = Vec::<PointRepr>::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|r| match r {
            PointRepr::Real(re) => Complex64::new(re, 0.0),
            PointRepr::Pair([re, im]) => Complex64::new(re, im),
            PointRepr::Parts { re, im } => Complex64::new(re, im),
        })
        .collect())
}

fn default_q_grid() -> Vec<f64> {
    vec![1.0]
}

fn default_methods() -> Vec<MethodKind> {
    vec![MethodKind::Quadrature]
}

/// A `(p, q)` grid sweep.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRequest {
    pub function: FunctionSpec,
    #[serde(default)]
    pub variant: Variant,
    #[serde(deserialize_with = "points")]
    pub p_grid: Vec<ComplexPoint>,
    #[serde(default = "default_q_grid")]
    pub q_grid: Vec<f64>,
    /// Also evaluate the closed form and report the relative difference.
    #[serde(default)]
    pub compare: bool,
    #[serde(default = "default_methods")]
    pub methods: Vec<MethodKind>,
    /// Partition variant: the density's own index follows `q`.
    #[serde(default)]
    pub pr: bool,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl SweepRequest {
    /// Parses a request and resolves tabulated paths against `base`.
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let mut req: SweepRequest = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        req.function = req.function.resolve(base)?;
        req.validate()?;
        Ok(req)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        let cfg_err = |m: String| Err(Error::Config(m));
        if self.p_grid.is_empty() {
            return cfg_err("p_grid is empty".into());
        }
        if self.q_grid.is_empty() {
            return cfg_err("q_grid is empty".into());
        }
        if self.methods.is_empty() {
            return cfg_err("methods is empty".into());
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return cfg_err(format!("p_grid contains a non-finite point {p}"));
        }
        if let Some(q) = self.q_grid.iter().find(|q| !(1.0..2.0).contains(*q)) {
            return cfg_err(format!("q_grid value {q} outside [1, 2)"));
        }
        if self.variant == Variant::Classical && self.q_grid.iter().any(|&q| q != 1.0) {
            return cfg_err("classical variant takes q_grid = [1]".into());
        }
        if self.pr && self.variant != Variant::Partition {
            return cfg_err("pr applies to the partition variant only".into());
        }
        self.function.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.quadrature.validate().map_err(|e| Error::Config(e.to_string()))?;
        for m in &self.methods {
            match m {
                MethodKind::Quadrature => {}
                MethodKind::Closedform => {
                    if !super::sweep::has_closed_form(&self.function, self.variant, self.pr) {
                        return cfg_err(format!(
                            "no closed form for {:?} with the {:?} variant",
                            self.function, self.variant
                        ));
                    }
                }
                MethodKind::Series1 => {
                    if !matches!(self.variant, Variant::Bilateral | Variant::Unilateral) {
                        return cfg_err("series1 needs the bilateral or unilateral variant".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Inversion times as a list or as `{start, stop, count}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TimeGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            TimeGrid::List(v) => v.clone(),
            TimeGrid::Range { start, stop, count } => linear_grid(*start, *stop, *count),
        }
    }
}

/// Round trip of a function through the transform at `q = 1 + epsilon`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertRequest {
    pub function: FunctionSpec,
    pub epsilon: f64,
    pub t_grid: TimeGrid,
    #[serde(default)]
    pub inversion: InversionConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

impl InvertRequest {
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let mut req: InvertRequest = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        req.function = req.function.resolve(base)?;
        req.validate()?;
        Ok(req)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.t_grid.points();
        if t.is_empty() {
            return Err(Error::Config("t_grid is empty".into()));
        }
        if let Some(bad) = t.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::Config(format!("t_grid value {bad} must be positive")));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1e-2) {
            return Err(Error::Config(format!("epsilon = {} must lie in (0, 1e-2]", self.epsilon)));
        }
        self.function.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.inversion.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.quadrature.validate().map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SweepRequest> {
        SweepRequest::from_json(text, Path::new("."))
    }

    #[test]
    fn point_forms() {
        let r = parse(r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1, [2, -0.5], {"re": 3, "im": 1}, {"re": 4}], "q_grid": [1.5]}"#).unwrap();
        assert_eq!(
            r.p_grid,
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, -0.5), Complex64::new(3.0, 1.0), Complex64::new(4.0, 0.0)]
        );
        assert_eq!(r.variant, Variant::Bilateral);
        assert_eq!(r.methods, vec![MethodKind::Quadrature]);
    }

    #[test]
    fn rejected_requests() {
        for text in [
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": []}"#,
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [], "q_grid": [1.5]}"#,
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": [2.0]}"#,
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": [1.5], "variant": "classical"}"#,
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": [1.5], "bogus": 1}"#,
            r#"{"function": {"kind": "q_gaussian", "alpha": -1, "qprime": 1.5}, "p_grid": [1]}"#,
            r#"{"function": {"kind": "tabulated", "samples": [[0, 1], [1, 2]]}, "p_grid": [1], "methods": ["closedform"]}"#,
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "variant": "fixed", "methods": ["series1"]}"#,
            r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "pr": true}"#,
        ] {
            assert!(matches!(parse(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn invert_requests() {
        let r = InvertRequest::from_json(
            r#"{"function": {"kind": "heaviside_step"}, "epsilon": 1e-3, "t_grid": {"start": 0.1, "stop": 5, "count": 20}}"#,
            Path::new("."),
        )
        .unwrap();
        assert_eq!(r.t_grid.points().len(), 20);
        for text in [
            r#"{"function": {"kind": "heaviside_step"}, "epsilon": 1e-3, "t_grid": [0.5, 0.0]}"#,
            r#"{"function": {"kind": "heaviside_step"}, "epsilon": 0.5, "t_grid": [1]}"#,
            r#"{"function": {"kind": "heaviside_step"}, "epsilon": 1e-3, "t_grid": []}"#,
        ] {
            assert!(InvertRequest::from_json(text, Path::new(".")).is_err(), "{text}");
        }
    }
}
