//! q-partition functions: the unilateral q-Laplace transform of a density of
//! states, taken in the inverse-temperature variable `B`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::ComplexPoint;
use crate::transform::{q_laplace_unilateral, FunctionSpec, QuadratureConfig, TransformValue};

/// A density of states `f(u)`, read on `u >= 0` only.
///
/// With `q_dependent` set, the index of a q-exponential density follows the
/// transform index, which is what [`q_partition_pr`] needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOfStates {
    spec: FunctionSpec,
    q_dependent: bool,
}

impl DensityOfStates {
    pub fn new(spec: FunctionSpec, q_dependent: bool) -> Result<Self> {
        match spec {
            FunctionSpec::Constant { .. }
            | FunctionSpec::HeavisideStep
            | FunctionSpec::QExpDensity { .. }
            | FunctionSpec::Tabulated { .. } => {}
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "density of states must be constant, step, q-exponential or tabulated (got {spec:?})"
                )))
            }
        }
        spec.validate()?;
        if let FunctionSpec::Tabulated { samples, .. } = &spec {
            if samples.iter().any(|&(_, v)| v < 0.0) {
                return Err(Error::InvalidParameter("density of states must be nonnegative".into()));
            }
        }
        Ok(DensityOfStates { spec, q_dependent })
    }

    /// Flat spectrum `f(u) = 1`.
    pub fn constant() -> Self {
        DensityOfStates {
            spec: FunctionSpec::Constant { c: 1.0 },
            q_dependent: false,
        }
    }

    /// q-exponential density `e_q'(-alpha u)` whose index follows the
    /// transform index.
    pub fn q_exponential(alpha: f64) -> Result<Self> {
        Self::new(FunctionSpec::q_exp_density(alpha, 1.0), true)
    }

    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn q_dependent(&self) -> bool {
        self.q_dependent
    }
}

/// `Z(B, q)`: unilateral transform of the density as given.
pub fn q_partition(dos: &DensityOfStates, b: ComplexPoint, q: f64, cfg: &QuadratureConfig) -> Result<TransformValue> {
    q_laplace_unilateral(&dos.spec, b, q, cfg)
}

/// `Z_PR(B, q)`: the density's own index is set to `q` before transforming.
pub fn q_partition_pr(dos: &DensityOfStates, b: ComplexPoint, q: f64, cfg: &QuadratureConfig) -> Result<TransformValue> {
    if !dos.q_dependent {
        return Err(Error::InvalidParameter(
            "q_partition_pr needs a q-dependent density of states".into(),
        ));
    }
    let spec = if q.is_finite() && (1.0..2.0).contains(&q) {
        dos.spec.with_index(q)
    } else {
        dos.spec.clone()
    };
    q_laplace_unilateral(&spec, b, q, cfg)
}

/// Reduced value of `Z_PR` for the q-exponential density: the integrand
/// collapses to `[1 + (q-1)(alpha + B) u]^(1/(1-q))`, giving
/// `1 / ((2-q)(B + alpha))` for real `B > 0`.
pub fn q_exponential_pr_reduced(b: f64, q: f64, alpha: f64) -> f64 {
    1.0 / ((2.0 - q) * (b + alpha))
}
