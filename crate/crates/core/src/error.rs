use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while evaluating a transform or one of its
/// building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The argument sits on a pole or on the branch cut of the function.
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    /// The error estimate of a special function exceeds what its validated
    /// envelope guarantees.
    #[error("{function}: estimated error {est_error:e} exceeds the validated envelope")]
    Accuracy {
        function: &'static str,
        est_error: f64,
    },

    /// Parameters outside the region where a closed form or series is
    /// implemented; callers fall back to quadrature.
    #[error("unsupported region for {function}: {detail}")]
    Unsupported {
        function: &'static str,
        detail: String,
    },

    /// The integrand decays too slowly for the integral to exist (or to be
    /// computed within the quadrature budget).
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// Re(p) = 0 with p != 0: the Heaviside branch factors are undefined there.
    #[error("degenerate transform variable: Re(p) = 0 (p = {re} + {im}i)")]
    DegenerateAxis { re: f64, im: f64 },

    #[error("quadrature did not converge: estimated error {abs_err:e} > tolerance {tolerance:e} after {subdivisions} subdivisions")]
    NotConverged {
        abs_err: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },

    /// A truncated series grew instead of shrinking.
    #[error("series unstable: {0}")]
    Unstable(String),

    /// The inverse Laplace sum did not settle under node doubling.
    #[error("inversion failed to converge at t = {t}: {detail}")]
    Oscillation { t: f64, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Config(e.to_string())
    }
}
