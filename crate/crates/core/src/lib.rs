pub mod checks;
pub mod cli;
pub mod closedform;
pub mod error;
pub mod inversion;
pub mod partition;
pub mod qmath;
pub mod quadrature;
pub mod series;
pub mod specfun;
pub mod stats;
pub mod transform;

pub use error::{Error, Result};
