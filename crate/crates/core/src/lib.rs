//! Simulation and parameter extraction for a single two-level emitter coupled
//! to a lossy optical cavity.

pub mod acceptance;
pub mod analytics;
pub mod curve;
pub mod dataio;
pub mod error;
pub mod fitting;
pub mod model;
pub mod quantum;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SimCurve = curve::Curve<f64>;
pub type Operator = quantum::QuantumOperator<f64>;
pub type Density = quantum::DensityMatrix<f64>;
