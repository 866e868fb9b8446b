//! Dense operator algebra, Lindblad generators and propagation.

mod evolve;
mod expm;
mod liouvillian;
mod operator;
mod space;

pub use evolve::{evolve_trace, evolve_trace_with, EvolveOptions, Evolution};
pub use expm::{expm, integrated_action};
pub use liouvillian::{
    build_liouvillian, propagator, HermitianBasis, Liouvillian, Propagator, RealGenerator,
};
pub use operator::{
    destroy, sigma_minus, sigma_plus, sigma_z, tensor, DensityMatrix, QuantumOperator,
};
pub use space::{AtomLevel, HilbertSpace};
