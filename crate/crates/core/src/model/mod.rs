//! Driven Jaynes–Cummings model of the emitter–cavity system under pulsed
//! resonant excitation, with pure dephasing and spectral diffusion.

mod diffusion;
mod engine;
mod experiments;
mod hamiltonian;
mod params;

pub use diffusion::{
    diffusion_sigma, gaussian_quadrature_for_diffusion, gaussian_quadrature_with_span, DiffusionQuadrature,
    DEFAULT_SPAN_SIGMAS,
};
pub use experiments::{
    decay_vs_detuning, extract_decay_rate, ple_spectrum, saturation_curve, simulate_pulse_cycle, spectrum_map_2d,
    DecayRate, DetuningSweep, PulseCycle, SaturationCurve, Simulator, SpectrumMap,
};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_shifted, intracavity_photons, jump_operators, rabi_frequency};
pub use params::{DriveSpec, SimSettings, SystemParams};
