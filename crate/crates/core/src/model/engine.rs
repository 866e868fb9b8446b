//! Pulse-cycle propagation shared by all simulated experiments.
//!
//! The drive-on segment is propagated on the full real coordinate space.
//! Without drive the excitation number `σ₊σ₋ + a†a` is conserved, so the
//! block-diagonal part of ρ (which carries every population, in particular
//! `⟨a†a⟩`) evolves on its own. Those coordinates are also unchanged by a
//! change of rotating frame, so the free evolution is built once per
//! spectral-diffusion offset, in the frame of the nominal emitter frequency,
//! and reused for every laser frequency and power.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rayon::prelude::*;

use super::diffusion::{gaussian_quadrature_with_span, DiffusionQuadrature};
use super::hamiltonian::{build_hamiltonian_shifted, jump_operators};
use super::params::{DriveSpec, SimSettings, SystemParams};
use crate::error::{Error, Result};
use crate::quantum::{build_liouvillian, HermitianBasis, HilbertSpace, RealGenerator};

const TRACE_TOL: f64 = 1e-8;

/// Free evolution of one diffusion node.
pub(crate) struct FreeNode {
    pub delta: f64,
    pub generator: RealGenerator<f64>,
    /// `r` with `r · c(pulse end) = ∫ ⟨a†a⟩ dt` over the collection window.
    pub response: DVector<f64>,
}

/// Recorded per-node evolution over one repetition period.
pub(crate) struct NodeTrace {
    /// `⟨a†a⟩` at `k · dt_record`.
    pub photons: Vec<f64>,
    /// `∫ ⟨a†a⟩ dt` over the collection window.
    pub window_integral: f64,
}

pub(crate) struct Engine<'a> {
    pub s: &'a SystemParams,
    pub set: &'a SimSettings,
    pub space: HilbertSpace,
    pub quad: DiffusionQuadrature,
    full: HermitianBasis,
    sector: HermitianBasis,
    sector_idx: Vec<usize>,
    photons_full: DVector<f64>,
    photons_sector: DVector<f64>,
    top_full: DVector<f64>,
    top_sector: DVector<f64>,
    ground: DVector<f64>,
}

impl<'a> Engine<'a> {
    pub fn new(s: &'a SystemParams, set: &'a SimSettings, space: HilbertSpace) -> Result<Self> {
        let dim = space.total_dim();
        let full = HermitianBasis::full(dim);
        let charge: Vec<usize> = (0..dim).map(|i| space.excitations(i)).collect();
        let sector = HermitianBasis::block_diagonal(&charge);
        let sector_idx = sector
            .positions_in(&full)
            .ok_or_else(|| Error::InvalidParameter("sector basis not contained in full basis".into()))?;
        let n = space.photon_number::<f64>();
        let top = space.top_fock_projector::<f64>();
        let quad = gaussian_quadrature_with_span(s.gamma_sd, set.diffusion_points, set.diffusion_span_sigmas)?;
        Ok(Self {
            s,
            set,
            space,
            quad,
            photons_full: full.observable(&n),
            photons_sector: sector.observable(&n),
            top_full: full.observable(&top),
            top_sector: sector.observable(&top),
            ground: full.coords(&space.ground_state::<f64>()),
            full,
            sector,
            sector_idx,
        })
    }

    /// Detected photons per second per unit `⟨a†a⟩`.
    pub fn detection_rate(&self, d: &DriveSpec) -> f64 {
        d.eta_sys * TAU * self.s.kappa
    }

    fn to_sector(&self, c: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.sector_idx.len(), self.sector_idx.iter().map(|&i| c[i]))
    }

    fn guard(&self, population: f64) -> Result<()> {
        if population > self.set.truncation_threshold {
            Err(Error::Truncation {
                n_max: self.space.n_max(),
                population,
            })
        } else {
            Ok(())
        }
    }

    fn check_trace(&self, basis: &HermitianBasis, c: &DVector<f64>, time: f64) -> Result<()> {
        let dev = (basis.trace(c) - 1.0).abs();
        if dev > TRACE_TOL || !dev.is_finite() {
            return Err(Error::InvariantViolation {
                what: "trace",
                time,
                deviation: dev,
            });
        }
        Ok(())
    }

    /// Real generator with the laser on, emitter shifted by `delta`.
    pub fn driven_generator(&self, delta: f64, omega_l: f64, omega_rabi: f64) -> Result<RealGenerator<f64>> {
        let h = build_hamiltonian_shifted(self.s, omega_l, omega_rabi, delta, &self.space)?;
        let l = build_liouvillian(&h, &jump_operators(self.s, &self.space))?;
        Ok(l.real_generator())
    }

    fn free_generator(&self, delta: f64) -> Result<RealGenerator<f64>> {
        let h = build_hamiltonian_shifted(self.s, self.s.omega_a, 0.0, delta, &self.space)?;
        let l = build_liouvillian(&h, &jump_operators(self.s, &self.space))?;
        l.sector_generator(self.sector.clone())
    }

    fn free_node(&self, delta: f64, d: &DriveSpec) -> Result<FreeNode> {
        let generator = self.free_generator(delta)?;
        let v = generator.integrated_response(&self.photons_sector, d.window_length())?;
        let response = if d.t0 > 0.0 {
            generator.propagator(d.t0)?.matrix().tr_mul(&v)
        } else {
            v
        };
        Ok(FreeNode {
            delta,
            generator,
            response,
        })
    }

    /// Free-evolution data for every diffusion node.
    pub fn free_nodes(&self, d: &DriveSpec) -> Result<Vec<FreeNode>> {
        self.quad.offsets.par_iter().map(|&delta| self.free_node(delta, d)).collect()
    }

    /// Full coordinates at the end of the pulse.
    fn pulse_end(&self, delta: f64, omega_l: f64, omega_rabi: f64, width: f64) -> Result<DVector<f64>> {
        if omega_rabi == 0.0 {
            // the ground state is stationary without drive
            return Ok(self.ground.clone());
        }
        let p = self.driven_generator(delta, omega_l, omega_rabi)?.propagator(width)?;
        let c = p.apply(&self.ground);
        self.check_trace(&self.full, &c, width)?;
        self.guard(self.top_full.dot(&c))?;
        Ok(c)
    }

    /// Expected detected photons per pulse, diffusion averaged.
    pub fn counts(&self, nodes: &[FreeNode], d: &DriveSpec, omega_rabi: f64) -> Result<f64> {
        let per_node: Vec<f64> = nodes
            .par_iter()
            .map(|node| {
                let c = self.pulse_end(node.delta, d.omega_l, omega_rabi, d.pulse_width)?;
                Ok(node.response.dot(&self.to_sector(&c)))
            })
            .collect::<Result<_>>()?;
        Ok(self.detection_rate(d) * self.quad.average(&per_node))
    }

    /// Sample times `k · dt_record`, `k = 0..=K`, covering one period.
    pub fn sample_count(&self, d: &DriveSpec) -> usize {
        (d.repetition_period / self.set.dt_record + 1e-6).floor() as usize + 1
    }

    /// Records `⟨a†a⟩` over one period for one node.
    pub fn node_trace(&self, node: &FreeNode, d: &DriveSpec, omega_rabi: f64) -> Result<NodeTrace> {
        let dt = self.set.dt_record;
        let k_total = self.sample_count(d) - 1;
        let n_on = (d.pulse_width / dt + 1e-6).floor() as usize;
        let remainder = d.pulse_width - n_on as f64 * dt;
        let remainder = if remainder > 1e-6 * dt { remainder } else { 0.0 };

        let mut photons = Vec::with_capacity(k_total + 1);
        let mut c = self.ground.clone();
        photons.push(self.photons_full.dot(&c));
        let driven = if omega_rabi == 0.0 {
            None
        } else {
            Some(self.driven_generator(node.delta, d.omega_l, omega_rabi)?)
        };
        if let Some(gen) = &driven {
            let step = gen.propagator(dt)?;
            for k in 1..=n_on.min(k_total) {
                c = step.apply(&c);
                let t = k as f64 * dt;
                self.check_trace(&self.full, &c, t)?;
                self.guard(self.top_full.dot(&c))?;
                photons.push(self.photons_full.dot(&c));
            }
        } else {
            photons.extend(std::iter::repeat(0.0).take(n_on.min(k_total)));
        }
        let mut next = n_on + 1;
        if remainder > 0.0 {
            if let Some(gen) = &driven {
                c = gen.propagator(remainder)?.apply(&c);
            }
        }
        let c_end = c;
        let mut cs = self.to_sector(&c_end);
        let window_integral = node.response.dot(&cs);
        if remainder > 0.0 && next <= k_total {
            cs = node.generator.propagator(dt - remainder)?.apply(&cs);
            photons.push(self.photons_sector.dot(&cs));
            next += 1;
        }
        if next <= k_total {
            let step = node.generator.propagator(dt)?;
            for k in next..=k_total {
                cs = step.apply(&cs);
                let t = k as f64 * dt;
                self.check_trace(&self.sector, &cs, t)?;
                self.guard(self.top_sector.dot(&cs))?;
                photons.push(self.photons_sector.dot(&cs));
            }
        }
        if let Some(_) = &driven {
            let rho = self.full.density(&c_end)?;
            rho.check(d.pulse_width)?;
        }
        Ok(NodeTrace {
            photons,
            window_integral,
        })
    }
}

/// Runs `f` with the initial cutoff, doubling it while the top Fock level is
/// over-populated, up to `max_n_max`.
pub(crate) fn with_truncation<R>(
    s: &SystemParams,
    set: &SimSettings,
    f: impl Fn(&Engine<'_>) -> Result<R>,
) -> Result<R> {
    s.validate()?;
    set.validate()?;
    let mut space = HilbertSpace::new(set.n_max)?;
    loop {
        let engine = Engine::new(s, set, space)?;
        match f(&engine) {
            Err(Error::Truncation { n_max, population }) if space.doubled().n_max() <= set.max_n_max => {
                log::info!(
                    "top Fock level population {population:.2e} at n_max = {n_max}; retrying with n_max = {}",
                    space.doubled().n_max()
                );
                space = space.doubled();
            }
            r => return r,
        }
    }
}
