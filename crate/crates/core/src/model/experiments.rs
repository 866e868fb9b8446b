use std::f64::consts::TAU;

use rayon::prelude::*;

use super::diffusion::diffusion_sigma;
use super::engine::{with_truncation, Engine};
use super::hamiltonian::{intracavity_photons, rabi_frequency};
use super::params::{DriveSpec, SimSettings, SystemParams};
use crate::error::{Error, Result};
use crate::fitting::{fit_exponential_pure, fit_gaussian, PeakFit};
use crate::SimCurve;

/// Simulated excitation cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseCycle {
    /// Detected photon rate `η_sys κ ⟨a†a⟩` (s⁻¹) from the pulse start to the period end.
    pub trace: SimCurve,
    /// Detected photons per pulse inside the collection window.
    pub counts_per_pulse: f64,
    /// Photon cutoff that satisfied the truncation check.
    pub n_max: usize,
}

/// Exponential decay rate of a trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayRate {
    /// Rate constant, s⁻¹.
    pub per_second: f64,
    /// `per_second / 2π`, the ordinary-frequency form used for Γ₀.
    pub rate_hz: f64,
    /// Standard error of `rate_hz`.
    pub uncertainty_hz: f64,
}

impl DecayRate {
    pub fn lifetime(&self) -> f64 {
        1.0 / self.per_second
    }
}

/// Counts versus power at fixed laser frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct SaturationCurve {
    pub curve: SimCurve,
    /// Counts per pulse under deep saturation (emitter saturation parameter 10³).
    pub asymptote: f64,
    /// Input power giving half the asymptote, W.
    pub half_saturation_power: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetuningSweep {
    /// `Γ_cav/Γ₀` versus Δ_ac (Hz).
    pub curve: SimCurve,
    pub rates: Vec<DecayRate>,
}

/// PLE spectra for a list of cavity detunings on a shared laser scan.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMap {
    pub detunings: Vec<f64>,
    pub scan: Vec<f64>,
    /// `counts[row][col]`, one row per detuning.
    pub counts: Vec<Vec<f64>>,
    /// Decay lifetime per row, s.
    pub lifetimes: Vec<f64>,
    /// Counts multiplied by `e^{t₀/τ(Δ_ac)}`.
    pub corrected: Vec<Vec<f64>>,
}

impl SpectrumMap {
    /// Row holding the largest corrected count.
    pub fn brightest_corrected_row(&self) -> usize {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, row) in self.corrected.iter().enumerate() {
            for &v in row {
                if v > best.1 {
                    best = (i, v);
                }
            }
        }
        best.0
    }
}

/// Model parameters together with numerical settings.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Simulator {
    pub params: SystemParams,
    pub settings: SimSettings,
}

impl Simulator {
    pub fn new(params: SystemParams) -> Self {
        Self {
            params,
            settings: SimSettings::default(),
        }
    }

    pub fn with_settings(params: SystemParams, settings: SimSettings) -> Self {
        Self { params, settings }
    }

    fn rabi(&self, d: &DriveSpec) -> f64 {
        rabi_frequency(intracavity_photons(d, &self.params), self.params.g)
    }

    pub fn pulse_cycle(&self, d: &DriveSpec) -> Result<PulseCycle> {
        d.validate()?;
        let omega = self.rabi(d);
        with_truncation(&self.params, &self.settings, |e| {
            let nodes = e.free_nodes(d)?;
            let traces: Vec<_> = nodes
                .par_iter()
                .map(|n| e.node_trace(n, d, omega))
                .collect::<Result<_>>()?;
            let k = e.sample_count(d);
            let scale = e.detection_rate(d);
            let y: Vec<f64> = (0..k)
                .map(|i| {
                    let vals: Vec<f64> = traces.iter().map(|t| t.photons[i]).collect();
                    scale * e.quad.average(&vals)
                })
                .collect();
            let x: Vec<f64> = (0..k).map(|i| i as f64 * self.settings.dt_record).collect();
            let integrals: Vec<f64> = traces.iter().map(|t| t.window_integral).collect();
            let counts = scale * e.quad.average(&integrals);
            let trace = SimCurve::new(x, y)?
                .labeled("time", "s", "detected rate", "1/s")
                .with_meta("window_start_s", format!("{:e}", d.window_start()));
            Ok(PulseCycle {
                trace,
                counts_per_pulse: counts,
                n_max: e.space.n_max(),
            })
        })
    }

    /// Counts per pulse for each drive, sharing the free-evolution data.
    fn counts_for(&self, e: &Engine<'_>, drives: &[DriveSpec]) -> Result<Vec<f64>> {
        let Some(first) = drives.first() else {
            return Ok(Vec::new());
        };
        let nodes = e.free_nodes(first)?;
        drives
            .par_iter()
            .map(|d| e.counts(&nodes, d, self.rabi(d)))
            .collect()
    }

    /// Counts per pulse at each laser frequency (Hz) of `scan`.
    pub fn ple_spectrum(&self, d: &DriveSpec, scan: &[f64]) -> Result<SimCurve> {
        d.validate()?;
        if d.p_in == 0.0 {
            log::warn!("PLE scan with zero input power: the spectrum is flat");
        }
        let drives: Vec<DriveSpec> = scan.iter().map(|&w| DriveSpec { omega_l: w, ..*d }).collect();
        let y = with_truncation(&self.params, &self.settings, |e| self.counts_for(e, &drives))?;
        Ok(SimCurve::new(scan.to_vec(), y)?.labeled("laser frequency", "Hz", "counts", "1/pulse"))
    }

    /// Gaussian fit of the PLE spectrum at each input power, each scanned over
    /// `scan_points` frequencies from [`Simulator::default_ple_scan`].
    pub fn ple_linewidths(&self, d: &DriveSpec, powers: &[f64], scan_points: usize) -> Result<Vec<PeakFit>> {
        let scans: Vec<Vec<f64>> = powers
            .iter()
            .map(|&p| self.default_ple_scan(&DriveSpec { p_in: p, ..*d }, scan_points))
            .collect();
        let drives: Vec<DriveSpec> = powers
            .iter()
            .zip(&scans)
            .flat_map(|(&p, scan)| scan.iter().map(move |&w| DriveSpec { p_in: p, omega_l: w, ..*d }))
            .collect();
        for dr in &drives {
            dr.validate()?;
        }
        let y = with_truncation(&self.params, &self.settings, |e| self.counts_for(e, &drives))?;
        y.chunks(scan_points.max(2))
            .zip(&scans)
            .map(|(row, scan)| fit_gaussian(&SimCurve::new(scan.clone(), row.to_vec())?))
            .collect()
    }

    /// Counts per pulse versus input power (W) at the template's laser frequency.
    pub fn counts_vs_power(&self, d: &DriveSpec, powers: &[f64]) -> Result<Vec<f64>> {
        let drives: Vec<DriveSpec> = powers.iter().map(|&p| DriveSpec { p_in: p, ..*d }).collect();
        for dr in &drives {
            dr.validate()?;
        }
        with_truncation(&self.params, &self.settings, |e| self.counts_for(e, &drives))
    }

    /// Power at which the emitter saturation parameter `Ω²/(γ∥γ⊥)` reaches `s_param`.
    pub fn power_for_saturation(&self, d: &DriveSpec, s_param: f64) -> Result<f64> {
        let p = &self.params;
        if p.g == 0.0 || p.eta_cav == 0.0 {
            return Err(Error::InvalidParameter(
                "no coupling between the input light and the emitter".into(),
            ));
        }
        let purcell = 4.0 * p.g * p.g / (p.kappa * p.gamma0) / (1.0 + (2.0 * p.delta_ac / p.kappa).powi(2));
        let g_par = TAU * p.gamma0 * (1.0 + purcell);
        let g_perp = 0.5 * g_par + TAU * p.gamma_d;
        let omega = (s_param * g_par * g_perp).sqrt() / TAU;
        let n_ph = (omega / (2.0 * p.g)).powi(2);
        let per_watt = intracavity_photons(&DriveSpec { p_in: 1.0, ..*d }, p);
        Ok(n_ph / per_watt)
    }

    pub fn saturation_curve(&self, d: &DriveSpec, powers: &[f64]) -> Result<SaturationCurve> {
        let y = self.counts_vs_power(d, powers)?;
        let curve = SimCurve::new(powers.to_vec(), y)?.labeled("input power", "W", "counts", "1/pulse");
        let p_sat = self.power_for_saturation(d, 1e3)?;
        let asymptote = self.counts_vs_power(d, &[p_sat])?[0];
        // bisection in log power for counts = asymptote/2
        let target = 0.5 * asymptote;
        let (mut lo, mut hi) = ((p_sat * 1e-8).ln(), p_sat.ln());
        for _ in 0..18 {
            let mid = 0.5 * (lo + hi);
            let c = self.counts_vs_power(d, &[mid.exp()])?[0];
            if c < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(SaturationCurve {
            curve,
            asymptote,
            half_saturation_power: (0.5 * (lo + hi)).exp(),
        })
    }

    /// Decay-rate enhancement versus cavity detuning, laser at ω_a.
    pub fn decay_vs_detuning(&self, d: &DriveSpec, detunings: &[f64]) -> Result<DetuningSweep> {
        let rates: Vec<DecayRate> = detunings
            .par_iter()
            .map(|&dac| {
                let sim = Simulator {
                    params: SystemParams {
                        delta_ac: dac,
                        ..self.params
                    },
                    settings: self.settings,
                };
                let drive = DriveSpec {
                    omega_l: self.params.omega_a,
                    ..*d
                };
                let cycle = sim.pulse_cycle(&drive)?;
                extract_decay_rate(&cycle.trace, drive.window_start())
            })
            .collect::<Result<_>>()?;
        let y = rates.iter().map(|r| r.rate_hz / self.params.gamma0).collect();
        let curve = SimCurve::new(detunings.to_vec(), y)?.labeled("cavity detuning", "Hz", "decay rate / gamma0", "");
        Ok(DetuningSweep { curve, rates })
    }

    pub fn spectrum_map_2d(&self, d: &DriveSpec, detunings: &[f64], scan: &[f64]) -> Result<SpectrumMap> {
        let counts: Vec<Vec<f64>> = detunings
            .iter()
            .map(|&dac| {
                let sim = Simulator {
                    params: SystemParams {
                        delta_ac: dac,
                        ..self.params
                    },
                    settings: self.settings,
                };
                Ok(sim.ple_spectrum(d, scan)?.y().to_vec())
            })
            .collect::<Result<_>>()?;
        let sweep = self.decay_vs_detuning(d, detunings)?;
        let lifetimes: Vec<f64> = sweep.rates.iter().map(|r| r.lifetime()).collect();
        let corrected = counts
            .iter()
            .zip(&lifetimes)
            .map(|(row, tau)| row.iter().map(|c| c * (d.t0 / tau).exp()).collect())
            .collect();
        Ok(SpectrumMap {
            detunings: detunings.to_vec(),
            scan: scan.to_vec(),
            counts,
            lifetimes,
            corrected,
        })
    }

    /// Rough PLE FWHM (Hz): Voigt combination of the power-broadened
    /// homogeneous line and the spectral-diffusion Gaussian.
    pub fn estimated_linewidth(&self, d: &DriveSpec) -> f64 {
        let p = &self.params;
        let purcell = 4.0 * p.g * p.g / (p.kappa * p.gamma0) / (1.0 + (2.0 * p.delta_ac / p.kappa).powi(2));
        let g_par = TAU * p.gamma0 * (1.0 + purcell);
        let g_perp = 0.5 * g_par + TAU * p.gamma_d;
        let on_resonance = DriveSpec {
            omega_l: p.omega_a,
            ..*d
        };
        let omega = TAU * self.rabi(&on_resonance);
        let lorentz = 2.0 * g_perp * (1.0 + omega * omega / (g_par * g_perp)).sqrt() / TAU;
        let gauss = 2.0 * (2.0 * std::f64::consts::LN_2).sqrt() * diffusion_sigma(p.gamma_sd);
        0.5346 * lorentz + (0.2166 * lorentz * lorentz + gauss * gauss).sqrt()
    }

    /// `n` laser frequencies spanning ±2.5 estimated linewidths around ω_a.
    pub fn default_ple_scan(&self, d: &DriveSpec, n: usize) -> Vec<f64> {
        let half = 2.5 * self.estimated_linewidth(d);
        let n = n.max(2);
        (0..n)
            .map(|i| self.params.omega_a - half + 2.0 * half * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Single-exponential decay rate of `trace` for `t >= fit_start`.
pub fn extract_decay_rate(trace: &SimCurve, fit_start: f64) -> Result<DecayRate> {
    let tail = trace.tail_from(fit_start)?;
    if tail.len() < 3 {
        return Err(Error::Fit("fewer than three samples in the fit window".into()));
    }
    if tail.y().iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Fit("decay trace must be strictly positive in the fit window".into()));
    }
    let fit = fit_exponential_pure(&tail)?;
    let span = tail.x()[tail.len() - 1] - tail.x()[0];
    if !(fit.rate * span > 0.01) {
        return Err(Error::Fit(
            "decay rate indistinguishable from zero over the fit window".into(),
        ));
    }
    Ok(DecayRate {
        per_second: fit.rate,
        rate_hz: fit.rate / TAU,
        uncertainty_hz: fit.uncertainties[1] / TAU,
    })
}

pub fn simulate_pulse_cycle(s: &SystemParams, d: &DriveSpec) -> Result<PulseCycle> {
    Simulator::new(*s).pulse_cycle(d)
}

pub fn ple_spectrum(s: &SystemParams, d: &DriveSpec, scan: &[f64]) -> Result<SimCurve> {
    Simulator::new(*s).ple_spectrum(d, scan)
}

pub fn saturation_curve(s: &SystemParams, d_template: &DriveSpec, powers: &[f64]) -> Result<SaturationCurve> {
    Simulator::new(*s).saturation_curve(d_template, powers)
}

pub fn decay_vs_detuning(s: &SystemParams, d: &DriveSpec, detunings: &[f64]) -> Result<SimCurve> {
    Ok(Simulator::new(*s).decay_vs_detuning(d, detunings)?.curve)
}

pub fn spectrum_map_2d(s: &SystemParams, d: &DriveSpec, detunings: &[f64], scans: &[f64]) -> Result<SpectrumMap> {
    Simulator::new(*s).spectrum_map_2d(d, detunings, scans)
}
