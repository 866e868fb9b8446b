//! Simultaneous fit of (g, Γ_d, Γ_sd) to saturation, PLE linewidth versus
//! power, and decay-rate versus cavity detuning data.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{basin_hopping, BasinHoppingOptions, Bounds, FitResult, NelderMeadOptions, Objective};
use crate::error::{Error, Result};
use crate::model::{DriveSpec, SimSettings, Simulator, SystemParams};
use crate::SimCurve;

pub const FREE_NAMES: [&str; 3] = ["g", "gamma_d", "gamma_sd"];

/// One fitted rate (Hz).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeParam {
    pub initial: f64,
    pub lo: f64,
    pub hi: f64,
    /// Held at `initial` instead of fitted.
    pub fixed: bool,
}

impl FreeParam {
    pub fn new(initial: f64, lo: f64, hi: f64) -> Self {
        Self {
            initial,
            lo,
            hi,
            fixed: false,
        }
    }

    pub fn fixed(value: f64) -> Self {
        Self {
            initial: value,
            lo: value,
            hi: value,
            fixed: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetWeights {
    pub saturation: f64,
    pub linewidth: f64,
    pub decay: f64,
}

impl Default for DatasetWeights {
    fn default() -> Self {
        Self {
            saturation: 1.0,
            linewidth: 1.0,
            decay: 1.0,
        }
    }
}

/// Settings of [`global_cqed_fit`].
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalFitConfig {
    /// Fixed system parameters (κ, Γ₀, ω_a, η_cav, Δ_ac); g, Γ_d and Γ_sd are
    /// replaced by the candidates.
    pub system: SystemParams,
    /// Pulse timing, η_sys and t₀; the laser frequency is ω_a for saturation
    /// and decay data.
    pub drive: DriveSpec,
    /// (g, Γ_d, Γ_sd).
    pub free: [FreeParam; 3],
    pub weights: DatasetWeights,
    pub n_hops: usize,
    /// Hop half-width as a fraction of each parameter range.
    pub step_fraction: f64,
    pub temperature: f64,
    pub seed: u64,
    pub local_tol: f64,
    pub local_max_eval: usize,
    /// Laser frequencies per PLE scan of the linewidth data.
    pub scan_points: usize,
    pub sim: SimSettings,
}

impl Default for GlobalFitConfig {
    fn default() -> Self {
        Self {
            system: SystemParams::reference(),
            drive: DriveSpec::reference(),
            free: [
                FreeParam::new(30e6, 5e6, 100e6),
                FreeParam::new(1.0e9, 0.05e9, 3e9),
                FreeParam::new(1.0e9, 0.0, 4e9),
            ],
            weights: DatasetWeights::default(),
            n_hops: 25,
            step_fraction: 0.2,
            temperature: 1.0,
            seed: 0,
            local_tol: 1e-10,
            local_max_eval: 400,
            scan_points: 21,
            sim: SimSettings::default(),
        }
    }
}

impl GlobalFitConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in FREE_NAMES.iter().zip(&self.free) {
            if p.fixed {
                if !(p.initial >= 0.0) {
                    return Err(Error::InvalidParameter(format!("fixed {name} must be non-negative")));
                }
            } else if !(p.lo < p.hi) || !(p.lo..=p.hi).contains(&p.initial) || p.lo < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name}: need 0 <= lo < hi and lo <= initial <= hi"
                )));
            }
        }
        let w = &self.weights;
        if !(w.saturation > 0.0 && w.linewidth > 0.0 && w.decay > 0.0) {
            return Err(Error::InvalidParameter("dataset weights must be positive".into()));
        }
        if !(self.step_fraction > 0.0) || !(self.temperature > 0.0) {
            return Err(Error::InvalidParameter("step and temperature must be positive".into()));
        }
        if self.scan_points < 5 {
            return Err(Error::InvalidParameter("at least 5 scan points per PLE spectrum".into()));
        }
        self.system.validate()?;
        self.drive.validate()?;
        self.sim.validate()
    }

    fn candidate(&self, g: f64, gamma_d: f64, gamma_sd: f64) -> Simulator {
        Simulator::with_settings(
            SystemParams {
                g,
                gamma_d,
                gamma_sd,
                ..self.system
            },
            self.sim,
        )
    }

    fn on_resonance(&self) -> DriveSpec {
        DriveSpec {
            omega_l: self.system.omega_a,
            ..self.drive
        }
    }
}

/// The three measured (or synthetic) curves.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalDatasets {
    /// Counts per pulse versus input power (W).
    pub saturation: SimCurve,
    /// PLE FWHM (Hz) versus input power (W).
    pub linewidth_vs_power: SimCurve,
    /// `Γ_cav/Γ₀` versus Δ_ac (Hz).
    pub decay_vs_detuning: SimCurve,
}

/// Model curves for one parameter set on the abscissas of `data`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelCurves {
    pub saturation: Vec<f64>,
    pub linewidth: Vec<f64>,
    pub decay: Vec<f64>,
}

/// Evaluates the model of every dataset at `(g, Γ_d, Γ_sd)` (saturation
/// without background).
pub fn model_curves(
    cfg: &GlobalFitConfig,
    params: [f64; 3],
    saturation_powers: &[f64],
    linewidth_powers: &[f64],
    detunings: &[f64],
) -> Result<ModelCurves> {
    let sim = cfg.candidate(params[0], params[1], params[2]);
    let drive = cfg.on_resonance();
    let saturation = sim.counts_vs_power(&drive, saturation_powers)?;
    let linewidth = sim
        .ple_linewidths(&drive, linewidth_powers, cfg.scan_points)?
        .iter()
        .map(|f| f.fwhm)
        .collect();
    let decay = if detunings.is_empty() {
        Vec::new()
    } else {
        sim.decay_vs_detuning(&drive, detunings)?.curve.y().to_vec()
    };
    Ok(ModelCurves {
        saturation,
        linewidth,
        decay,
    })
}

/// Abscissas of the synthetic triple dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetDesign {
    pub saturation_powers: Vec<f64>,
    pub linewidth_powers: Vec<f64>,
    pub detunings: Vec<f64>,
}

impl Default for DatasetDesign {
    fn default() -> Self {
        let (lo, hi) = (0.1e-9f64.ln(), 200e-9f64.ln());
        let sat = (0..10).map(|k| (lo + (hi - lo) * k as f64 / 9.0).exp()).collect();
        Self {
            saturation_powers: sat,
            linewidth_powers: vec![0.04e-9, 0.4e-9, 2e-9, 8e-9, 30e-9],
            detunings: (-5..=5).map(|k| k as f64 * 5e9).collect(),
        }
    }
}

/// Synthetic data at `truth` with multiplicative Gaussian noise of relative
/// size `noise`, plus a constant saturation background.
pub fn synthetic_datasets(
    cfg: &GlobalFitConfig,
    truth: [f64; 3],
    design: &DatasetDesign,
    noise: f64,
    background: f64,
    seed: u64,
) -> Result<GlobalDatasets> {
    let m = model_curves(cfg, truth, &design.saturation_powers, &design.linewidth_powers, &design.detunings)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut noisy = |v: &[f64], add: f64| -> Vec<f64> {
        v.iter().map(|&x| (x + add) * (1.0 + noise * normal.sample(&mut rng))).collect()
    };
    let sat = noisy(&m.saturation, background);
    let lw = noisy(&m.linewidth, 0.0);
    let dec = noisy(&m.decay, 0.0);
    Ok(GlobalDatasets {
        saturation: SimCurve::new(design.saturation_powers.clone(), sat)?
            .labeled("input power", "W", "counts", "1/pulse"),
        linewidth_vs_power: SimCurve::new(design.linewidth_powers.clone(), lw)?
            .labeled("input power", "W", "PLE FWHM", "Hz"),
        decay_vs_detuning: SimCurve::new(design.detunings.clone(), dec)?
            .labeled("cavity detuning", "Hz", "decay rate / gamma0", ""),
    })
}

/// Outcome of [`global_cqed_fit`].
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalFit {
    /// `params = [g, Γ_d, Γ_sd]` (Hz), uncertainties likewise;
    /// `residuals` holds the normalized residual norm of each dataset.
    pub result: FitResult<f64>,
    /// Fitted constant saturation background, counts per pulse.
    pub background: f64,
    /// Model at the fitted parameters on the data abscissas (saturation includes background).
    pub model: ModelCurves,
}

struct Problem<'a> {
    cfg: &'a GlobalFitConfig,
    data: &'a GlobalDatasets,
    scales: [f64; 3],
}

impl Problem<'_> {
    fn physical(&self, z: &[f64]) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mut k = 0;
        for (i, p) in self.cfg.free.iter().enumerate() {
            out[i] = if p.fixed {
                p.initial
            } else {
                let v = p.lo + z[k] * (p.hi - p.lo);
                k += 1;
                v
            };
        }
        out
    }

    fn normalized_initial(&self) -> Vec<f64> {
        self.cfg
            .free
            .iter()
            .filter(|p| !p.fixed)
            .map(|p| (p.initial - p.lo) / (p.hi - p.lo))
            .collect()
    }

    /// Weighted normalized residuals of each dataset, and the background.
    fn residuals(&self, params: [f64; 3]) -> Result<([Vec<f64>; 3], f64, ModelCurves)> {
        let d = self.data;
        let mut m = model_curves(
            self.cfg,
            params,
            d.saturation.x(),
            d.linewidth_vs_power.x(),
            d.decay_vs_detuning.x(),
        )?;
        let n = m.saturation.len() as f64;
        let background = d.saturation.y().iter().zip(&m.saturation).map(|(y, f)| y - f).sum::<f64>() / n;
        m.saturation.iter_mut().for_each(|v| *v += background);
        let w = &self.cfg.weights;
        let res = |model: &[f64], data: &[f64], scale: f64, weight: f64| -> Vec<f64> {
            model.iter().zip(data).map(|(f, y)| weight.sqrt() * (f - y) / scale).collect()
        };
        let r = [
            res(&m.saturation, d.saturation.y(), self.scales[0], w.saturation),
            res(&m.linewidth, d.linewidth_vs_power.y(), self.scales[1], w.linewidth),
            res(&m.decay, d.decay_vs_detuning.y(), self.scales[2], w.decay),
        ];
        Ok((r, background, m))
    }

    fn cost(&self, params: [f64; 3]) -> f64 {
        match self.residuals(params) {
            Ok((r, _, _)) => r.iter().flatten().map(|v| v * v).sum(),
            Err(e) => {
                log::debug!("rejected candidate {params:?}: {e}");
                f64::INFINITY
            }
        }
    }
}

fn max_abs(c: &SimCurve) -> f64 {
    c.y().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Basin hopping over Nelder–Mead in normalized coordinates (each free
/// parameter mapped to [0, 1]); cost is the weighted sum of squared residuals,
/// each dataset divided by its largest value.
pub fn global_cqed_fit(data: &GlobalDatasets, cfg: &GlobalFitConfig) -> Result<GlobalFit> {
    cfg.validate()?;
    for (name, c) in [
        ("saturation", &data.saturation),
        ("linewidth_vs_power", &data.linewidth_vs_power),
        ("decay_vs_detuning", &data.decay_vs_detuning),
    ] {
        if c.is_empty() {
            return Err(Error::Fit(format!("{name} dataset is empty")));
        }
        if !(max_abs(c) > 0.0) {
            return Err(Error::Fit(format!("{name} dataset is identically zero")));
        }
    }
    let problem = Problem {
        cfg,
        data,
        scales: [
            max_abs(&data.saturation),
            max_abs(&data.linewidth_vs_power),
            max_abs(&data.decay_vs_detuning),
        ],
    };
    let z0 = problem.normalized_initial();
    let n_free = z0.len();

    let (z_best, mut result) = if n_free == 0 {
        let c = problem.cost(problem.physical(&[]));
        (Vec::new(), FitResult::local(Vec::new(), c, 1, true))
    } else {
        let mut obj = Objective::bounded(vec![Bounds::new(0.0, 1.0); n_free], |z: &[f64]| {
            problem.cost(problem.physical(z))
        });
        let mut local = NelderMeadOptions::new(cfg.local_tol, cfg.local_max_eval);
        local.xtol = 1e-4;
        local.initial_step = Some(vec![0.1; n_free]);
        let opts = BasinHoppingOptions {
            n_hops: cfg.n_hops,
            step: vec![cfg.step_fraction; n_free],
            temperature: cfg.temperature,
            seed: cfg.seed,
            local,
        };
        let r = basin_hopping(&mut obj, &z0, &opts)?;
        (r.params.clone(), r)
    };
    if !result.cost.is_finite() || result.cost >= f64::MAX {
        return Err(Error::Fit("no feasible parameter set found".into()));
    }

    let best = problem.physical(&z_best);
    let (res, background, model) = problem.residuals(best)?;
    let names = ["saturation", "linewidth_vs_power", "decay_vs_detuning"];
    result.residuals = names
        .iter()
        .zip(&res)
        .map(|(n, r)| (n.to_string(), r.iter().map(|v| v * v).sum::<f64>().sqrt()))
        .collect::<BTreeMap<_, _>>();
    result.uncertainties = Some(uncertainties(&problem, &z_best, &res));
    result.params = best.to_vec();
    Ok(GlobalFit {
        result,
        background,
        model,
    })
}

/// `s² (JᵀJ)⁻¹` from central differences of the residual vector in
/// normalized coordinates; fixed parameters get zero.
fn uncertainties(problem: &Problem<'_>, z: &[f64], res: &[Vec<f64>; 3]) -> Vec<f64> {
    let flat: Vec<f64> = res.iter().flatten().copied().collect();
    let n = flat.len();
    let p = z.len();
    let mut out = vec![0.0; 3];
    if p == 0 || n <= p + 1 {
        return out;
    }
    let h = 1e-3;
    let mut jac = DMatrix::<f64>::zeros(n, p);
    for k in 0..p {
        let shifted = |sign: f64| -> Option<Vec<f64>> {
            let mut zz = z.to_vec();
            zz[k] = (zz[k] + sign * h).clamp(0.0, 1.0);
            let (r, _, _) = problem.residuals(problem.physical(&zz)).ok()?;
            Some(r.iter().flatten().copied().collect())
        };
        let (Some(up), Some(down)) = (shifted(1.0), shifted(-1.0)) else {
            return vec![f64::NAN; 3];
        };
        let width = (z[k] + h).min(1.0) - (z[k] - h).max(0.0);
        for i in 0..n {
            jac[(i, k)] = (up[i] - down[i]) / width;
        }
    }
    // one extra degree of freedom for the background
    let s2 = flat.iter().map(|v| v * v).sum::<f64>() / (n - p - 1) as f64;
    let jtj = jac.transpose() * &jac;
    let eps = 1e-14 * jtj.amax().max(f64::MIN_POSITIVE);
    let Ok(inv) = jtj.pseudo_inverse(eps) else {
        return vec![f64::NAN; 3];
    };
    let mut k = 0;
    for (i, fp) in problem.cfg.free.iter().enumerate() {
        if !fp.fixed {
            out[i] = (s2 * inv[(k, k)]).max(0.0).sqrt() * (fp.hi - fp.lo);
            k += 1;
        }
    }
    out
}
