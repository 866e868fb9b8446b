//! Declarative experiment configuration (TOML).

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::units::{Dimension, Hz, Quantity, Seconds, Watts};
use crate::analytics::EfficiencyChain;
use crate::error::{Error, Result};
use crate::fitting::{DatasetDesign, DatasetWeights, FreeParam, GlobalFitConfig};
use crate::model::{DriveSpec, SimSettings, SystemParams};

/// Unknown-key policy of [`load_config_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strictness {
    /// Unknown keys are errors.
    #[default]
    Strict,
    /// Unknown keys are logged and ignored.
    Lax,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub system: SystemSection,
    #[serde(default)]
    pub drive: DriveSection,
    #[serde(default)]
    pub efficiency: EfficiencySection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub sweeps: SweepSection,
    #[serde(default)]
    pub fit: FitSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSection {
    pub g_hz: Hz,
    pub kappa_hz: Hz,
    pub gamma0_hz: Hz,
    pub gamma_d_hz: Hz,
    pub gamma_sd_hz: Hz,
    #[serde(default = "reference_omega_a")]
    pub omega_a_hz: Hz,
    #[serde(default = "reference_eta_cav")]
    pub eta_cav: f64,
    #[serde(default)]
    pub delta_ac_hz: Hz,
}

fn reference_omega_a() -> Hz {
    Hz::new(SystemParams::reference().omega_a)
}

fn reference_eta_cav() -> f64 {
    SystemParams::reference().eta_cav
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DriveSection {
    pub p_in_w: Watts,
    /// ω_L − ω_a.
    pub laser_detuning_hz: Hz,
    pub pulse_width_s: Seconds,
    pub repetition_period_s: Seconds,
    pub t0_s: Seconds,
    pub eta_sys: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        let d = DriveSpec::reference();
        Self {
            p_in_w: d.p_in.into(),
            laser_detuning_hz: Hz::new(0.0),
            pulse_width_s: d.pulse_width.into(),
            repetition_period_s: d.repetition_period.into(),
            t0_s: d.t0.into(),
            eta_sys: d.eta_sys,
        }
    }
}

/// Detection chain after the cavity; η_cav comes from `[system]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EfficiencySection {
    pub eta_gc: f64,
    pub eta_path: f64,
    pub eta_snspd: f64,
}

impl Default for EfficiencySection {
    fn default() -> Self {
        Self {
            eta_gc: 0.461,
            eta_path: 0.786,
            eta_snspd: 0.703,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationSection {
    pub n_max: usize,
    pub max_n_max: usize,
    pub diffusion_points: usize,
    pub diffusion_span_sigmas: f64,
    pub dt_record_s: Seconds,
    pub truncation_threshold: f64,
}

impl From<SimSettings> for SimulationSection {
    fn from(s: SimSettings) -> Self {
        Self {
            n_max: s.n_max,
            max_n_max: s.max_n_max,
            diffusion_points: s.diffusion_points,
            diffusion_span_sigmas: s.diffusion_span_sigmas,
            dt_record_s: s.dt_record.into(),
            truncation_threshold: s.truncation_threshold,
        }
    }
}

impl From<SimulationSection> for SimSettings {
    fn from(s: SimulationSection) -> Self {
        Self {
            n_max: s.n_max,
            max_n_max: s.max_n_max,
            diffusion_points: s.diffusion_points,
            diffusion_span_sigmas: s.diffusion_span_sigmas,
            dt_record: s.dt_record_s.value(),
            truncation_threshold: s.truncation_threshold,
        }
    }
}

impl Default for SimulationSection {
    fn default() -> Self {
        SimSettings::default().into()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// A list of values or an evenly spaced range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "")]
pub enum Grid<D: Dimension> {
    Range {
        start: Quantity<D>,
        stop: Quantity<D>,
        points: usize,
        #[serde(default)]
        spacing: Spacing,
    },
    List(Vec<Quantity<D>>),
}

impl<D: Dimension> Grid<D> {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Grid::Range {
            start: start.into(),
            stop: stop.into(),
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(start: f64, stop: f64, points: usize) -> Self {
        Grid::Range {
            start: start.into(),
            stop: stop.into(),
            points,
            spacing: Spacing::Log,
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Grid::List(v) => Ok(v.iter().map(|q| q.value()).collect()),
            Grid::Range {
                start,
                stop,
                points,
                spacing,
            } => {
                let (a, b, n) = (start.value(), stop.value(), *points);
                if n == 0 {
                    return Err(Error::Config("a range needs at least one point".into()));
                }
                if n == 1 {
                    return Ok(vec![a]);
                }
                let t = |i: usize| i as f64 / (n - 1) as f64;
                match spacing {
                    Spacing::Linear => Ok((0..n).map(|i| a + (b - a) * t(i)).collect()),
                    Spacing::Log => {
                        if !(a > 0.0 && b > 0.0) {
                            return Err(Error::Config("log ranges need positive end points".into()));
                        }
                        Ok((0..n).map(|i| (a.ln() + (b.ln() - a.ln()) * t(i)).exp()).collect())
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSection {
    pub ple_points: usize,
    /// Half-width of the PLE scan around ω_a; zero picks it from the expected linewidth.
    pub ple_half_span_hz: Hz,
    pub saturation_powers_w: Grid<super::units::Power>,
    pub detunings_hz: Grid<super::units::Frequency>,
    pub map_detunings_hz: Grid<super::units::Frequency>,
    /// Laser detunings from ω_a of the 2D map.
    pub map_scan_hz: Grid<super::units::Frequency>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            ple_points: 81,
            ple_half_span_hz: Hz::new(0.0),
            saturation_powers_w: Grid::log(0.1e-9, 1e-6, 13),
            detunings_hz: Grid::linear(-25e9, 25e9, 21),
            map_detunings_hz: Grid::linear(-20e9, 20e9, 9),
            map_scan_hz: Grid::linear(-12e9, 12e9, 49),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamBounds {
    pub initial_hz: Hz,
    pub lo_hz: Hz,
    pub hi_hz: Hz,
    #[serde(default)]
    pub fixed: bool,
}

impl From<FreeParam> for ParamBounds {
    fn from(p: FreeParam) -> Self {
        Self {
            initial_hz: p.initial.into(),
            lo_hz: p.lo.into(),
            hi_hz: p.hi.into(),
            fixed: p.fixed,
        }
    }
}

impl From<ParamBounds> for FreeParam {
    fn from(p: ParamBounds) -> Self {
        if p.fixed {
            FreeParam::fixed(p.initial_hz.value())
        } else {
            FreeParam::new(p.initial_hz.value(), p.lo_hz.value(), p.hi_hz.value())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightSection {
    pub saturation: f64,
    pub linewidth: f64,
    pub decay: f64,
}

impl Default for WeightSection {
    fn default() -> Self {
        let w = DatasetWeights::default();
        Self {
            saturation: w.saturation,
            linewidth: w.linewidth,
            decay: w.decay,
        }
    }
}

/// Synthetic triple dataset generated at the `[system]` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSection {
    /// Relative Gaussian noise.
    pub noise: f64,
    /// Constant saturation background, counts per pulse.
    pub background: f64,
    pub saturation_powers_w: Grid<super::units::Power>,
    pub linewidth_powers_w: Grid<super::units::Power>,
    pub detunings_hz: Grid<super::units::Frequency>,
}

impl Default for SyntheticSection {
    fn default() -> Self {
        let d = DatasetDesign::default();
        Self {
            noise: 0.01,
            background: 5e-4,
            saturation_powers_w: Grid::log(0.1e-9, 200e-9, d.saturation_powers.len()),
            linewidth_powers_w: Grid::List(d.linewidth_powers.iter().map(|&p| p.into()).collect()),
            detunings_hz: Grid::linear(d.detunings[0], *d.detunings.last().unwrap(), d.detunings.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitSection {
    pub seed: u64,
    pub n_hops: usize,
    pub step_fraction: f64,
    pub temperature: f64,
    pub local_tol: f64,
    pub local_max_eval: usize,
    pub scan_points: usize,
    pub g: ParamBounds,
    pub gamma_d: ParamBounds,
    pub gamma_sd: ParamBounds,
    pub weights: WeightSection,
    /// Numerical settings used inside the fit loop.
    pub simulation: SimulationSection,
    pub synthetic: SyntheticSection,
}

impl Default for FitSection {
    fn default() -> Self {
        let g = GlobalFitConfig::default();
        Self {
            seed: g.seed,
            n_hops: g.n_hops,
            step_fraction: g.step_fraction,
            temperature: g.temperature,
            local_tol: g.local_tol,
            local_max_eval: g.local_max_eval,
            scan_points: g.scan_points,
            g: g.free[0].into(),
            gamma_d: g.free[1].into(),
            gamma_sd: g.free[2].into(),
            weights: WeightSection::default(),
            simulation: SimSettings {
                n_max: 2,
                diffusion_points: 11,
                dt_record: 4e-9,
                ..SimSettings::default()
            }
            .into(),
            synthetic: SyntheticSection::default(),
        }
    }
}

impl ExperimentConfig {
    /// Reference system with every other section at its default.
    pub fn reference() -> Self {
        let s = SystemParams::reference();
        Self {
            system: SystemSection {
                g_hz: s.g.into(),
                kappa_hz: s.kappa.into(),
                gamma0_hz: s.gamma0.into(),
                gamma_d_hz: s.gamma_d.into(),
                gamma_sd_hz: s.gamma_sd.into(),
                omega_a_hz: s.omega_a.into(),
                eta_cav: s.eta_cav,
                delta_ac_hz: s.delta_ac.into(),
            },
            drive: DriveSection::default(),
            efficiency: EfficiencySection::default(),
            simulation: SimulationSection::default(),
            sweeps: SweepSection::default(),
            fit: FitSection::default(),
        }
    }

    pub fn system_params(&self) -> SystemParams {
        let s = &self.system;
        SystemParams {
            g: s.g_hz.value(),
            kappa: s.kappa_hz.value(),
            gamma0: s.gamma0_hz.value(),
            gamma_d: s.gamma_d_hz.value(),
            gamma_sd: s.gamma_sd_hz.value(),
            omega_a: s.omega_a_hz.value(),
            eta_cav: s.eta_cav,
            delta_ac: s.delta_ac_hz.value(),
        }
    }

    pub fn drive_spec(&self) -> DriveSpec {
        let d = &self.drive;
        DriveSpec {
            p_in: d.p_in_w.value(),
            omega_l: self.system.omega_a_hz.value() + d.laser_detuning_hz.value(),
            pulse_width: d.pulse_width_s.value(),
            repetition_period: d.repetition_period_s.value(),
            t0: d.t0_s.value(),
            eta_sys: d.eta_sys,
        }
    }

    pub fn sim_settings(&self) -> SimSettings {
        self.simulation.into()
    }

    pub fn efficiency_chain(&self) -> EfficiencyChain<f64> {
        EfficiencyChain {
            eta_cav: self.system.eta_cav,
            eta_gc: self.efficiency.eta_gc,
            eta_path: self.efficiency.eta_path,
            eta_snspd: self.efficiency.eta_snspd,
        }
    }

    /// Fit settings; fixed parameters κ, Γ₀, ω_a, η_cav, Δ_ac, t₀ and η_sys come from `[system]` and `[drive]`.
    pub fn global_fit_config(&self) -> GlobalFitConfig {
        let f = &self.fit;
        GlobalFitConfig {
            system: self.system_params(),
            drive: self.drive_spec(),
            free: [f.g.into(), f.gamma_d.into(), f.gamma_sd.into()],
            weights: DatasetWeights {
                saturation: f.weights.saturation,
                linewidth: f.weights.linewidth,
                decay: f.weights.decay,
            },
            n_hops: f.n_hops,
            step_fraction: f.step_fraction,
            temperature: f.temperature,
            seed: f.seed,
            local_tol: f.local_tol,
            local_max_eval: f.local_max_eval,
            scan_points: f.scan_points,
            sim: f.simulation.into(),
        }
    }

    pub fn dataset_design(&self) -> Result<DatasetDesign> {
        let s = &self.fit.synthetic;
        Ok(DatasetDesign {
            saturation_powers: s.saturation_powers_w.values()?,
            linewidth_powers: s.linewidth_powers_w.values()?,
            detunings: s.detunings_hz.values()?,
        })
    }

    /// Truth of the synthetic datasets, `(g, Γ_d, Γ_sd)`.
    pub fn synthetic_truth(&self) -> [f64; 3] {
        let s = &self.system;
        [s.g_hz.value(), s.gamma_d_hz.value(), s.gamma_sd_hz.value()]
    }

    pub fn validate(&self) -> Result<()> {
        self.system_params().validate()?;
        self.drive_spec().validate()?;
        self.sim_settings().validate()?;
        self.efficiency_chain().validate()?;
        let chain = self.efficiency_chain();
        let product = chain.eta_cav * chain.eta_gc * chain.eta_path * chain.eta_snspd;
        if (product - self.drive.eta_sys).abs() > 1e-3 {
            log::warn!(
                "drive.eta_sys = {} differs from the efficiency chain product {product:.4}",
                self.drive.eta_sys
            );
        }
        let sw = &self.sweeps;
        if sw.ple_points < 3 {
            return Err(Error::Config("sweeps.ple_points must be at least 3".into()));
        }
        if sw.ple_half_span_hz.value() < 0.0 {
            return Err(Error::Config("sweeps.ple_half_span_hz must be non-negative".into()));
        }
        for (name, grid) in [
            ("sweeps.detunings_hz", &sw.detunings_hz),
            ("sweeps.map_detunings_hz", &sw.map_detunings_hz),
            ("sweeps.map_scan_hz", &sw.map_scan_hz),
            ("fit.synthetic.detunings_hz", &self.fit.synthetic.detunings_hz),
        ] {
            check_grid(name, grid)?;
        }
        for (name, grid) in [
            ("sweeps.saturation_powers_w", &sw.saturation_powers_w),
            ("fit.synthetic.saturation_powers_w", &self.fit.synthetic.saturation_powers_w),
            ("fit.synthetic.linewidth_powers_w", &self.fit.synthetic.linewidth_powers_w),
        ] {
            check_grid(name, grid)?;
            if grid.values()?.iter().any(|&p| p < 0.0) {
                return Err(Error::Config(format!("{name}: powers must be non-negative")));
            }
        }
        if !(self.fit.synthetic.noise >= 0.0) || !(self.fit.synthetic.background >= 0.0) {
            return Err(Error::Config("fit.synthetic noise and background must be non-negative".into()));
        }
        self.global_fit_config().validate()
    }

    /// Canonical TOML text, as written by [`save_config`].
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Hex SHA-256 of [`ExperimentConfig::to_toml`].
    pub fn hash(&self) -> Result<String> {
        Ok(format!("{:x}", Sha256::digest(self.to_toml()?.as_bytes())))
    }

    /// Replaces the value at a dotted key path, e.g. `system.g_hz` with
    /// `42.4e6` or `"42.4 MHz"`. The key must already exist.
    pub fn apply_override(&self, key: &str, value: &str) -> Result<Self> {
        let mut root = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        let parts: Vec<&str> = key.split('.').collect();
        let unknown = || Error::Config(format!("override `{key}`: no such config key"));
        let mut node = &mut root;
        for part in &parts {
            node = node.as_table_mut().and_then(|t| t.get_mut(*part)).ok_or_else(unknown)?;
        }
        *node = parse_override_value(value);
        let updated: Self = root.try_into().map_err(|e: toml::de::Error| Error::Unit {
            key: key.to_string(),
            message: e.message().to_string(),
        })?;
        updated.validate()?;
        Ok(updated)
    }
}

fn check_grid<D: Dimension>(name: &str, grid: &Grid<D>) -> Result<()> {
    let v = grid.values().map_err(|e| Error::Config(format!("{name}: {e}")))?;
    if v.is_empty() {
        return Err(Error::Config(format!("{name} is empty")));
    }
    if v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

/// TOML literal if `text` parses as one, otherwise a plain string.
fn parse_override_value(text: &str) -> toml::Value {
    format!("v = {text}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(text.to_string()))
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates a configuration document; `source` only labels errors.
pub fn parse_config(text: &str, source: &Path, mode: Strictness) -> Result<ExperimentConfig> {
    let parse_err = |e: toml::de::Error| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::Parse {
            path: source.to_path_buf(),
            line,
            column,
            message: e.message().trim().to_string(),
        }
    };
    let de = toml::Deserializer::parse(text).map_err(parse_err)?;
    let mut ignored = Vec::new();
    let cfg: ExperimentConfig = serde_ignored::deserialize(de, |path| ignored.push(path.to_string())).map_err(parse_err)?;
    if !ignored.is_empty() {
        match mode {
            Strictness::Strict => {
                return Err(Error::Config(format!(
                    "{}: unknown keys: {}",
                    source.display(),
                    ignored.join(", ")
                )))
            }
            Strictness::Lax => {
                for k in &ignored {
                    log::warn!("{}: ignoring unknown key `{k}`", source.display());
                }
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Strict [`load_config_with`].
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    load_config_with(path, Strictness::Strict)
}

pub fn load_config_with(path: impl AsRef<Path>, mode: Strictness) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path, mode)
}

pub fn save_config(cfg: &ExperimentConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, cfg.to_toml()?).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[system]
g_hz = "42.4 MHz"
kappa_hz = "5.22 GHz"
gamma0_hz = "169.3 kHz"
gamma_d_hz = 0.645e9
gamma_sd_hz = "1.69 GHz"
"#;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        parse_config(text, Path::new("test.toml"), Strictness::Strict)
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse(MINIMAL).unwrap();
        assert_eq!(cfg.system_params(), SystemParams::reference());
        let d = cfg.drive_spec();
        assert_eq!(d.t0, 170e-9);
        assert_eq!(d.repetition_period, 8e-6);
        assert_eq!(d.pulse_width, 900e-9);
        assert_eq!(d, DriveSpec::reference());
        assert_eq!(cfg, ExperimentConfig::reference());
    }

    #[test]
    fn negative_kappa_rejected() {
        let text = MINIMAL.replace("\"5.22 GHz\"", "\"-5.22 GHz\"");
        let e = parse(&text).unwrap_err();
        assert!(e.is_validation(), "{e}");
        assert!(e.to_string().contains("kappa"));
    }

    #[test]
    fn wrong_unit_reports_position() {
        let text = MINIMAL.replace("\"42.4 MHz\"", "\"42.4 ns\"");
        match parse(&text).unwrap_err() {
            Error::Parse { line, column, message, .. } => {
                assert_eq!(line, 3);
                assert!(column > 1);
                assert!(message.contains("unknown unit"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let text = format!("{MINIMAL}\n[drive\n");
        match parse(&text).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 9),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn missing_required_field() {
        let text = MINIMAL.replace("gamma0_hz = \"169.3 kHz\"\n", "");
        let e = parse(&text).unwrap_err();
        assert!(e.to_string().contains("gamma0_hz"), "{e}");
    }

    #[test]
    fn unknown_keys_strict_and_lax() {
        let text = format!("{MINIMAL}colour = 3\n");
        assert!(matches!(parse(&text), Err(Error::Config(m)) if m.contains("system.colour")));
        let cfg = parse_config(&text, Path::new("x"), Strictness::Lax).unwrap();
        assert_eq!(cfg, ExperimentConfig::reference());
    }

    #[test]
    fn round_trip() {
        let mut cfg = parse(MINIMAL).unwrap();
        cfg.sweeps.map_detunings_hz = Grid::List(vec![Hz::new(-1e9), Hz::new(0.1e9 / 3.0)]);
        cfg.drive.p_in_w = Watts::new(0.04e-9);
        let text = cfg.to_toml().unwrap();
        let back = parse(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml().unwrap(), text);
        assert_eq!(back.hash().unwrap(), cfg.hash().unwrap());
    }

    #[test]
    fn overrides() {
        let cfg = ExperimentConfig::reference();
        let a = cfg.apply_override("system.g_hz", "30e6").unwrap();
        assert_eq!(a.system.g_hz.value(), 30e6);
        let b = cfg.apply_override("system.g_hz", "30 MHz").unwrap();
        assert_eq!(a, b);
        let mut expected = cfg.clone();
        expected.system.g_hz = Hz::new(30e6);
        assert_eq!(a, expected);
        assert!(matches!(cfg.apply_override("system.gg_hz", "1"), Err(Error::Config(_))));
        assert!(matches!(cfg.apply_override("system.g_hz", "3 s"), Err(Error::Unit { .. })));
        assert!(cfg.apply_override("system.kappa_hz", "-1").is_err());
        let c = cfg.apply_override("fit.n_hops", "3").unwrap();
        assert_eq!(c.fit.n_hops, 3);
        assert_ne!(c.hash().unwrap(), cfg.hash().unwrap());
    }

    #[test]
    fn grids() {
        let g: Grid<super::super::units::Power> = Grid::log(1e-10, 1e-6, 5);
        let v = g.values().unwrap();
        assert_eq!(v.len(), 5);
        assert!((v[2] / 1e-8 - 1.0).abs() < 1e-12);
        let l: Grid<super::super::units::Frequency> = Grid::linear(-25e9, 25e9, 11);
        assert_eq!(l.values().unwrap()[5], 0.0);
    }
}
