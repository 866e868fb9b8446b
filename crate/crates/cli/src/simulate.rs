use std::path::Path;

use cqed::dataio::{write_curve, ExperimentConfig};
use cqed::fitting::{fit_gaussian, fit_purcell_lorentzian};
use cqed::model::{extract_decay_rate, Simulator};
use cqed::SimCurve;

use crate::output::{print_rows, write_columns, write_summary, Format, Row};
use crate::{ensure_dir, CliResult, SimKind};

pub fn run(kind: SimKind, cfg: &ExperimentConfig, out: &Path, format: Format) -> CliResult {
    cfg.validate()?;
    ensure_dir(out)?;
    let sim = Simulator::with_settings(cfg.system_params(), cfg.sim_settings());
    let rows = match kind {
        SimKind::Decay => decay(&sim, cfg, out)?,
        SimKind::Ple => ple(&sim, cfg, out)?,
        SimKind::Saturation => saturation(&sim, cfg, out)?,
        SimKind::Detuning => detuning(&sim, cfg, out)?,
        SimKind::Map2d => map2d(&sim, cfg, out)?,
    };
    let name = match kind {
        SimKind::Decay => "decay",
        SimKind::Ple => "ple",
        SimKind::Saturation => "saturation",
        SimKind::Detuning => "detuning",
        SimKind::Map2d => "map2d",
    };
    write_summary(out, name, cfg, &rows)?;
    print_rows(&rows, format);
    Ok(())
}

fn decay(sim: &Simulator, cfg: &ExperimentConfig, out: &Path) -> CliResult<Vec<Row>> {
    let d = cfg.drive_spec();
    let cycle = sim.pulse_cycle(&d)?;
    write_curve(&cycle.trace, out.join("decay_trace.csv"))?;
    let rate = extract_decay_rate(&cycle.trace, d.window_start())?;
    Ok(vec![
        Row::num("counts_per_pulse", cycle.counts_per_pulse, "1/pulse"),
        Row::num("decay_rate", rate.rate_hz, "Hz"),
        Row::num("decay_rate_error", rate.uncertainty_hz, "Hz"),
        Row::num("lifetime", rate.lifetime(), "s"),
        Row::num("gamma_ratio", rate.rate_hz / sim.params.gamma0, ""),
        Row::other("n_max", cycle.n_max, ""),
    ])
}

fn ple(sim: &Simulator, cfg: &ExperimentConfig, out: &Path) -> CliResult<Vec<Row>> {
    let d = cfg.drive_spec();
    let n = cfg.sweeps.ple_points.max(2);
    let half = cfg.sweeps.ple_half_span_hz.value();
    let omega_a = sim.params.omega_a;
    let scan: Vec<f64> = if half > 0.0 {
        (0..n).map(|i| omega_a - half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
    } else {
        sim.default_ple_scan(&d, n)
    };
    let spectrum = sim.ple_spectrum(&d, &scan)?;
    let detuned = SimCurve::new(scan.iter().map(|w| w - omega_a).collect(), spectrum.y().to_vec())?
        .labeled("laser detuning", "Hz", "counts", "1/pulse")
        .with_meta("p_in_w", format!("{:e}", d.p_in));
    write_curve(&detuned, out.join("ple.csv"))?;
    let peak = detuned.y().iter().copied().fold(0.0f64, f64::max);
    let mut rows = vec![Row::num("peak_counts", peak, "1/pulse")];
    if d.p_in > 0.0 {
        let fit = fit_gaussian(&detuned)?;
        rows.push(Row::num("fwhm", fit.fwhm, "Hz"));
        rows.push(Row::num("center", fit.center, "Hz"));
        rows.push(Row::other("significance", format!("{:?}", fit.significance).to_lowercase(), ""));
    } else {
        log::warn!("no drive power: PLE spectrum is flat, skipping the line-shape fit");
    }
    Ok(rows)
}

fn saturation(sim: &Simulator, cfg: &ExperimentConfig, out: &Path) -> CliResult<Vec<Row>> {
    let d = cfg.drive_spec();
    let powers = cfg.sweeps.saturation_powers_w.values()?;
    let s = sim.saturation_curve(&d, &powers)?;
    write_curve(&s.curve, out.join("saturation.csv"))?;
    Ok(vec![
        Row::num("asymptote", s.asymptote, "1/pulse"),
        Row::num("half_saturation_power", s.half_saturation_power, "W"),
    ])
}

fn detuning(sim: &Simulator, cfg: &ExperimentConfig, out: &Path) -> CliResult<Vec<Row>> {
    let d = cfg.drive_spec();
    let detunings = cfg.sweeps.detunings_hz.values()?;
    let sweep = sim.decay_vs_detuning(&d, &detunings)?;
    write_curve(&sweep.curve, out.join("detuning.csv"))?;
    let y = sweep.curve.y();
    let mut rows = vec![
        Row::num("max_gamma_ratio", y.iter().copied().fold(f64::NEG_INFINITY, f64::max), ""),
        Row::num("min_gamma_ratio", y.iter().copied().fold(f64::INFINITY, f64::min), ""),
    ];
    if sweep.curve.len() >= 5 {
        let fit = fit_purcell_lorentzian(&sweep.curve)?;
        rows.push(Row::num("p_t", fit.fit.p_t, ""));
        rows.push(Row::num("kappa_tilde", fit.fit.kappa_tilde, "Hz"));
        rows.push(Row::num("gamma_inf_ratio", fit.fit.gamma_inf_ratio, ""));
        rows.push(Row::num("r_squared", fit.r_squared, ""));
    } else {
        log::warn!("fewer than 5 detunings; skipping the Lorentzian fit");
    }
    Ok(rows)
}

fn map2d(sim: &Simulator, cfg: &ExperimentConfig, out: &Path) -> CliResult<Vec<Row>> {
    let d = cfg.drive_spec();
    let detunings = cfg.sweeps.map_detunings_hz.values()?;
    let offsets = cfg.sweeps.map_scan_hz.values()?;
    let scan: Vec<f64> = offsets.iter().map(|o| sim.params.omega_a + o).collect();
    let map = sim.spectrum_map_2d(&d, &detunings, &scan)?;

    let mut cols: [Vec<f64>; 4] = Default::default();
    for (i, &dac) in map.detunings.iter().enumerate() {
        for (j, &off) in offsets.iter().enumerate() {
            cols[0].push(dac);
            cols[1].push(off);
            cols[2].push(map.counts[i][j]);
            cols[3].push(map.corrected[i][j]);
        }
    }
    write_columns(
        &out.join("map2d.csv"),
        &["delta_ac_hz", "laser_detuning_hz", "counts", "corrected_counts"],
        &[&cols[0], &cols[1], &cols[2], &cols[3]],
    )?;
    write_columns(
        &out.join("lifetimes.csv"),
        &["delta_ac_hz", "lifetime_s"],
        &[&map.detunings, &map.lifetimes],
    )?;
    let best = map.brightest_corrected_row();
    Ok(vec![
        Row::num("brightest_corrected_delta_ac", map.detunings[best], "Hz"),
        Row::other("rows", map.detunings.len(), ""),
        Row::other("columns", offsets.len(), ""),
    ])
}
