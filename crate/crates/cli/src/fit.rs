use std::path::{Path, PathBuf};

use clap::Args;
use cqed::dataio::{read_curve, write_curve, write_report, ExperimentConfig, FitReport};
use cqed::fitting::{global_cqed_fit, synthetic_datasets, GlobalDatasets, FREE_NAMES};
use cqed::SimCurve;
use serde_json::json;

use crate::output::{print_rows, write_columns, Format, Row};
use crate::{ensure_dir, CliResult, Failure};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Counts per pulse versus input power (W).
    #[arg(long, requires_all = ["linewidth", "decay"])]
    saturation: Option<PathBuf>,
    /// PLE FWHM (Hz) versus input power (W).
    #[arg(long)]
    linewidth: Option<PathBuf>,
    /// Decay rate over the bare rate versus cavity detuning (Hz).
    #[arg(long)]
    decay: Option<PathBuf>,
    /// Fit noisy synthetic data generated from `[system]` and `[fit.synthetic]`.
    #[arg(long, conflicts_with_all = ["saturation", "linewidth", "decay"])]
    synthetic: bool,
}

fn load(args: &FitArgs, cfg: &ExperimentConfig, out: &Path) -> CliResult<GlobalDatasets> {
    if args.synthetic {
        let s = &cfg.fit.synthetic;
        let data = synthetic_datasets(
            &cfg.global_fit_config(),
            cfg.synthetic_truth(),
            &cfg.dataset_design()?,
            s.noise,
            s.background,
            cfg.fit.seed,
        )?;
        write_curve(&data.saturation, out.join("data_saturation.csv"))?;
        write_curve(&data.linewidth_vs_power, out.join("data_linewidth.csv"))?;
        write_curve(&data.decay_vs_detuning, out.join("data_decay.csv"))?;
        return Ok(data);
    }
    match (&args.saturation, &args.linewidth, &args.decay) {
        (Some(s), Some(l), Some(d)) => Ok(GlobalDatasets {
            saturation: read_curve(s)?,
            linewidth_vs_power: read_curve(l)?,
            decay_vs_detuning: read_curve(d)?,
        }),
        _ => Err(Failure::Validation(
            "give --saturation, --linewidth and --decay, or --synthetic".into(),
        )),
    }
}

fn overlay(path: &Path, data: &SimCurve, model: &[f64]) -> CliResult {
    write_columns(path, &["x", "data", "model"], &[data.x(), data.y(), model])
}

pub fn run(args: &FitArgs, cfg: &ExperimentConfig, out: &Path, format: Format) -> CliResult {
    cfg.validate()?;
    ensure_dir(out)?;
    let data = load(args, cfg, out)?;
    let fit = global_cqed_fit(&data, &cfg.global_fit_config())?;

    overlay(&out.join("overlay_saturation.csv"), &data.saturation, &fit.model.saturation)?;
    overlay(&out.join("overlay_linewidth.csv"), &data.linewidth_vs_power, &fit.model.linewidth)?;
    overlay(&out.join("overlay_decay.csv"), &data.decay_vs_detuning, &fit.model.decay)?;

    let mut report = FitReport::new(&fit.result, &FREE_NAMES, &cfg.hash()?, cfg.fit.seed)?
        .with_extra("background", fit.background);
    if args.synthetic {
        let t = cfg.synthetic_truth();
        report = report.with_extra("truth", json!({ "g": t[0], "gamma_d": t[1], "gamma_sd": t[2] }));
    }
    write_report(&report, out.join("fit_report.json"))?;

    let mut rows = Vec::new();
    for (name, value) in FREE_NAMES.iter().zip(&fit.result.params) {
        rows.push(Row::num(*name, *value, "Hz"));
        let err = report.uncertainties[*name];
        rows.push(Row::other(format!("{name}_error"), err, "Hz"));
    }
    rows.push(Row::num("background", fit.background, "1/pulse"));
    rows.push(Row::num("cost", fit.result.cost, ""));
    rows.push(Row::other("n_eval", fit.result.n_eval, ""));
    rows.push(Row::other("converged", fit.result.converged, ""));
    print_rows(&rows, format);
    Ok(())
}
