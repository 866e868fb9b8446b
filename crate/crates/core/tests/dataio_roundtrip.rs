use cqed::dataio::{
    load_config, read_curve, read_report, save_config, strip_timestamp, write_curve, write_report, ExperimentConfig,
    FitReport,
};
use cqed::fitting::{DatasetDesign, FitResult, FREE_NAMES};
use cqed::model::{extract_decay_rate, DriveSpec, SimSettings, Simulator, SystemParams};

#[test]
fn reference_design_matches_fit_default() {
    let design = ExperimentConfig::reference().dataset_design().unwrap();
    let default = DatasetDesign::default();
    assert_eq!(design.linewidth_powers, default.linewidth_powers);
    assert_eq!(design.detunings, default.detunings);
    assert_eq!(design.saturation_powers.len(), default.saturation_powers.len());
    for (a, b) in design.saturation_powers.iter().zip(&default.saturation_powers) {
        assert!(((a - b) / b).abs() < 1e-12);
    }
}

#[test]
fn decay_trace_survives_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sim = Simulator::with_settings(
        SystemParams::reference(),
        SimSettings {
            n_max: 2,
            diffusion_points: 3,
            ..SimSettings::default()
        },
    );
    let d = DriveSpec::reference();
    let trace = sim.pulse_cycle(&d).unwrap().trace;
    let path = dir.path().join("trace.csv");
    write_curve(&trace, &path).unwrap();
    let back = read_curve(&path).unwrap();
    assert_eq!(back.x(), trace.x());
    assert_eq!(back.y(), trace.y());
    let a = extract_decay_rate(&trace, d.window_start()).unwrap();
    let b = extract_decay_rate(&back, d.window_start()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn saved_config_reloads_with_the_same_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::reference()
        .apply_override("drive.p_in_w", "\"2.5 nW\"")
        .unwrap();
    let path = dir.path().join("exp.toml");
    save_config(&cfg, &path).unwrap();
    let back = load_config(&path).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.hash().unwrap(), cfg.hash().unwrap());
    assert_ne!(cfg.hash().unwrap(), ExperimentConfig::reference().hash().unwrap());

    let fit = FitResult {
        params: vec![42.4e6, 0.645e9, 1.69e9],
        cost: 1e-4,
        n_eval: 3,
        converged: true,
        uncertainties: None,
        residuals: Default::default(),
        history: vec![1e-4],
    };
    let report = FitReport::new(&fit, &FREE_NAMES, &back.hash().unwrap(), back.fit.seed).unwrap();
    let rpath = dir.path().join("report.json");
    write_report(&report, &rpath).unwrap();
    let reread = read_report(&rpath).unwrap();
    assert_eq!(reread.config_hash, cfg.hash().unwrap());
    assert_eq!(reread.uncertainties["g"], None);
    let text = std::fs::read_to_string(&rpath).unwrap();
    assert!(!strip_timestamp(&text).contains("generated_unix"));
}
