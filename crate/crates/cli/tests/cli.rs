use std::path::Path;
use std::process::{Command, Output};

use cqed::dataio::strip_timestamp;
use serde_json::Value;

fn cqed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value column of `quantity` in `--format csv` output.
fn csv_value(o: &Output, quantity: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| {
            let mut f = l.split(',');
            (f.next() == Some(quantity)).then(|| f.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("{quantity} missing from:\n{}", stdout(o)))
}

fn summary(dir: &Path) -> Value {
    let text = std::fs::read_to_string(dir.join("summary.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn analytic_values() {
    let o = cqed(&["--format", "csv", "analytic", "system-efficiency"]);
    assert!(o.status.success());
    assert!((csv_value(&o, "eta_sys") - 0.091).abs() <= 1e-3);

    let o = cqed(&["--format", "csv", "analytic", "beta", "5.88"]);
    assert!((csv_value(&o, "beta") - 0.855).abs() <= 5e-4);

    let o = cqed(&["--format", "csv", "analytic", "nuclear-separation", "2.34e21"]);
    assert!((csv_value(&o, "d_nn") - 0.42).abs() <= 5e-3);

    let o = cqed(&["analytic", "beta", "p_t=5.88"]);
    assert_eq!(stdout(&o), "beta  0.8547\n");
}

#[test]
fn override_is_echoed() {
    let o = cqed(&["--override", "system.g_hz=50 MHz", "show-config"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "g_hz = 50000000.0"));
    let base = cqed(&["show-config"]);
    let hash = |o: &Output| stdout(o).lines().last().unwrap().to_string();
    assert!(hash(&base).starts_with("# sha256 "));
    assert_ne!(hash(&o), hash(&base));
}

#[test]
fn exit_codes() {
    assert_eq!(cqed(&["--help"]).status.code(), Some(0));
    assert_eq!(cqed(&["--version"]).status.code(), Some(0));
    assert_eq!(cqed(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(cqed(&["analytic", "beta"]).status.code(), Some(1));
    assert_eq!(cqed(&["--override", "system.kappa_hz=-1", "show-config"]).status.code(), Some(1));
    assert_eq!(cqed(&["--override", "system.nope=1", "show-config"]).status.code(), Some(1));
    assert_eq!(cqed(&["--override", "system.g_hz=5 parsecs", "show-config"]).status.code(), Some(1));
    assert_eq!(cqed(&["reproduce", "--only", "13"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cqed(&["--out", out, "--override", "system.g_hz=30e6", "reproduce", "--only", "7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("criterion  7 FAIL"));

    // zero drive leaves nothing to fit in the decay window
    let o = cqed(&[
        "--out",
        out,
        "--override",
        "drive.p_in_w=0",
        "--override",
        "simulation.diffusion_points=1",
        "simulate",
        "decay",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_strictness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(
        &path,
        "[system]\ng_hz = \"42.4 MHz\"\nkappa_hz = \"5.22 GHz\"\ngamma0_hz = \"169.3 kHz\"\n\
         gamma_d_hz = \"0.645 GHz\"\ngamma_sd_hz = \"1.69 GHz\"\nextra_knob = 1\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let strict = cqed(&["--config", p, "show-config"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("extra_knob"));
    assert_eq!(cqed(&["--config", p, "--lax", "show-config"]).status.code(), Some(0));
    assert_eq!(cqed(&["--config", "/no/such/file.toml", "show-config"]).status.code(), Some(1));
}

#[test]
fn missing_dataset_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = cqed(&[
        "--out",
        dir.path().to_str().unwrap(),
        "fit",
        "--saturation",
        "/no/such/sat.csv",
        "--linewidth",
        "/no/such/lw.csv",
        "--decay",
        "/no/such/decay.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sat.csv"));
    assert_eq!(cqed(&["fit"]).status.code(), Some(1));
}

#[test]
fn single_detuning_matches_decay() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let fast = ["--override", "simulation.diffusion_points=5"];
    let o = cqed(&[&["--out", a.path().to_str().unwrap()], &fast[..], &["simulate", "decay"]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cqed(
        &[
            &["--out", b.path().to_str().unwrap()],
            &fast[..],
            &["--override", "sweeps.detunings_hz=[0.0]", "simulate", "detuning"],
        ]
        .concat(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let decay = summary(a.path())["results"]["gamma_ratio"].as_f64().unwrap();
    let sweep = summary(b.path())["results"]["max_gamma_ratio"].as_f64().unwrap();
    assert_eq!(decay, sweep);
    assert!(a.path().join("decay_trace.csv").exists());
    assert!(b.path().join("detuning.csv").exists());
}

#[test]
fn zero_power_ple_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let o = cqed(&[
        "--out",
        dir.path().to_str().unwrap(),
        "--override",
        "drive.p_in_w=0",
        "--override",
        "sweeps.ple_points=9",
        "--override",
        "simulation.diffusion_points=3",
        "simulate",
        "ple",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("flat"));
    let curve = cqed::dataio::read_curve(dir.path().join("ple.csv")).unwrap();
    assert_eq!(curve.len(), 9);
    assert!(curve.y().iter().all(|&v| v == curve.y()[0] && v.abs() < 1e-9));
    assert!(summary(dir.path())["results"].get("fwhm").is_none());
}

#[test]
fn reproduce_is_deterministic() {
    let runs: Vec<String> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let o = cqed(&["--out", dir.path().to_str().unwrap(), "reproduce", "--only", "6,7,11"]);
            assert!(o.status.success(), "{}", stdout(&o));
            assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("criterion")).count(), 3);
            std::fs::read_to_string(dir.path().join("reproduce.json")).unwrap()
        })
        .collect();
    assert_eq!(strip_timestamp(&runs[0]), strip_timestamp(&runs[1]));
}
