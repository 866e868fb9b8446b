use cqed::fitting::fit_gaussian;
use cqed::model::{extract_decay_rate, DriveSpec, SimSettings, Simulator, SystemParams};
use cqed::Error;
use proptest::prelude::*;

fn fast() -> SimSettings {
    SimSettings {
        n_max: 2,
        diffusion_points: 7,
        dt_record: 2e-9,
        ..SimSettings::default()
    }
}

fn sim(params: SystemParams) -> Simulator {
    Simulator::with_settings(params, fast())
}

fn drive() -> DriveSpec {
    DriveSpec::reference()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn counts_scale_with_system_efficiency() {
    let s = sim(SystemParams::reference());
    let dark = s.pulse_cycle(&DriveSpec { eta_sys: 0.0, ..drive() }).unwrap();
    assert_eq!(dark.counts_per_pulse, 0.0);
    assert!(dark.trace.y().iter().all(|&v| v == 0.0));
    let one = s.pulse_cycle(&DriveSpec { eta_sys: 0.1, ..drive() }).unwrap();
    let two = s.pulse_cycle(&DriveSpec { eta_sys: 0.2, ..drive() }).unwrap();
    assert!(one.counts_per_pulse > 0.0);
    assert!(rel(two.counts_per_pulse, 2.0 * one.counts_per_pulse) < 1e-12);
}

#[test]
fn truncation_failure_is_reported() {
    let s = Simulator::with_settings(
        SystemParams::reference(),
        SimSettings {
            n_max: 1,
            max_n_max: 1,
            truncation_threshold: 1e-30,
            ..fast()
        },
    );
    match s.pulse_cycle(&drive()) {
        Err(Error::Truncation { n_max, population }) => {
            assert_eq!(n_max, 1);
            assert!(population > 1e-30);
        }
        other => panic!("expected a truncation error, got {other:?}"),
    }
}

#[test]
fn ple_flat_without_drive_and_centred_on_emitter() {
    let s = sim(SystemParams::reference());
    let scan = s.default_ple_scan(&drive(), 21);
    let off = s.ple_spectrum(&DriveSpec { p_in: 0.0, ..drive() }, &scan).unwrap();
    let first = off.y()[0];
    assert!(first.abs() < 1e-9, "{first}");
    assert!(off.y().iter().all(|&v| v == first));

    let low = DriveSpec { p_in: 0.4e-9, ..drive() };
    let on = s.ple_spectrum(&low, &scan).unwrap();
    let fit = fit_gaussian(&on).unwrap();
    let omega_a = s.params.omega_a;
    assert!((fit.center - omega_a).abs() < 0.02 * fit.fwhm, "centre offset {}", fit.center - omega_a);
    // mirror symmetry of the scan about the emitter
    let y = on.y();
    for i in 0..y.len() / 2 {
        let j = y.len() - 1 - i;
        assert!(rel(y[i], y[j]) < 1e-6, "{i}: {} vs {}", y[i], y[j]);
    }
}

#[test]
fn detuned_cavity_pulls_the_ple_peak() {
    let s = sim(SystemParams {
        delta_ac: 8e9,
        ..SystemParams::reference()
    });
    let d = DriveSpec { p_in: 0.4e-9, ..drive() };
    let scan = s.default_ple_scan(&d, 31);
    let fit = fit_gaussian(&s.ple_spectrum(&d, &scan).unwrap()).unwrap();
    assert!(fit.center > s.params.omega_a, "offset {}", fit.center - s.params.omega_a);
}

#[test]
fn saturation_monotone_and_linear_at_low_power() {
    let s = sim(SystemParams::reference());
    let powers: Vec<f64> = (0..8).map(|k| 0.01e-9 * 3f64.powi(k)).collect();
    let c = s.counts_vs_power(&drive(), &powers).unwrap();
    assert!(c.windows(2).all(|w| w[1] > w[0]), "{c:?}");
    let lin = s.counts_vs_power(&drive(), &[1e-14, 2e-14]).unwrap();
    assert!(rel(lin[1], 2.0 * lin[0]) < 1e-4, "{lin:?}");
}

#[test]
fn detuning_sweep_symmetric_with_bare_rate_far_away() {
    let s = sim(SystemParams::reference());
    let sweep = s.decay_vs_detuning(&drive(), &[-60e9, -10e9, 0.0, 10e9, 60e9]).unwrap();
    let y = sweep.curve.y();
    assert!(rel(y[0], y[4]) < 1e-4 && rel(y[1], y[3]) < 1e-4, "{y:?}");
    assert!(y[2] > y[1] && y[1] > y[0]);
    assert!((0.98..=1.08).contains(&y[0]), "far ratio {}", y[0]);
}

#[test]
fn map_rows_match_spectra_and_correction_factor() {
    let s = sim(SystemParams::reference());
    let d = drive();
    let scan: Vec<f64> = (-2..=2).map(|k| s.params.omega_a + k as f64 * 2e9).collect();
    let detunings = [-6e9, 0.0, 6e9];
    let map = s.spectrum_map_2d(&d, &detunings, &scan).unwrap();
    for (i, &dac) in detunings.iter().enumerate() {
        let row = sim(SystemParams {
            delta_ac: dac,
            ..s.params
        })
        .ple_spectrum(&d, &scan)
        .unwrap();
        assert_eq!(row.y(), &map.counts[i][..]);
        let factor = (d.t0 / map.lifetimes[i]).exp();
        for (c, k) in map.counts[i].iter().zip(&map.corrected[i]) {
            assert!(rel(*k, c * factor) < 1e-12);
        }
    }
    assert_eq!(map.brightest_corrected_row(), 1);
}

#[test]
fn spectral_diffusion_broadens_the_line() {
    let d = DriveSpec { p_in: 0.4e-9, ..drive() };
    let width = |gamma_sd: f64| {
        let s = sim(SystemParams {
            gamma_sd,
            ..SystemParams::reference()
        });
        let scan = s.default_ple_scan(&d, 31);
        fit_gaussian(&s.ple_spectrum(&d, &scan).unwrap()).unwrap().fwhm
    };
    let narrow = width(0.0);
    let broad = width(1.69e9);
    assert!(broad > 1.3 * narrow, "{narrow} vs {broad}");
}

#[test]
fn diffusion_quadrature_converged() {
    let counts = |points: usize| {
        Simulator::with_settings(
            SystemParams::reference(),
            SimSettings {
                diffusion_points: points,
                ..fast()
            },
        )
        .counts_vs_power(&drive(), &[17e-9])
        .unwrap()[0]
    };
    let (a, b) = (counts(21), counts(41));
    assert!(rel(a, b) < 0.01, "{a} vs {b}");
}

#[test]
fn corrected_counts_ratio_is_exponential_in_gate_delay() {
    let s = sim(SystemParams::reference());
    let cycle = s.pulse_cycle(&drive()).unwrap();
    let tau = extract_decay_rate(&cycle.trace, drive().window_start()).unwrap().lifetime();
    // moving the gate by δ multiplies the collected tail by e^{-δ/τ}
    let later = DriveSpec {
        t0: drive().t0 + 100e-9,
        ..drive()
    };
    let shifted = s.pulse_cycle(&later).unwrap();
    let ratio = cycle.counts_per_pulse / shifted.counts_per_pulse;
    assert!(rel(ratio, (100e-9 / tau).exp()) < 0.02, "{ratio} vs {}", (100e-9 / tau).exp());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn trace_physical_for_random_parameters(
        g in 5e6..150e6f64,
        gamma_d in 0.0..2e9f64,
        delta_ac in -20e9..20e9f64,
        p_in in 0.1e-9..50e-9f64,
    ) {
        let s = Simulator::with_settings(
            SystemParams { g, gamma_d, delta_ac, gamma_sd: 0.0, ..SystemParams::reference() },
            SimSettings { diffusion_points: 1, ..fast() },
        );
        let c = s.pulse_cycle(&DriveSpec { p_in, ..drive() }).unwrap();
        prop_assert!(c.counts_per_pulse.is_finite() && c.counts_per_pulse > 0.0);
        let peak = c.trace.y().iter().copied().fold(0.0f64, f64::max);
        prop_assert!(c.trace.y().iter().all(|&v| v.is_finite() && v >= -1e-9 * peak));
    }
}
