use cqed::analytics::{
    beta_factor, coupling_from_sim_purcell, dipole_moment, eta_cav_from_reflection_branch, g2_snr_limit,
    kappa_tilde_approx, nuclear_spin_separation, purcell_lorentzian, qe_lower_bound, saturation_counts,
    system_efficiency, thermal_linewidth, waveguide_efficiency_bounds, zeeman_amplitude, zpl_purcell_bound,
    CouplingBranch, EfficiencyChain, PurcellFit, ThermalModel, ZeemanModel, P_ZPL_SIM,
};
use cqed::analytics::constants::DEBYE;
use cqed::dataio::ExperimentConfig;
use cqed::model::{intracavity_photons, rabi_frequency, DriveSpec};

use crate::output::{print_rows, Format, Row};
use crate::{CliResult, Failure};

/// Argument names with their defaults (`None` = required).
type Spec = Vec<(&'static str, Option<f64>)>;

pub const FORMULAS: [&str; 16] = [
    "system-efficiency",
    "beta",
    "zpl-bound",
    "qe-bound",
    "coupling",
    "dipole",
    "nuclear-separation",
    "thermal",
    "saturation-counts",
    "waveguide-bounds",
    "kappa-tilde",
    "g2-limit",
    "eta-cav",
    "purcell-lorentzian",
    "zeeman",
    "rabi",
];

fn spec(name: &str, cfg: &ExperimentConfig) -> Option<Spec> {
    let s = cfg.system_params();
    let d = cfg.drive_spec();
    let e = &cfg.efficiency;
    Some(match name {
        "system-efficiency" => vec![
            ("eta_cav", Some(s.eta_cav)),
            ("eta_gc", Some(e.eta_gc)),
            ("eta_path", Some(e.eta_path)),
            ("eta_snspd", Some(e.eta_snspd)),
        ],
        "beta" => vec![("p_t", None)],
        "zpl-bound" => vec![("p_t", None), ("dw", None)],
        "qe-bound" => vec![("p_t", None), ("dw", None), ("p_sim", Some(P_ZPL_SIM))],
        "coupling" => vec![("kappa_tilde_hz", None), ("p_sim", Some(P_ZPL_SIM)), ("gamma0_hz", Some(s.gamma0))],
        "dipole" => vec![
            ("dw", None),
            ("n_host", None),
            ("eta_qe", Some(1.0)),
            ("gamma0_hz", Some(s.gamma0)),
            ("frequency_hz", Some(s.omega_a)),
        ],
        "nuclear-separation" => vec![("density_cm3", None)],
        "thermal" => vec![("temperature_k", None), ("p0_hz", None), ("p_t_hz", None), ("e_a_mev", None)],
        "saturation-counts" => vec![
            ("beta", None),
            ("tau_s", None),
            ("eta_sys", Some(d.eta_sys)),
            ("t0_s", Some(d.t0)),
        ],
        "waveguide-bounds" => vec![
            ("c_sat", None),
            ("tau_s", None),
            ("eta_col", None),
            ("qe_lo", None),
            ("qe_hi", Some(1.0)),
            ("t0_s", Some(d.t0)),
            ("eta_path", Some(e.eta_path)),
            ("eta_snspd", Some(e.eta_snspd)),
        ],
        "kappa-tilde" => vec![("kappa_hz", Some(s.kappa)), ("gamma_d_hz", Some(s.gamma_d))],
        "g2-limit" => vec![("snr", None)],
        "eta-cav" => vec![("reflection", None), ("over_coupled", Some(0.0))],
        "purcell-lorentzian" => vec![
            ("delta_ac_hz", None),
            ("p_t", None),
            ("kappa_tilde_hz", None),
            ("gamma_inf_ratio", Some(1.0)),
        ],
        "zeeman" => vec![("b_t", None), ("delta_g", None), ("linewidth_hz", None)],
        "rabi" => vec![("p_in_w", Some(d.p_in))],
        _ => return None,
    })
}

/// Positional values fill arguments in order; `name=value` sets one by name.
fn bind(spec: &[(&'static str, Option<f64>)], args: &[String], formula: &str) -> CliResult<Vec<f64>> {
    let mut values: Vec<Option<f64>> = spec.iter().map(|(_, d)| *d).collect();
    let mut next = 0;
    let parse = |s: &str| -> CliResult<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Validation(format!("`{s}` is not a number")))
    };
    for a in args {
        if let Some((k, v)) = a.split_once('=') {
            let i = spec
                .iter()
                .position(|(n, _)| *n == k.trim())
                .ok_or_else(|| Failure::Validation(format!("{formula} has no argument `{k}`")))?;
            values[i] = Some(parse(v)?);
        } else {
            if next >= spec.len() {
                return Err(Failure::Validation(format!("too many arguments for {formula}")));
            }
            values[next] = Some(parse(a)?);
            next += 1;
        }
    }
    let usage = || {
        spec.iter()
            .map(|(n, d)| match d {
                Some(v) => format!("[{n}={v}]"),
                None => format!("<{n}>"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    values
        .into_iter()
        .zip(spec)
        .map(|(v, (n, _))| {
            v.ok_or_else(|| Failure::Validation(format!("missing `{n}`; usage: cqed analytic {formula} {}", usage())))
        })
        .collect()
}

pub fn evaluate(formula: &str, args: &[String], cfg: &ExperimentConfig) -> CliResult<Vec<Row>> {
    let spec = spec(formula, cfg).ok_or_else(|| {
        Failure::Validation(format!("unknown formula `{formula}`; available: {}", FORMULAS.join(", ")))
    })?;
    let v = bind(&spec, args, formula)?;
    let rows = match formula {
        "system-efficiency" => {
            let chain = EfficiencyChain {
                eta_cav: v[0],
                eta_gc: v[1],
                eta_path: v[2],
                eta_snspd: v[3],
            };
            vec![Row::num("eta_sys", system_efficiency(&chain)?, "")]
        }
        "beta" => vec![Row::num("beta", beta_factor(v[0]), "")],
        "zpl-bound" => vec![Row::num("p_zpl_min", zpl_purcell_bound(v[0], v[1])?, "")],
        "qe-bound" => vec![Row::num("eta_qe_min", qe_lower_bound(v[0], v[1], v[2])?, "")],
        "coupling" => vec![Row::num("g", coupling_from_sim_purcell(v[1], v[0], v[2])?, "Hz")],
        "dipole" => {
            let d = dipole_moment(v[0], v[2], v[3], v[4], v[1])?;
            vec![Row::num("d_zpl", d, "C m"), Row::num("d_zpl_debye", d / DEBYE, "D")]
        }
        "nuclear-separation" => {
            let n = nuclear_spin_separation(v[0])?;
            vec![Row::num("d_nn", n.d_nn, "nm")]
        }
        "thermal" => {
            let m = ThermalModel::new(v[1], v[2], v[3])?;
            let w = thermal_linewidth(v[0], &m);
            vec![Row::num("linewidth", w, "Hz"), Row::num("excess", w - v[1], "Hz")]
        }
        "saturation-counts" => vec![Row::num("c_sat", saturation_counts(v[2], v[0], v[3], v[1]), "1/pulse")],
        "waveguide-bounds" => {
            let b = waveguide_efficiency_bounds(v[0], v[5], v[1], v[2], v[6], v[7], [v[3], v[4]])?;
            vec![
                Row::num("eta_wg_lower", b.lower, ""),
                Row::num("eta_wg_upper", b.upper, ""),
                Row::other("feasible", b.feasible, ""),
            ]
        }
        "kappa-tilde" => vec![Row::num("kappa_tilde", kappa_tilde_approx(v[0], v[1]), "Hz")],
        "g2-limit" => vec![Row::num("g2_min", g2_snr_limit(v[0])?, "")],
        "eta-cav" => {
            let branch = if v[1] != 0.0 {
                CouplingBranch::OverCoupled
            } else {
                CouplingBranch::UnderCoupled
            };
            vec![Row::num("eta_cav", eta_cav_from_reflection_branch(v[0], branch)?, "")]
        }
        "purcell-lorentzian" => {
            let fit = PurcellFit::new(v[1], v[2], v[3])?;
            vec![Row::num("gamma_cav_over_gamma0", purcell_lorentzian(v[0], &fit), "")]
        }
        "zeeman" => {
            let m = ZeemanModel::new(v[1], v[2])?;
            vec![Row::num("amplitude", zeeman_amplitude(v[0], &m), "")]
        }
        "rabi" => {
            let s = cfg.system_params();
            let d = DriveSpec {
                p_in: v[0],
                ..cfg.drive_spec()
            };
            let n_ph = intracavity_photons(&d, &s);
            vec![
                Row::num("n_ph", n_ph, ""),
                Row::num("omega_rabi", rabi_frequency(n_ph, s.g), "Hz"),
            ]
        }
        _ => unreachable!("formula list and dispatch disagree"),
    };
    Ok(rows)
}

pub fn run(formula: &str, args: &[String], cfg: &ExperimentConfig, format: Format) -> CliResult {
    let rows = evaluate(formula, args, cfg)?;
    print_rows(&rows, format);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(formula: &str, args: &[&str]) -> f64 {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let rows = evaluate(formula, &args, &ExperimentConfig::reference()).unwrap();
        rows[0].value.as_f64().unwrap()
    }

    #[test]
    fn every_formula_dispatches() {
        let cfg = ExperimentConfig::reference();
        for f in FORMULAS {
            assert!(spec(f, &cfg).is_some(), "{f}");
        }
        assert!(spec("nope", &cfg).is_none());
    }

    #[test]
    fn binding() {
        assert!((one("system-efficiency", &[]) - 0.0912).abs() < 1e-3);
        assert!((one("system-efficiency", &["1", "1", "1", "eta_snspd=1"]) - 1.0).abs() < 1e-15);
        assert!((one("beta", &["5.88"]) - 5.88 / 6.88).abs() < 1e-15);
        assert!(matches!(
            evaluate("beta", &[], &ExperimentConfig::reference()),
            Err(Failure::Validation(_))
        ));
        assert!(evaluate("beta", &["1".into(), "2".into()], &ExperimentConfig::reference()).is_err());
        assert!(evaluate("beta", &["x=1".into()], &ExperimentConfig::reference()).is_err());
    }
}
