//! Closed-form cavity-QED, photon-budget and line-shape formulas.
//!
//! Frequencies and rates are ordinary frequencies in Hz (a rate quoted as
//! `2π × 169.3 kHz` is passed as `169.3e3`); conversion to angular units
//! happens inside the functions that need it.

pub mod constants;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

use constants::{C, EPSILON_0, HBAR, K_B, MU_B, PLANCK, TWO_PI};

fn check_unit_interval<T: Real>(name: &str, x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {}",
            to_f64(x)
        )))
    }
}

fn check_positive<T: Real>(name: &str, x: T) -> Result<()> {
    if x > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {}",
            to_f64(x)
        )))
    }
}

/// Parameters of the detuning-dependent decay-rate Lorentzian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurcellFit<T: Real> {
    /// Purcell factor of the total decay rate.
    pub p_t: T,
    /// Characteristic linewidth κ̃, Hz.
    pub kappa_tilde: T,
    /// Asymptotic decay rate over the bare rate, Γ∞/Γ₀.
    pub gamma_inf_ratio: T,
}

impl<T: Real> PurcellFit<T> {
    pub fn new(p_t: T, kappa_tilde: T, gamma_inf_ratio: T) -> Result<Self> {
        check_positive("P_t", p_t)?;
        check_positive("kappa_tilde", kappa_tilde)?;
        Ok(Self {
            p_t,
            kappa_tilde,
            gamma_inf_ratio,
        })
    }
}

/// `Γ_cav/Γ₀ = P_t / [1 + (2Δ_ac/κ̃)²] + Γ∞/Γ₀`.
pub fn purcell_lorentzian<T: Real>(delta_ac: T, fit: &PurcellFit<T>) -> T {
    let x = lit::<T>(2.0) * delta_ac / fit.kappa_tilde;
    fit.p_t / (T::one() + x * x) + fit.gamma_inf_ratio
}

/// Split of the bare decay rate into ZPL, phonon-sideband and non-radiative parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBudget<T: Real> {
    pub gamma_zpl: T,
    pub gamma_psb: T,
    pub gamma_nr: T,
    pub dw: T,
    pub eta_qe: T,
}

impl<T: Real> RateBudget<T> {
    pub fn total(&self) -> T {
        self.gamma_zpl + self.gamma_psb + self.gamma_nr
    }

    /// `γ_ZPL / (γ_ZPL + γ_PSB)` recomputed from the rates.
    pub fn debye_waller(&self) -> T {
        self.gamma_zpl / (self.gamma_zpl + self.gamma_psb)
    }

    /// `(γ_ZPL + γ_PSB) / Γ₀` recomputed from the rates.
    pub fn quantum_efficiency(&self) -> T {
        (self.gamma_zpl + self.gamma_psb) / self.total()
    }
}

pub fn rate_decomposition<T: Real>(gamma0: T, dw: T, eta_qe: T) -> Result<RateBudget<T>> {
    check_unit_interval("DW", dw)?;
    check_unit_interval("eta_QE", eta_qe)?;
    if gamma0 < T::zero() {
        return Err(Error::InvalidParameter("gamma0 must be non-negative".into()));
    }
    Ok(RateBudget {
        gamma_zpl: dw * eta_qe * gamma0,
        gamma_psb: (T::one() - dw) * eta_qe * gamma0,
        gamma_nr: (T::one() - eta_qe) * gamma0,
        dw,
        eta_qe,
    })
}

/// Probability of emission into the cavity mode, `P_t / (P_t + 1)`.
pub fn beta_factor<T: Real>(p_t: T) -> T {
    p_t / (p_t + T::one())
}

/// Lower bound on the ZPL Purcell factor, `P_t / DW`.
pub fn zpl_purcell_bound<T: Real>(p_t: T, dw: T) -> Result<T> {
    check_positive("DW", dw)?;
    check_unit_interval("DW", dw)?;
    Ok(p_t / dw)
}

/// Smallest quantum efficiency compatible with a simulated ZPL Purcell
/// ceiling `p_sim_unity_qe` (the simulated value at unit efficiency):
/// the crossing of `P_t/(DW·η)` with `η·P_sim`.
pub fn qe_lower_bound<T: Real>(p_t: T, dw: T, p_sim_unity_qe: T) -> Result<T> {
    check_positive("P_sim", p_sim_unity_qe)?;
    check_positive("DW", dw)?;
    let arg = p_t / (dw * p_sim_unity_qe);
    if arg > T::one() {
        return Err(Error::Infeasible(format!(
            "measured Purcell factor exceeds the simulated ceiling (P_t/(DW P_sim) = {})",
            to_f64(arg)
        )));
    }
    Ok(arg.sqrt())
}

/// Default simulated ZPL Purcell factor at the cavity field maximum.
pub const P_ZPL_SIM: f64 = 470.0;

/// Local-field correction factor `(3n²/(2n²+1))²`.
pub fn local_field_factor<T: Real>(n: T) -> T {
    let n2 = n * n;
    let f = lit::<T>(3.0) * n2 / (lit::<T>(2.0) * n2 + T::one());
    f * f
}

/// ZPL transition dipole moment (C·m) from the ZPL radiative rate in a host of
/// refractive index `n_host`, including the local-field correction.
///
/// `gamma0` and `omega` are ordinary frequencies (Hz).
pub fn dipole_moment<T: Real>(dw: T, eta_qe: T, gamma0: T, omega: T, n_host: T) -> Result<T> {
    check_unit_interval("DW", dw)?;
    check_unit_interval("eta_QE", eta_qe)?;
    check_positive("omega", omega)?;
    check_positive("n_host", n_host)?;
    let two_pi = lit::<T>(TWO_PI);
    let gamma_zpl = dw * eta_qe * gamma0 * two_pi;
    let w = omega * two_pi;
    let pref = local_field_factor(n_host) * n_host * w * w * w
        / (lit::<T>(3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * C * C * C));
    Ok((gamma_zpl / pref).sqrt())
}

/// ZPL radiative rate (Hz) implied by a dipole moment; inverse of [`dipole_moment`].
pub fn zpl_rate_from_dipole<T: Real>(d: T, omega: T, n_host: T) -> T {
    let w = omega * lit::<T>(TWO_PI);
    local_field_factor(n_host) * n_host * d * d * w * w * w
        / lit::<T>(3.0 * std::f64::consts::PI * EPSILON_0 * HBAR * C * C * C)
        / lit::<T>(TWO_PI)
}

/// Coupling rate `g = √(P_sim κ̃ Γ₀)/2` (Hz) from a simulated Purcell factor.
pub fn coupling_from_sim_purcell<T: Real>(p_sim: T, kappa_tilde: T, gamma0: T) -> Result<T> {
    if p_sim < T::zero() || kappa_tilde < T::zero() || gamma0 < T::zero() {
        return Err(Error::InvalidParameter(
            "Purcell factor and rates must be non-negative".into(),
        ));
    }
    // the 2π factors of κ̃ and Γ₀ cancel against the one of g
    Ok((p_sim * kappa_tilde * gamma0).sqrt() / lit::<T>(2.0))
}

/// Per-stage efficiencies of the cavity-coupled detection path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfficiencyChain<T: Real> {
    pub eta_cav: T,
    pub eta_gc: T,
    pub eta_path: T,
    pub eta_snspd: T,
}

impl<T: Real> EfficiencyChain<T> {
    pub fn validate(&self) -> Result<()> {
        check_unit_interval("eta_cav", self.eta_cav)?;
        check_unit_interval("eta_gc", self.eta_gc)?;
        check_unit_interval("eta_path", self.eta_path)?;
        check_unit_interval("eta_snspd", self.eta_snspd)
    }
}

/// Efficiencies of the waveguide-coupled (no cavity) detection path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveguideChain<T: Real> {
    pub eta_wg: T,
    pub eta_col: T,
    pub eta_path: T,
    pub eta_snspd: T,
}

impl<T: Real> WaveguideChain<T> {
    pub fn system_efficiency(&self) -> T {
        self.eta_wg * self.eta_col * self.eta_path * self.eta_snspd
    }
}

/// `η_sys = η_cav η_GC η_path η_SNSPD`.
pub fn system_efficiency<T: Real>(chain: &EfficiencyChain<T>) -> Result<T> {
    chain.validate()?;
    Ok(chain.eta_cav * chain.eta_gc * chain.eta_path * chain.eta_snspd)
}

/// Root of `R = (1 - 2η_cav)²` to pick.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CouplingBranch {
    #[default]
    UnderCoupled,
    OverCoupled,
}

/// Under-coupled waveguide coupling fraction from the on/off-resonance reflection ratio.
pub fn eta_cav_from_reflection<T: Real>(r: T) -> Result<T> {
    eta_cav_from_reflection_branch(r, CouplingBranch::UnderCoupled)
}

pub fn eta_cav_from_reflection_branch<T: Real>(r: T, branch: CouplingBranch) -> Result<T> {
    check_unit_interval("reflection ratio", r)?;
    let half = lit::<T>(0.5);
    Ok(match branch {
        CouplingBranch::UnderCoupled => (T::one() - r.sqrt()) * half,
        CouplingBranch::OverCoupled => (T::one() + r.sqrt()) * half,
    })
}

/// Expected counts per pulse at saturation, `0.5 η_sys β e^{-t₀/τ}`.
pub fn saturation_counts<T: Real>(eta_sys: T, beta: T, t0: T, tau: T) -> T {
    lit::<T>(0.5) * eta_sys * beta * (-t0 / tau).exp()
}

/// Waveguide-efficiency interval implied by a saturated count level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveguideBounds<T: Real> {
    pub lower: T,
    pub upper: T,
    /// False when the upper bound exceeds unity.
    pub feasible: bool,
}

/// `η_wg(η_QE) = C_sat e^{t₀/τ} / (0.5 η_QE η_col η_path η_SNSPD)`, evaluated at
/// both ends of the quantum-efficiency range (the upper bound comes from the
/// lower efficiency).
pub fn waveguide_efficiency_bounds<T: Real>(
    c_sat: T,
    t0: T,
    tau: T,
    eta_col: T,
    eta_path: T,
    eta_snspd: T,
    eta_qe_range: [T; 2],
) -> Result<WaveguideBounds<T>> {
    check_positive("C_sat", c_sat)?;
    check_positive("tau", tau)?;
    let [qe_lo, qe_hi] = eta_qe_range;
    for q in [qe_lo, qe_hi] {
        check_positive("eta_QE", q)?;
        check_unit_interval("eta_QE", q)?;
    }
    if qe_lo > qe_hi {
        return Err(Error::InvalidParameter("eta_QE range is reversed".into()));
    }
    let chain = lit::<T>(0.5) * eta_col * eta_path * eta_snspd;
    check_positive("collection chain", chain)?;
    let scaled = c_sat * (t0 / tau).exp() / chain;
    let lower = scaled / qe_hi;
    let upper = scaled / qe_lo;
    Ok(WaveguideBounds {
        lower,
        upper,
        feasible: upper <= T::one(),
    })
}

/// SNR-limited autocorrelation floor `g²(0) = (2A + 1)/(A + 1)²`.
pub fn g2_snr_limit<T: Real>(a: T) -> Result<T> {
    if !(a >= T::zero()) {
        return Err(Error::InvalidParameter("SNR must be non-negative".into()));
    }
    let d = a + T::one();
    Ok((lit::<T>(2.0) * a + T::one()) / (d * d))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeemanModel<T: Real> {
    /// `|g_e - g_h|`.
    pub delta_g: T,
    /// Optical linewidth Γ, Hz.
    pub linewidth: T,
    /// μ_B/h, Hz/T.
    pub mu_b_over_h: T,
}

impl<T: Real> ZeemanModel<T> {
    pub fn new(delta_g: T, linewidth: T) -> Result<Self> {
        if delta_g < T::zero() {
            return Err(Error::InvalidParameter("|Δg| must be non-negative".into()));
        }
        check_positive("linewidth", linewidth)?;
        Ok(Self {
            delta_g,
            linewidth,
            mu_b_over_h: lit(MU_B / PLANCK),
        })
    }
}

/// Relative PLE amplitude `Γ² / (Γ² + (|Δg| μ_B B)²)` at field `b` (tesla).
pub fn zeeman_amplitude<T: Real>(b: T, m: &ZeemanModel<T>) -> T {
    let split = m.delta_g * m.mu_b_over_h * b;
    let g2 = m.linewidth * m.linewidth;
    g2 / (g2 + split * split)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalModel<T: Real> {
    /// Zero-temperature linewidth, Hz.
    pub p0: T,
    /// Broadening coefficient, Hz.
    pub p_t_coeff: T,
    /// Activation energy, J.
    pub e_a: T,
    pub k_b: T,
}

impl<T: Real> ThermalModel<T> {
    /// `e_a_mev` in meV.
    pub fn new(p0: T, p_t_coeff: T, e_a_mev: T) -> Result<Self> {
        check_positive("P0", p0)?;
        check_positive("P_T", p_t_coeff)?;
        check_positive("E_a", e_a_mev)?;
        Ok(Self {
            p0,
            p_t_coeff,
            e_a: e_a_mev * lit::<T>(1e-3 * constants::E_CHARGE),
            k_b: lit(K_B),
        })
    }
}

/// `Γ(T) = P₀ + P_T / (e^{E_a/k_B T} - 1)`.
pub fn thermal_linewidth<T: Real>(temperature: T, m: &ThermalModel<T>) -> T {
    if temperature <= T::zero() {
        return m.p0;
    }
    let x = m.e_a / (m.k_b * temperature);
    // exp overflow → the activated term vanishes
    m.p0 + m.p_t_coeff / x.exp_m1()
}

/// Mean nearest-neighbour distance of randomly placed nuclear spins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuclearSpacing<T: Real> {
    /// Mean nearest-neighbour distance, nm.
    pub d_nn: T,
    /// Number density, nm⁻³.
    pub density: T,
}

/// `Γ(4/3)`.
const GAMMA_4_3: f64 = 0.892_979_511_569_249_2;

/// Nearest-neighbour statistics for a spin density `rho` in cm⁻³.
///
/// `d_nn = Γ(4/3) (3/(4πρ))^{1/3} ≈ 0.554 ρ^{-1/3}`, the mean of
/// `w(r) = 4πρ r² exp(-4πρ r³/3)`.
pub fn nuclear_spin_separation<T: Real>(rho: T) -> Result<NuclearSpacing<T>> {
    check_positive("spin density", rho)?;
    let density = rho * lit::<T>(1e-21); // cm⁻³ → nm⁻³
    let pref = lit::<T>(GAMMA_4_3 * (3.0 / (4.0 * std::f64::consts::PI)).cbrt());
    Ok(NuclearSpacing {
        d_nn: pref / density.cbrt(),
        density,
    })
}

impl<T: Real> NuclearSpacing<T> {
    /// Nearest-neighbour distance density `w(r)` in nm⁻¹, `r` in nm.
    pub fn pdf(&self, r: T) -> T {
        if r < T::zero() {
            return T::zero();
        }
        let four_pi_rho = lit::<T>(4.0 * std::f64::consts::PI) * self.density;
        four_pi_rho * r * r * (-four_pi_rho * r * r * r / lit::<T>(3.0)).exp()
    }
}

/// `κ̃ ≈ κ + 2Γ_d` for negligible spectral diffusion.
pub fn kappa_tilde_approx<T: Real>(kappa: T, gamma_d: T) -> T {
    kappa + lit::<T>(2.0) * gamma_d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn purcell_lorentzian_points() {
        let fit = PurcellFit::new(5.88, 7.11e9, 1.03).unwrap();
        assert_relative_eq!(purcell_lorentzian(0.0, &fit), 6.91, epsilon = 1e-12);
        assert_relative_eq!(purcell_lorentzian(7.11e9 / 2.0, &fit), 3.97, epsilon = 1e-12);
        assert_relative_eq!(purcell_lorentzian(1e15, &fit), 1.03, epsilon = 1e-9);
        assert!(PurcellFit::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rate_budget() {
        let b = rate_decomposition(1.0, 1.0, 1.0).unwrap();
        assert_eq!((b.gamma_zpl, b.gamma_psb, b.gamma_nr), (1.0, 0.0, 0.0));
        let b = rate_decomposition(169.3e3, 0.23, 1.0).unwrap();
        // 0.23 × 169.3 kHz
        assert_relative_eq!(b.gamma_zpl, 38_939.0, max_relative = 1e-12);
        assert!(rate_decomposition(1.0, 1.2, 0.5).is_err());
    }

    #[test]
    fn beta_points() {
        assert_relative_eq!(beta_factor(5.88), 0.855, epsilon = 5e-4);
        assert_eq!(beta_factor(0.0), 0.0);
        assert_eq!(beta_factor(1.0), 0.5);
    }

    #[test]
    fn zpl_and_qe_bounds() {
        assert_relative_eq!(zpl_purcell_bound(5.88, 0.23).unwrap(), 25.6, max_relative = 5e-3);
        assert_eq!(zpl_purcell_bound(5.88, 1.0).unwrap(), 5.88);
        assert_eq!(zpl_purcell_bound(0.0, 0.23).unwrap(), 0.0);
        assert_relative_eq!(qe_lower_bound(5.88, 0.23, 470.0).unwrap(), 0.234, max_relative = 5e-3);
        assert!(qe_lower_bound(5.88, 0.23, 1e30).unwrap() < 1e-13);
        assert_relative_eq!(qe_lower_bound(0.23 * 470.0, 0.23, 470.0).unwrap(), 1.0);
        assert!(matches!(qe_lower_bound(200.0, 0.23, 470.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn dipole_points() {
        let d = dipole_moment(0.23, 1.0, 169.3e3, 226.141974e12, 3.505).unwrap();
        assert_relative_eq!(d, 1.67e-30, max_relative = 0.02);
        assert_relative_eq!(d / constants::DEBYE, 0.50, max_relative = 0.02);
        let quarter = dipole_moment(0.23, 0.25, 169.3e3, 226.141974e12, 3.505).unwrap();
        assert_relative_eq!(quarter, d / 2.0, max_relative = 1e-14);
        assert_eq!(dipole_moment(0.23, 1.0, 0.0, 226.141974e12, 3.505).unwrap(), 0.0);
    }

    #[test]
    fn coupling_points() {
        let g = coupling_from_sim_purcell(470.0, 7.11e9, 169.3e3).unwrap();
        assert_relative_eq!(g, 376e6, max_relative = 0.01);
        assert_eq!(coupling_from_sim_purcell(0.0, 7.11e9, 169.3e3).unwrap(), 0.0);
        let g4 = coupling_from_sim_purcell(4.0 * 470.0, 7.11e9, 169.3e3).unwrap();
        assert_relative_eq!(g4, 2.0 * g, max_relative = 1e-14);
    }

    #[test]
    fn efficiency_chain() {
        let chain: EfficiencyChain<f64> = EfficiencyChain {
            eta_cav: 0.358,
            eta_gc: 0.461,
            eta_path: 0.786,
            eta_snspd: 0.703,
        };
        assert!((system_efficiency(&chain).unwrap() - 0.091).abs() < 1e-3);
        let zero = EfficiencyChain { eta_gc: 0.0, ..chain };
        assert_eq!(system_efficiency(&zero).unwrap(), 0.0);
        let one = EfficiencyChain {
            eta_cav: 1.0,
            eta_gc: 1.0,
            eta_path: 1.0,
            eta_snspd: 1.0,
        };
        assert_eq!(system_efficiency(&one).unwrap(), 1.0);
    }

    #[test]
    fn reflection_inversion() {
        assert_eq!(eta_cav_from_reflection(1.0).unwrap(), 0.0);
        assert_eq!(eta_cav_from_reflection(0.0).unwrap(), 0.5);
        let r = (1.0f64 - 2.0 * 0.358).powi(2);
        assert_relative_eq!(r, 0.080656, max_relative = 1e-12);
        assert_relative_eq!(eta_cav_from_reflection(0.0807).unwrap(), 0.358, max_relative = 1e-3);
        assert_relative_eq!(
            eta_cav_from_reflection_branch(r, CouplingBranch::OverCoupled).unwrap(),
            0.642,
            max_relative = 1e-12
        );
        assert!(eta_cav_from_reflection(1.1).is_err());
    }

    #[test]
    fn saturation_count_points() {
        let c = saturation_counts(0.091, 0.855, 170e-9, 136.4e-9);
        assert_relative_eq!(c, 0.011, max_relative = 0.05);
        assert_relative_eq!(saturation_counts(0.091, 0.855, 0.0, 136.4e-9), 0.5 * 0.091 * 0.855);
        assert_relative_eq!(
            saturation_counts(0.091, 0.855, 170e-9, f64::INFINITY),
            0.5 * 0.091 * 0.855
        );
    }

    #[test]
    fn waveguide_bounds() {
        let b = waveguide_efficiency_bounds(7e-4, 300e-9, 838.2e-9, 0.142, 0.786, 0.703, [0.234, 1.0])
            .unwrap();
        assert_relative_eq!(b.lower, 0.0255, max_relative = 0.05);
        assert_relative_eq!(b.upper, 0.109, max_relative = 0.05);
        assert!(b.feasible);
        let b2 = waveguide_efficiency_bounds(1.4e-3, 300e-9, 838.2e-9, 0.142, 0.786, 0.703, [0.234, 1.0])
            .unwrap();
        assert_relative_eq!(b2.lower, 2.0 * b.lower, max_relative = 1e-14);
        assert_relative_eq!(b2.upper, 2.0 * b.upper, max_relative = 1e-14);
        let point = waveguide_efficiency_bounds(7e-4, 300e-9, 838.2e-9, 0.142, 0.786, 0.703, [0.5, 0.5])
            .unwrap();
        assert_eq!(point.lower, point.upper);
        let bad = waveguide_efficiency_bounds(0.1, 300e-9, 838.2e-9, 0.142, 0.786, 0.703, [0.234, 1.0])
            .unwrap();
        assert!(!bad.feasible);
    }

    #[test]
    fn g2_points() {
        assert_eq!(g2_snr_limit(0.0).unwrap(), 1.0);
        assert_eq!(g2_snr_limit(1.0).unwrap(), 0.75);
        assert!(g2_snr_limit(1e12).unwrap() < 1e-11);
        assert!(g2_snr_limit(-1.0).is_err());
    }

    #[test]
    fn zeeman_points() {
        let m = ZeemanModel::new(0.55, 3.83e9).unwrap();
        assert_relative_eq!(m.mu_b_over_h, 13.996e9, max_relative = 1e-4);
        assert_eq!(zeeman_amplitude(0.0, &m), 1.0);
        assert_eq!(zeeman_amplitude(0.2, &m), zeeman_amplitude(-0.2, &m));
        // Γ²/(Γ² + (0.55 × 13.996 GHz/T × 0.3 T)²)
        let split: f64 = 0.55 * 13.996e9 * 0.3;
        let expected = 3.83e9f64.powi(2) / (3.83e9f64.powi(2) + split * split);
        assert_relative_eq!(zeeman_amplitude(0.3, &m), expected, max_relative = 1e-4);
        assert_relative_eq!(expected, 0.7334, max_relative = 1e-3);
    }

    #[test]
    fn thermal_points() {
        let m = ThermalModel::new(4.49e9, 9.21e9, 1.35).unwrap();
        assert_relative_eq!(thermal_linewidth(1e-3, &m), 4.49e9, max_relative = 1e-15);
        let excess = thermal_linewidth(3.4, &m) - 4.49e9;
        assert!(excess > 0.08e9 && excess < 0.11e9, "{excess}");
        let mut last = 0.0;
        for k in 1..100 {
            let g = thermal_linewidth(k as f64 * 0.2, &m);
            assert!(g >= last);
            last = g;
        }
    }

    #[test]
    fn nuclear_spacing_points() {
        let si = nuclear_spin_separation(2.34e21f64).unwrap();
        assert!((si.d_nn - 0.42).abs() < 0.005, "{}", si.d_nn);
        let h = nuclear_spin_separation(5.56e17f64).unwrap();
        assert!((h.d_nn - 6.7).abs() < 0.05, "{}", h.d_nn);
        assert!(nuclear_spin_separation(0.0).is_err());
    }

    #[test]
    fn kappa_tilde_points() {
        assert_eq!(kappa_tilde_approx(5.22e9, 0.0), 5.22e9);
        assert_relative_eq!(kappa_tilde_approx(5.22e9, 0.645e9), 6.51e9, max_relative = 1e-12);
    }
}
