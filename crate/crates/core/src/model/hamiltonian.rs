use std::f64::consts::TAU;

use super::params::{DriveSpec, SystemParams};
use crate::analytics::constants::HBAR;
use crate::error::Result;
use crate::quantum::{HilbertSpace, QuantumOperator};
use crate::Operator;

/// Mean intracavity photon number produced by the input power:
/// `N_ph = 4 (η_cav/κ) / (1 + (2Δ_c/κ)²) · P_in/(ħ ω_a)`, Δ_c = ω_c - ω_L.
pub fn intracavity_photons(p: &DriveSpec, s: &SystemParams) -> f64 {
    let kappa = TAU * s.kappa;
    let dc = TAU * (s.omega_c() - p.omega_l);
    let lorentz = 1.0 / (1.0 + (2.0 * dc / kappa).powi(2));
    4.0 * s.eta_cav / kappa * lorentz * p.p_in / (HBAR * TAU * s.omega_a)
}

/// `Ω = 2g√N_ph` (Hz in, Hz out).
pub fn rabi_frequency(n_ph: f64, g: f64) -> f64 {
    2.0 * g * n_ph.max(0.0).sqrt()
}

/// `H/ħ` in rad/s, in the frame rotating at ω_L:
/// `Δ_a σ₊σ₋ + Δ_c a†a + g(σ₊a + σ₋a†) + (Ω/2)(σ₊ + σ₋)`.
pub fn build_hamiltonian(
    s: &SystemParams,
    omega_l: f64,
    omega_rabi: f64,
    hs: &HilbertSpace,
) -> Result<Operator> {
    build_hamiltonian_shifted(s, omega_l, omega_rabi, 0.0, hs)
}

/// As [`build_hamiltonian`] with the emitter frequency offset by `delta` (Hz).
pub fn build_hamiltonian_shifted(
    s: &SystemParams,
    omega_l: f64,
    omega_rabi: f64,
    delta: f64,
    hs: &HilbertSpace,
) -> Result<Operator> {
    let da = TAU * (s.omega_a + delta - omega_l);
    let dc = TAU * (s.omega_c() - omega_l);
    let g = TAU * s.g;
    let half_omega = 0.5 * TAU * omega_rabi;
    let sm = hs.sigma_minus::<f64>();
    let sp = hs.sigma_plus::<f64>();
    let a = hs.destroy::<f64>();
    let ad = hs.create::<f64>();
    let h = &(&hs.excited_projector::<f64>().scale(da) + &hs.photon_number::<f64>().scale(dc))
        + &(&(&(&sp * &a) + &(&sm * &ad)).scale(g) + &(&sp + &sm).scale(half_omega));
    // remove round-off asymmetry
    Ok(QuantumOperator::new((h.matrix() + h.dagger().matrix()).map(|z| z * 0.5))?)
}

/// Collapse operators `√κ a`, `√Γ₀ σ₋`, `√(Γ_d/2) σ_z` (rad/s units), always
/// in that order; a zero rate yields a zero operator.
pub fn jump_operators(s: &SystemParams, hs: &HilbertSpace) -> Vec<Operator> {
    vec![
        hs.destroy::<f64>().scale((TAU * s.kappa).sqrt()),
        hs.sigma_minus::<f64>().scale((TAU * s.gamma0).sqrt()),
        hs.sigma_z::<f64>().scale((TAU * s.gamma_d / 2.0).sqrt()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::AtomLevel;
    use approx::assert_relative_eq;

    #[test]
    fn photon_number_points() {
        let s = SystemParams::reference();
        let mut d = DriveSpec::reference();
        d.p_in = 0.0;
        assert_eq!(intracavity_photons(&d, &s), 0.0);
        d.p_in = 1e-9;
        // 4 · 0.358 / (2π·5.22e9) · 1e-9 / (ħ · 2π · 226.142e12)
        let hand = 4.0 * 0.358 / (TAU * 5.22e9) * 1e-9 / (1.054_571_817e-34 * TAU * 226.142e12);
        assert_relative_eq!(intracavity_photons(&d, &s), hand, max_relative = 1e-6);
        assert_relative_eq!(hand, 0.291, max_relative = 2e-3);
        let on = intracavity_photons(&d, &s);
        d.omega_l = s.omega_c() - s.kappa / 2.0;
        assert_relative_eq!(intracavity_photons(&d, &s), on / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn rabi_points() {
        assert_eq!(rabi_frequency(0.0, 42.4e6), 0.0);
        assert_eq!(rabi_frequency(1.0, 42.4e6), 2.0 * 42.4e6);
        let s = SystemParams::reference();
        let d = DriveSpec {
            p_in: 163.43e-9,
            ..DriveSpec::reference()
        };
        let omega = rabi_frequency(intracavity_photons(&d, &s), s.g);
        assert_relative_eq!(omega, 586e6, max_relative = 0.01);
    }

    #[test]
    fn bare_hamiltonian_diagonal() {
        let hs = HilbertSpace::new(2).unwrap();
        let s = SystemParams {
            g: 0.0,
            delta_ac: 3e9,
            ..SystemParams::reference()
        };
        let wl = s.omega_a - 1e9;
        let h = build_hamiltonian(&s, wl, 0.0, &hs).unwrap();
        let m = h.matrix();
        let e0 = hs.index(AtomLevel::Excited, 0);
        let g1 = hs.index(AtomLevel::Ground, 1);
        assert_relative_eq!(m[(e0, e0)].re, TAU * 1e9, max_relative = 1e-12);
        assert_relative_eq!(m[(g1, g1)].re, TAU * 4e9, max_relative = 1e-12);
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn normal_mode_splitting() {
        let hs = HilbertSpace::new(3).unwrap();
        let s = SystemParams::reference();
        let h = build_hamiltonian(&s, s.omega_a - 2e9, 0.0, &hs).unwrap();
        let ev = h.hermitian_eigenvalues();
        // single-excitation doublet around Δ = 2π·2 GHz
        let center = TAU * 2e9;
        let mut doublet: Vec<f64> = ev.iter().copied().filter(|e| (e - center).abs() < TAU * 1e9).collect();
        doublet.sort_by(f64::total_cmp);
        assert_eq!(doublet.len(), 2);
        assert_relative_eq!(doublet[1] - doublet[0], 2.0 * TAU * s.g, max_relative = 1e-9);
    }

    #[test]
    fn jumps() {
        let hs = HilbertSpace::default();
        let s = SystemParams {
            gamma_d: 0.0,
            ..SystemParams::reference()
        };
        let j = jump_operators(&s, &hs);
        assert_eq!(j.len(), 3);
        assert_eq!(j.iter().filter(|c| !c.is_zero()).count(), 2);
        let rho = hs.basis_state::<f64>(AtomLevel::Ground, 2);
        let flux = rho.expect(&(&j[0].dagger() * &j[0]));
        assert_relative_eq!(flux, TAU * s.kappa * 2.0, max_relative = 1e-12);
    }
}
