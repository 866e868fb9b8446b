use cqed::analytics::*;
use proptest::prelude::*;

/// Adaptive Simpson quadrature, independent of the crate.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

#[test]
fn nearest_neighbour_pdf_normalized_and_mean_matches() {
    for rho in [2.34e21, 5.56e17, 1e19] {
        let s = nuclear_spin_separation(rho).unwrap();
        let upper = 6.0 * s.d_nn;
        let panels = |f: &dyn Fn(f64) -> f64| -> f64 {
            (0..60)
                .map(|k| simpson(f, upper * k as f64 / 60.0, upper * (k + 1) as f64 / 60.0, 1e-14))
                .sum()
        };
        let norm = panels(&|r| s.pdf(r));
        assert!((norm - 1.0).abs() < 1e-6, "norm {norm}");
        let mean = panels(&|r| r * s.pdf(r));
        assert!((mean / s.d_nn - 1.0).abs() < 5e-3, "mean {mean} vs {}", s.d_nn);
        // 0.554 ρ^{-1/3} rule of thumb
        let rule = 0.554 * (rho * 1e-21f64).cbrt().recip();
        assert!((rule / s.d_nn - 1.0).abs() < 5e-3);
    }
}

proptest! {
    #[test]
    fn purcell_lorentzian_even_and_peaked(delta in -1e11f64..1e11, p_t in 0.1f64..50.0, kt in 1e8f64..1e11) {
        let fit = PurcellFit::new(p_t, kt, 1.0).unwrap();
        let at = purcell_lorentzian(delta, &fit);
        prop_assert_eq!(at, purcell_lorentzian(-delta, &fit));
        prop_assert!(at <= purcell_lorentzian(0.0, &fit));
    }

    #[test]
    fn rate_budget_round_trip(g0 in 1.0f64..1e9, dw in 0.01f64..1.0, qe in 0.01f64..1.0) {
        let b = rate_decomposition(g0, dw, qe).unwrap();
        prop_assert!((b.total() / g0 - 1.0).abs() < 1e-12);
        prop_assert!((b.debye_waller() - dw).abs() < 1e-12);
        prop_assert!((b.quantum_efficiency() - qe).abs() < 1e-12);
    }

    #[test]
    fn g2_in_unit_interval_and_decreasing(a in 0.0f64..1e6, da in 1e-3f64..10.0) {
        let g = g2_snr_limit(a).unwrap();
        prop_assert!(g > 0.0 && g <= 1.0);
        prop_assert!(g2_snr_limit(a + da).unwrap() < g);
    }

    #[test]
    fn dipole_reproduces_rate(dw in 0.05f64..1.0, qe in 0.05f64..1.0, g0 in 1e3f64..1e8) {
        let omega = 226.141974e12;
        let d = dipole_moment(dw, qe, g0, omega, 3.505).unwrap();
        let back = zpl_rate_from_dipole(d, omega, 3.505);
        prop_assert!((back / (dw * qe * g0) - 1.0).abs() < 1e-10);
    }
}
