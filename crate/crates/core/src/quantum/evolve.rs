//! Piecewise-constant time evolution with recorded expectation values.

use nalgebra::DVector;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

use super::liouvillian::{HermitianBasis, Liouvillian, Propagator};
use super::operator::{DensityMatrix, QuantumOperator};

/// Runtime checks applied while evolving.
#[derive(Clone, Debug)]
pub struct EvolveOptions<T: Real> {
    /// Population observable that must stay below the threshold (e.g. the
    /// projector on the top Fock level).
    pub truncation_guard: Option<(QuantumOperator<T>, T)>,
    /// Full positivity check every `positivity_stride` samples; 0 checks only
    /// at segment boundaries.
    pub positivity_stride: usize,
}

impl<T: Real> Default for EvolveOptions<T> {
    fn default() -> Self {
        Self {
            truncation_guard: None,
            positivity_stride: 0,
        }
    }
}

/// Result of [`evolve_trace_with`].
#[derive(Clone, Debug)]
pub struct Evolution<T: Real> {
    pub curves: Vec<Curve<T>>,
    pub final_state: DensityMatrix<T>,
    /// Largest guarded population seen at any sample.
    pub max_guard_population: T,
}

/// Evolves `rho0` through consecutive `(generator, duration)` segments and
/// samples `⟨Oᵢ⟩` every `dt_record` (plus at each segment end when the
/// duration is not a multiple of the step).
pub fn evolve_trace<T: Real>(
    rho0: &DensityMatrix<T>,
    segments: &[(Liouvillian<T>, T)],
    observables: &[QuantumOperator<T>],
    dt_record: T,
) -> Result<Vec<Curve<T>>> {
    Ok(evolve_trace_with(rho0, segments, observables, dt_record, &EvolveOptions::default())?.curves)
}

pub fn evolve_trace_with<T: Real>(
    rho0: &DensityMatrix<T>,
    segments: &[(Liouvillian<T>, T)],
    observables: &[QuantumOperator<T>],
    dt_record: T,
    opts: &EvolveOptions<T>,
) -> Result<Evolution<T>> {
    rho0.check(T::zero())?;
    if !(dt_record > T::zero()) {
        return Err(Error::InvalidParameter("dt_record must be positive".into()));
    }
    let dim = rho0.dim();
    for (l, duration) in segments {
        if l.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: l.dim(),
            });
        }
        if !(*duration > T::zero()) {
            return Err(Error::InvalidParameter(
                "segment durations must be positive".into(),
            ));
        }
    }
    for o in observables {
        if o.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: o.dim(),
            });
        }
    }

    let basis = HermitianBasis::full(dim);
    let obs: Vec<DVector<T>> = observables.iter().map(|o| basis.observable(o)).collect();
    let guard = opts
        .truncation_guard
        .as_ref()
        .map(|(op, thr)| (basis.observable(op), *thr));

    let mut rec = Recorder {
        basis: &basis,
        obs: &obs,
        guard,
        xs: Vec::new(),
        ys: vec![Vec::new(); obs.len()],
        max_guard: T::zero(),
        stride: opts.positivity_stride,
        count: 0,
    };

    let mut c = basis.coords(rho0);
    let mut t = T::zero();
    rec.record(t, &c, false)?;

    let tiny = lit::<T>(1e-9);
    for (l, duration) in segments {
        let gen = l.real_generator();
        let step = gen.propagator(dt_record)?;
        let ratio = *duration / dt_record;
        let mut n_full = to_f64(ratio).floor() as usize;
        let mut rest = *duration - dt_record * lit::<T>(n_full as f64);
        // absorb round-off so that e.g. 900 ns / 1 ns gives exactly 900 steps
        if rest / dt_record > T::one() - tiny {
            n_full += 1;
            rest = T::zero();
        }
        if rest / dt_record < tiny {
            rest = T::zero();
        }
        let t_seg0 = t;
        for k in 1..=n_full {
            c = step.apply(&c);
            t = t_seg0 + dt_record * lit::<T>(k as f64);
            let boundary = k == n_full && rest == T::zero();
            rec.record(t, &c, boundary)?;
        }
        if rest > T::zero() {
            let last: Propagator<T> = gen.propagator(rest)?;
            c = last.apply(&c);
            t = t_seg0 + *duration;
            rec.record(t, &c, true)?;
        }
    }

    let final_state = basis.density(&c)?;
    let max_guard_population = rec.max_guard;
    let xs = rec.xs;
    let curves = rec
        .ys
        .into_iter()
        .map(|y| Curve::new(xs.clone(), y).map(|c| c.labeled("time", "s", "expectation", "")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Evolution {
        curves,
        final_state,
        max_guard_population,
    })
}

struct Recorder<'a, T: Real> {
    basis: &'a HermitianBasis,
    obs: &'a [DVector<T>],
    guard: Option<(DVector<T>, T)>,
    xs: Vec<T>,
    ys: Vec<Vec<T>>,
    max_guard: T,
    stride: usize,
    count: usize,
}

impl<T: Real> Recorder<'_, T> {
    fn record(&mut self, t: T, c: &DVector<T>, boundary: bool) -> Result<()> {
        let tr = to_f64(self.basis.trace(c)) - 1.0;
        if !tr.is_finite() || tr.abs() > DensityMatrix::<T>::TRACE_TOL {
            return Err(Error::InvariantViolation {
                what: "trace",
                time: to_f64(t),
                deviation: tr.abs(),
            });
        }
        if let Some((g, thr)) = &self.guard {
            let p = g.dot(c);
            self.max_guard = self.max_guard.max(p);
            if p > *thr {
                return Err(Error::InvariantViolation {
                    what: "Fock truncation population",
                    time: to_f64(t),
                    deviation: to_f64(p),
                });
            }
        }
        self.count += 1;
        if boundary || (self.stride > 0 && self.count % self.stride == 0) {
            self.basis.density(c)?.check(t)?;
        }
        self.xs.push(t);
        for (o, y) in self.obs.iter().zip(self.ys.iter_mut()) {
            y.push(o.dot(c));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::liouvillian::build_liouvillian;
    use crate::quantum::operator::{sigma_minus, sigma_plus};

    #[test]
    fn amplitude_damping_trace() {
        let gamma: f64 = 1.0 / 940e-9;
        let l = build_liouvillian(
            &QuantumOperator::zeros(2),
            &[sigma_minus::<f64>().scale(gamma.sqrt())],
        )
        .unwrap();
        let pe = &sigma_plus::<f64>() * &sigma_minus();
        let curves = evolve_trace(&DensityMatrix::basis(2, 1), &[(l, 2e-6)], &[pe], 1e-9).unwrap();
        let c = &curves[0];
        assert_eq!(c.len(), 2001);
        for (t, y) in c.x().iter().zip(c.y()) {
            assert!((y - (-gamma * t).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn partial_last_step() {
        let l = build_liouvillian(&QuantumOperator::<f64>::zeros(2), &[sigma_minus()]).unwrap();
        let pe = &sigma_plus::<f64>() * &sigma_minus();
        let curves = evolve_trace(&DensityMatrix::basis(2, 1), &[(l, 1.05)], &[pe], 0.1).unwrap();
        let c = &curves[0];
        assert!((c.x().last().unwrap() - 1.05).abs() < 1e-12);
        assert!((c.y().last().unwrap() - (-1.05f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn guard_aborts() {
        let l = build_liouvillian(&QuantumOperator::<f64>::zeros(2), &[sigma_minus()]).unwrap();
        let pe = &sigma_plus::<f64>() * &sigma_minus();
        let opts = EvolveOptions {
            truncation_guard: Some((pe.clone(), 0.5)),
            positivity_stride: 1,
        };
        let r = evolve_trace_with(&DensityMatrix::basis(2, 1), &[(l, 1.0)], &[pe], 0.1, &opts);
        assert!(matches!(r, Err(Error::InvariantViolation { .. })));
    }
}
