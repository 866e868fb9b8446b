use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{nelder_mead_with, FitResult, NelderMeadOptions, Objective};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct BasinHoppingOptions<T> {
    pub n_hops: usize,
    /// Half-width of the uniform displacement per coordinate.
    pub step: Vec<T>,
    /// Metropolis temperature for the cost change relative to the current
    /// cost (raw change when the current cost is zero).
    pub temperature: T,
    pub seed: u64,
    pub local: NelderMeadOptions<T>,
}

/// Perturb, minimize locally, accept by the Metropolis rule; returns the best
/// point ever visited. `history[k]` is the best cost after hop `k` (index 0 is
/// the initial local minimization), so it is non-increasing.
pub fn basin_hopping<T: Real>(
    obj: &mut Objective<'_, T>,
    x0: &[T],
    opts: &BasinHoppingOptions<T>,
) -> Result<FitResult<T>> {
    if opts.step.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            found: opts.step.len(),
        });
    }
    if !(opts.temperature > T::zero()) {
        return Err(Error::InvalidParameter("temperature must be positive".into()));
    }
    let start = obj.n_eval();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let first = nelder_mead_with(obj, x0, &opts.local)?;
    let mut current = (first.params.clone(), first.cost);
    let mut best = first;
    let mut history = vec![best.cost];

    for hop in 0..opts.n_hops {
        let mut trial: Vec<T> = current
            .0
            .iter()
            .zip(&opts.step)
            .map(|(&x, &s)| x + s * lit::<T>(rng.random_range(-1.0..=1.0)))
            .collect();
        obj.project(&mut trial);
        let local = nelder_mead_with(obj, &trial, &opts.local)?;
        let accept = local.cost < current.1 || {
            let scale = if current.1 > T::zero() { current.1 } else { T::one() };
            let arg = -to_f64((local.cost - current.1) / (opts.temperature * scale));
            rng.random::<f64>() < arg.exp()
        };
        log::debug!(
            "hop {hop}: cost {:.6e} ({})",
            to_f64(local.cost),
            if accept { "accepted" } else { "rejected" }
        );
        if accept {
            current = (local.params.clone(), local.cost);
        }
        if local.cost < best.cost {
            best = local;
        }
        history.push(best.cost);
    }
    best.n_eval = obj.n_eval() - start;
    best.history = history;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitting::nelder_mead;

    fn opts(seed: u64) -> BasinHoppingOptions<f64> {
        BasinHoppingOptions {
            n_hops: 25,
            step: vec![2.0],
            temperature: 1.0,
            seed,
            local: NelderMeadOptions::new(1e-12, 2000),
        }
    }

    #[test]
    fn single_basin_matches_local() {
        let f = |x: &[f64]| (x[0] - 2.0).powi(2);
        let plain = nelder_mead(&mut Objective::new(1, f), &[0.0], 1e-12, 2000).unwrap();
        let hop = basin_hopping(&mut Objective::new(1, f), &[0.0], &opts(3)).unwrap();
        assert!((plain.params[0] - hop.params[0]).abs() < 1e-6);
        assert!(hop.cost <= plain.cost + 1e-12);
    }

    #[test]
    fn double_well_finds_global() {
        // f'(x) = 4x³ - 4x + 0.1 = 0 near x = -1
        let mut root: f64 = -1.0;
        for _ in 0..50 {
            root -= (4.0 * root.powi(3) - 4.0 * root + 0.1) / (12.0 * root * root - 4.0);
        }
        let f = |x: &[f64]| (x[0] * x[0] - 1.0).powi(2) + 0.1 * x[0];
        let r = basin_hopping(&mut Objective::new(1, f), &[1.0], &opts(7)).unwrap();
        assert!((r.params[0] - root).abs() < 1e-3, "{:?} vs {root}", r.params);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn deterministic_for_seed() {
        let f = |x: &[f64]| (x[0] * x[0] - 1.0).powi(2) + 0.1 * x[0] + (3.0 * x[0]).sin() * 0.05;
        let a = basin_hopping(&mut Objective::new(1, f), &[1.0], &opts(11)).unwrap();
        let b = basin_hopping(&mut Objective::new(1, f), &[1.0], &opts(11)).unwrap();
        assert_eq!(a, b);
    }
}
