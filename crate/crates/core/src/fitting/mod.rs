//! Derivative-free minimization and least-squares curve models.

mod basin;
mod curves;
mod global;
mod simplex;

pub use basin::{basin_hopping, BasinHoppingOptions};
pub use curves::{
    fit_biexponential, fit_exponential, fit_exponential_pure, fit_gaussian, fit_lorentzian,
    fit_purcell_lorentzian, BiexpFit, ExpFit, PeakFit, PurcellLorentzianFit, Significance,
};
pub use global::{
    global_cqed_fit, model_curves, synthetic_datasets, DatasetDesign, DatasetWeights, FreeParam, GlobalDatasets,
    GlobalFit, GlobalFitConfig, ModelCurves, FREE_NAMES,
};
pub use simplex::{nelder_mead, nelder_mead_with, NelderMeadOptions};

use std::collections::BTreeMap;

use crate::scalar::Real;

/// Closed interval for one parameter; infinite ends mean unbounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bounds<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi }
    }

    pub fn unbounded() -> Self {
        Self {
            lo: -T::max_value().unwrap(),
            hi: T::max_value().unwrap(),
        }
    }

    pub fn clamp(&self, x: T) -> T {
        if x < self.lo {
            self.lo
        } else if x > self.hi {
            self.hi
        } else {
            x
        }
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo > -T::max_value().unwrap() && self.hi < T::max_value().unwrap()
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

/// A scalar cost over a fixed-length parameter vector, with per-parameter
/// bounds and an evaluation counter.
///
/// Non-finite costs are reported as `+∞`, which the optimizers treat as an
/// infeasible point.
pub struct Objective<'a, T> {
    func: Box<dyn FnMut(&[T]) -> T + 'a>,
    bounds: Vec<Bounds<T>>,
    n_eval: usize,
}

impl<'a, T: Real> Objective<'a, T> {
    pub fn new(dim: usize, func: impl FnMut(&[T]) -> T + 'a) -> Self {
        Self {
            func: Box::new(func),
            bounds: vec![Bounds::unbounded(); dim],
            n_eval: 0,
        }
    }

    pub fn bounded(bounds: Vec<Bounds<T>>, func: impl FnMut(&[T]) -> T + 'a) -> Self {
        Self {
            func: Box::new(func),
            bounds,
            n_eval: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[Bounds<T>] {
        &self.bounds
    }

    pub fn n_eval(&self) -> usize {
        self.n_eval
    }

    pub fn project(&self, x: &mut [T]) {
        for (v, b) in x.iter_mut().zip(&self.bounds) {
            *v = b.clamp(*v);
        }
    }

    pub fn eval(&mut self, x: &[T]) -> T {
        self.n_eval += 1;
        let c = (self.func)(x);
        if c.is_finite() {
            c
        } else {
            T::max_value().unwrap()
        }
    }
}

/// Outcome of a minimization or a fit.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult<T> {
    pub params: Vec<T>,
    pub cost: T,
    pub n_eval: usize,
    pub converged: bool,
    pub uncertainties: Option<Vec<T>>,
    /// Residual norm per named dataset (global fits).
    pub residuals: BTreeMap<String, T>,
    /// Best-ever cost after each outer iteration (basin hopping).
    pub history: Vec<T>,
}

impl<T: Real> FitResult<T> {
    pub(crate) fn local(params: Vec<T>, cost: T, n_eval: usize, converged: bool) -> Self {
        Self {
            params,
            cost,
            n_eval,
            converged,
            uncertainties: None,
            residuals: BTreeMap::new(),
            history: Vec::new(),
        }
    }
}
