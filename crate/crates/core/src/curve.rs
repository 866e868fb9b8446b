//! Generic sampled series: decay traces, spectra, sweeps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(x, y, σ)` samples with free-form metadata.
///
/// Conventional metadata keys: `x_label`, `x_unit`, `y_label`, `y_unit`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve<T: Real> {
    x: Vec<T>,
    y: Vec<T>,
    sigma: Option<Vec<T>>,
    pub meta: BTreeMap<String, String>,
}

impl<T: Real> Curve<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        Self::with_sigma(x, y, None)
    }

    pub fn with_sigma(x: Vec<T>, y: Vec<T>, sigma: Option<Vec<T>>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        if let Some(s) = &sigma {
            if s.len() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: x.len(),
                    found: s.len(),
                });
            }
        }
        if !is_strictly_monotone(&x) {
            return Err(Error::InvalidParameter(
                "curve abscissa must be strictly monotone".into(),
            ));
        }
        Ok(Self {
            x,
            y,
            sigma,
            meta: BTreeMap::new(),
        })
    }

    /// Attaches axis labels and units.
    pub fn labeled(mut self, x_label: &str, x_unit: &str, y_label: &str, y_unit: &str) -> Self {
        self.meta.insert("x_label".into(), x_label.into());
        self.meta.insert("x_unit".into(), x_unit.into());
        self.meta.insert("y_label".into(), y_label.into());
        self.meta.insert("y_unit".into(), y_unit.into());
        self
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.into(), value.to_string());
        self
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn sigma(&self) -> Option<&[T]> {
        self.sigma.as_deref()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn label(&self, key: &str) -> &str {
        self.meta.get(key).map(String::as_str).unwrap_or("")
    }

    /// Points with `x >= start`, assuming increasing abscissa.
    pub fn tail_from(&self, start: T) -> Result<Self> {
        let i0 = self.x.iter().position(|&x| x >= start).unwrap_or(self.x.len());
        let sigma = self.sigma.as_ref().map(|s| s[i0..].to_vec());
        let mut out = Self::with_sigma(self.x[i0..].to_vec(), self.y[i0..].to_vec(), sigma)?;
        out.meta = self.meta.clone();
        Ok(out)
    }

    /// Points with `start <= x <= stop`, assuming increasing abscissa.
    pub fn window(&self, start: T, stop: T) -> Result<Self> {
        let i0 = self.x.iter().position(|&x| x >= start).unwrap_or(self.x.len());
        let i1 = self.x.iter().rposition(|&x| x <= stop).map_or(0, |i| i + 1).max(i0);
        let sigma = self.sigma.as_ref().map(|s| s[i0..i1].to_vec());
        let mut out = Self::with_sigma(self.x[i0..i1].to_vec(), self.y[i0..i1].to_vec(), sigma)?;
        out.meta = self.meta.clone();
        Ok(out)
    }

    /// Same abscissa, ordinate mapped pointwise.
    pub fn map_y(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            x: self.x.clone(),
            y: self.y.iter().map(|&v| f(v)).collect(),
            sigma: self.sigma.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Trapezoidal integral of `y` over `x ∈ [a, b]` (sample points only).
    pub fn integrate(&self, a: T, b: T) -> T {
        let half = crate::scalar::lit::<T>(0.5);
        self.x
            .windows(2)
            .zip(self.y.windows(2))
            .filter(|(xs, _)| xs[0] >= a && xs[1] <= b)
            .fold(T::zero(), |s, (xs, ys)| s + (xs[1] - xs[0]) * (ys[0] + ys[1]) * half)
    }
}

pub(crate) fn is_strictly_monotone<T: Real>(x: &[T]) -> bool {
    x.windows(2).all(|w| w[1] > w[0]) || x.windows(2).all(|w| w[1] < w[0])
}
