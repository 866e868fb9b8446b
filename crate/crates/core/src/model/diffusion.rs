use crate::error::{Error, Result};

/// Discrete Gaussian distribution of emitter frequency offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffusionQuadrature {
    /// Offsets δ, Hz.
    pub offsets: Vec<f64>,
    /// Normalized weights.
    pub weights: Vec<f64>,
}

impl DiffusionQuadrature {
    pub fn single() -> Self {
        Self {
            offsets: vec![0.0],
            weights: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.offsets.iter().zip(&self.weights).map(|(d, w)| d * w).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.offsets.iter().zip(&self.weights).map(|(d, w)| w * (d - m).powi(2)).sum()
    }

    /// Weighted sum of per-node values, accumulated in node order.
    pub fn average(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).fold(0.0, |s, (v, w)| s + w * v)
    }
}

/// Standard deviation of a Gaussian with FWHM `2Γ_sd`.
pub fn diffusion_sigma(gamma_sd: f64) -> f64 {
    2.0 * gamma_sd / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}

/// Default grid half-span, in standard deviations.
pub const DEFAULT_SPAN_SIGMAS: f64 = 3.5;

/// Uniform grid over `±3.5σ` with Gaussian weights.
pub fn gaussian_quadrature_for_diffusion(gamma_sd: f64, n_points: usize) -> Result<DiffusionQuadrature> {
    gaussian_quadrature_with_span(gamma_sd, n_points, DEFAULT_SPAN_SIGMAS)
}

pub fn gaussian_quadrature_with_span(
    gamma_sd: f64,
    n_points: usize,
    span_sigmas: f64,
) -> Result<DiffusionQuadrature> {
    if !(gamma_sd >= 0.0 && gamma_sd.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gamma_sd must be finite and non-negative, got {gamma_sd}"
        )));
    }
    if gamma_sd == 0.0 || n_points == 1 {
        return Ok(DiffusionQuadrature::single());
    }
    if n_points < 3 || n_points % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "diffusion quadrature needs an odd number of points >= 3, got {n_points}"
        )));
    }
    if !(span_sigmas > 0.0) {
        return Err(Error::InvalidParameter("quadrature span must be positive".into()));
    }
    let sigma = diffusion_sigma(gamma_sd);
    let half = (n_points / 2) as i64;
    let step = span_sigmas / half as f64;
    let z: Vec<f64> = (-half..=half).map(|k| k as f64 * step).collect();
    let raw: Vec<f64> = z.iter().map(|z| (-0.5 * z * z).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(DiffusionQuadrature {
        offsets: z.iter().map(|z| z * sigma).collect(),
        weights: raw.iter().map(|w| w / total).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_diffusion_single_node() {
        let q = gaussian_quadrature_for_diffusion(0.0, 21).unwrap();
        assert_eq!(q, DiffusionQuadrature::single());
    }

    #[test]
    fn moments() {
        let sigma = diffusion_sigma(1.69e9);
        for n in [3, 5, 11, 21, 41] {
            let q = gaussian_quadrature_for_diffusion(1.69e9, n).unwrap();
            assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(q.mean().abs() < 1e-9 * sigma);
            for k in 0..n {
                assert_eq!(q.offsets[k], -q.offsets[n - 1 - k]);
            }
        }
        let q = gaussian_quadrature_for_diffusion(1.69e9, 21).unwrap();
        assert!((q.variance() / (sigma * sigma) - 1.0).abs() < 0.02, "{}", q.variance() / sigma / sigma);
    }

    #[test]
    fn narrow_span_truncates_variance() {
        let sigma = diffusion_sigma(1.69e9);
        let q = gaussian_quadrature_with_span(1.69e9, 21, 2.5).unwrap();
        let ratio = q.variance() / (sigma * sigma);
        assert!(ratio > 0.92 && ratio < 0.95, "{ratio}");
    }

    #[test]
    fn rejects_even() {
        assert!(gaussian_quadrature_for_diffusion(1e9, 4).is_err());
    }
}
