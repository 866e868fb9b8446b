//! Peak, exponential and Purcell-Lorentzian models.
//!
//! Every model is linear in its amplitudes and offset, so only the shape
//! parameters (center, width, rates) are searched by the simplex; the linear
//! coefficients are solved exactly at each trial shape. Abscissa and ordinate
//! are normalized internally so that tolerances are scale free.
//! Uncertainties are `s² (JᵀJ)⁻¹` from a central-difference Jacobian at the
//! optimum and should be read as approximate.

use nalgebra::{DMatrix, DVector};

use super::{nelder_mead_with, Bounds, NelderMeadOptions, Objective};
use crate::analytics::PurcellFit;
use crate::error::{Error, Result};
use crate::SimCurve;

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3; // 2√(2 ln 2)

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Significance {
    Significant,
    /// Fitted amplitude within three standard errors of zero, below four times
    /// the residual RMS, or flat data.
    Low,
}

/// `amplitude · shape((x - center)/fwhm) + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeakFit {
    pub amplitude: f64,
    pub center: f64,
    pub fwhm: f64,
    pub offset: f64,
    /// Standard errors of (amplitude, center, fwhm, offset).
    pub uncertainties: [f64; 4],
    pub rss: f64,
    pub significance: Significance,
}

/// `amplitude · e^{-rate·x} + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpFit {
    pub amplitude: f64,
    pub rate: f64,
    pub offset: f64,
    /// Standard errors of (amplitude, rate, offset).
    pub uncertainties: [f64; 3],
    pub rss: f64,
}

impl ExpFit {
    pub fn lifetime(&self) -> f64 {
        1.0 / self.rate
    }
}

/// `amp1 e^{-rate1 x} + amp2 e^{-rate2 x} + offset`, component 1 being the
/// one with the larger amplitude.
#[derive(Clone, Debug, PartialEq)]
pub struct BiexpFit {
    pub amp1: f64,
    pub rate1: f64,
    pub amp2: f64,
    pub rate2: f64,
    pub offset: f64,
    pub rss: f64,
    /// `amp1 / (amp1 + amp2)`.
    pub dominant_weight: f64,
    /// Rates within 5% of each other: the split is ill-conditioned.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurcellLorentzianFit {
    pub fit: PurcellFit<f64>,
    /// Standard errors of (P_t, κ̃, Γ∞/Γ₀).
    pub uncertainties: [f64; 3],
    pub r_squared: f64,
}

/// Normalized copy of a curve: `u = (x - x_ref)/x_scale`, `v = y/y_scale`.
struct Scaled {
    u: Vec<f64>,
    v: Vec<f64>,
    w: Option<Vec<f64>>,
    x_ref: f64,
    x_scale: f64,
    y_scale: f64,
}

impl Scaled {
    fn new(c: &SimCurve, x_ref: f64, min_points: usize) -> Result<Self> {
        if c.len() < min_points {
            return Err(Error::Fit(format!(
                "need at least {min_points} points, got {}",
                c.len()
            )));
        }
        if let Some(i) = c.x().iter().chain(c.y()).position(|v| !v.is_finite()) {
            return Err(Error::Fit(format!("non-finite sample at index {}", i % c.len())));
        }
        let (x0, x1) = (c.x()[0], c.x()[c.len() - 1]);
        let x_scale = (x1 - x0).abs();
        let y_scale = c.y().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let w = match c.sigma() {
            Some(s) => {
                if s.iter().any(|&v| !(v > 0.0)) {
                    return Err(Error::Fit("uncertainties must be positive".into()));
                }
                Some(s.iter().map(|v| y_scale.max(f64::MIN_POSITIVE) / v).collect())
            }
            None => None,
        };
        let y_scale = if y_scale > 0.0 { y_scale } else { 1.0 };
        Ok(Self {
            u: c.x().iter().map(|x| (x - x_ref) / x_scale).collect(),
            v: c.y().iter().map(|y| y / y_scale).collect(),
            w,
            x_ref,
            x_scale,
            y_scale,
        })
    }

    fn weight(&self, i: usize) -> f64 {
        self.w.as_ref().map_or(1.0, |w| w[i])
    }

    /// Linear least squares of `v` on the columns produced by `basis`
    /// (at most four), via column-equilibrated normal equations.
    fn project(&self, m: usize, basis: &dyn Fn(f64, &mut [f64])) -> (DVector<f64>, f64) {
        debug_assert!(m <= 4);
        let mut row = [0.0; 4];
        let mut ata = DMatrix::<f64>::zeros(m, m);
        let mut atb = DVector::<f64>::zeros(m);
        for i in 0..self.u.len() {
            basis(self.u[i], &mut row[..m]);
            let w2 = self.weight(i).powi(2);
            for j in 0..m {
                atb[j] += w2 * row[j] * self.v[i];
                for k in 0..=j {
                    ata[(j, k)] += w2 * row[j] * row[k];
                }
            }
        }
        for j in 0..m {
            for k in 0..j {
                ata[(k, j)] = ata[(j, k)];
            }
        }
        let scale: Vec<f64> = (0..m)
            .map(|j| if ata[(j, j)] > 0.0 { ata[(j, j)].sqrt().recip() } else { 1.0 })
            .collect();
        let scaled = DMatrix::from_fn(m, m, |j, k| ata[(j, k)] * scale[j] * scale[k]);
        let rhs = DVector::from_fn(m, |j, _| atb[j] * scale[j]);
        let coef = match scaled.lu().solve(&rhs) {
            Some(c) if c.iter().all(|v| v.is_finite()) => DVector::from_fn(m, |j, _| c[j] * scale[j]),
            _ => return (DVector::zeros(m), f64::INFINITY),
        };
        let mut rss = 0.0;
        for i in 0..self.u.len() {
            basis(self.u[i], &mut row[..m]);
            let fit: f64 = (0..m).map(|j| row[j] * coef[j]).sum();
            rss += (self.weight(i) * (self.v[i] - fit)).powi(2);
        }
        (coef, rss)
    }

    fn rss_of(&self, model: &dyn Fn(f64) -> f64) -> f64 {
        (0..self.u.len())
            .map(|i| (self.weight(i) * (self.v[i] - model(self.u[i]))).powi(2))
            .sum()
    }
}

fn local_opts(max_eval: usize) -> NelderMeadOptions<f64> {
    let mut o = NelderMeadOptions::new(1e-20, max_eval);
    o.xtol = 1e-11;
    o.restarts = 2;
    o
}

/// Standard errors from `s² (JᵀJ)⁻¹` for a model in the normalized frame.
///
/// `theta` are the normalized parameters, `scales` their characteristic sizes.
fn standard_errors(
    s: &Scaled,
    theta: &[f64],
    scales: &[f64],
    model: &dyn Fn(&[f64], f64) -> f64,
) -> Vec<f64> {
    let n = s.u.len();
    let p = theta.len();
    if n <= p {
        return vec![f64::NAN; p];
    }
    let resid = s.rss_of(&|u| model(theta, u));
    let s2 = resid / (n - p) as f64;
    let mut jac = DMatrix::<f64>::zeros(n, p);
    for k in 0..p {
        let h = 1e-6 * scales[k];
        let mut tp = theta.to_vec();
        let mut tm = theta.to_vec();
        tp[k] += h;
        tm[k] -= h;
        for i in 0..n {
            let d = (model(&tp, s.u[i]) - model(&tm, s.u[i])) / (2.0 * h);
            jac[(i, k)] = s.weight(i) * d * scales[k];
        }
    }
    let jtj = jac.transpose() * &jac;
    let eps = 1e-14 * jtj.amax().max(f64::MIN_POSITIVE);
    match jtj.pseudo_inverse(eps) {
        Ok(inv) => (0..p)
            .map(|k| (s2 * inv[(k, k)]).max(0.0).sqrt() * scales[k])
            .collect(),
        Err(_) => vec![f64::NAN; p],
    }
}

#[derive(Clone, Copy)]
enum PeakShape {
    Gaussian,
    Lorentzian,
}

impl PeakShape {
    fn eval(self, du: f64, fwhm: f64) -> f64 {
        let r = du / fwhm;
        match self {
            Self::Gaussian => (-4.0 * std::f64::consts::LN_2 * r * r).exp(),
            Self::Lorentzian => 1.0 / (1.0 + 4.0 * r * r),
        }
    }
}

fn fit_peak(curve: &SimCurve, shape: PeakShape) -> Result<PeakFit> {
    let x = curve.x();
    let mid = 0.5 * (x[0] + x[x.len().max(1) - 1]);
    let s = Scaled::new(curve, mid, 5)?;
    let (lo, hi) = s.v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let x_range = s.x_scale;
    let mean = s.v.iter().sum::<f64>() / s.v.len() as f64;
    if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
        return Ok(PeakFit {
            amplitude: 0.0,
            center: mid,
            fwhm: x_range,
            offset: mean * s.y_scale,
            uncertainties: [f64::NAN; 4],
            rss: 0.0,
            significance: Significance::Low,
        });
    }

    // u spans [-0.5, 0.5]
    let min_du = s.u.windows(2).map(|w| (w[1] - w[0]).abs()).fold(f64::INFINITY, f64::min);
    let mut sorted = s.v.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let median = sorted[sorted.len() / 2];
    let i_peak = (0..s.v.len())
        .max_by(|&a, &b| (s.v[a] - median).abs().total_cmp(&(s.v[b] - median).abs()))
        .unwrap_or(0);
    let height = s.v[i_peak] - median;
    let above = s.v.iter().filter(|&&v| (v - median) / height > 0.5).count();
    let w_guess = (above as f64 * 1.0 / (s.u.len() - 1) as f64).max(2.0 * min_du);

    let bounds = vec![
        Bounds::new(-1.0, 1.0),
        Bounds::new(min_du.ln(), (20.0f64).ln()),
    ];
    let basis = |p: &[f64]| {
        let (c, w) = (p[0], p[1].exp());
        move |u: f64, row: &mut [f64]| {
            row[0] = shape.eval(u - c, w);
            row[1] = 1.0;
        }
    };
    let mut obj = Objective::bounded(bounds.clone(), |p: &[f64]| s.project(2, &basis(p)).1);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for factor in [1.0, 0.4, 2.5] {
        let start = [
            bounds[0].clamp(s.u[i_peak]),
            bounds[1].clamp((w_guess * factor).ln()),
        ];
        let r = nelder_mead_with(&mut obj, &start, &local_opts(4000))?;
        if best.as_ref().map_or(true, |b| r.cost < b.1) {
            best = Some((r.params, r.cost));
        }
    }
    let (p, _) = best.expect("at least one start");
    let (coef, rss) = s.project(2, &basis(&p));
    let (amp, off) = (coef[0], coef[1]);
    let (c, w) = (p[0], p[1].exp());

    let theta = [amp, c, w, off];
    let scales = [amp.abs().max(1e-12), w, w, off.abs().max(amp.abs()).max(1e-12)];
    let model = |t: &[f64], u: f64| t[0] * shape.eval(u - t[1], t[2]) + t[3];
    let se = standard_errors(&s, &theta, &scales, &model);

    let rms = (rss / (s.u.len() - 4) as f64).sqrt();
    let significance = if amp.abs() > 3.0 * se[0] && amp.abs() > 4.0 * rms && amp.abs() > 1e-9 {
        Significance::Significant
    } else {
        Significance::Low
    };
    Ok(PeakFit {
        amplitude: amp * s.y_scale,
        center: s.x_ref + c * s.x_scale,
        fwhm: w * s.x_scale,
        offset: off * s.y_scale,
        uncertainties: [
            se[0] * s.y_scale,
            se[1] * s.x_scale,
            se[2] * s.x_scale,
            se[3] * s.y_scale,
        ],
        rss: rss * s.y_scale * s.y_scale,
        significance,
    })
}

/// Gaussian peak with constant offset; `fwhm = 2√(2 ln 2) σ`.
pub fn fit_gaussian(curve: &SimCurve) -> Result<PeakFit> {
    fit_peak(curve, PeakShape::Gaussian)
}

/// Lorentzian peak (or dip) with constant offset.
pub fn fit_lorentzian(curve: &SimCurve) -> Result<PeakFit> {
    fit_peak(curve, PeakShape::Lorentzian)
}

impl PeakFit {
    pub fn sigma(&self) -> f64 {
        self.fwhm / FWHM_PER_SIGMA
    }
}

/// Best log-rate on a coarse grid, as a starting point for the simplex.
fn grid_start(cost: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .map(|l| (l, cost(l)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(l, _)| l)
        .unwrap_or(0.0)
}

const LOG_RATE_RANGE: (f64, f64) = (-6.0, 9.0); // rate · window from e⁻⁶ to e⁹

fn fit_exp_impl(curve: &SimCurve, with_offset: bool) -> Result<ExpFit> {
    let x0 = curve.x().first().copied().unwrap_or(0.0);
    let s = Scaled::new(curve, x0, if with_offset { 4 } else { 3 })?;
    let m = if with_offset { 2 } else { 1 };
    let basis = |l: f64| {
        let k = l.exp();
        move |u: f64, row: &mut [f64]| {
            row[0] = (-k * u).exp();
            if with_offset {
                row[1] = 1.0;
            }
        }
    };
    let (lo, hi) = LOG_RATE_RANGE;
    let start = grid_start(&mut |l| s.project(m, &basis(l)).1, lo, hi, 61);
    let mut obj = Objective::bounded(vec![Bounds::new(lo, hi)], |p: &[f64]| s.project(m, &basis(p[0])).1);
    let mut opts = local_opts(2000);
    opts.initial_step = Some(vec![0.1]);
    let r = nelder_mead_with(&mut obj, &[start], &opts)?;
    let l = r.params[0];
    let (coef, rss) = s.project(m, &basis(l));
    let k = l.exp();
    let amp = coef[0];
    let off = if with_offset { coef[1] } else { 0.0 };
    if !(amp.abs() > 0.0) {
        return Err(Error::Fit("exponential amplitude vanished".into()));
    }

    let se = if with_offset {
        let model = |t: &[f64], u: f64| t[0] * (-t[1] * u).exp() + t[2];
        standard_errors(&s, &[amp, k, off], &[amp.abs(), k, amp.abs()], &model)
    } else {
        let model = |t: &[f64], u: f64| t[0] * (-t[1] * u).exp();
        let mut v = standard_errors(&s, &[amp, k], &[amp.abs(), k], &model);
        v.push(0.0);
        v
    };
    let rate = k / s.x_scale;
    // amplitude referred back to x = 0
    let amp_scale = s.y_scale * (rate * s.x_ref).exp();
    Ok(ExpFit {
        amplitude: amp * amp_scale,
        rate,
        offset: off * s.y_scale,
        uncertainties: [se[0] * amp_scale, se[1] / s.x_scale, se[2] * s.y_scale],
        rss: rss * s.y_scale * s.y_scale,
    })
}

/// Single exponential with constant offset.
pub fn fit_exponential(curve: &SimCurve) -> Result<ExpFit> {
    fit_exp_impl(curve, true)
}

/// Single exponential without offset.
pub fn fit_exponential_pure(curve: &SimCurve) -> Result<ExpFit> {
    fit_exp_impl(curve, false)
}

/// Two exponentials with constant offset.
pub fn fit_biexponential(curve: &SimCurve) -> Result<BiexpFit> {
    let single = fit_exponential(curve)?;
    let x0 = curve.x()[0];
    let s = Scaled::new(curve, x0, 6)?;
    let basis = |p: &[f64]| {
        let (k1, k2) = (p[0].exp(), p[1].exp());
        move |u: f64, row: &mut [f64]| {
            row[0] = (-k1 * u).exp();
            row[1] = (-k2 * u).exp();
            row[2] = 1.0;
        }
    };
    let (lo, hi) = LOG_RATE_RANGE;
    let ls = (single.rate * s.x_scale).ln();
    let bounds = vec![Bounds::new(lo, hi); 2];
    let mut obj = Objective::bounded(bounds.clone(), |p: &[f64]| s.project(3, &basis(p)).1);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (a, b) in [(0.3, -0.6), (0.7, -1.2), (0.1, -0.3), (1.5, -0.2)] {
        let start = [bounds[0].clamp(ls + a), bounds[1].clamp(ls + b)];
        let r = nelder_mead_with(&mut obj, &start, &local_opts(6000))?;
        if best.as_ref().map_or(true, |bst| r.cost < bst.1) {
            best = Some((r.params, r.cost));
        }
    }
    let (p, _) = best.expect("at least one start");
    let (coef, rss) = s.project(3, &basis(&p));
    let shift = |k: f64| s.y_scale * (k / s.x_scale * s.x_ref).exp();
    let (k1, k2) = (p[0].exp(), p[1].exp());
    let mut comps = [(coef[0] * shift(k1), k1 / s.x_scale), (coef[1] * shift(k2), k2 / s.x_scale)];
    if comps[1].0.abs() > comps[0].0.abs() {
        comps.swap(0, 1);
    }
    let [(amp1, rate1), (amp2, rate2)] = comps;
    let degenerate = (rate1 - rate2).abs() <= 0.05 * rate1.max(rate2);
    Ok(BiexpFit {
        amp1,
        rate1,
        amp2,
        rate2,
        offset: coef[2] * s.y_scale,
        rss: rss * s.y_scale * s.y_scale,
        dominant_weight: amp1 / (amp1 + amp2),
        degenerate,
    })
}

/// Fits `Γ_cav/Γ₀ = P_t/[1 + (2Δ/κ̃)²] + Γ∞/Γ₀` to a detuning sweep (x in Hz).
pub fn fit_purcell_lorentzian(curve: &SimCurve) -> Result<PurcellLorentzianFit> {
    let x_max = curve.x().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(x_max > 0.0) {
        return Err(Error::Fit("detuning sweep must include non-zero detunings".into()));
    }
    let mut s = Scaled::new(curve, 0.0, 4)?;
    // center fixed at zero detuning: rescale by the largest |Δ| instead of the span
    s.u = curve.x().iter().map(|x| x / x_max).collect();
    s.x_scale = x_max;
    let basis = |l: f64| {
        let kt = l.exp();
        move |u: f64, row: &mut [f64]| {
            row[0] = 1.0 / (1.0 + (2.0 * u / kt).powi(2));
            row[1] = 1.0;
        }
    };
    let (lo, hi) = (-8.0, 5.0);
    let start = grid_start(&mut |l| s.project(2, &basis(l)).1, lo, hi, 53);
    let mut obj = Objective::bounded(vec![Bounds::new(lo, hi)], |p: &[f64]| s.project(2, &basis(p[0])).1);
    let mut opts = local_opts(2000);
    opts.initial_step = Some(vec![0.1]);
    let r = nelder_mead_with(&mut obj, &[start], &opts)?;
    let (coef, rss) = s.project(2, &basis(r.params[0]));
    let kt = r.params[0].exp();
    let model = |t: &[f64], u: f64| t[0] / (1.0 + (2.0 * u / t[1]).powi(2)) + t[2];
    let se = standard_errors(
        &s,
        &[coef[0], kt, coef[1]],
        &[coef[0].abs().max(1e-12), kt, coef[1].abs().max(1e-12)],
        &model,
    );
    let mean = s.v.iter().sum::<f64>() / s.v.len() as f64;
    let tss: f64 = (0..s.v.len()).map(|i| (s.weight(i) * (s.v[i] - mean)).powi(2)).sum();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    let fit = PurcellFit::new(coef[0] * s.y_scale, kt * x_max, coef[1] * s.y_scale)?;
    Ok(PurcellLorentzianFit {
        fit,
        uncertainties: [se[0] * s.y_scale, se[1] * x_max, se[2] * s.y_scale],
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::purcell_lorentzian;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn gaussian(x: f64, amp: f64, c: f64, fwhm: f64, off: f64) -> f64 {
        let s = fwhm / FWHM_PER_SIGMA;
        amp * (-(x - c).powi(2) / (2.0 * s * s)).exp() + off
    }

    #[test]
    fn gaussian_round_trip() {
        let x = grid(-10.0, 10.0, 81);
        let y = x.iter().map(|&v| gaussian(v, 1.0, 0.0, 3.81, 0.1)).collect();
        let f = fit_gaussian(&SimCurve::new(x, y).unwrap()).unwrap();
        assert!((f.amplitude - 1.0).abs() < 1e-6, "{f:?}");
        assert!(f.center.abs() < 1e-6);
        assert!((f.fwhm - 3.81).abs() < 1e-6);
        assert!((f.offset - 0.1).abs() < 1e-6);
        assert_eq!(f.significance, Significance::Significant);
    }

    #[test]
    fn gaussian_round_trip_ghz_scale() {
        let x = grid(-12e9, 12e9, 81);
        let y = x.iter().map(|&v| gaussian(v, 3e-3, 0.4e9, 3.81e9, 2e-4)).collect();
        let f = fit_gaussian(&SimCurve::new(x, y).unwrap()).unwrap();
        assert!((f.fwhm / 3.81e9 - 1.0).abs() < 1e-6, "{f:?}");
        assert!((f.center / 0.4e9 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn flat_data_low_significance() {
        let x = grid(0.0, 1.0, 20);
        let f = fit_gaussian(&SimCurve::new(x, vec![0.3; 20]).unwrap()).unwrap();
        assert_eq!(f.significance, Significance::Low);
        assert!(f.amplitude.abs() < 1e-12);
        assert!((f.offset - 0.3).abs() < 1e-12);
    }

    #[test]
    fn noisy_offset_low_significance() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let noise = Normal::new(0.0, 1e-3).unwrap();
        for seed in 0..10 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = grid(0.0, 1.0, 60);
            let y = (0..60).map(|_| 1.0 + noise.sample(&mut rng)).collect();
            let f = fit_gaussian(&SimCurve::new(x, y).unwrap()).unwrap();
            assert_eq!(f.significance, Significance::Low, "seed {seed}: {f:?}");
        }
    }

    #[test]
    fn too_few_points() {
        let c = SimCurve::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!(fit_gaussian(&c).is_err());
    }

    #[test]
    fn lorentzian_dip() {
        let x = grid(-20e9, 20e9, 161);
        let y = x
            .iter()
            .map(|&v| 1.0 - 0.9 / (1.0 + (2.0 * (v - 1e8) / 5.22e9).powi(2)))
            .collect();
        let f = fit_lorentzian(&SimCurve::new(x, y).unwrap()).unwrap();
        assert!((f.fwhm / 5.22e9 - 1.0).abs() < 1e-6, "{f:?}");
        assert!((f.amplitude + 0.9).abs() < 1e-6);
        assert!(f.fwhm > 0.0);
    }

    #[test]
    fn exponential_fits() {
        let t = grid(0.0, 4e-6, 401);
        let y: Vec<f64> = t.iter().map(|&v| (-v / 940e-9).exp()).collect();
        let c = SimCurve::new(t, y).unwrap();
        let a = fit_exponential(&c).unwrap();
        let b = fit_exponential_pure(&c).unwrap();
        let bi = fit_biexponential(&c).unwrap();
        assert!((a.lifetime() / 940e-9 - 1.0).abs() < 1e-6, "{a:?}");
        assert!((b.lifetime() / 940e-9 - 1.0).abs() < 1e-6);
        assert!((a.rate / b.rate - 1.0).abs() < 5e-3);
        assert!((1.0 / bi.rate1 / 940e-9 - 1.0).abs() < 5e-3 || bi.degenerate);
    }

    #[test]
    fn exponential_with_late_window() {
        let t = grid(1.07e-6, 8e-6, 500);
        let y: Vec<f64> = t.iter().map(|&v| 0.02 * (-v / 136e-9).exp()).collect();
        let f = fit_exponential_pure(&SimCurve::new(t, y).unwrap()).unwrap();
        assert!((f.lifetime() / 136e-9 - 1.0).abs() < 1e-8);
        assert!((f.amplitude / 0.02 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn biexponential_recovery() {
        let t = grid(0.0, 2e-6, 2001);
        let y: Vec<f64> = t
            .iter()
            .map(|&v| 0.97 * (-v / 136.4e-9).exp() + 0.03 * (-v / 298.1e-9).exp())
            .collect();
        let c = SimCurve::new(t, y).unwrap();
        let bi = fit_biexponential(&c).unwrap();
        assert!((1.0 / bi.rate1 / 136.4e-9 - 1.0).abs() < 0.02, "{bi:?}");
        assert!((bi.dominant_weight - 0.97).abs() < 0.01);
        assert!((1.0 / bi.rate2 / 298.1e-9 - 1.0).abs() < 0.10);
        assert!(!bi.degenerate);
        let single = fit_exponential(&c).unwrap();
        assert!(single.lifetime() > 1.0 / bi.rate1);
    }

    #[test]
    fn purcell_round_trip() {
        let truth = PurcellFit::new(5.88, 7.11e9, 1.03).unwrap();
        let x = grid(-25e9, 25e9, 21);
        let y = x.iter().map(|&d| purcell_lorentzian(d, &truth)).collect();
        let f = fit_purcell_lorentzian(&SimCurve::new(x, y).unwrap()).unwrap();
        assert!((f.fit.p_t / 5.88 - 1.0).abs() < 1e-6, "{f:?}");
        assert!((f.fit.kappa_tilde / 7.11e9 - 1.0).abs() < 1e-6);
        assert!((f.fit.gamma_inf_ratio - 1.03).abs() < 1e-6);
        assert!(f.r_squared > 0.999_999);
    }
}
