use super::{FitResult, Objective};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Nelder–Mead settings.
///
/// The simplex uses reflection 1, expansion 2, contraction 0.5 and shrink 0.5.
/// Convergence requires both the cost spread `max f - min f <= ftol` and the
/// vertex spread `max |x_i - x_best| <= xtol · max(1, |x_best|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadOptions<T> {
    pub ftol: T,
    pub xtol: T,
    pub max_eval: usize,
    /// Initial edge length per coordinate. Defaults to 5% of |x0| (or 2.5e-4
    /// for zero entries), or 10% of the bounded range when finite.
    pub initial_step: Option<Vec<T>>,
    /// Extra runs restarted from the optimum with a fresh simplex.
    pub restarts: usize,
}

impl<T: Real> NelderMeadOptions<T> {
    pub fn new(tol: T, max_eval: usize) -> Self {
        Self {
            ftol: tol,
            xtol: tol,
            max_eval,
            initial_step: None,
            restarts: 1,
        }
    }
}

/// Minimizes `obj` from `x0` with `ftol = xtol = tol`.
pub fn nelder_mead<T: Real>(
    obj: &mut Objective<'_, T>,
    x0: &[T],
    tol: T,
    max_eval: usize,
) -> Result<FitResult<T>> {
    nelder_mead_with(obj, x0, &NelderMeadOptions::new(tol, max_eval))
}

pub fn nelder_mead_with<T: Real>(
    obj: &mut Objective<'_, T>,
    x0: &[T],
    opts: &NelderMeadOptions<T>,
) -> Result<FitResult<T>> {
    let n = obj.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty parameter vector".into()));
    }
    if let Some((i, _)) = x0
        .iter()
        .zip(obj.bounds())
        .enumerate()
        .find(|(_, (&x, b))| !b.contains(x))
    {
        return Err(Error::InvalidParameter(format!(
            "initial point coordinate {i} lies outside its bounds"
        )));
    }
    let start = obj.n_eval();
    let budget_end = start + opts.max_eval;
    let mut x = x0.to_vec();
    let mut f = obj.eval(&x);
    let mut converged = false;
    for _ in 0..=opts.restarts {
        let (xn, fnew, ok) = run(obj, &x, opts, budget_end)?;
        let improved = f - fnew > opts.ftol;
        if fnew <= f {
            x = xn;
            f = fnew;
        }
        converged = ok;
        if !ok || !improved {
            break;
        }
    }
    Ok(FitResult::local(x, f, obj.n_eval() - start, converged))
}

fn initial_steps<T: Real>(obj: &Objective<'_, T>, x0: &[T], opts: &NelderMeadOptions<T>) -> Vec<T> {
    if let Some(s) = &opts.initial_step {
        return s.clone();
    }
    x0.iter()
        .zip(obj.bounds())
        .map(|(&x, b)| {
            if b.is_finite() {
                b.width() * lit(0.1)
            } else if x != T::zero() {
                x.abs() * lit(0.05)
            } else {
                lit(2.5e-4)
            }
        })
        .collect()
}

fn run<T: Real>(
    obj: &mut Objective<'_, T>,
    x0: &[T],
    opts: &NelderMeadOptions<T>,
    budget_end: usize,
) -> Result<(Vec<T>, T, bool)> {
    let n = x0.len();
    let steps = initial_steps(obj, x0, opts);
    if steps.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: steps.len(),
        });
    }
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);

    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        let b = obj.bounds()[i];
        v[i] = if b.contains(x0[i] + steps[i]) {
            x0[i] + steps[i]
        } else {
            b.clamp(x0[i] - steps[i])
        };
        simplex.push(v);
    }
    let mut fs: Vec<T> = simplex.iter().map(|v| obj.eval(v)).collect();

    let point = |obj: &Objective<'_, T>, c: &[T], d: &[T], t: T| -> Vec<T> {
        let mut p: Vec<T> = c.iter().zip(d).map(|(&ci, &di)| ci + t * (di - ci)).collect();
        obj.project(&mut p);
        p
    };

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fs[a].partial_cmp(&fs[b]).unwrap_or(std::cmp::Ordering::Equal));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        fs = order.iter().map(|&i| fs[i]).collect();

        let best = &simplex[0];
        let fspread = fs[n] - fs[0];
        let scale = best.iter().fold(T::one(), |m, v| m.max(v.abs()));
        let xspread = simplex[1..].iter().fold(T::zero(), |m, v| {
            v.iter().zip(best).fold(m, |m, (&a, &b)| m.max((a - b).abs()))
        });
        if fspread <= opts.ftol && xspread <= opts.xtol * scale {
            return Ok((simplex[0].clone(), fs[0], true));
        }
        if obj.n_eval() >= budget_end {
            return Ok((simplex[0].clone(), fs[0], false));
        }

        let mut centroid = vec![T::zero(); n];
        for v in &simplex[..n] {
            for (c, &vi) in centroid.iter_mut().zip(v) {
                *c += vi;
            }
        }
        let inv = T::one() / lit::<T>(n as f64);
        centroid.iter_mut().for_each(|c| *c *= inv);

        let worst = simplex[n].clone();
        let xr = point(obj, &centroid, &worst, -T::one());
        let fr = obj.eval(&xr);

        if fr < fs[0] {
            let xe = point(obj, &centroid, &worst, -two);
            let fe = obj.eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                fs[n] = fe;
            } else {
                simplex[n] = xr;
                fs[n] = fr;
            }
            continue;
        }
        if fr < fs[n - 1] {
            simplex[n] = xr;
            fs[n] = fr;
            continue;
        }
        let (xc, fc, accept) = if fr < fs[n] {
            let xc = point(obj, &centroid, &xr, half);
            let fc = obj.eval(&xc);
            let ok = fc <= fr;
            (xc, fc, ok)
        } else {
            let xc = point(obj, &centroid, &worst, half);
            let fc = obj.eval(&xc);
            let ok = fc < fs[n];
            (xc, fc, ok)
        };
        if accept {
            simplex[n] = xc;
            fs[n] = fc;
            continue;
        }
        let x_best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = point(obj, &x_best, &simplex[i], half);
            fs[i] = obj.eval(&simplex[i]);
        }
    }
}
