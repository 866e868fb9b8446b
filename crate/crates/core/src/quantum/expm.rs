//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (Higham 2005 degree selection). Works for real and complex fields.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
    (13, 5.371920351148152),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn modulus<N: ComplexField>(x: &N) -> f64
where
    N::RealField: ToPrimitive,
{
    x.clone().abs().to_f64().unwrap_or(f64::NAN)
}

fn norm1<N: ComplexField>(a: &DMatrix<N>) -> f64
where
    N::RealField: ToPrimitive,
{
    a.column_iter()
        .map(|c| {
            c.iter()
                .map(|x| modulus(x))
                .sum::<f64>()
        })
        .fold(0.0, |m: f64, c| if c.is_nan() || c > m { c } else { m })
}

fn scaled<N: ComplexField + Copy>(a: &DMatrix<N>, s: f64) -> DMatrix<N> {
    let s = N::from_real(nalgebra::convert(s));
    a.map(|x| x * s)
}

fn add_identity<N: ComplexField + Copy>(m: &mut DMatrix<N>, s: f64) {
    let s = N::from_real(nalgebra::convert(s));
    for i in 0..m.nrows() {
        m[(i, i)] += s;
    }
}

/// Computes `exp(A)`.
pub fn expm<N: ComplexField + Copy>(a: &DMatrix<N>) -> Result<DMatrix<N>>
where
    N::RealField: ToPrimitive,
{
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    let norm = norm1(a);
    if !norm.is_finite() {
        return Err(Error::NonFinite("matrix exponential input"));
    }
    if n == 0 {
        return Ok(a.clone());
    }

    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            return pade_low(a, m);
        }
    }

    let s = if norm > THETA[4].1 {
        (norm / THETA[4].1).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a = scaled(a, 0.5f64.powi(s as i32));
    let mut r = pade13(&a)?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|x| !modulus(x).is_finite()) {
        return Err(Error::NonFinite("matrix exponential result"));
    }
    Ok(r)
}

fn coeffs(m: usize) -> &'static [f64] {
    match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    }
}

fn pade_low<N: ComplexField + Copy>(a: &DMatrix<N>, m: usize) -> Result<DMatrix<N>>
where
    N::RealField: ToPrimitive,
{
    let b = coeffs(m);
    let n = a.nrows();
    let a2 = a * a;
    // powers A^0, A^2, A^4, ...
    let mut even = vec![DMatrix::<N>::identity(n, n), a2.clone()];
    while even.len() < (m + 1) / 2 {
        let next = even.last().unwrap() * &a2;
        even.push(next);
    }
    let mut u = DMatrix::<N>::zeros(n, n);
    let mut v = DMatrix::<N>::zeros(n, n);
    for (k, p) in even.iter().enumerate() {
        u += scaled(p, b[2 * k + 1]);
        v += scaled(p, b[2 * k]);
    }
    let u = a * u;
    solve_pade(u, v)
}

fn pade13<N: ComplexField + Copy>(a: &DMatrix<N>) -> Result<DMatrix<N>> {
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut inner = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let mut u = &a6 * &inner;
    u += scaled(&a6, b[7]) + scaled(&a4, b[5]) + scaled(&a2, b[3]);
    add_identity(&mut u, b[1]);
    let u = a * u;

    inner = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let mut v = &a6 * &inner;
    v += scaled(&a6, b[6]) + scaled(&a4, b[4]) + scaled(&a2, b[2]);
    add_identity(&mut v, b[0]);

    solve_pade(u, v)
}

fn solve_pade<N: ComplexField + Copy>(u: DMatrix<N>, v: DMatrix<N>) -> Result<DMatrix<N>> {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .ok_or(Error::NonFinite("singular Padé denominator"))
}

/// `∫₀ᵗ exp(A s) b ds` via the exponential of the augmented matrix `[[A, b], [0, 0]]`.
pub fn integrated_action<N: ComplexField + Copy>(
    a: &DMatrix<N>,
    b: &DVector<N>,
    t: f64,
) -> Result<DVector<N>>
where
    N::RealField: ToPrimitive,
{
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut aug = DMatrix::<N>::zeros(n + 1, n + 1);
    aug.view_mut((0, 0), (n, n)).copy_from(&scaled(a, t));
    let tb = N::from_real(nalgebra::convert(t));
    for i in 0..n {
        aug[(i, n)] = b[i] * tb;
    }
    let e = expm(&aug)?;
    Ok(e.view((0, n), (n, 1)).column(0).into_owned())
}
