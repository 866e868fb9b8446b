//! Lindblad generators.
//!
//! Vectorization is column stacking throughout: matrix element `(i, j)` of an
//! operator `X` is entry `j * dim + i` of `vec(X)`, so that
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. With that convention
//!
//! ```text
//! 𝓛 = -i (1 ⊗ H - Hᵀ ⊗ 1) + Σᵢ [ C̄ᵢ ⊗ Cᵢ - ½ (1 ⊗ Cᵢ†Cᵢ + (Cᵢ†Cᵢ)ᵀ ⊗ 1) ].
//! ```
//!
//! Because 𝓛 maps Hermitian operators to Hermitian operators it is also
//! represented as a real matrix on the coordinates of an orthonormal basis of
//! Hermitian matrices ([`HermitianBasis`]). Time stepping uses that real form,
//! which keeps every propagated state exactly Hermitian and halves the work.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

use super::expm::{expm, integrated_action};
use super::operator::{DensityMatrix, QuantumOperator};

#[derive(Clone, Debug)]
pub struct Liouvillian<T: Real> {
    dim: usize,
    superop: DMatrix<Complex<T>>,
}

/// Builds the Lindblad superoperator for Hamiltonian `h` (angular units) and
/// collapse operators `jumps` (rates folded into the operators).
pub fn build_liouvillian<T: Real>(
    h: &QuantumOperator<T>,
    jumps: &[QuantumOperator<T>],
) -> Result<Liouvillian<T>> {
    let dim = h.dim();
    if !h.is_hermitian(lit(1e-12)) {
        return Err(Error::NotHermitian {
            deviation: to_f64(h.hermiticity_error()),
        });
    }
    for c in jumps {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            });
        }
    }
    let id = QuantumOperator::<T>::identity(dim);
    let minus_i = Complex::new(T::zero(), -T::one());
    let half = lit::<T>(0.5);

    let mut superop = (id.kron(h).into_matrix() - h.transpose().kron(&id).into_matrix()) * minus_i;
    for c in jumps {
        if c.is_zero() {
            continue;
        }
        let cdc = &c.dagger() * c;
        superop += c.conj().kron(c).into_matrix();
        superop -= (id.kron(&cdc).into_matrix() + cdc.transpose().kron(&id).into_matrix())
            .map(|z| z * half);
    }
    Ok(Liouvillian { dim, superop })
}

impl<T: Real> Liouvillian<T> {
    /// Hilbert-space dimension (the superoperator is `dim² × dim²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn superoperator(&self) -> &DMatrix<Complex<T>> {
        &self.superop
    }

    /// `𝓛ρ` as an operator.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DMatrix<Complex<T>>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let v = &self.superop * rho.to_vector();
        Ok(DMatrix::from_column_slice(self.dim, self.dim, v.as_slice()))
    }

    /// `exp(𝓛 t)` computed directly on the complex column-stacked form.
    pub fn exp_complex(&self, t: T) -> Result<DMatrix<Complex<T>>> {
        let tc = Complex::new(t, T::zero());
        expm(&self.superop.map(|z| z * tc))
    }

    /// Real form of the generator on all coordinates of the full Hermitian basis.
    pub fn real_generator(&self) -> RealGenerator<T> {
        let basis = HermitianBasis::full(self.dim);
        let matrix = self.restricted_matrix(&basis);
        RealGenerator { basis, matrix }
    }

    /// Real form restricted to an invariant sector.
    ///
    /// Fails if 𝓛 maps some sector element outside the sector, beyond a
    /// relative tolerance of 1e-12.
    pub fn sector_generator(&self, basis: HermitianBasis) -> Result<RealGenerator<T>> {
        if basis.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: basis.dim,
            });
        }
        let scale = self
            .superop
            .iter()
            .fold(T::zero(), |m, z| m.max(z.modulus()))
            .max(T::one());
        let tol = scale * lit::<T>(1e-12);
        let n = self.dim;
        let mut inside = vec![false; n * n];
        for e in &basis.elems {
            for (p, _) in e.support::<T>(n) {
                inside[p] = true;
            }
        }
        for e in &basis.elems {
            for p in (0..n * n).filter(|&p| !inside[p]) {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (q, u) in e.support(n) {
                    acc += self.superop[(p, q)] * u;
                }
                if acc.modulus() > tol {
                    return Err(Error::InvalidParameter(
                        "sector is not invariant under the Liouvillian".into(),
                    ));
                }
            }
        }
        let matrix = self.restricted_matrix(&basis);
        Ok(RealGenerator { basis, matrix })
    }

    fn restricted_matrix(&self, basis: &HermitianBasis) -> DMatrix<T> {
        let n = self.dim;
        let m = basis.len();
        let supports: Vec<_> = basis.elems.iter().map(|e| e.support::<T>(n)).collect();
        DMatrix::from_fn(m, m, |k, l| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &(p, u) in &supports[k] {
                for &(q, v) in &supports[l] {
                    acc += u.conj() * self.superop[(p, q)] * v;
                }
            }
            acc.re
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Element {
    /// `|i⟩⟨i|`
    Diag(usize),
    /// `(|i⟩⟨j| + |j⟩⟨i|)/√2`, `i < j`
    Sym(usize, usize),
    /// `i(|i⟩⟨j| - |j⟩⟨i|)/√2`, `i < j`
    Anti(usize, usize),
}

impl Element {
    /// Nonzero entries of `vec(B)`.
    fn support<T: Real>(&self, n: usize) -> Vec<(usize, Complex<T>)> {
        let r = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
        let o = T::zero();
        match *self {
            Element::Diag(i) => vec![(i * n + i, Complex::new(T::one(), o))],
            Element::Sym(i, j) => vec![
                (j * n + i, Complex::new(r, o)),
                (i * n + j, Complex::new(r, o)),
            ],
            Element::Anti(i, j) => vec![
                (j * n + i, Complex::new(o, r)),
                (i * n + j, Complex::new(o, -r)),
            ],
        }
    }
}

/// Orthonormal (Hilbert–Schmidt) basis of Hermitian matrices, or a subset of
/// one spanning an invariant sector.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianBasis {
    dim: usize,
    elems: Vec<Element>,
}

impl HermitianBasis {
    pub fn full(dim: usize) -> Self {
        Self::filtered(dim, |_, _| true)
    }

    /// Elements `|i⟩⟨j|`-type with `charge[i] == charge[j]`: the block-diagonal
    /// sector of a conserved quantity.
    pub fn block_diagonal(charge: &[usize]) -> Self {
        Self::filtered(charge.len(), |i, j| charge[i] == charge[j])
    }

    fn filtered(dim: usize, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut elems: Vec<Element> = (0..dim).map(Element::Diag).collect();
        for i in 0..dim {
            for j in i + 1..dim {
                if keep(i, j) {
                    elems.push(Element::Sym(i, j));
                    elems.push(Element::Anti(i, j));
                }
            }
        }
        Self { dim, elems }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of real coordinates.
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.elems.len() == self.dim * self.dim
    }

    /// Index of each element of `self` within `other`, if `self` is a subset.
    pub fn positions_in(&self, other: &HermitianBasis) -> Option<Vec<usize>> {
        if self.dim != other.dim {
            return None;
        }
        self.elems
            .iter()
            .map(|e| other.elems.iter().position(|o| o == e))
            .collect()
    }

    /// Coordinates `Tr(B_k X)` of a Hermitian operator given as a raw matrix.
    pub fn coords_of<T: Real>(&self, x: &DMatrix<Complex<T>>) -> DVector<T> {
        let s2 = lit::<T>(std::f64::consts::SQRT_2);
        DVector::from_iterator(
            self.elems.len(),
            self.elems.iter().map(|e| match *e {
                Element::Diag(i) => x[(i, i)].re,
                Element::Sym(i, j) => x[(i, j)].re * s2,
                Element::Anti(i, j) => x[(i, j)].im * s2,
            }),
        )
    }

    pub fn coords<T: Real>(&self, rho: &DensityMatrix<T>) -> DVector<T> {
        self.coords_of(rho.matrix())
    }

    /// Coordinates of an observable, so that `⟨O⟩ = o · c`.
    pub fn observable<T: Real>(&self, op: &QuantumOperator<T>) -> DVector<T> {
        // Tr(Oρ) = Σ_k c_k(O) c_k(ρ) for Hermitian O in an orthonormal real basis
        self.coords_of(op.matrix())
    }

    /// Rebuilds the operator from coordinates; elements outside the basis are zero.
    pub fn operator<T: Real>(&self, c: &DVector<T>) -> DMatrix<Complex<T>> {
        let n = self.dim;
        let r = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
        let mut m = DMatrix::<Complex<T>>::zeros(n, n);
        for (e, &v) in self.elems.iter().zip(c.iter()) {
            match *e {
                Element::Diag(i) => m[(i, i)].re += v,
                Element::Sym(i, j) => {
                    m[(i, j)].re += v * r;
                    m[(j, i)].re += v * r;
                }
                Element::Anti(i, j) => {
                    m[(i, j)].im += v * r;
                    m[(j, i)].im -= v * r;
                }
            }
        }
        m
    }

    pub fn density<T: Real>(&self, c: &DVector<T>) -> Result<DensityMatrix<T>> {
        DensityMatrix::new_unchecked(self.operator(c))
    }

    /// Trace of the operator with coordinates `c`.
    pub fn trace<T: Real>(&self, c: &DVector<T>) -> T {
        // diagonal elements come first
        c.iter().take(self.dim).fold(T::zero(), |s, &x| s + x)
    }

    /// Unitary mapping real coordinates to `vec(X)` (columns are `vec(B_k)`).
    pub fn to_vectorized<T: Real>(&self) -> DMatrix<Complex<T>> {
        let n = self.dim;
        let mut u = DMatrix::zeros(n * n, self.elems.len());
        for (k, e) in self.elems.iter().enumerate() {
            for (p, z) in e.support::<T>(n) {
                u[(p, k)] = z;
            }
        }
        u
    }
}

/// A Liouvillian as a real matrix acting on Hermitian-basis coordinates.
#[derive(Clone, Debug)]
pub struct RealGenerator<T: Real> {
    basis: HermitianBasis,
    matrix: DMatrix<T>,
}

impl<T: Real> RealGenerator<T> {
    pub fn basis(&self) -> &HermitianBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn propagator(&self, dt: T) -> Result<Propagator<T>> {
        if !(dt > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "propagation step must be positive, got {}",
                to_f64(dt)
            )));
        }
        let matrix = expm(&(&self.matrix * dt))?;
        Ok(Propagator {
            basis: self.basis.clone(),
            dt,
            matrix,
        })
    }

    /// `∫₀ᵗ exp(𝓛ᵀ s) o ds`: dotted with the coordinates of a state, gives the
    /// time integral of `⟨O⟩` over the following interval of length `t`.
    pub fn integrated_response(&self, obs: &DVector<T>, t: T) -> Result<DVector<T>> {
        if t == T::zero() {
            return Ok(DVector::zeros(obs.len()));
        }
        integrated_action(&self.matrix.transpose(), obs, to_f64(t))
    }
}

/// `exp(𝓛 dt)` in Hermitian-basis coordinates.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    basis: HermitianBasis,
    dt: T,
    matrix: DMatrix<T>,
}

/// `exp(𝓛 dt)` on the full Hermitian basis. Reusable for every step of length `dt`.
pub fn propagator<T: Real>(l: &Liouvillian<T>, dt: T) -> Result<Propagator<T>> {
    l.real_generator().propagator(dt)
}

impl<T: Real> Propagator<T> {
    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn basis(&self) -> &HermitianBasis {
        &self.basis
    }

    pub fn apply(&self, c: &DVector<T>) -> DVector<T> {
        &self.matrix * c
    }

    pub fn apply_density(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: rho.dim(),
            });
        }
        self.basis.density(&self.apply(&self.basis.coords(rho)))
    }

    /// Propagator for `2 dt`.
    pub fn squared(&self) -> Self {
        Self {
            basis: self.basis.clone(),
            dt: self.dt + self.dt,
            matrix: &self.matrix * &self.matrix,
        }
    }

    /// Complex column-stacked superoperator `U P U†` (full basis only).
    pub fn superoperator(&self) -> Result<DMatrix<Complex<T>>> {
        if !self.basis.is_full() {
            return Err(Error::InvalidParameter(
                "superoperator form needs the full basis".into(),
            ));
        }
        let u = self.basis.to_vectorized::<T>();
        let p = self.matrix.map(|x| Complex::new(x, T::zero()));
        Ok(&u * p * u.adjoint())
    }
}
