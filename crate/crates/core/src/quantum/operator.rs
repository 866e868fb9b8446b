//! Dense operators and density matrices on a finite Hilbert space.

use std::ops::{Add, Mul, Sub};

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// A square complex matrix acting on a finite Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOperator<T: Real> {
    mat: DMatrix<Complex<T>>,
}

impl<T: Real> QuantumOperator<T> {
    pub fn new(mat: DMatrix<Complex<T>>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(Self { mat })
    }

    /// Builds an operator from real entries given row by row.
    pub fn from_real_rows(dim: usize, rows: &[T]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: rows.len(),
            });
        }
        Ok(Self {
            mat: DMatrix::from_row_iterator(
                dim,
                dim,
                rows.iter().map(|&x| Complex::new(x, T::zero())),
            ),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    /// Elementwise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            mat: self.mat.map(|z| z.conj()),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            mat: self.mat.map(|z| z * s),
        }
    }

    /// `max |A - A^dagger|` over all entries.
    pub fn hermiticity_error(&self) -> T {
        max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    pub fn max_abs(&self) -> T {
        self.mat.iter().fold(T::zero(), |m, z| m.max(z.modulus()))
    }

    /// Hermitian to `tol` relative to the largest entry (absolute below unit scale).
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_error() <= tol * T::one().max(self.max_abs())
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn trace(&self) -> Complex<T> {
        self.mat.trace()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// `Tr(A ρ)`.
    pub fn expect(&self, rho: &DensityMatrix<T>) -> Complex<T> {
        // Tr(AB) = sum_ij A_ij B_ji
        let n = self.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for j in 0..n {
                acc += self.mat[(i, j)] * rho.mat[(j, i)];
            }
        }
        acc
    }

    /// Action on a state vector.
    pub fn apply(&self, ket: &DVector<Complex<T>>) -> Result<DVector<Complex<T>>> {
        if ket.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: ket.len(),
            });
        }
        Ok(&self.mat * ket)
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        let herm = (&self.mat + self.mat.adjoint()).map(|z| z * lit::<T>(0.5));
        let mut ev: Vec<T> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }
}

/// Kronecker product with the artifact-wide ordering `atom ⊗ field`.
pub fn tensor<T: Real>(a: &QuantumOperator<T>, b: &QuantumOperator<T>) -> QuantumOperator<T> {
    a.kron(b)
}

impl<'a, T: Real> Add<&'a QuantumOperator<T>> for &'a QuantumOperator<T> {
    type Output = QuantumOperator<T>;
    fn add(self, rhs: Self) -> QuantumOperator<T> {
        QuantumOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl<'a, T: Real> Sub<&'a QuantumOperator<T>> for &'a QuantumOperator<T> {
    type Output = QuantumOperator<T>;
    fn sub(self, rhs: Self) -> QuantumOperator<T> {
        QuantumOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl<'a, T: Real> Mul<&'a QuantumOperator<T>> for &'a QuantumOperator<T> {
    type Output = QuantumOperator<T>;
    fn mul(self, rhs: Self) -> QuantumOperator<T> {
        QuantumOperator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    mat: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    pub const HERMITICITY_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-8;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    /// Validates and wraps a matrix.
    pub fn new(mat: DMatrix<Complex<T>>) -> Result<Self> {
        let rho = Self::new_unchecked(mat)?;
        rho.check(T::zero())?;
        Ok(rho)
    }

    /// Wraps a square matrix without checking the physical invariants.
    pub fn new_unchecked(mat: DMatrix<Complex<T>>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(ket: &DVector<Complex<T>>) -> Result<Self> {
        let norm = ket.norm();
        if norm == T::zero() {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let k = ket.map(|z| z / norm);
        Self::new(&k * k.adjoint())
    }

    /// Pure basis state `|i⟩⟨i|`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut mat = DMatrix::zeros(dim, dim);
        mat[(i, i)] = Complex::new(T::one(), T::zero());
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.mat
    }

    pub fn trace(&self) -> T {
        self.mat.trace().re
    }

    pub fn purity(&self) -> T {
        // Tr(ρ²) = sum |ρ_ij|² for Hermitian ρ
        self.mat.iter().fold(T::zero(), |s, z| s + z.modulus_squared())
    }

    pub fn hermiticity_error(&self) -> T {
        max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    pub fn min_eigenvalue(&self) -> T {
        QuantumOperator {
            mat: self.mat.clone(),
        }
        .hermitian_eigenvalues()
        .first()
        .copied()
        .unwrap_or_else(T::zero)
    }

    pub fn population(&self, i: usize) -> T {
        self.mat[(i, i)].re
    }

    /// Real expectation value `Tr(O ρ)` of an observable.
    pub fn expect(&self, op: &QuantumOperator<T>) -> T {
        op.expect(self).re
    }

    /// Checks trace, Hermiticity and positivity; `time` is only used in the diagnostic.
    pub fn check(&self, time: T) -> Result<()> {
        let t = to_f64(time);
        let herm = to_f64(self.hermiticity_error());
        if !herm.is_finite() || herm > Self::HERMITICITY_TOL {
            return Err(Error::InvariantViolation {
                what: "Hermiticity",
                time: t,
                deviation: herm,
            });
        }
        let tr = (to_f64(self.trace()) - 1.0).abs();
        if !tr.is_finite() || tr > Self::TRACE_TOL {
            return Err(Error::InvariantViolation {
                what: "trace",
                time: t,
                deviation: tr,
            });
        }
        let min_ev = to_f64(self.min_eigenvalue());
        if min_ev < -Self::POSITIVITY_TOL {
            return Err(Error::InvariantViolation {
                what: "positivity",
                time: t,
                deviation: -min_ev,
            });
        }
        Ok(())
    }

    /// Column-stacked vectorization: element `(i, j)` lands at `j * dim + i`.
    pub fn to_vector(&self) -> DVector<Complex<T>> {
        DVector::from_column_slice(self.mat.as_slice())
    }

    /// Inverse of [`to_vector`](Self::to_vector). Invariants are not checked.
    pub fn from_vector(dim: usize, v: &DVector<Complex<T>>) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: v.len(),
            });
        }
        Ok(Self {
            mat: DMatrix::from_column_slice(dim, dim, v.as_slice()),
        })
    }
}

fn max_abs_diff<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |m, (x, y)| m.max((*x - *y).modulus()))
}

/// Two-level lowering operator `|g⟩⟨e|` with `|g⟩ = 0`, `|e⟩ = 1`.
pub fn sigma_minus<T: Real>() -> QuantumOperator<T> {
    let (o, l) = (T::zero(), T::one());
    QuantumOperator::from_real_rows(2, &[o, l, o, o]).expect("2x2")
}

pub fn sigma_plus<T: Real>() -> QuantumOperator<T> {
    sigma_minus::<T>().dagger()
}

/// `|e⟩⟨e| - |g⟩⟨g|`.
pub fn sigma_z<T: Real>() -> QuantumOperator<T> {
    let (o, l) = (T::zero(), T::one());
    QuantumOperator::from_real_rows(2, &[-l, o, o, l]).expect("2x2")
}

/// Truncated bosonic annihilation operator on `fock_dim` levels.
pub fn destroy<T: Real>(fock_dim: usize) -> QuantumOperator<T> {
    let mut mat = DMatrix::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        mat[(n - 1, n)] = Complex::new(lit::<T>(n as f64).sqrt(), T::zero());
    }
    QuantumOperator { mat }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(dim: usize, i: usize) -> DVector<Complex<f64>> {
        let mut v = DVector::zeros(dim);
        v[i] = Complex::new(1.0, 0.0);
        v
    }

    #[test]
    fn identity_tensor_identity() {
        let id = tensor(&QuantumOperator::<f64>::identity(2), &QuantumOperator::identity(3));
        assert_eq!(id, QuantumOperator::identity(6));
    }

    #[test]
    fn sigma_z_tensor_identity_spectrum() {
        let op = tensor(&sigma_z::<f64>(), &QuantumOperator::identity(2));
        let ev = op.hermitian_eigenvalues();
        let expected = [-1.0, -1.0, 1.0, 1.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn ladder_moves_excitation_into_field() {
        // |e,0⟩ has index 1*fock_dim + 0; |g,1⟩ has index 0*fock_dim + 1
        let fock = 3;
        let op = tensor(&sigma_minus::<f64>(), &destroy(fock).dagger());
        let out = op.apply(&ket(2 * fock, fock)).unwrap();
        let expected = ket(2 * fock, 1);
        assert!((out - expected).norm() < 1e-15);
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let mut m = DMatrix::<Complex<f64>>::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = Complex::new((10 * i + j) as f64, (i as f64) - (j as f64));
            }
        }
        let rho = DensityMatrix::new_unchecked(m.clone()).unwrap();
        let v = rho.to_vector();
        assert_eq!(v[2 * 3 + 1], m[(1, 2)]);
        let back = DensityMatrix::from_vector(3, &v).unwrap();
        assert_eq!(back.matrix(), &m);
    }

    #[test]
    fn density_checks_reject_bad_states() {
        let mut m = DMatrix::<Complex<f64>>::zeros(2, 2);
        m[(0, 0)] = Complex::new(0.7, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 1)] = Complex::new(0.3, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(0, 1)] = Complex::new(0.0, 0.1);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn destroy_number_operator() {
        let a = destroy::<f64>(4);
        let n = &a.dagger() * &a;
        for k in 0..4 {
            assert!((n.matrix()[(k, k)].re - k as f64).abs() < 1e-14);
        }
    }
}
