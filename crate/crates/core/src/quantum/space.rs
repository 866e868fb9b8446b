//! The composite emitter ⊗ cavity-mode Hilbert space.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::operator::{destroy, sigma_minus, sigma_z, tensor, DensityMatrix, QuantumOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomLevel {
    Ground = 0,
    Excited = 1,
}

/// Two-level emitter ⊗ Fock space truncated at `n_max` photons.
///
/// Basis index of `|atom, n⟩` is `atom * fock_dim + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    fock_dim: usize,
}

impl HilbertSpace {
    pub const ATOM_DIM: usize = 2;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter(
                "Fock truncation needs n_max >= 1".into(),
            ));
        }
        Ok(Self { fock_dim: n_max + 1 })
    }

    pub fn n_max(&self) -> usize {
        self.fock_dim - 1
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn total_dim(&self) -> usize {
        Self::ATOM_DIM * self.fock_dim
    }

    pub fn index(&self, atom: AtomLevel, n: usize) -> usize {
        debug_assert!(n < self.fock_dim);
        atom as usize * self.fock_dim + n
    }

    /// Photon number of basis state `i`.
    pub fn photons(&self, i: usize) -> usize {
        i % self.fock_dim
    }

    /// Total excitation number `σ₊σ₋ + a†a` of basis state `i`.
    pub fn excitations(&self, i: usize) -> usize {
        i / self.fock_dim + i % self.fock_dim
    }

    pub fn basis_state<T: Real>(&self, atom: AtomLevel, n: usize) -> DensityMatrix<T> {
        DensityMatrix::basis(self.total_dim(), self.index(atom, n))
    }

    pub fn ground_state<T: Real>(&self) -> DensityMatrix<T> {
        self.basis_state(AtomLevel::Ground, 0)
    }

    fn field_identity<T: Real>(&self) -> QuantumOperator<T> {
        QuantumOperator::identity(self.fock_dim)
    }

    /// `σ₋ ⊗ 1`.
    pub fn sigma_minus<T: Real>(&self) -> QuantumOperator<T> {
        tensor(&sigma_minus(), &self.field_identity())
    }

    pub fn sigma_plus<T: Real>(&self) -> QuantumOperator<T> {
        self.sigma_minus::<T>().dagger()
    }

    pub fn sigma_z<T: Real>(&self) -> QuantumOperator<T> {
        tensor(&sigma_z(), &self.field_identity())
    }

    /// `1 ⊗ a`.
    pub fn destroy<T: Real>(&self) -> QuantumOperator<T> {
        tensor(&QuantumOperator::identity(Self::ATOM_DIM), &destroy(self.fock_dim))
    }

    pub fn create<T: Real>(&self) -> QuantumOperator<T> {
        self.destroy::<T>().dagger()
    }

    /// `a†a`.
    pub fn photon_number<T: Real>(&self) -> QuantumOperator<T> {
        let a = self.destroy::<T>();
        &a.dagger() * &a
    }

    /// `σ₊σ₋`.
    pub fn excited_projector<T: Real>(&self) -> QuantumOperator<T> {
        let sm = self.sigma_minus::<T>();
        &sm.dagger() * &sm
    }

    /// Projector on the highest retained Fock level.
    pub fn top_fock_projector<T: Real>(&self) -> QuantumOperator<T> {
        let mut p = QuantumOperator::zeros(self.total_dim()).into_matrix();
        for atom in [AtomLevel::Ground, AtomLevel::Excited] {
            let i = self.index(atom, self.n_max());
            p[(i, i)] = num_complex::Complex::new(T::one(), T::zero());
        }
        QuantumOperator::new(p).expect("square")
    }

    /// Same space with the photon cutoff doubled.
    pub fn doubled(&self) -> Self {
        Self {
            fock_dim: 2 * self.n_max() + 1,
        }
    }
}

impl Default for HilbertSpace {
    fn default() -> Self {
        Self { fock_dim: 5 }
    }
}
