// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::format;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, HermitianEigen};

pub const NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState(DVector<C64>);

impl PureState {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::InvalidState(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self(amplitudes))
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self(amplitudes.unscale(norm)))
    }

    pub(crate) fn from_vector_unchecked(amplitudes: DVector<C64>) -> Self {
        Self(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.0.dotc(&other.0)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `max_i |a_i - b_i|`.
    pub fn max_amplitude_error(&self, other: &PureState) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn apply(&self, op: &ComplexOperator) -> PureState {
        Self(op.apply(&self.0))
    }

    /// Tensor product `self ⊗ other` in row-major order.
    pub fn kron(&self, other: &PureState) -> PureState {
        Self(self.0.kronecker(&other.0))
    }
}

/// Unit-trace Hermitian positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DMatrix<C64>);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let rho = Self(matrix);
        let h = rho.hermiticity_defect();
        if !(h <= HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!("density matrix Hermiticity defect {h:e}")));
        }
        let drift = rho.trace_drift();
        if !(drift <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("density matrix trace drift {drift:e}")));
        }
        let lo = rho.min_eigenvalue()?;
        if !(lo >= -POSITIVITY_TOL) {
            return Err(Error::InvalidState(format!("density matrix eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        Self(matrix)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self(v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim).unscale(dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `|Tr ρ - 1|`.
    pub fn trace_drift(&self) -> f64 {
        (self.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        ComplexOperator::from_matrix_unchecked(self.0.clone()).hermiticity_defect()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let op = ComplexOperator::from_matrix_unchecked(self.0.clone());
        Ok(HermitianEigen::new(&op)?.min_eigenvalue())
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩` without any realness check.
    pub fn expectation_in(&self, psi: &PureState) -> C64 {
        let v = psi.amplitudes();
        v.dotc(&(&self.0 * v))
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, op: &ComplexOperator) -> C64 {
        (&self.0 * op.matrix()).trace()
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexOperator) -> DensityMatrix {
        Self(u.matrix() * &self.0 * u.matrix().adjoint())
    }

    /// `½ Σ |σ_i|` of `self - other` (trace distance).
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let diff = ComplexOperator::from_matrix_unchecked(&self.0 - &other.0);
        let eig = HermitianEigen::new(&diff)?;
        Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(self.0.kronecker(&other.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        let v = DVector::from_element(2, C64::new(1.0, 0.0));
        assert!(PureState::new(v.clone()).is_err());
        let p = PureState::normalized(v).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-15);
        assert!(PureState::normalized(DVector::zeros(3)).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::new(DensityMatrix::maximally_mixed(4).into_matrix()).is_ok());
    }
}
