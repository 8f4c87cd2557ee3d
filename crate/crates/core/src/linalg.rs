// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense and sparse complex operators, plus the Hermitian matrix exponential
//! used for all exact unitary propagation.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator(DMatrix<C64>);

impl ComplexOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("operator has non-finite entries".into()));
        }
        Ok(Self(matrix))
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), matrix.ncols());
        Self(matrix)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// Builds an operator from `(row, col, value)` triples; duplicates add.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, C64)]) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for &(r, c, v) in entries {
            m[(r, c)] += v;
        }
        Self(m)
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

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |A - A†|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation of `A†A` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.0.adjoint() * &self.0;
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((p[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.0[(i, j)].norm() <= tol))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn to_sparse(&self) -> SparseOperator {
        SparseOperator::from_dense(self)
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexOperator {
    type Output = ComplexOperator;
    fn neg(self) -> ComplexOperator {
        ComplexOperator(-&self.0)
    }
}

/// Coordinate-format sparse operator, entries sorted by column then row.
///
/// Every operator in this model (ladder operators, atomic transition
/// projectors, their products) has only a handful of entries per column,
/// so the Lindblad right-hand side is evaluated through this type.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    pub fn new(dim: usize, mut entries: Vec<(usize, usize, C64)>) -> Self {
        entries.retain(|e| !e.2.is_zero());
        entries.sort_by_key(|&(r, c, _)| (c, r));
        // merge duplicates
        let mut merged: Vec<(usize, usize, C64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| !e.2.is_zero());
        Self {
            dim,
            entries: merged,
        }
    }

    pub fn from_dense(op: &ComplexOperator) -> Self {
        let n = op.dim();
        let mut entries = Vec::new();
        for c in 0..n {
            for r in 0..n {
                let v = op.0[(r, c)];
                if !v.is_zero() {
                    entries.push((r, c, v));
                }
            }
        }
        Self { dim: n, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> ComplexOperator {
        ComplexOperator::from_entries(self.dim, &self.entries)
    }

    pub fn dagger(&self) -> Self {
        Self::new(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| (r, c, v * s)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.entries.clone();
        e.extend_from_slice(&other.entries);
        Self::new(self.dim, e)
    }

    /// Sparse product `self * other`.
    pub fn mul_sparse(&self, other: &Self) -> Self {
        // column k of `self` as a list of (row, value)
        let mut cols: Vec<Vec<(usize, C64)>> = alloc::vec![Vec::new(); self.dim];
        for &(r, c, v) in &self.entries {
            cols[c].push((r, v));
        }
        let mut out = Vec::new();
        for &(k, j, w) in &other.entries {
            for &(i, v) in &cols[k] {
                out.push((i, j, v * w));
            }
        }
        Self::new(self.dim, out)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    /// `out = self * m` for dense `m`; `out` is overwritten.
    pub fn mul_dense_into(&self, m: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let n = self.dim;
        out.fill(ZERO);
        for j in 0..n {
            let src = m.column(j);
            let mut dst = out.column_mut(j);
            for &(r, c, a) in &self.entries {
                dst[r] += a * src[c];
            }
        }
    }

    /// `out += s * self * m * self†`.
    pub fn add_sandwich_into(&self, m: &DMatrix<C64>, s: f64, out: &mut DMatrix<C64>) {
        for &(rq, cq, vq) in &self.entries {
            let wq = vq.conj() * s;
            for &(rp, cp, vp) in &self.entries {
                out[(rp, rq)] += vp * m[(cp, cq)] * wq;
            }
        }
    }

    /// `self * m * self†` as a new dense matrix.
    pub fn sandwich(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        self.add_sandwich_into(m, 1.0, &mut out);
        out
    }
}

/// Eigendecomposition of a Hermitian operator, reusable for `exp(-iHt)` at
/// many times.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

/// Tolerance on `max |H - H†|` accepted before decomposition.
pub const HERMITIAN_TOL: f64 = 1e-9;

impl HermitianEigen {
    pub fn new(h: &ComplexOperator) -> Result<Self> {
        let scale = h.max_abs().max(1.0);
        let defect = h.hermiticity_defect();
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(defect));
        }
        let sym = (&h.0 + h.0.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> ComplexOperator {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let phase = C64::from_polar(1.0, -lambda * t);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
        ComplexOperator(scaled * v.adjoint())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn hermitian_propagator(h: &ComplexOperator, t: f64) -> Result<ComplexOperator> {
    Ok(HermitianEigen::new(h)?.propagator(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pauli_x() -> ComplexOperator {
        ComplexOperator::from_entries(2, &[(0, 1, ONE), (1, 0, ONE)])
    }

    #[test]
    fn exp_of_pauli_x_is_rotation() {
        let t = 0.37;
        let u = hermitian_propagator(&pauli_x(), t).unwrap();
        let c = C64::new(t.cos(), 0.0);
        let s = C64::new(0.0, -t.sin());
        assert!((u.get(0, 0) - c).norm() < 1e-14);
        assert!((u.get(0, 1) - s).norm() < 1e-14);
        assert!(u.unitarity_defect() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = ComplexOperator::from_entries(2, &[(0, 1, ONE)]);
        assert!(matches!(HermitianEigen::new(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sparse_dense_agree() {
        let s = SparseOperator::new(
            3,
            vec![(0, 1, C64::new(1.0, 2.0)), (2, 0, C64::new(-0.5, 0.0)), (2, 0, C64::new(0.25, 0.0))],
        );
        assert_eq!(s.nnz(), 2);
        let d = s.to_dense();
        let m = DMatrix::from_fn(3, 3, |i, j| C64::new(i as f64 + 1.0, j as f64 - 1.0));
        let mut out = DMatrix::zeros(3, 3);
        s.mul_dense_into(&m, &mut out);
        assert!((out - d.matrix() * &m).norm() < 1e-14);
        let sw = s.sandwich(&m);
        assert!((sw - d.matrix() * &m * d.matrix().adjoint()).norm() < 1e-14);
        let prod = s.mul_sparse(&s.dagger()).to_dense();
        assert!((prod.matrix() - d.matrix() * d.matrix().adjoint()).norm() < 1e-14);
    }
}
