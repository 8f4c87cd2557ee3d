// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Composite Hilbert space `[control?] ⊗ target_1 ⊗ … ⊗ target_n ⊗ cavity`.
//!
//! The control atom is a qubit, each target a qutrit (levels 0, 1, 2) and the
//! cavity a Fock space truncated at `fock_cutoff` photons. Basis indices are
//! row-major in that order, so the cavity label is the fastest-varying digit.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, SparseOperator, ONE};
use crate::state::{DensityMatrix, PureState};

pub const CONTROL_DIM: usize = 2;
pub const TARGET_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemConfig {
    pub n_targets: usize,
    pub fock_cutoff: usize,
    pub include_control: bool,
}

impl SystemConfig {
    pub fn new(n_targets: usize, fock_cutoff: usize, include_control: bool) -> Self {
        Self {
            n_targets,
            fock_cutoff,
            include_control,
        }
    }

    /// Full gate space with a single-photon cavity.
    pub fn gate(n_targets: usize) -> Self {
        Self::new(n_targets, 1, true)
    }

    /// Targets and cavity only, as used for the dispersive step.
    pub fn dispersive(n_targets: usize) -> Self {
        Self::new(n_targets, 1, false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_targets == 0 {
            return Err(Error::InvalidConfig("n_targets must be at least 1".into()));
        }
        if self.fock_cutoff < 1 {
            return Err(Error::InvalidConfig("fock_cutoff must be at least 1".into()));
        }
        Ok(())
    }
}

/// Named role of a tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Control,
    /// Zero-based target index.
    Target(usize),
    Cavity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescriptor {
    config: SystemConfig,
    subsystem_dims: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
}

/// Validates `config` and lays out the space.
pub fn build_space(config: SystemConfig) -> Result<SpaceDescriptor> {
    SpaceDescriptor::new(config)
}

impl SpaceDescriptor {
    pub fn new(config: SystemConfig) -> Result<Self> {
        config.validate()?;
        let mut dims = Vec::with_capacity(config.n_targets + 2);
        if config.include_control {
            dims.push(CONTROL_DIM);
        }
        dims.extend(core::iter::repeat_n(TARGET_DIM, config.n_targets));
        dims.push(config.fock_cutoff + 1);
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let total_dim = dims.iter().product();
        Ok(Self {
            config,
            subsystem_dims: dims,
            strides,
            total_dim,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn n_targets(&self) -> usize {
        self.config.n_targets
    }

    pub fn fock_cutoff(&self) -> usize {
        self.config.fock_cutoff
    }

    pub fn has_control(&self) -> bool {
        self.config.include_control
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    pub fn n_subsystems(&self) -> usize {
        self.subsystem_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Position of a named subsystem in the tensor ordering.
    pub fn position(&self, which: Subsystem) -> Option<usize> {
        let offset = usize::from(self.config.include_control);
        match which {
            Subsystem::Control => self.config.include_control.then_some(0),
            Subsystem::Target(k) => (k < self.config.n_targets).then_some(offset + k),
            Subsystem::Cavity => Some(self.subsystem_dims.len() - 1),
        }
    }

    pub fn control(&self) -> Result<usize> {
        self.position(Subsystem::Control)
            .ok_or(Error::MissingSubsystem("control"))
    }

    pub fn cavity(&self) -> usize {
        self.subsystem_dims.len() - 1
    }

    pub fn target(&self, k: usize) -> Result<usize> {
        self.position(Subsystem::Target(k))
            .ok_or(Error::NoSuchSubsystem(k))
    }

    /// Positions of all targets, ascending.
    pub fn targets(&self) -> core::ops::Range<usize> {
        let offset = usize::from(self.config.include_control);
        offset..offset + self.config.n_targets
    }

    pub fn index_of(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.subsystem_dims.len() {
            return Err(Error::LabelCount {
                expected: self.subsystem_dims.len(),
                found: labels.len(),
            });
        }
        let mut idx = 0;
        for (s, (&l, &d)) in labels.iter().zip(&self.subsystem_dims).enumerate() {
            if l >= d {
                return Err(Error::LabelOutOfRange {
                    subsystem: s,
                    label: l,
                    dim: d,
                });
            }
            idx += l * self.strides[s];
        }
        Ok(idx)
    }

    pub fn labels_of(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.total_dim);
        self.strides
            .iter()
            .zip(&self.subsystem_dims)
            .map(|(&s, &d)| (index / s) % d)
            .collect()
    }

    /// Label of subsystem `pos` in basis state `index`.
    pub fn label_at(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % self.subsystem_dims[pos]
    }

    /// Index obtained by replacing the label of subsystem `pos`.
    pub fn with_label(&self, index: usize, pos: usize, label: usize) -> usize {
        let old = self.label_at(index, pos);
        index - old * self.strides[pos] + label * self.strides[pos]
    }

    pub fn basis_state(&self, labels: &[usize]) -> Result<PureState> {
        let idx = self.index_of(labels)?;
        let mut v = DVector::zeros(self.total_dim);
        v[idx] = ONE;
        Ok(PureState::from_vector_unchecked(v))
    }

    /// Lifts a local operator on subsystem `pos` to the full space as a
    /// sparse operator (identity on every other factor).
    pub fn embed_sparse(&self, local: &ComplexOperator, pos: usize) -> Result<SparseOperator> {
        let d = *self
            .subsystem_dims
            .get(pos)
            .ok_or(Error::NoSuchSubsystem(pos))?;
        if local.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: local.dim(),
            });
        }
        let mut entries = Vec::new();
        for base in 0..self.total_dim {
            if self.label_at(base, pos) != 0 {
                continue;
            }
            for c in 0..d {
                for r in 0..d {
                    let v = local.get(r, c);
                    if v != C64::new(0.0, 0.0) {
                        entries.push((
                            base + r * self.strides[pos],
                            base + c * self.strides[pos],
                            v,
                        ));
                    }
                }
            }
        }
        Ok(SparseOperator::new(self.total_dim, entries))
    }

    pub fn embed(&self, local: &ComplexOperator, pos: usize) -> Result<ComplexOperator> {
        Ok(self.embed_sparse(local, pos)?.to_dense())
    }

    /// Reduced density matrix on the subsystems in `keep` (any order; the
    /// result uses ascending tensor order).
    pub fn partial_trace(&self, rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        if rho.dim() != self.total_dim {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim,
                found: rho.dim(),
            });
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&bad) = kept.iter().find(|&&p| p >= self.n_subsystems()) {
            return Err(Error::NoSuchSubsystem(bad));
        }
        let kept_dims: Vec<usize> = kept.iter().map(|&p| self.subsystem_dims[p]).collect();
        let red_dim: usize = kept_dims.iter().product();

        let reduced_index = |idx: usize| {
            kept.iter()
                .zip(&kept_dims)
                .fold(0, |acc, (&p, &d)| acc * d + self.label_at(idx, p))
        };
        // discarded-subsystem signature; entries contribute only when equal
        let env_index = |idx: usize| {
            (0..self.n_subsystems())
                .filter(|p| !kept.contains(p))
                .fold(0, |acc, p| acc * self.subsystem_dims[p] + self.label_at(idx, p))
        };
        let red: Vec<usize> = (0..self.total_dim).map(reduced_index).collect();
        let env: Vec<usize> = (0..self.total_dim).map(env_index).collect();

        let m = rho.matrix();
        let mut out = DMatrix::zeros(red_dim, red_dim);
        for j in 0..self.total_dim {
            for i in 0..self.total_dim {
                if env[i] == env[j] {
                    out[(red[i], red[j])] += m[(i, j)];
                }
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// Projector onto cavity vacuum, as a diagonal mask.
    pub fn vacuum_mask(&self) -> Vec<bool> {
        let cav = self.cavity();
        (0..self.total_dim)
            .map(|i| self.label_at(i, cav) == 0)
            .collect()
    }
}
