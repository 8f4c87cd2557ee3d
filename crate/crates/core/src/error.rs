// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("label {label} out of range for subsystem {subsystem} of dimension {dim}")]
    LabelOutOfRange {
        subsystem: usize,
        label: usize,
        dim: usize,
    },
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem index {0} does not exist")]
    NoSuchSubsystem(usize),
    #[error("space has no {0} subsystem")]
    MissingSubsystem(&'static str),
    #[error("partial trace needs at least one kept subsystem")]
    EmptyKeepSet,
    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("state has population {0:e} in level |2>")]
    LeakedPopulation(f64),
    #[error("cavity is not in vacuum (excited population {0:e})")]
    NonVacuumCavity(f64),
    #[error("integration needs {required} steps, budget is {budget}")]
    StepBudgetExceeded { required: usize, budget: usize },
    #[error("fidelity has imaginary part {0:e}")]
    ComplexFidelity(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
