// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation of a pulse-free controlled-phase gate in which one two-level
//! control atom conditions a phase flip on `n` three-level target atoms
//! through a shared cavity mode.
//!
//! The gate runs in three steps: a resonant control–cavity swap, a
//! dispersive target–cavity interaction lasting `πΔc/g²`, and a second
//! resonant swap. This crate builds the operators, propagates ideal and
//! dissipative dynamics, verifies the truth table against the ideal unitary,
//! and computes the gate fidelity against the detuning ratio `Δc/g`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` style checks are written that way to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fidelity;
pub mod hamiltonians;
pub mod linalg;
pub mod propagation;
pub mod protocol;
pub mod space;
pub mod state;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use fidelity::{
    gate_fidelity, ideal_reference_state, plus_state_input, run_sweep, single_interior_maximum, sweep_point,
    InitialStatePolicy, SweepResult, SweepRow, SweepSpec,
};
pub use hamiltonians::{
    collapse_operators, dispersive_interaction_hamiltonian, dispersive_static_hamiltonian, effective_hamiltonian,
    frame_correction, ideal_gate_unitary, jc_hamiltonian, Channel, CollapseOperator, ParamWarning, PhysicalParams,
};
pub use linalg::{ComplexOperator, HermitianEigen, SparseOperator};
pub use propagation::{
    dispersive_phase_propagate, jc_propagate, lindblad_evolve, unitary_propagate, EvolutionSettings, LindbladRun,
    Method,
};
pub use protocol::{
    cnot_variant, cnot_variant_lossy, ghz_prepare, ghz_prepare_lossy, ghz_state, make_schedule, run_full_unitary,
    run_ideal, run_lossy, run_lossy_with, truth_table, FinalState, GateOutcome, GateSchedule, KScaling,
    LossyOptions, TruthRow,
};
pub use space::{build_space, SpaceDescriptor, Subsystem, SystemConfig};
pub use state::{DensityMatrix, PureState};
