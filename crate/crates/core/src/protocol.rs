// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! The three-step gate: resonant control–cavity swap for `t1 = π/(2g_r)`,
//! dispersive target–cavity phase for `t2 = πΔc/g²`, resonant swap back for
//! `t3 = 3π/(2g_r)`.
//!
//! Logical basis indices put the control in the most significant bit
//! followed by the targets in ascending order, matching [`ideal_gate_unitary`].
//!
//! [`ideal_gate_unitary`]: crate::hamiltonians::ideal_gate_unitary

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
// unused when std is linked and f64 has inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonians::{
    collapse_operators, dispersive_excitation_number, dispersive_static_hamiltonian, frame_correction,
    ideal_gate_sign,
    jc_hamiltonian, CollapseOperator, PhysicalParams, Channel,
};
use crate::linalg::{ComplexOperator, HermitianEigen, SparseOperator, ONE};
use crate::propagation::{
    dispersive_phase_propagate, jc_propagate, jc_unitary, lindblad_evolve, EvolutionSettings,
};
use crate::space::{SpaceDescriptor, SystemConfig};
use crate::state::{DensityMatrix, PureState};

/// Amplitude tolerance for logical-map comparisons.
pub const MATCH_TOL: f64 = 1e-10;
/// Largest `n` accepted by [`truth_table`].
pub const TRUTH_TABLE_MAX_N: usize = 6;

/// Step durations of the gate, seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSchedule {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub tau: f64,
    /// `k = Δc / g`.
    pub k_ratio: f64,
    /// `2π/g_r + k n π/g`: total time when the targets pass one at a time.
    pub sequential_time: f64,
}

pub fn make_schedule(params: &PhysicalParams, n: usize) -> Result<GateSchedule> {
    if !(params.g_r > 0.0 && params.g > 0.0 && params.delta_c > 0.0) {
        return Err(Error::InvalidParams("g_r, g and delta_c must be > 0".into()));
    }
    let t1 = PI / (2.0 * params.g_r);
    let t2 = PI * params.delta_c / (params.g * params.g);
    let t3 = 3.0 * PI / (2.0 * params.g_r);
    let k = params.delta_c / params.g;
    Ok(GateSchedule {
        t1,
        t2,
        t3,
        tau: t1 + t2 + t3,
        k_ratio: k,
        sequential_time: 2.0 * PI / params.g_r + k * n as f64 * PI / params.g,
    })
}

/// How the detuning ratio is chosen as the number of targets grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KScaling {
    /// `Δc = k0 g` for every `n`.
    Fixed,
    /// `Δc = k0 √n g`, keeping `Δc / (√n g)` constant.
    #[default]
    SqrtN,
}

impl KScaling {
    pub fn ratio(self, k0: f64, n: usize) -> f64 {
        match self {
            Self::Fixed => k0,
            Self::SqrtN => k0 * (n as f64).sqrt(),
        }
    }
}

/// Schedule for `n` targets with the detuning set by `policy` from base
/// ratio `k0`.
pub fn schedule_for_scaling(
    params: &PhysicalParams,
    k0: f64,
    n: usize,
    policy: KScaling,
) -> Result<GateSchedule> {
    make_schedule(&params.with_ratio(policy.ratio(k0, n)), n)
}

#[derive(Clone, Debug, PartialEq)]
pub enum FinalState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl FinalState {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Pure(p) => DensityMatrix::from_pure(p),
            Self::Mixed(r) => r.clone(),
        }
    }
}

/// Integrator statistics for the dissipative segments of a run.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct IntegrationStats {
    pub steps: usize,
    pub dt: f64,
    pub max_trace_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateOutcome {
    pub final_state: FinalState,
    /// Population of the cavity vacuum after the gate.
    pub cavity_vacuum_overlap: f64,
    pub integration: Option<IntegrationStats>,
}

/// States after each of the three steps of an ideal run.
#[derive(Clone, Debug, PartialEq)]
pub struct StepTrace {
    pub after_step1: PureState,
    pub after_step2: PureState,
    pub after_step3: PureState,
}

fn check_gate_space(space: &SpaceDescriptor) -> Result<usize> {
    space.control()
}

fn excited_cavity_population(state: &PureState, space: &SpaceDescriptor) -> f64 {
    let mask = space.vacuum_mask();
    state
        .amplitudes()
        .iter()
        .zip(mask)
        .filter(|(_, vac)| !vac)
        .map(|(a, _)| a.norm_sqr())
        .sum()
}

fn require_vacuum(state: &PureState, space: &SpaceDescriptor) -> Result<()> {
    if state.dim() != space.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            found: state.dim(),
        });
    }
    let excited = excited_cavity_population(state, space);
    if excited > 1e-12 {
        return Err(Error::NonVacuumCavity(excited));
    }
    Ok(())
}

fn vacuum_population(rho: &DensityMatrix, space: &SpaceDescriptor) -> f64 {
    space
        .vacuum_mask()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v)
        .map(|(i, _)| rho.matrix()[(i, i)].re)
        .sum()
}

/// Ideal run recording the state after every step.
pub fn run_ideal_traced(
    input: &PureState,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
) -> Result<StepTrace> {
    check_gate_space(space)?;
    require_vacuum(input, space)?;
    let sched = make_schedule(params, space.n_targets())?;
    let after_step1 = jc_propagate(input, params, sched.t1, space)?;
    let after_step2 = dispersive_phase_propagate(&after_step1, params, sched.t2, space)?;
    let after_step3 = jc_propagate(&after_step2, params, sched.t3, space)?;
    Ok(StepTrace {
        after_step1,
        after_step2,
        after_step3,
    })
}

/// Ideal gate built from the closed-form resonant and dispersive propagators.
pub fn run_ideal(input: &PureState, params: &PhysicalParams, space: &SpaceDescriptor) -> Result<GateOutcome> {
    let trace = run_ideal_traced(input, params, space)?;
    let out = trace.after_step3;
    let vac = 1.0 - excited_cavity_population(&out, space);
    Ok(GateOutcome {
        final_state: FinalState::Pure(out),
        cavity_vacuum_overlap: vac,
        integration: None,
    })
}

/// Ideal resonant steps with the dispersive step propagated exactly under
/// the full off-resonant Hamiltonian (no adiabatic elimination).
pub fn run_full_unitary(
    input: &PureState,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
) -> Result<GateOutcome> {
    check_gate_space(space)?;
    require_vacuum(input, space)?;
    let sched = make_schedule(params, space.n_targets())?;
    let step1 = jc_propagate(input, params, sched.t1, space)?;
    let h = dispersive_static_hamiltonian(params, space)?;
    let u = &frame_correction(params, space, sched.t2) * &HermitianEigen::new(&h)?.propagator(sched.t2);
    let step2 = step1.apply(&u);
    let out = jc_propagate(&step2, params, sched.t3, space)?;
    let vac = 1.0 - excited_cavity_population(&out, space);
    Ok(GateOutcome {
        final_state: FinalState::Pure(out),
        cavity_vacuum_overlap: vac,
        integration: None,
    })
}

/// Options for [`run_lossy_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LossyOptions {
    /// Include cavity decay during the two resonant steps.
    pub decay_during_resonant_steps: bool,
}

/// Gate with dissipation during the dispersive step only.
pub fn run_lossy(
    input: &PureState,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    settings: &EvolutionSettings,
) -> Result<GateOutcome> {
    run_lossy_with(input, params, space, settings, LossyOptions::default())
}

pub fn run_lossy_with(
    input: &PureState,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    settings: &EvolutionSettings,
    options: LossyOptions,
) -> Result<GateOutcome> {
    let control = check_gate_space(space)?;
    require_vacuum(input, space)?;
    let n = space.n_targets();
    let sched = make_schedule(params, n)?;
    let omega_fast = EvolutionSettings::fastest_frequency(params, n);

    if options.decay_during_resonant_steps {
        let h_jc = jc_hamiltonian(params, space)?;
        let cavity_only: Vec<CollapseOperator> = collapse_operators(params, space)?
            .into_iter()
            .filter(|c| c.channel == Channel::Cavity)
            .collect();
        let rho0 = DensityMatrix::from_pure(input);
        let r1 = lindblad_evolve(&rho0, &h_jc, &cavity_only, sched.t1, settings, omega_fast)?;
        let (rho2, s2) = dispersive_step(&r1.rho, params, space, sched.t2, settings, omega_fast)?;
        let r3 = lindblad_evolve(&rho2, &h_jc, &cavity_only, sched.t3, settings, omega_fast)?;
        let stats = IntegrationStats {
            steps: r1.steps + s2.steps + r3.steps,
            dt: s2.dt,
            max_trace_drift: r1.max_trace_drift.max(s2.max_trace_drift).max(r3.max_trace_drift),
        };
        let vac = vacuum_population(&r3.rho, space);
        return Ok(GateOutcome {
            final_state: FinalState::Mixed(r3.rho),
            cavity_vacuum_overlap: vac,
            integration: Some(stats),
        });
    }

    let step1 = jc_propagate(input, params, sched.t1, space)?;
    // After step 1 the control is |0> in every branch and factors out.
    let half = space.total_dim() / 2;
    debug_assert_eq!(control, 0);
    let excited_control: f64 = step1.amplitudes().rows(half, half).norm_squared();
    if excited_control > 1e-12 {
        return Err(Error::InvalidState(alloc::format!(
            "control keeps population {excited_control:e} in |1> after the first step"
        )));
    }
    let reduced_space = SpaceDescriptor::new(SystemConfig::new(n, space.fock_cutoff(), false))?;
    let reduced = PureState::normalized(DVector::from_iterator(
        half,
        step1.amplitudes().rows(0, half).iter().copied(),
    ))?;
    let (rho_red, stats) = dispersive_step(
        &DensityMatrix::from_pure(&reduced),
        params,
        &reduced_space,
        sched.t2,
        settings,
        omega_fast,
    )?;
    let mut full = DMatrix::zeros(space.total_dim(), space.total_dim());
    full.view_mut((0, 0), (half, half)).copy_from(rho_red.matrix());
    let u3 = jc_unitary(params, sched.t3, space)?;
    let rho = DensityMatrix::from_matrix_unchecked(u3.sandwich(&full));
    let vac = vacuum_population(&rho, space);
    Ok(GateOutcome {
        final_state: FinalState::Mixed(rho),
        cavity_vacuum_overlap: vac,
        integration: Some(stats),
    })
}

/// Master-equation evolution of the dispersive step followed by the frame
/// correction back to the interaction picture.
///
/// The excitation number `N` commutes with the static Hamiltonian and every
/// collapse operator changes it by a fixed amount, so the equation is
/// integrated under `H + Δc N` and the rotation `exp(iΔc N t)` is restored
/// exactly afterwards. This removes the `Δc` rotation between photon-number
/// sectors, which fixed-step RK4 would otherwise damp by a small amount per
/// step.
fn dispersive_step(
    rho: &DensityMatrix,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    t2: f64,
    settings: &EvolutionSettings,
    omega_fast: f64,
) -> Result<(DensityMatrix, IntegrationStats)> {
    let excitations = dispersive_excitation_number(space);
    let h = &dispersive_static_hamiltonian(params, space)? + &excitations.scale(C64::from(params.delta_c));
    let collapse = collapse_operators(params, space)?;
    let run = lindblad_evolve(rho, &h, &collapse, t2, settings, omega_fast)?;
    let frame = frame_correction(params, space, t2);
    let phases: Vec<C64> = (0..space.total_dim())
        .map(|i| frame.get(i, i) * C64::from_polar(1.0, params.delta_c * t2 * excitations.get(i, i).re))
        .collect();
    let mut m = run.rho.into_matrix();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            m[(i, j)] *= phases[i] * phases[j].conj();
        }
    }
    Ok((
        DensityMatrix::from_matrix_unchecked(m),
        IntegrationStats {
            steps: run.steps,
            dt: run.dt,
            max_trace_drift: run.max_trace_drift,
        },
    ))
}

/// Full-space labels of logical basis state `index` with the cavity empty.
pub fn logical_labels(space: &SpaceDescriptor, index: usize) -> Result<Vec<usize>> {
    let n = space.n_targets();
    if !space.has_control() {
        return Err(Error::MissingSubsystem("control"));
    }
    if index >= 1 << (n + 1) {
        return Err(Error::LabelOutOfRange {
            subsystem: 0,
            label: index,
            dim: 1 << (n + 1),
        });
    }
    let mut labels = Vec::with_capacity(n + 2);
    for bit in (0..=n).rev() {
        labels.push((index >> bit) & 1);
    }
    labels.push(0);
    Ok(labels)
}

pub fn logical_basis_state(space: &SpaceDescriptor, index: usize) -> Result<PureState> {
    space.basis_state(&logical_labels(space, index)?)
}

/// Full-space indices of every logical basis state, in logical order.
pub fn logical_indices(space: &SpaceDescriptor) -> Result<Vec<usize>> {
    (0..1usize << (space.n_targets() + 1))
        .map(|i| space.index_of(&logical_labels(space, i)?))
        .collect()
}

/// Restriction of [`run_ideal`] to the logical subspace with an empty cavity.
pub fn logical_matrix(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<ComplexOperator> {
    let idx = logical_indices(space)?;
    let dim = idx.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, _) in idx.iter().enumerate() {
        let out = run_ideal(&logical_basis_state(space, col)?, params, space)?;
        let FinalState::Pure(psi) = out.final_state else { unreachable!() };
        for (row, &full) in idx.iter().enumerate() {
            m[(row, col)] = psi.amplitudes()[full];
        }
    }
    Ok(ComplexOperator::from_matrix_unchecked(m))
}

/// One row of the truth table.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthRow {
    /// Logical basis index of the input.
    pub input: usize,
    pub trace: StepTrace,
    /// `U_p` applied to the input, embedded with an empty cavity.
    pub expected: PureState,
    pub max_error: f64,
    pub matches: bool,
}

/// Runs every logical basis state through the ideal protocol.
pub fn truth_table(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<Vec<TruthRow>> {
    let n = space.n_targets();
    if n > TRUTH_TABLE_MAX_N {
        return Err(Error::InvalidConfig(alloc::format!(
            "truth table supports at most {TRUTH_TABLE_MAX_N} targets"
        )));
    }
    let mut rows = Vec::with_capacity(1 << (n + 1));
    for input in 0..1usize << (n + 1) {
        let psi = logical_basis_state(space, input)?;
        let trace = run_ideal_traced(&psi, params, space)?;
        let expected = PureState::from_vector_unchecked(
            psi.amplitudes() * C64::new(ideal_gate_sign(n, input), 0.0),
        );
        let max_error = trace.after_step3.max_amplitude_error(&expected);
        rows.push(TruthRow {
            input,
            trace,
            expected,
            max_error,
            matches: max_error <= MATCH_TOL,
        });
    }
    Ok(rows)
}

/// Qutrit Hadamard acting on levels |0⟩, |1⟩ and leaving |2⟩ alone.
pub fn qutrit_hadamard() -> ComplexOperator {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexOperator::from_entries(3, &[(0, 0, h), (0, 1, h), (1, 0, h), (1, 1, -h), (2, 2, ONE)])
}

pub fn qubit_hadamard() -> ComplexOperator {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexOperator::from_entries(2, &[(0, 0, h), (0, 1, h), (1, 0, h), (1, 1, -h)])
}

/// Hadamard on every target, as one operator.
pub fn target_hadamards(space: &SpaceDescriptor) -> Result<SparseOperator> {
    let h = qutrit_hadamard();
    let mut op: Option<SparseOperator> = None;
    for pos in space.targets() {
        let e = space.embed_sparse(&h, pos)?;
        op = Some(match op {
            None => e,
            Some(acc) => acc.mul_sparse(&e),
        });
    }
    op.ok_or(Error::MissingSubsystem("target"))
}

fn apply_sparse(op: &SparseOperator, psi: &PureState) -> PureState {
    PureState::from_vector_unchecked(op.apply(psi.amplitudes()))
}

/// Controlled-NOT on every target: Hadamards, ideal phase gate, Hadamards.
pub fn cnot_variant(input: &PureState, params: &PhysicalParams, space: &SpaceDescriptor) -> Result<GateOutcome> {
    let hads = target_hadamards(space)?;
    let out = run_ideal(&apply_sparse(&hads, input), params, space)?;
    let FinalState::Pure(psi) = out.final_state else { unreachable!() };
    Ok(GateOutcome {
        final_state: FinalState::Pure(apply_sparse(&hads, &psi)),
        ..out
    })
}

/// [`cnot_variant`] with the dissipative phase gate.
pub fn cnot_variant_lossy(
    input: &PureState,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    settings: &EvolutionSettings,
    options: LossyOptions,
) -> Result<GateOutcome> {
    let hads = target_hadamards(space)?;
    let out = run_lossy_with(&apply_sparse(&hads, input), params, space, settings, options)?;
    let rho = out.final_state.to_density();
    Ok(GateOutcome {
        final_state: FinalState::Mixed(DensityMatrix::from_matrix_unchecked(hads.sandwich(rho.matrix()))),
        ..out
    })
}

/// `H_control |0…0⟩|0⟩_c`, the input of GHZ preparation.
pub fn ghz_input(space: &SpaceDescriptor) -> Result<PureState> {
    let c = space.control()?;
    let ground = space.basis_state(&vec![0; space.n_subsystems()])?;
    let h = space.embed_sparse(&qubit_hadamard(), c)?;
    Ok(apply_sparse(&h, &ground))
}

/// `(|0…0⟩ + |1…1⟩)/√2 ⊗ |0⟩_c` over control and targets.
pub fn ghz_state(space: &SpaceDescriptor) -> Result<PureState> {
    space.control()?;
    let zeros = vec![0; space.n_subsystems()];
    let mut ones = vec![1; space.n_subsystems()];
    *ones.last_mut().expect("cavity present") = 0;
    let mut v = DVector::zeros(space.total_dim());
    v[space.index_of(&zeros)?] = C64::new(FRAC_1_SQRT_2, 0.0);
    v[space.index_of(&ones)?] = C64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(v)
}

/// Ideal GHZ preparation over the control and all targets.
pub fn ghz_prepare(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<PureState> {
    let out = cnot_variant(&ghz_input(space)?, params, space)?;
    match out.final_state {
        FinalState::Pure(p) => Ok(p),
        FinalState::Mixed(_) => unreachable!(),
    }
}

/// GHZ preparation through the dissipative gate.
pub fn ghz_prepare_lossy(
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    settings: &EvolutionSettings,
    options: LossyOptions,
) -> Result<GateOutcome> {
    cnot_variant_lossy(&ghz_input(space)?, params, space, settings, options)
}
