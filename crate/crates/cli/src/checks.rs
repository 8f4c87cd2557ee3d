// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Fast invariant suite behind `cqed-gate validate`.

use cqed_gate::hamiltonians::DEFAULT_LIFETIME_S;
use cqed_gate::protocol::{qubit_hadamard, qutrit_hadamard};
use cqed_gate::{
    collapse_operators, dispersive_interaction_hamiltonian, dispersive_static_hamiltonian, effective_hamiltonian,
    jc_hamiltonian, lindblad_evolve, make_schedule, truth_table, ComplexOperator, DensityMatrix, EvolutionSettings,
    HermitianEigen, PhysicalParams, PureState, SpaceDescriptor, SystemConfig,
};

use crate::config::{positive_finite, RunConfig};
use crate::error::CliError;
use crate::record::CheckResult;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-8;
pub const RHO_HERMITIAN_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;
pub const DECAY_REL_TOL: f64 = 1e-6;
pub const STARK_RATIOS: [f64; 3] = [20.0, 50.0, 100.0];
/// Accepted window for the error ratio when the RK4 step is halved.
pub const ORDER_WINDOW: (f64, f64) = (12.0, 20.0);

/// Fault injection for negative-control runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hooks {
    pub flip_heff_sign: bool,
    pub dt_scale: f64,
}

impl Default for Hooks {
    fn default() -> Self {
        Self {
            flip_heff_sign: false,
            dt_scale: 1.0,
        }
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn run_all(config: &RunConfig, hooks: &Hooks) -> Result<Vec<CheckResult>, CliError> {
    if !positive_finite(hooks.dt_scale) {
        return Err(CliError::Validation(format!("dt scale must be positive, got {}", hooks.dt_scale)));
    }
    Ok(vec![
        hermiticity(config)?,
        stark_shift(config, hooks)?,
        trace_preservation(config, hooks)?,
        truth_table_n2(config)?,
        cavity_decay(config)?,
        rk4_order(config)?,
    ])
}

fn hermiticity(config: &RunConfig) -> Result<CheckResult, CliError> {
    let p = config.params();
    let n = config.system.n_targets;
    let gate = SpaceDescriptor::new(SystemConfig::gate(n))?;
    let disp = SpaceDescriptor::new(SystemConfig::dispersive(n))?;
    let t = make_schedule(&p, n)?.t2 / 3.0;
    let ops = [
        ("jc", jc_hamiltonian(&p, &gate)?),
        ("static", dispersive_static_hamiltonian(&p, &disp)?),
        ("interaction", dispersive_interaction_hamiltonian(&p, &disp, t)?),
        ("effective", effective_hamiltonian(&p, &disp)?),
    ];
    let worst = ops
        .iter()
        .map(|(name, h)| (*name, h.hermiticity_defect()))
        .fold(("", 0.0f64), |a, b| if b.1 > a.1 { b } else { a });
    Ok(check(
        "hermiticity",
        worst.1 < HERMITIAN_TOL,
        format!("largest defect {:e} ({})", worst.1, if worst.0.is_empty() { "all zero" } else { worst.0 }),
    ))
}

/// Dressed shift of `|1⟩|1⟩_c` from the exact static Hamiltonian against the
/// effective diagonal, at several detunings.
fn stark_shift(config: &RunConfig, hooks: &Hooks) -> Result<CheckResult, CliError> {
    let space = SpaceDescriptor::new(SystemConfig::dispersive(1))?;
    let bright = space.index_of(&[1, 1])?;
    let dark = space.index_of(&[2, 0])?;
    let mut errors = Vec::new();
    for ratio in STARK_RATIOS {
        let p = config.params_at(ratio);
        let h = dispersive_static_hamiltonian(&p, &space)?;
        let block = ComplexOperator::from_entries(
            2,
            &[
                (0, 0, h.get(bright, bright)),
                (0, 1, h.get(bright, dark)),
                (1, 0, h.get(dark, bright)),
                (1, 1, h.get(dark, dark)),
            ],
        );
        let eig = HermitianEigen::new(&block)?;
        let bare = h.get(bright, bright).re;
        let dressed = eig
            .eigenvalues
            .iter()
            .copied()
            .min_by(|a, b| (a - bare).abs().total_cmp(&(b - bare).abs()))
            .expect("two eigenvalues");
        let mut predicted = effective_hamiltonian(&p, &space)?.get(bright, bright).re;
        if hooks.flip_heff_sign {
            predicted = -predicted;
        }
        errors.push(((dressed - bare - predicted) / predicted).abs());
    }
    let bounded = errors
        .iter()
        .zip(STARK_RATIOS)
        .all(|(e, r)| *e <= 2.0 / (r * r));
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    Ok(check(
        "stark_shift",
        bounded && decreasing,
        format!("relative errors {errors:?} at ratios {STARK_RATIOS:?}"),
    ))
}

/// Step-(ii) master equation on two targets with a partly excited cavity.
fn trace_preservation(config: &RunConfig, hooks: &Hooks) -> Result<CheckResult, CliError> {
    let n = config.system.n_targets.min(2);
    let space = SpaceDescriptor::new(SystemConfig::dispersive(n))?;
    let p = config.params();
    let mut v = space.basis_state(&vec![0; space.n_subsystems()])?.amplitudes().clone();
    for pos in space.targets() {
        v = space.embed_sparse(&qutrit_hadamard(), pos)?.apply(&v);
    }
    v = space.embed_sparse(&qubit_hadamard(), space.cavity())?.apply(&v);
    let rho0 = DensityMatrix::from_pure(&PureState::new(v)?);
    let h = dispersive_static_hamiltonian(&p, &space)?;
    let collapse = collapse_operators(&p, &space)?;
    let t = make_schedule(&p, n)?.t2;
    let mut settings = config.settings();
    settings.dt_max *= hooks.dt_scale;
    let omega = EvolutionSettings::fastest_frequency(&p, n) / hooks.dt_scale;
    let run = match lindblad_evolve(&rho0, &h, &collapse, t, &settings, omega) {
        Ok(r) => r,
        Err(e) => return Ok(check("trace_preservation", false, e.to_string())),
    };
    let herm = run.rho.hermiticity_defect();
    let min_eig = run.rho.min_eigenvalue().unwrap_or(f64::NEG_INFINITY);
    let passed = run.max_trace_drift <= TRACE_TOL && herm <= RHO_HERMITIAN_TOL && min_eig >= -POSITIVITY_TOL;
    Ok(check(
        "trace_preservation",
        passed,
        format!(
            "{} steps of {:e} s: trace drift {:e}, Hermiticity defect {:e}, min eigenvalue {:e}",
            run.steps, run.dt, run.max_trace_drift, herm, min_eig
        ),
    ))
}

fn truth_table_n2(config: &RunConfig) -> Result<CheckResult, CliError> {
    let space = SpaceDescriptor::new(SystemConfig::gate(2))?;
    let rows = truth_table(&config.params(), &space)?;
    let worst = rows.iter().map(|r| r.max_error).fold(0.0, f64::max);
    Ok(check(
        "truth_table_n2",
        rows.iter().all(|r| r.matches),
        format!("{} rows, largest amplitude error {worst:e}", rows.len()),
    ))
}

/// Photon population after cavity decay alone, integrated with `steps`
/// equal steps over `t = 1/(2κ)`.
fn decayed_population(config: &RunConfig, steps: usize) -> Result<(f64, f64), CliError> {
    let kappa = if config.physics.kappa > 0.0 {
        config.physics.kappa
    } else {
        1.0 / DEFAULT_LIFETIME_S
    };
    let p = PhysicalParams {
        kappa,
        gamma_21: 0.0,
        gamma_20: 0.0,
        gamma_10: 0.0,
        ..config.params()
    };
    let space = SpaceDescriptor::new(SystemConfig::dispersive(1))?;
    let photon = space.index_of(&[0, 1])?;
    let rho0 = DensityMatrix::from_pure(&space.basis_state(&[0, 1])?);
    let t = 0.5 / kappa;
    let settings = EvolutionSettings {
        dt_max: t / steps as f64,
        max_steps: steps + 1,
        ..EvolutionSettings::default()
    };
    let zero = ComplexOperator::zeros(space.total_dim());
    let run = lindblad_evolve(&rho0, &zero, &collapse_operators(&p, &space)?, t, &settings, 0.0)?;
    let exact = (-2.0 * kappa * t).exp();
    Ok((run.rho.matrix()[(photon, photon)].re, exact))
}

fn cavity_decay(config: &RunConfig) -> Result<CheckResult, CliError> {
    let (got, exact) = decayed_population(config, 1000)?;
    let rel = ((got - exact) / exact).abs();
    Ok(check(
        "cavity_decay",
        rel <= DECAY_REL_TOL,
        format!("population {got} against {exact}, relative error {rel:e}"),
    ))
}

fn rk4_order(config: &RunConfig) -> Result<CheckResult, CliError> {
    let (coarse, exact) = decayed_population(config, 8)?;
    let (fine, _) = decayed_population(config, 16)?;
    let ratio = (coarse - exact).abs() / (fine - exact).abs();
    Ok(check(
        "rk4_order",
        (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&ratio),
        format!("error ratio {ratio} on halving the step"),
    ))
}

