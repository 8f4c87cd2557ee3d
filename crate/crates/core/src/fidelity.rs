// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate fidelity `F = ⟨ψ_id|ρ|ψ_id⟩` and the fidelity-versus-detuning sweep.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
// unused when std is linked and f64 has inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonians::PhysicalParams;
use crate::propagation::EvolutionSettings;
use crate::protocol::{make_schedule, run_ideal, run_lossy_with, FinalState, LossyOptions};
use crate::space::{SpaceDescriptor, SystemConfig};
use crate::state::{DensityMatrix, PureState};

/// Largest imaginary part tolerated in `⟨ψ|ρ|ψ⟩`.
pub const IMAG_TOL: f64 = 1e-10;

/// `⟨ψ_id|ρ|ψ_id⟩`, clamped into `[0, 1]`.
pub fn gate_fidelity(rho: &DensityMatrix, psi_ideal: &PureState) -> Result<f64> {
    if rho.dim() != psi_ideal.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: psi_ideal.dim(),
        });
    }
    let f = rho.expectation_in(psi_ideal);
    if f.im.abs() > IMAG_TOL {
        return Err(Error::ComplexFidelity(f.im));
    }
    Ok(f.re.clamp(0.0, 1.0))
}

/// Input state used for the fidelity computation.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum InitialStatePolicy {
    /// Every atom in `(|0⟩ + |1⟩)/√2`, cavity empty.
    #[default]
    PlusStates,
    /// Any full-space state with an empty cavity.
    Custom(PureState),
}

/// `(|0⟩+|1⟩)/√2` on the control and every target, cavity in vacuum.
pub fn plus_state_input(space: &SpaceDescriptor) -> Result<PureState> {
    space.control()?;
    let mut v = DVector::zeros(space.total_dim());
    let cav = space.cavity();
    let amp = C64::new(FRAC_1_SQRT_2.powi(space.n_targets() as i32 + 1), 0.0);
    for i in 0..space.total_dim() {
        let logical = (0..space.n_subsystems())
            .filter(|&p| p != cav)
            .all(|p| space.label_at(i, p) <= 1);
        if logical && space.label_at(i, cav) == 0 {
            v[i] = amp;
        }
    }
    PureState::new(v)
}

fn resolve_input(space: &SpaceDescriptor, policy: &InitialStatePolicy) -> Result<PureState> {
    match policy {
        InitialStatePolicy::PlusStates => plus_state_input(space),
        InitialStatePolicy::Custom(p) => {
            if p.dim() != space.total_dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.total_dim(),
                    found: p.dim(),
                });
            }
            Ok(p.clone())
        }
    }
}

/// Ideal post-gate state for the chosen input.
pub fn ideal_reference_state(space: &SpaceDescriptor, policy: &InitialStatePolicy) -> Result<PureState> {
    let input = resolve_input(space, policy)?;
    // The ideal map does not depend on the (valid) rates chosen here.
    let out = run_ideal(&input, &PhysicalParams::standard(), space)?;
    match out.final_state {
        FinalState::Pure(p) => Ok(p),
        FinalState::Mixed(_) => unreachable!(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// `Δc / g` values, strictly positive and ascending.
    pub ratios: Vec<f64>,
    pub params_base: PhysicalParams,
    pub initial_state_policy: InitialStatePolicy,
    pub n_targets: usize,
    pub fock_cutoff: usize,
    pub options: LossyOptions,
}

impl SweepSpec {
    /// Four targets, single-photon cavity, default rates, ratios 2 to 40.
    pub fn standard() -> Self {
        Self {
            ratios: alloc::vec![2.0, 5.0, 10.0, 20.0, 40.0],
            params_base: PhysicalParams::standard(),
            initial_state_policy: InitialStatePolicy::PlusStates,
            n_targets: 4,
            fock_cutoff: 1,
            options: LossyOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ratios.is_empty() {
            return Err(Error::InvalidConfig("ratio list is empty".into()));
        }
        if self.ratios.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidConfig("ratios must be positive and finite".into()));
        }
        if self.ratios.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfig("ratios must be strictly ascending".into()));
        }
        SystemConfig::new(self.n_targets, self.fock_cutoff, true).validate()?;
        self.params_base.validate(self.n_targets)?;
        Ok(())
    }

    pub fn space(&self) -> Result<SpaceDescriptor> {
        SpaceDescriptor::new(SystemConfig::new(self.n_targets, self.fock_cutoff, true))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub ratio: f64,
    /// `None` when this point failed; see `error`.
    pub fidelity: Option<f64>,
    pub t2_seconds: f64,
    pub trace_drift: f64,
    pub steps: usize,
    pub cavity_vacuum_overlap: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub settings: EvolutionSettings,
    pub rows: Vec<SweepRow>,
}

/// Lossy fidelity at one detuning ratio.
pub fn sweep_point(
    spec: &SweepSpec,
    ratio: f64,
    reference: &PureState,
    settings: &EvolutionSettings,
) -> SweepRow {
    let params = spec.params_base.with_ratio(ratio);
    let t2 = make_schedule(&params, spec.n_targets).map(|s| s.t2).unwrap_or(f64::NAN);
    let attempt = || -> Result<(f64, f64, usize, f64)> {
        let space = spec.space()?;
        let input = resolve_input(&space, &spec.initial_state_policy)?;
        let out = run_lossy_with(&input, &params, &space, settings, spec.options)?;
        let stats = out.integration.unwrap_or_default();
        let rho = out.final_state.to_density();
        let f = gate_fidelity(&rho, reference)?;
        Ok((f, stats.max_trace_drift, stats.steps, out.cavity_vacuum_overlap))
    };
    match attempt() {
        Ok((f, drift, steps, vac)) => SweepRow {
            ratio,
            fidelity: Some(f),
            t2_seconds: t2,
            trace_drift: drift,
            steps,
            cavity_vacuum_overlap: vac,
            error: None,
        },
        Err(e) => SweepRow {
            ratio,
            fidelity: None,
            t2_seconds: t2,
            trace_drift: f64::NAN,
            steps: 0,
            cavity_vacuum_overlap: f64::NAN,
            error: Some(e.to_string()),
        },
    }
}

/// Sequential sweep over `spec.ratios`; a failing point is recorded in its
/// row and the sweep continues.
pub fn run_sweep(spec: &SweepSpec, settings: &EvolutionSettings) -> Result<SweepResult> {
    spec.validate()?;
    let reference = ideal_reference_state(&spec.space()?, &spec.initial_state_policy)?;
    let rows = spec
        .ratios
        .iter()
        .map(|&r| sweep_point(spec, r, &reference, settings))
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        settings: *settings,
        rows,
    })
}

/// Index of the unique interior strict maximum of `values`, if the sequence
/// rises strictly up to it and falls strictly after it.
pub fn single_interior_maximum(values: &[f64]) -> Option<usize> {
    if values.len() < 3 {
        return None;
    }
    let peak = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)?;
    if peak == 0 || peak == values.len() - 1 {
        return None;
    }
    let rising = values[..=peak].windows(2).all(|w| w[0] < w[1]);
    let falling = values[peak..].windows(2).all(|w| w[0] > w[1]);
    (rising && falling).then_some(peak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_space;

    #[test]
    fn fidelity_of_pure_orthogonal_and_mixed() {
        let s = build_space(SystemConfig::new(1, 1, false)).unwrap();
        let a = s.basis_state(&[1, 0]).unwrap();
        let b = s.basis_state(&[0, 1]).unwrap();
        assert_eq!(gate_fidelity(&DensityMatrix::from_pure(&a), &a).unwrap(), 1.0);
        assert_eq!(gate_fidelity(&DensityMatrix::from_pure(&b), &a).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(6);
        assert!((gate_fidelity(&mixed, &a).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(gate_fidelity(&DensityMatrix::maximally_mixed(3), &a).is_err());
    }

    #[test]
    fn plus_state_reference_for_one_target() {
        let s = build_space(SystemConfig::gate(1)).unwrap();
        let r = ideal_reference_state(&s, &InitialStatePolicy::PlusStates).unwrap();
        for (labels, sign) in [([0, 0, 0], 1.0), ([0, 1, 0], 1.0), ([1, 0, 0], 1.0), ([1, 1, 0], -1.0)] {
            let i = s.index_of(&labels).unwrap();
            assert!((r.amplitudes()[i] - C64::new(0.5 * sign, 0.0)).norm() < 1e-12);
        }
        assert!((r.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_spec_validation() {
        let mut spec = SweepSpec::standard();
        spec.validate().unwrap();
        spec.ratios.clear();
        assert!(spec.validate().is_err());
        spec.ratios = alloc::vec![5.0, 2.0];
        assert!(spec.validate().is_err());
        spec.ratios = alloc::vec![-1.0];
        assert!(spec.validate().is_err());
    }

    #[test]
    fn interior_maximum() {
        assert_eq!(single_interior_maximum(&[0.1, 0.5, 0.9, 0.7, 0.2]), Some(2));
        assert_eq!(single_interior_maximum(&[0.1, 0.5, 0.9]), None);
        assert_eq!(single_interior_maximum(&[0.1, 0.6, 0.5, 0.7, 0.2]), None);
    }
}
