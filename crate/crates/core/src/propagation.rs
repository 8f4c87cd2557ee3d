// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form and numerical time evolution.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
// unused when std is linked and f64 has inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonians::{CollapseOperator, PhysicalParams};
use crate::linalg::{ComplexOperator, HermitianEigen, SparseOperator, I};
use crate::space::SpaceDescriptor;
use crate::state::{DensityMatrix, PureState};

/// Population in target level |2⟩ above which the phase propagator refuses.
pub const LEAKAGE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4Fixed,
}

/// Step-size control for the master-equation integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionSettings {
    /// Upper bound on the step, seconds.
    pub dt_max: f64,
    pub steps_per_fastest_period: u32,
    pub method: Method,
    /// Integration aborts when more steps than this would be needed.
    pub max_steps: usize,
}

impl Default for EvolutionSettings {
    fn default() -> Self {
        Self {
            dt_max: 1.0e-6,
            steps_per_fastest_period: 50,
            method: Method::Rk4Fixed,
            max_steps: 10_000_000,
        }
    }
}

impl EvolutionSettings {
    /// `max(Δc, g √n, g_r)`.
    pub fn fastest_frequency(params: &PhysicalParams, n_targets: usize) -> f64 {
        params
            .delta_c
            .max(params.g * (n_targets as f64).sqrt())
            .max(params.g_r)
    }

    /// `min(dt_max, 2π / (ω_fast · steps_per_fastest_period))`.
    pub fn step_size(&self, omega_fast: f64) -> f64 {
        let per_period = 2.0 * PI / (omega_fast * f64::from(self.steps_per_fastest_period));
        if per_period.is_finite() && per_period > 0.0 {
            self.dt_max.min(per_period)
        } else {
            self.dt_max
        }
    }

    /// Step count and exact step for a horizon `t`.
    pub fn plan(&self, t: f64, omega_fast: f64) -> Result<(usize, f64)> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidConfig(alloc::format!("evolution time {t} is invalid")));
        }
        if t == 0.0 {
            return Ok((0, 0.0));
        }
        let target = self.step_size(omega_fast);
        if !(target > 0.0) {
            return Err(Error::InvalidConfig("step size must be positive".into()));
        }
        // slack so that t / (t / k) still plans k steps
        let steps_f = (t / target * (1.0 - 1e-12)).ceil();
        if !(steps_f <= self.max_steps as f64) {
            return Err(Error::StepBudgetExceeded {
                required: if steps_f.is_finite() { steps_f as usize } else { usize::MAX },
                budget: self.max_steps,
            });
        }
        let steps = (steps_f as usize).max(1);
        Ok((steps, t / steps as f64))
    }
}

/// Pairs `(|1⟩_c|m⟩, |0⟩_c|m+1⟩)` of basis indices coupled by the resonant
/// interaction, with their Rabi factor `√(m+1)`.
fn jc_pairs(space: &SpaceDescriptor) -> Result<Vec<(usize, usize, f64)>> {
    let c = space.control()?;
    let cav = space.cavity();
    let cutoff = space.fock_cutoff();
    let mut pairs = Vec::new();
    for i in 0..space.total_dim() {
        let m = space.label_at(i, cav);
        if space.label_at(i, c) == 1 && m < cutoff {
            let partner = space.with_label(space.with_label(i, c, 0), cav, m + 1);
            pairs.push((i, partner, ((m + 1) as f64).sqrt()));
        }
    }
    Ok(pairs)
}

/// Closed-form resonant evolution
/// `|1⟩|m⟩ → cos θ |1⟩|m⟩ - i sin θ |0⟩|m+1⟩`, `θ = g_r √(m+1) t`,
/// and the mirror rule for `|0⟩|m+1⟩`; `|0⟩|0⟩` is unchanged.
pub fn jc_propagate(
    state: &PureState,
    params: &PhysicalParams,
    t: f64,
    space: &SpaceDescriptor,
) -> Result<PureState> {
    check_dim(state.dim(), space.total_dim())?;
    let mut out = state.amplitudes().clone();
    for (excited, emitted, factor) in jc_pairs(space)? {
        let theta = params.g_r * factor * t;
        let (c, s) = (C64::new(theta.cos(), 0.0), C64::new(0.0, -theta.sin()));
        let a = out[excited];
        let b = out[emitted];
        out[excited] = c * a + s * b;
        out[emitted] = c * b + s * a;
    }
    Ok(PureState::from_vector_unchecked(out))
}

/// Matrix of [`jc_propagate`].
pub fn jc_unitary(params: &PhysicalParams, t: f64, space: &SpaceDescriptor) -> Result<SparseOperator> {
    let pairs = jc_pairs(space)?;
    let mut touched = alloc::vec![false; space.total_dim()];
    let mut entries = Vec::with_capacity(space.total_dim() + 2 * pairs.len());
    for (excited, emitted, factor) in pairs {
        let theta = params.g_r * factor * t;
        let (c, s) = (C64::new(theta.cos(), 0.0), C64::new(0.0, -theta.sin()));
        entries.extend([
            (excited, excited, c),
            (emitted, emitted, c),
            (emitted, excited, s),
            (excited, emitted, s),
        ]);
        touched[excited] = true;
        touched[emitted] = true;
    }
    for (i, done) in touched.into_iter().enumerate() {
        if !done {
            entries.push((i, i, C64::new(1.0, 0.0)));
        }
    }
    Ok(SparseOperator::new(space.total_dim(), entries))
}

/// Total population of target level |2⟩.
pub fn level_two_population(state: &PureState, space: &SpaceDescriptor) -> f64 {
    let targets = space.targets();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| targets.clone().any(|p| space.label_at(*i, p) == 2))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Dispersive phase evolution: each amplitude acquires `exp(i φ m N)` with
/// `φ = g² t / Δc`, `m` the number of targets in |1⟩ and `N` the photon
/// number. Requires an empty level |2⟩.
pub fn dispersive_phase_propagate(
    state: &PureState,
    params: &PhysicalParams,
    t: f64,
    space: &SpaceDescriptor,
) -> Result<PureState> {
    check_dim(state.dim(), space.total_dim())?;
    let leaked = level_two_population(state, space);
    if leaked > LEAKAGE_TOL {
        return Err(Error::LeakedPopulation(leaked));
    }
    if params.delta_c == 0.0 {
        return Err(Error::InvalidParams("dispersive phase needs delta_c != 0".into()));
    }
    let phi = params.g * params.g * t / params.delta_c;
    let cav = space.cavity();
    let targets = space.targets();
    let mut out = state.amplitudes().clone();
    for (i, amp) in out.iter_mut().enumerate() {
        let photons = space.label_at(i, cav);
        if photons == 0 {
            continue;
        }
        let excited = targets.clone().filter(|&p| space.label_at(i, p) == 1).count();
        *amp *= C64::from_polar(1.0, phi * (excited * photons) as f64);
    }
    Ok(PureState::from_vector_unchecked(out))
}

/// `exp(-iHt) ψ` by Hermitian eigendecomposition.
pub fn unitary_propagate(state: &PureState, h: &ComplexOperator, t: f64) -> Result<PureState> {
    check_dim(state.dim(), h.dim())?;
    let u = HermitianEigen::new(h)?.propagator(t);
    Ok(state.apply(&u))
}

/// Fixed-step RK4 for `i dψ/dt = H(t) ψ`.
pub fn schrodinger_rk4<F>(state: &PureState, hamiltonian_at: F, t: f64, steps: usize) -> Result<PureState>
where
    F: Fn(f64) -> ComplexOperator,
{
    if steps == 0 {
        return Ok(state.clone());
    }
    let dt = t / steps as f64;
    let rhs = |time: f64, v: &DVector<C64>| -> DVector<C64> { hamiltonian_at(time).apply(v) * (-I) };
    let mut psi = state.amplitudes().clone();
    check_dim(psi.len(), hamiltonian_at(0.0).dim())?;
    for step in 0..steps {
        let t0 = step as f64 * dt;
        let k1 = rhs(t0, &psi);
        let k2 = rhs(t0 + 0.5 * dt, &(&psi + &k1 * C64::from(0.5 * dt)));
        let k3 = rhs(t0 + 0.5 * dt, &(&psi + &k2 * C64::from(0.5 * dt)));
        let k4 = rhs(t0 + dt, &(&psi + &k3 * C64::from(dt)));
        psi += (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(dt / 6.0);
    }
    Ok(PureState::from_vector_unchecked(psi))
}

/// Right-hand side of the master equation,
///
/// ```text
/// dρ/dt = -i[H, ρ] + Σ_j r_j (2 L_j ρ L_j† - L_j†L_j ρ - ρ L_j†L_j),
/// ```
///
/// evaluated as `-i(H_nh ρ - (H_nh ρ)†) + Σ_j 2 r_j L_j ρ L_j†` with
/// `H_nh = H - i Σ_j r_j L_j†L_j`.
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    non_hermitian: SparseOperator,
    jumps: Vec<(f64, SparseOperator)>,
}

impl LindbladGenerator {
    pub fn new(h: &ComplexOperator, collapse: &[CollapseOperator]) -> Result<Self> {
        let scale = h.max_abs().max(1.0);
        let defect = h.hermiticity_defect();
        if defect > crate::linalg::HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(defect));
        }
        let mut non_hermitian = h.to_sparse();
        let mut jumps = Vec::new();
        for c in collapse {
            check_dim(c.operator.dim(), h.dim())?;
            if !(c.rate >= 0.0) || !c.rate.is_finite() {
                return Err(Error::InvalidParams(alloc::format!("collapse rate {} is invalid", c.rate)));
            }
            if c.rate == 0.0 {
                continue;
            }
            let l = c.operator.to_sparse();
            let ldl = l.dagger().mul_sparse(&l);
            non_hermitian = non_hermitian.add(&ldl.scale(C64::new(0.0, -c.rate)));
            jumps.push((2.0 * c.rate, l));
        }
        Ok(Self { non_hermitian, jumps })
    }

    pub fn dim(&self) -> usize {
        self.non_hermitian.dim()
    }

    /// Writes `L(ρ)` into `out`; `scratch` is clobbered.
    pub fn apply_into(&self, rho: &DMatrix<C64>, scratch: &mut DMatrix<C64>, out: &mut DMatrix<C64>) {
        let n = self.dim();
        self.non_hermitian.mul_dense_into(rho, scratch);
        for j in 0..n {
            for i in 0..n {
                // -i (X_ij - conj(X_ji))
                let d = scratch[(i, j)] - scratch[(j, i)].conj();
                out[(i, j)] = C64::new(d.im, -d.re);
            }
        }
        for (w, l) in &self.jumps {
            l.add_sandwich_into(rho, *w, out);
        }
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.dim();
        let mut scratch = DMatrix::zeros(n, n);
        let mut out = DMatrix::zeros(n, n);
        self.apply_into(rho, &mut scratch, &mut out);
        out
    }
}

/// Result of a master-equation integration.
#[derive(Clone, Debug)]
pub struct LindbladRun {
    pub rho: DensityMatrix,
    pub steps: usize,
    pub dt: f64,
    /// Largest `|Tr ρ - 1|` seen at any step.
    pub max_trace_drift: f64,
}

/// Fixed-step RK4 integration of the master equation over `[0, t]`; the
/// state is replaced by its Hermitian part after every step.
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    h: &ComplexOperator,
    collapse: &[CollapseOperator],
    t: f64,
    settings: &EvolutionSettings,
    omega_fast: f64,
) -> Result<LindbladRun> {
    check_dim(rho0.dim(), h.dim())?;
    let generator = LindbladGenerator::new(h, collapse)?;
    let (steps, dt) = settings.plan(t, omega_fast)?;
    let rho = integrate_rk4(&generator, rho0.matrix().clone(), steps, dt);
    let max_trace_drift = rho.1;
    Ok(LindbladRun {
        rho: DensityMatrix::from_matrix_unchecked(rho.0),
        steps,
        dt,
        max_trace_drift: max_trace_drift.max(rho0.trace_drift()),
    })
}

fn integrate_rk4(
    generator: &LindbladGenerator,
    mut rho: DMatrix<C64>,
    steps: usize,
    dt: f64,
) -> (DMatrix<C64>, f64) {
    let n = generator.dim();
    let mut scratch = DMatrix::zeros(n, n);
    let mut k = DMatrix::zeros(n, n);
    let mut stage = DMatrix::zeros(n, n);
    let mut acc = DMatrix::zeros(n, n);
    let half = C64::from(0.5 * dt);
    let full = C64::from(dt);
    let sixth = C64::from(dt / 6.0);
    let two = C64::from(2.0);
    let mut max_drift = 0.0f64;
    for _ in 0..steps {
        generator.apply_into(&rho, &mut scratch, &mut k);
        acc.copy_from(&k);
        stage.copy_from(&rho);
        axpy(&mut stage, half, &k);

        generator.apply_into(&stage, &mut scratch, &mut k);
        axpy(&mut acc, two, &k);
        stage.copy_from(&rho);
        axpy(&mut stage, half, &k);

        generator.apply_into(&stage, &mut scratch, &mut k);
        axpy(&mut acc, two, &k);
        stage.copy_from(&rho);
        axpy(&mut stage, full, &k);

        generator.apply_into(&stage, &mut scratch, &mut k);
        acc += &k;
        axpy(&mut rho, sixth, &acc);

        hermitize(&mut rho);
        let drift = (rho.trace() - C64::from(1.0)).norm();
        // NaN propagates as maximal drift
        max_drift = if drift.is_nan() { f64::INFINITY } else { max_drift.max(drift) };
    }
    (rho, max_drift)
}

/// `y ← y + a x`.
fn axpy(y: &mut DMatrix<C64>, a: C64, x: &DMatrix<C64>) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += a * xi;
    }
}

/// `ρ ← (ρ + ρ†)/2`.
pub fn hermitize(rho: &mut DMatrix<C64>) {
    let n = rho.nrows();
    for j in 0..n {
        rho[(j, j)].im = 0.0;
        for i in 0..j {
            let avg = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
    }
}

fn check_dim(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
