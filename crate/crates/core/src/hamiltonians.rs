// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Operators of the model, with `ħ = 1` and all frequencies angular.
//!
//! The off-resonant coupling of the targets to the cavity is time dependent in
//! the interaction picture. [`dispersive_static_hamiltonian`] is the same
//! dynamics in the frame rotating with the detuning,
//!
//! ```text
//! H_static = -Δc a†a + g Σ_k (a† |1⟩⟨2|_k + h.c.),
//! ```
//!
//! and [`frame_correction`] maps a static-frame state back to the interaction
//! picture: `ψ_int(t) = exp(-iΔc t a†a) ψ_static(t)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
// unused when std is linked and f64 has inherent math methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, SparseOperator, ONE};
use crate::space::SpaceDescriptor;

/// Rates and frequencies of the setup, all in rad/s or 1/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Resonant control–cavity coupling.
    pub g_r: f64,
    /// Off-resonant target–cavity coupling on the |1⟩↔|2⟩ transition.
    pub g: f64,
    /// Detuning `ω_21 - ω_c`.
    pub delta_c: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    pub gamma_21: f64,
    pub gamma_20: f64,
    pub gamma_10: f64,
    /// Cavity frequency; only `delta_c` enters the dynamics.
    pub omega_c: f64,
    /// Target |1⟩↔|2⟩ frequency; only `delta_c` enters the dynamics.
    pub omega_21: f64,
}

/// Coupling used for the four-target example: `2π × 50 kHz`.
pub const DEFAULT_G: f64 = 2.0 * PI * 50.0e3;
/// Common lifetime of the cavity and of every atomic decay path.
pub const DEFAULT_LIFETIME_S: f64 = 3.0e-2;
/// |1⟩↔|2⟩ transition frequency of the Rydberg targets, `2π × 51.1 GHz`.
pub const DEFAULT_OMEGA_21: f64 = 2.0 * PI * 51.1e9;

/// Minimum `Δc / (√n g)` below which the dispersive picture is flagged.
pub const DISPERSIVE_MARGIN: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamWarning {
    /// `Δc < 5 √n g`: phase-only dynamics is a poor approximation.
    WeakDispersive { delta_c: f64, required: f64 },
}

impl core::fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::WeakDispersive { delta_c, required } => write!(
                f,
                "detuning {delta_c:e} rad/s is below the dispersive threshold {required:e} rad/s"
            ),
        }
    }
}

impl PhysicalParams {
    /// Four-target example values at `Δc/g = 10`, `κ⁻¹ = γ⁻¹ = 3×10⁻² s`,
    /// `g_r = g`.
    pub fn standard() -> Self {
        let g = DEFAULT_G;
        let delta_c = 10.0 * g;
        let rate = 1.0 / DEFAULT_LIFETIME_S;
        Self {
            g_r: g,
            g,
            delta_c,
            kappa: rate,
            gamma_21: rate,
            gamma_20: rate,
            gamma_10: rate,
            omega_c: DEFAULT_OMEGA_21 - delta_c,
            omega_21: DEFAULT_OMEGA_21,
        }
    }

    /// Same parameters with `Δc = ratio · g`; `ω_c` follows.
    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.delta_c = ratio * self.g;
        self.omega_c = self.omega_21 - self.delta_c;
        self
    }

    /// Same parameters with every decay rate set to zero.
    pub fn without_dissipation(mut self) -> Self {
        self.kappa = 0.0;
        self.gamma_21 = 0.0;
        self.gamma_20 = 0.0;
        self.gamma_10 = 0.0;
        self
    }

    pub fn ratio(&self) -> f64 {
        self.delta_c / self.g
    }

    /// Checks signs and finiteness; returns soft warnings for `n` targets.
    pub fn validate(&self, n_targets: usize) -> Result<Vec<ParamWarning>> {
        let fields = [
            ("g_r", self.g_r),
            ("g", self.g),
            ("delta_c", self.delta_c),
            ("kappa", self.kappa),
            ("gamma_21", self.gamma_21),
            ("gamma_20", self.gamma_20),
            ("gamma_10", self.gamma_10),
            ("omega_c", self.omega_c),
            ("omega_21", self.omega_21),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        for (name, v) in [("g_r", self.g_r), ("g", self.g), ("delta_c", self.delta_c)] {
            if v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be > 0")));
            }
        }
        let mut warnings = Vec::new();
        let required = DISPERSIVE_MARGIN * (n_targets as f64).sqrt() * self.g;
        if self.delta_c < required {
            warnings.push(ParamWarning::WeakDispersive {
                delta_c: self.delta_c,
                required,
            });
        }
        Ok(warnings)
    }
}

/// Fock-space lowering operator with `cutoff + 1` levels.
pub fn annihilation(cutoff: usize) -> ComplexOperator {
    let entries: Vec<_> = (1..=cutoff)
        .map(|m| (m - 1, m, C64::new((m as f64).sqrt(), 0.0)))
        .collect();
    ComplexOperator::from_entries(cutoff + 1, &entries)
}

/// `|to⟩⟨from|` on a `dim`-level system.
pub fn transition(to: usize, from: usize, dim: usize) -> ComplexOperator {
    ComplexOperator::from_entries(dim, &[(to, from, ONE)])
}

pub(crate) fn annihilation_sparse(space: &SpaceDescriptor) -> SparseOperator {
    let cav = space.cavity();
    space
        .embed_sparse(&annihilation(space.fock_cutoff()), cav)
        .expect("cavity dimension matches cutoff")
}

fn target_transition(space: &SpaceDescriptor, k: usize, to: usize, from: usize) -> SparseOperator {
    let pos = space.target(k).expect("target index in range");
    space
        .embed_sparse(&transition(to, from, 3), pos)
        .expect("target dimension is 3")
}

fn require_targets(space: &SpaceDescriptor) -> Result<()> {
    if space.n_targets() == 0 {
        return Err(Error::MissingSubsystem("target"));
    }
    Ok(())
}

/// `a†a` on the full space.
pub fn photon_number(space: &SpaceDescriptor) -> ComplexOperator {
    let a = annihilation_sparse(space);
    a.dagger().mul_sparse(&a).to_dense()
}

/// `a†a + |1⟩⟨1|_control`, conserved by the resonant coupling.
pub fn jc_excitation_number(space: &SpaceDescriptor) -> Result<ComplexOperator> {
    let c = space.control()?;
    let a = annihilation_sparse(space);
    let excited = space.embed_sparse(&transition(1, 1, 2), c)?;
    Ok(a.dagger().mul_sparse(&a).add(&excited).to_dense())
}

/// `a†a + Σ_k |2⟩⟨2|_k`, conserved by the off-resonant coupling.
pub fn dispersive_excitation_number(space: &SpaceDescriptor) -> ComplexOperator {
    let a = annihilation_sparse(space);
    let mut n = a.dagger().mul_sparse(&a);
    for k in 0..space.n_targets() {
        n = n.add(&target_transition(space, k, 2, 2));
    }
    n.to_dense()
}

pub(crate) fn jc_hamiltonian_sparse(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<SparseOperator> {
    let c = space.control()?;
    let a = annihilation_sparse(space);
    let lower = space.embed_sparse(&transition(0, 1, 2), c)?;
    let emit = a.dagger().mul_sparse(&lower);
    Ok(emit.add(&emit.dagger()).scale(C64::new(params.g_r, 0.0)))
}

/// Resonant control–cavity coupling `g_r (a† |0⟩⟨1|_c + h.c.)`.
pub fn jc_hamiltonian(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<ComplexOperator> {
    Ok(jc_hamiltonian_sparse(params, space)?.to_dense())
}

pub(crate) fn dispersive_static_sparse(
    params: &PhysicalParams,
    space: &SpaceDescriptor,
) -> Result<SparseOperator> {
    require_targets(space)?;
    let a = annihilation_sparse(space);
    let adag = a.dagger();
    let mut h = adag.mul_sparse(&a).scale(C64::new(-params.delta_c, 0.0));
    for k in 0..space.n_targets() {
        let emit = adag.mul_sparse(&target_transition(space, k, 1, 2));
        h = h.add(&emit.add(&emit.dagger()).scale(C64::new(params.g, 0.0)));
    }
    Ok(h)
}

/// Off-resonant coupling in the frame rotating at the detuning (see module
/// docs). Level |0⟩ of every target is untouched.
pub fn dispersive_static_hamiltonian(
    params: &PhysicalParams,
    space: &SpaceDescriptor,
) -> Result<ComplexOperator> {
    Ok(dispersive_static_sparse(params, space)?.to_dense())
}

/// Interaction-picture coupling `g Σ_k (e^{-iΔc t} a† |1⟩⟨2|_k + h.c.)`.
pub fn dispersive_interaction_hamiltonian(
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    t: f64,
) -> Result<ComplexOperator> {
    require_targets(space)?;
    let a = annihilation_sparse(space);
    let adag = a.dagger();
    let phase = C64::from_polar(params.g, -params.delta_c * t);
    let mut h = SparseOperator::new(space.total_dim(), Vec::new());
    for k in 0..space.n_targets() {
        let emit = adag.mul_sparse(&target_transition(space, k, 1, 2)).scale(phase);
        h = h.add(&emit).add(&emit.dagger());
    }
    Ok(h.to_dense())
}

/// Diagonal `exp(-iΔc t a†a)` taking static-frame states to the interaction
/// picture.
pub fn frame_correction(params: &PhysicalParams, space: &SpaceDescriptor, t: f64) -> ComplexOperator {
    let cav = space.cavity();
    let diag: Vec<C64> = (0..space.total_dim())
        .map(|i| {
            let photons = space.label_at(i, cav) as f64;
            C64::from_polar(1.0, -params.delta_c * t * photons)
        })
        .collect();
    ComplexOperator::from_diagonal(&diag)
}

/// Second-order effective Hamiltonian of the off-resonant coupling:
///
/// ```text
/// -(g²/Δc) Σ_k (a†a |1⟩⟨1|_k - a a† |2⟩⟨2|_k)
///   + (g²/Δc) Σ_{k<k'} (|2⟩⟨1|_k |1⟩⟨2|_k' + |1⟩⟨2|_k |2⟩⟨1|_k')
/// ```
///
/// Each unordered target pair carries one exchange term of strength `g²/Δc`.
pub fn effective_hamiltonian(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<ComplexOperator> {
    require_targets(space)?;
    if params.delta_c == 0.0 {
        return Err(Error::InvalidParams("effective Hamiltonian needs delta_c != 0".into()));
    }
    let lambda = params.g * params.g / params.delta_c;
    let a = annihilation_sparse(space);
    let adag = a.dagger();
    let n_ph = adag.mul_sparse(&a);
    // a a† written as 1 + a†a so the top Fock level is not truncated away
    let identity = SparseOperator::new(
        space.total_dim(),
        (0..space.total_dim()).map(|i| (i, i, ONE)).collect(),
    );
    let n_ph_plus_one = n_ph.add(&identity);
    let n = space.n_targets();
    let mut h = SparseOperator::new(space.total_dim(), Vec::new());
    for k in 0..n {
        let stark_1 = n_ph.mul_sparse(&target_transition(space, k, 1, 1));
        let stark_2 = n_ph_plus_one.mul_sparse(&target_transition(space, k, 2, 2));
        h = h.add(&stark_1.scale(C64::new(-lambda, 0.0)));
        h = h.add(&stark_2.scale(C64::new(lambda, 0.0)));
    }
    for k in 0..n {
        for kp in (k + 1)..n {
            let raise_k = target_transition(space, k, 2, 1);
            let lower_kp = target_transition(space, kp, 1, 2);
            let swap = raise_k.mul_sparse(&lower_kp);
            h = h.add(&swap.add(&swap.dagger()).scale(C64::new(lambda, 0.0)));
        }
    }
    Ok(h.to_dense())
}

/// Origin of a dissipation channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    Cavity,
    /// Target `target` decaying from level `from` to level `to`.
    Atomic { target: usize, from: usize, to: usize },
}

/// Jump operator `L` entering the dissipator with the factor-two convention
/// `rate · (2 L ρ L† - L†L ρ - ρ L†L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseOperator {
    pub rate: f64,
    pub channel: Channel,
    pub operator: ComplexOperator,
}

/// Cavity decay followed by the |2⟩→|1⟩, |2⟩→|0⟩ and |1⟩→|0⟩ decay of every
/// target: `1 + 3n` channels.
pub fn collapse_operators(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<Vec<CollapseOperator>> {
    require_targets(space)?;
    let n = space.n_targets();
    let mut out = Vec::with_capacity(1 + 3 * n);
    out.push(CollapseOperator {
        rate: params.kappa,
        channel: Channel::Cavity,
        operator: annihilation_sparse(space).to_dense(),
    });
    for (rate, from, to) in [
        (params.gamma_21, 2, 1),
        (params.gamma_20, 2, 0),
        (params.gamma_10, 1, 0),
    ] {
        for k in 0..n {
            out.push(CollapseOperator {
                rate,
                channel: Channel::Atomic { target: k, from, to },
                operator: target_transition(space, k, to, from).to_dense(),
            });
        }
    }
    Ok(out)
}

/// Diagonal logical gate on `n + 1` qubits (control is the most significant
/// bit): `-1` per target in |1⟩ when the control is |1⟩.
pub fn ideal_gate_unitary(n: usize) -> ComplexOperator {
    let dim = 1usize << (n + 1);
    let diag: Vec<C64> = (0..dim).map(|i| C64::new(ideal_gate_sign(n, i), 0.0)).collect();
    ComplexOperator::from_diagonal(&diag)
}

/// Diagonal entry of [`ideal_gate_unitary`] for logical index `index`.
pub fn ideal_gate_sign(n: usize, index: usize) -> f64 {
    let control = (index >> n) & 1;
    let targets_set = (index & ((1 << n) - 1)).count_ones();
    if control == 1 && targets_set % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_space, SystemConfig};

    fn params() -> PhysicalParams {
        PhysicalParams {
            g_r: 1.3,
            g: 0.7,
            delta_c: 9.0,
            kappa: 0.1,
            gamma_21: 0.2,
            gamma_20: 0.3,
            gamma_10: 0.4,
            omega_c: 100.0,
            omega_21: 109.0,
        }
    }

    #[test]
    fn jc_matrix_elements() {
        let s = build_space(SystemConfig::new(1, 1, true)).unwrap();
        let h = jc_hamiltonian(&params(), &s).unwrap();
        let vac = s.index_of(&[0, 0, 0]).unwrap();
        assert_eq!(h.get(vac, vac), C64::new(0.0, 0.0));
        let e01 = s.index_of(&[0, 0, 1]).unwrap();
        let e10 = s.index_of(&[1, 0, 0]).unwrap();
        assert_eq!(h.get(e01, e10), C64::new(1.3, 0.0));
        assert_eq!(h.hermiticity_defect(), 0.0);
        // target label is a spectator
        let e01t = s.index_of(&[0, 2, 1]).unwrap();
        let e10t = s.index_of(&[1, 2, 0]).unwrap();
        assert_eq!(h.get(e01t, e10t), C64::new(1.3, 0.0));
    }

    #[test]
    fn jc_requires_control() {
        let s = build_space(SystemConfig::new(1, 1, false)).unwrap();
        assert_eq!(jc_hamiltonian(&params(), &s), Err(Error::MissingSubsystem("control")));
    }

    #[test]
    fn jc_conserves_excitations() {
        let s = build_space(SystemConfig::new(2, 2, true)).unwrap();
        let h = jc_hamiltonian(&params(), &s).unwrap();
        let n = jc_excitation_number(&s).unwrap();
        // √m·√m roundoff at cutoff 2
        assert!(h.commutator(&n).max_abs() < 1e-14);
    }

    #[test]
    fn dispersive_elements() {
        let s = build_space(SystemConfig::new(3, 1, false)).unwrap();
        let h = dispersive_static_hamiltonian(&params(), &s).unwrap();
        for k in 0..3 {
            let mut l1 = [0, 0, 0, 1];
            let mut l2 = [0, 0, 0, 0];
            l1[k] = 1;
            l2[k] = 2;
            let i = s.index_of(&l1).unwrap();
            let j = s.index_of(&l2).unwrap();
            assert_eq!(h.get(i, j), C64::new(0.7, 0.0));
        }
        assert_eq!(h.hermiticity_defect(), 0.0);
        let n = dispersive_excitation_number(&s);
        assert_eq!(h.commutator(&n).max_abs(), 0.0);
        // nothing couples level |0> of any target to anything else
        for i in 0..s.total_dim() {
            for j in 0..s.total_dim() {
                if i == j || h.get(i, j) == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..3 {
                    let li = s.label_at(i, k);
                    let lj = s.label_at(j, k);
                    if li != lj {
                        assert!(li != 0 && lj != 0);
                    }
                }
            }
        }
    }

    #[test]
    fn effective_elements() {
        let p = params();
        let lambda = p.g * p.g / p.delta_c;
        let s = build_space(SystemConfig::new(2, 1, false)).unwrap();
        let h = effective_hamiltonian(&p, &s).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
        let i = s.index_of(&[1, 0, 1]).unwrap();
        assert!((h.get(i, i).re + lambda).abs() < 1e-15);
        let a = s.index_of(&[1, 2, 0]).unwrap();
        let b = s.index_of(&[2, 1, 0]).unwrap();
        assert!((h.get(a, b).re - lambda).abs() < 1e-15);
        // every entry is an integer combination of ±λ terms
        for z in h.matrix().iter() {
            let r = z.re / lambda;
            assert!((r - r.round()).abs() < 1e-12 && z.im == 0.0);
        }
        // |2>|0>_c Stark shift from the a a† term
        let j = s.index_of(&[2, 0, 0]).unwrap();
        assert!((h.get(j, j).re - lambda).abs() < 1e-15);
        let zero = PhysicalParams { delta_c: 0.0, ..p };
        assert!(effective_hamiltonian(&zero, &s).is_err());
    }

    #[test]
    fn collapse_count_and_action() {
        let s = build_space(SystemConfig::new(4, 1, false)).unwrap();
        let ops = collapse_operators(&params(), &s).unwrap();
        assert_eq!(ops.len(), 13);
        assert_eq!(ops[0].channel, Channel::Cavity);
        let one = s.index_of(&[0, 0, 0, 0, 1]).unwrap();
        let vac = s.index_of(&[0, 0, 0, 0, 0]).unwrap();
        assert_eq!(ops[0].operator.get(vac, one), ONE);
        let s02 = ops
            .iter()
            .find(|c| c.channel == Channel::Atomic { target: 1, from: 2, to: 0 })
            .unwrap();
        assert_eq!(s02.rate, 0.3);
        for j in 0..s.total_dim() {
            for i in 0..s.total_dim() {
                if s02.operator.get(i, j) != C64::new(0.0, 0.0) {
                    assert_eq!(s.label_at(j, 1), 2);
                    assert_eq!(s.label_at(i, 1), 0);
                }
            }
        }
    }

    #[test]
    fn ideal_gate() {
        let u1 = ideal_gate_unitary(1);
        let d: Vec<f64> = (0..4).map(|i| u1.get(i, i).re).collect();
        assert_eq!(d, [1.0, 1.0, 1.0, -1.0]);
        let u2 = ideal_gate_unitary(2);
        assert_eq!(u2.get(7, 7), ONE);
        for i in 0..4 {
            assert_eq!(u2.get(i, i), ONE);
        }
        let u4 = ideal_gate_unitary(4);
        assert!(u4.is_diagonal(0.0));
        assert_eq!((&u4 * &u4), ComplexOperator::identity(32));
    }

    #[test]
    fn weak_dispersive_warning() {
        let p = params();
        assert!(p.validate(1).unwrap().is_empty());
        // 5·√9·0.7 = 10.5 > Δc = 9
        let w = p.validate(9).unwrap();
        assert_eq!(w.len(), 1);
        let bad = PhysicalParams { g_r: 0.0, ..p };
        assert!(bad.validate(1).is_err());
        let neg = PhysicalParams { kappa: -1.0, ..p };
        assert!(neg.validate(1).is_err());
    }
}
