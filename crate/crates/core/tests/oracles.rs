// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical results checked against closed forms worked out independently
//! of the library.

use std::f64::consts::PI;

use cqed_gate::hamiltonians::{annihilation, transition};
use cqed_gate::propagation::schrodinger_rk4;
use cqed_gate::*;

fn unit(ratio: f64) -> PhysicalParams {
    PhysicalParams {
        g_r: 1.3,
        g: 1.0,
        delta_c: ratio,
        kappa: 0.0,
        gamma_21: 0.0,
        gamma_20: 0.0,
        gamma_10: 0.0,
        omega_c: 100.0 - ratio,
        omega_21: 100.0,
    }
}

/// Eigenvalue whose eigenvector has the largest weight on basis state `i`.
fn dressed_energy(h: &ComplexOperator, i: usize) -> f64 {
    let eig = HermitianEigen::new(h).unwrap();
    let k = (0..h.dim())
        .max_by(|&a, &b| eig.eigenvectors[(i, a)].norm().total_cmp(&eig.eigenvectors[(i, b)].norm()))
        .unwrap();
    eig.eigenvalues[k]
}

#[test]
fn single_excitation_stark_shift() {
    let space = build_space(SystemConfig::dispersive(1)).unwrap();
    let bright = space.index_of(&[1, 1]).unwrap();
    let mut previous = f64::INFINITY;
    for ratio in [20.0, 50.0, 100.0] {
        let p = unit(ratio);
        let h = dispersive_static_hamiltonian(&p, &space).unwrap();
        let dressed = dressed_energy(&h, bright);
        // two-level block [[-Δ, g], [g, 0]]
        let closed_form = 0.5 * (-ratio - (ratio * ratio + 4.0).sqrt());
        assert!((dressed - closed_form).abs() < 1e-12 * ratio);

        let predicted = effective_hamiltonian(&p, &space).unwrap().get(bright, bright).re;
        assert!((predicted + 1.0 / ratio).abs() < 1e-15);
        let rel = ((dressed + ratio - predicted) / predicted).abs();
        assert!(rel <= 2.0 / (ratio * ratio), "ratio {ratio}: relative error {rel}");
        assert!(rel < previous);
        previous = rel;
    }
}

#[test]
fn two_target_stark_shift_adds() {
    // |1,1;1> couples to |2,1;0> and |1,2;0>, a bright two-level pair with
    // coupling √2 g
    let space = build_space(SystemConfig::dispersive(2)).unwrap();
    let bright = space.index_of(&[1, 1, 1]).unwrap();
    for ratio in [20.0, 50.0, 100.0] {
        let p = unit(ratio);
        let h = dispersive_static_hamiltonian(&p, &space).unwrap();
        let dressed = dressed_energy(&h, bright);
        let closed_form = 0.5 * (-ratio - (ratio * ratio + 8.0).sqrt());
        assert!((dressed - closed_form).abs() < 1e-12 * ratio);
        let predicted = effective_hamiltonian(&p, &space).unwrap().get(bright, bright).re;
        assert!((predicted + 2.0 / ratio).abs() < 1e-15);
        assert!(((dressed + ratio - predicted) / predicted).abs() <= 4.0 / (ratio * ratio));
    }
}

fn product_state(space: &SpaceDescriptor, factors: &[Vec<f64>]) -> PureState {
    let mut psi = PureState::normalized(factors[0].iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>().into()).unwrap();
    for f in &factors[1..] {
        let v = PureState::normalized(f.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>().into()).unwrap();
        psi = psi.kron(&v);
    }
    assert_eq!(psi.dim(), space.total_dim());
    psi
}

#[test]
fn frame_correction_matches_time_dependent_stepping() {
    let space = build_space(SystemConfig::dispersive(2)).unwrap();
    let p = unit(5.0);
    let psi0 = product_state(&space, &[vec![1.0, 1.0, 0.0], vec![0.3, 1.0, 0.0], vec![1.0, 0.8]]);
    let h = dispersive_static_hamiltonian(&p, &space).unwrap();
    for t in [0.7, 5.0 * PI] {
        let static_frame = unitary_propagate(&psi0, &h, t).unwrap();
        let corrected = static_frame.apply(&frame_correction(&p, &space, t));
        let stepped = schrodinger_rk4(
            &psi0,
            |s| dispersive_interaction_hamiltonian(&p, &space, s).unwrap(),
            t,
            (t * 4000.0) as usize,
        )
        .unwrap();
        let err = corrected.max_amplitude_error(&stepped);
        assert!(err < 1e-8, "t = {t}: {err:e}");
    }
}

#[test]
fn frame_correction_is_identity_on_vacuum() {
    let space = build_space(SystemConfig::dispersive(2)).unwrap();
    let f = frame_correction(&unit(7.0), &space, 1.234);
    for i in 0..space.total_dim() {
        let photons = space.label_at(i, space.cavity());
        let expected = C64::from_polar(1.0, -7.0 * 1.234 * photons as f64);
        assert!((f.get(i, i) - expected).norm() < 1e-15);
    }
    assert!(f.is_diagonal(0.0));
}

#[test]
fn resonant_closed_form_matches_exponential() {
    let space = build_space(SystemConfig::gate(2)).unwrap();
    let p = unit(10.0);
    let h = jc_hamiltonian(&p, &space).unwrap();
    for t in [0.1, PI / (2.0 * p.g_r), 3.0 * PI / (2.0 * p.g_r), 2.9] {
        for i in 0..space.total_dim() {
            let labels = space.labels_of(i);
            if labels[0] == 1 && labels[3] == 1 {
                continue; // two excitations exceed the cutoff
            }
            let psi = space.basis_state(&labels).unwrap();
            let a = jc_propagate(&psi, &p, t, &space).unwrap();
            let b = unitary_propagate(&psi, &h, t).unwrap();
            assert!(a.max_amplitude_error(&b) < 1e-10);
        }
    }
    // closed form for |1>|0>_c
    let t = 0.4;
    let psi = space.basis_state(&[1, 0, 0, 0]).unwrap();
    let out = jc_propagate(&psi, &p, t, &space).unwrap();
    let swapped = space.index_of(&[0, 0, 0, 1]).unwrap();
    let stay = space.index_of(&[1, 0, 0, 0]).unwrap();
    assert!((out.amplitudes()[stay] - C64::new((p.g_r * t).cos(), 0.0)).norm() < 1e-14);
    assert!((out.amplitudes()[swapped] - C64::new(0.0, -(p.g_r * t).sin())).norm() < 1e-14);
}

#[test]
fn dispersive_limit_flips_sign() {
    let space = build_space(SystemConfig::dispersive(1)).unwrap();
    let p = unit(100.0);
    let t2 = PI * p.delta_c / (p.g * p.g);
    let psi = space.basis_state(&[1, 1]).unwrap();
    let h = dispersive_static_hamiltonian(&p, &space).unwrap();
    let out = unitary_propagate(&psi, &h, t2).unwrap().apply(&frame_correction(&p, &space, t2));
    let overlap = psi.inner(&out);
    assert!(overlap.norm() >= 0.999);
    assert!((overlap + C64::new(1.0, 0.0)).norm() < 0.05, "{overlap}");
}

fn cavity_only(kappa: f64) -> (SpaceDescriptor, PhysicalParams, Vec<CollapseOperator>) {
    let space = build_space(SystemConfig::dispersive(1)).unwrap();
    let p = PhysicalParams {
        kappa,
        ..unit(10.0)
    };
    let c = collapse_operators(&p, &space).unwrap();
    (space, p, c)
}

fn photon_after(kappa: f64, t: f64, steps: usize) -> f64 {
    let (space, _, collapse) = cavity_only(kappa);
    let rho0 = DensityMatrix::from_pure(&space.basis_state(&[0, 1]).unwrap());
    let settings = EvolutionSettings {
        dt_max: t / steps as f64,
        ..EvolutionSettings::default()
    };
    let zero = ComplexOperator::zeros(space.total_dim());
    let run = lindblad_evolve(&rho0, &zero, &collapse, t, &settings, 0.0).unwrap();
    assert_eq!(run.steps, steps);
    let i = space.index_of(&[0, 1]).unwrap();
    run.rho.matrix()[(i, i)].re
}

#[test]
fn cavity_decay_follows_closed_form() {
    let kappa: f64 = 1.0 / 3.0e-2;
    for t in [1e-3, 1e-2, 3e-2] {
        let exact = (-2.0 * kappa * t).exp();
        let got = photon_after(kappa, t, 2000);
        assert!(((got - exact) / exact).abs() < 1e-6, "t = {t}: {got} vs {exact}");
    }
}

#[test]
fn rk4_error_falls_sixteenfold_per_halving() {
    let kappa: f64 = 2.0;
    let t = 0.25;
    let exact = (-2.0 * kappa * t).exp();
    let e1 = (photon_after(kappa, t, 8) - exact).abs();
    let e2 = (photon_after(kappa, t, 16) - exact).abs();
    let ratio = e1 / e2;
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn annihilation_and_transition_elements() {
    let a = annihilation(3);
    for m in 1..=3 {
        assert!((a.get(m - 1, m) - C64::new((m as f64).sqrt(), 0.0)).norm() < 1e-15);
    }
    let s = transition(0, 2, 3);
    assert_eq!(s.get(0, 2), C64::new(1.0, 0.0));
    assert_eq!(s.max_abs(), 1.0);
    assert_eq!(s.trace(), C64::new(0.0, 0.0));
}
