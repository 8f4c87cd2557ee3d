// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

use cqed_gate::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = SystemConfig> {
    (1usize..=3, 1usize..=2, any::<bool>()).prop_map(|(n, c, ctrl)| SystemConfig::new(n, c, ctrl))
}

fn random_state(dim: usize, seed: &[(f64, f64)]) -> PureState {
    let v = DVector::from_iterator(dim, (0..dim).map(|i| {
        let (a, b) = seed[i % seed.len()];
        C64::new(a + 0.01 * i as f64, b - 0.02 * i as f64)
    }));
    PureState::normalized(v).unwrap()
}

fn random_density(dim: usize, seed: &[(f64, f64)]) -> DensityMatrix {
    let a = DMatrix::from_fn(dim, dim, |i, j| {
        let (x, y) = seed[(i * dim + j) % seed.len()];
        C64::new(x + 0.1 * i as f64, y - 0.05 * j as f64)
    });
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m.unscale(tr.re)).unwrap()
}

fn local_op(dim: usize, seed: &[(f64, f64)]) -> ComplexOperator {
    ComplexOperator::from_matrix(DMatrix::from_fn(dim, dim, |i, j| {
        let (x, y) = seed[(i * 7 + j * 3) % seed.len()];
        C64::new(x, y)
    }))
    .unwrap()
}

fn seeds() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn index_round_trip(cfg in config(), pick in 0usize..10_000) {
        let s = build_space(cfg).unwrap();
        let i = pick % s.total_dim();
        let labels = s.labels_of(i);
        prop_assert_eq!(s.index_of(&labels).unwrap(), i);
        for (pos, &l) in labels.iter().enumerate() {
            prop_assert!(l < s.subsystem_dims()[pos]);
            prop_assert_eq!(s.label_at(i, pos), l);
        }
        // cavity digit varies fastest
        let last = labels.len() - 1;
        if labels[last] + 1 < s.subsystem_dims()[last] {
            prop_assert_eq!(s.with_label(i, last, labels[last] + 1), i + 1);
        }
    }

    #[test]
    fn embed_matches_explicit_kronecker(cfg in config(), pos_pick in 0usize..8, seed in seeds()) {
        let s = build_space(cfg).unwrap();
        let pos = pos_pick % s.n_subsystems();
        let op = local_op(s.subsystem_dims()[pos], &seed);
        let mut expected = ComplexOperator::identity(1);
        for (k, &d) in s.subsystem_dims().iter().enumerate() {
            let factor = if k == pos { op.clone() } else { ComplexOperator::identity(d) };
            expected = expected.kron(&factor);
        }
        let got = s.embed(&op, pos).unwrap();
        prop_assert!((&got - &expected).max_abs() < 1e-14);
        prop_assert!((&s.embed_sparse(&op, pos).unwrap().to_dense() - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_of_product(seed in seeds(), seed2 in seeds(), n in 1usize..=2) {
        // control ⊗ rest, traced down to the control
        let s = build_space(SystemConfig::gate(n)).unwrap();
        let rest = s.total_dim() / 2;
        let a = random_density(2, &seed);
        let b = random_density(rest, &seed2);
        let joint = a.kron(&b);
        let reduced = s.partial_trace(&joint, &[0]).unwrap();
        prop_assert!((reduced.matrix() - a.matrix()).iter().all(|z| z.norm() < 1e-13));
        let everything: Vec<usize> = (0..s.n_subsystems()).collect();
        let same = s.partial_trace(&joint, &everything).unwrap();
        prop_assert!((same.matrix() - joint.matrix()).iter().all(|z| z.norm() < 1e-13));
        let cav = s.partial_trace(&joint, &[s.cavity()]).unwrap();
        prop_assert!((cav.trace() - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fidelity_is_linear_and_bounded(seed in seeds(), seed2 in seeds(), p in 0.0f64..1.0) {
        let dim = 6;
        let r1 = random_density(dim, &seed);
        let r2 = random_density(dim, &seed2);
        let psi = random_state(dim, &seed2);
        let mix = DensityMatrix::new(r1.matrix().scale(p) + r2.matrix().scale(1.0 - p)).unwrap();
        let f1 = gate_fidelity(&r1, &psi).unwrap();
        let f2 = gate_fidelity(&r2, &psi).unwrap();
        let fm = gate_fidelity(&mix, &psi).unwrap();
        prop_assert!((fm - (p * f1 + (1.0 - p) * f2)).abs() < 1e-12);
        for f in [f1, f2, fm] {
            prop_assert!((0.0..=1.0).contains(&f));
        }
    }

    #[test]
    fn ideal_gate_is_linear(seed in seeds(), alpha in (-1.0f64..1.0, -1.0f64..1.0)) {
        let s = build_space(SystemConfig::gate(2)).unwrap();
        let p = PhysicalParams::standard();
        let u = cqed_gate::protocol::logical_basis_state(&s, 3).unwrap();
        let raw = random_state(s.total_dim(), &seed).into_amplitudes();
        let mut v = DVector::zeros(s.total_dim());
        for i in cqed_gate::protocol::logical_indices(&s).unwrap() {
            v[i] = raw[i];
        }
        let v = PureState::normalized(v).unwrap();
        let a = C64::new(alpha.0, alpha.1);
        let b = C64::new(0.6, -0.2);
        let combo = PureState::normalized(u.amplitudes() * a + v.amplitudes() * b).unwrap();
        let scale = (u.amplitudes() * a + v.amplitudes() * b).norm();
        let run = |x: &PureState| match run_ideal(x, &p, &s).unwrap().final_state {
            FinalState::Pure(y) => y.into_amplitudes(),
            FinalState::Mixed(_) => unreachable!(),
        };
        let lhs = run(&combo) * C64::from(scale);
        let rhs = run(&u) * a + run(&v) * b;
        prop_assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-10));
    }
}
