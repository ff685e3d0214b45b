//! Hand-checkable values at small sizes.

use sd2_core::fock::{apply_cartesian, apply_circular, CartesianState, CircularState, OperatorId, StateSum};
use sd2_core::interbasis::transition_coeff;
use sd2_core::numerics::{c, re};
use sd2_core::qdiag::{assemble_q_eigvecs, isotropic_coeffs, solve_recurrence};
use sd2_core::repmat::{b2_states, build, build_circular, explicit, BasisOrdering, Sign};
use sd2_core::specfun::{cbi_monic, heun_series, krawtchouk_monic, mu_number, CbiParams, HeunParams};
use sd2_core::{OscParams, Parity};

fn p(n: usize, x: f64, y: f64) -> OscParams {
    OscParams::new(n, x, y).unwrap()
}

#[test]
fn mu_number_of_three() {
    assert_eq!(mu_number(3, 0.5), 4.0);
}

#[test]
fn first_krawtchouk_and_cbi_steps() {
    for level in 1..6 {
        for x in [0.0, 1.0, 2.5] {
            assert!((krawtchouk_monic(1, x, level).unwrap() - (x - level as f64 / 2.0)).abs() < 1e-15);
        }
    }
    let q = CbiParams::new(0.3, 0.0, 1.7, 0.4);
    assert_eq!(cbi_monic(1, 0.8, &q).unwrap(), 0.8);
}

#[test]
fn heun_first_coefficient() {
    let h = HeunParams { a: -1.0, q: 0.8, alpha: -4.0, beta: 1.0, gamma: -4.0, delta: 1.4 };
    let c = heun_series(&h, 1).unwrap();
    assert!((c[1] - h.q / (h.a * h.gamma)).abs() < 1e-15);
}

#[test]
fn ladder_and_reflection_actions() {
    let q = p(3, 0.5, 0.0);
    let s = apply_cartesian(OperatorId::AMinusX, CartesianState::new(3, 0), &q).unwrap();
    assert_eq!(s, StateSum::from_terms([(re(4.0), CartesianState::new(2, 0))]));
    let s = apply_cartesian(OperatorId::Rx, CartesianState::new(1, 2), &q).unwrap();
    assert_eq!(s, StateSum::from_terms([(re(-1.0), CartesianState::new(1, 2))]));
    let q = p(4, 0.3, 0.7);
    let s = apply_circular(OperatorId::AMinusL, CircularState::new(2, 2), &q).unwrap();
    assert_eq!(s, StateSum::from_terms([(re(2.0), CircularState::new(1, 2))]));
    let s = apply_circular(OperatorId::Ry, CircularState::new(1, 2), &q).unwrap();
    assert_eq!(s, StateSum::single(CircularState::new(2, 1)));
}

#[test]
fn b2_order_at_three_quanta() {
    let order: Vec<_> = b2_states(3).iter().map(|s| (s.nl, s.nr)).collect();
    assert_eq!(order, vec![(1, 2), (2, 1), (0, 3), (3, 0)]);
}

#[test]
fn j2_diagonal_in_b2_without_reflections() {
    let g = build_circular(&p(4, 0.0, 0.0), BasisOrdering::CircularB2).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            if i != j {
                assert_eq!(g.j2[(i, j)], c(0.0, 0.0));
            }
        }
    }
}

#[test]
fn q_diagonal_blocks() {
    let q = p(4, 0.3, 0.7);
    let m = explicit::q_b2(&q);
    let z = q.zeta();
    for k in 1..=2usize {
        let kf = k as f64;
        let (i, j) = (2 * k - 1, 2 * k);
        assert!((m[(i, i)] - c(-0.5, z)).norm() < 1e-15);
        assert!((m[(i, j)] - c(-z, -2.0 * kf - z)).norm() < 1e-15);
        assert!((m[(j, i)] - c(-z, 2.0 * kf + z)).norm() < 1e-15);
        assert!((m[(j, j)] - c(-0.5, -z)).norm() < 1e-15);
    }
    let q = p(3, 0.3, 0.7);
    let m = build_circular(&q, BasisOrdering::CircularB2).unwrap().q_operator();
    let (z, xi) = (q.zeta(), q.xi());
    assert!((m[(0, 0)] - c(0.5, xi)).norm() < 1e-14);
    assert!((m[(0, 1)] - c(-xi, z + 1.0)).norm() < 1e-14);
    assert!((m[(1, 0)] - c(-xi, -z - 1.0)).norm() < 1e-14);
    assert!((m[(1, 1)] - c(0.5, -xi)).norm() < 1e-14);
}

#[test]
fn energy_degeneracy() {
    for n in 0..6 {
        let q = p(n, 0.3, 1.5);
        let g = build(&q, BasisOrdering::CartesianV).unwrap();
        for i in 0..=n {
            assert_eq!(g.h[(i, i)], re(q.energy()));
        }
    }
}

#[test]
fn transition_first_row() {
    for level in 1..7 {
        for j in 0..=level {
            assert_eq!(transition_coeff(1, j, level).unwrap(), 2.0 * j as f64 - level as f64);
        }
    }
}

#[test]
fn isotropic_sequences() {
    let c = solve_recurrence(4, &p(8, 0.7, 0.7)).unwrap();
    assert!(c.a.iter().skip(1).step_by(2).all(|x| x.abs() < 1e-14));
    let c = solve_recurrence(3, &p(7, 0.4, 0.4)).unwrap();
    for n in 0..=3 {
        assert!((c.a[n] - if n % 2 == 0 { 1.0 } else { -1.0 } * c.b[n]).abs() < 1e-14);
    }
    let e = isotropic_coeffs(1, 0.9, Parity::Even).unwrap();
    assert!((e.a[2] - e.a[0]).abs() < 1e-15);
    let o = isotropic_coeffs(2, 0.9, Parity::Odd).unwrap();
    assert!((o.a[1] - 0.9 / 2.9).abs() < 1e-15);
}

#[test]
fn terminating_components() {
    let t = assemble_q_eigvecs(&p(8, -0.4, 1.5)).unwrap();
    for k in 1..=4 {
        assert_eq!(t.component(k, Sign::Plus, k, Sign::Plus).unwrap(), c(0.0, -1.0));
        assert_eq!(t.component(k, Sign::Plus, k, Sign::Minus).unwrap(), c(1.0, 0.0));
    }
}
