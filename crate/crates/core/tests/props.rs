//! Randomized invariants.

use proptest::prelude::*;
use sd2_core::cli::{matrices_to_json, read_matrices_json};
use sd2_core::j2rep::{assemble_j3, block_triple, build_j3_j2basis, gauge_matrix, GaugeSeq};
use sd2_core::numerics::{dense_eigen, matmul, DenseMatrix, Tolerances, C64};
use sd2_core::qdiag::{
    closed_form_pair, isotropic_coeffs, link_coeffs, q_to_j2_with, assemble_q_eigvecs, solve_recurrence,
};
use sd2_core::repmat::{build, build_circular, spectrum_closed_form, BasisOrdering, SpectrumOp};
use sd2_core::specfun::{krawtchouk_monic, pochhammer};
use sd2_core::verify::relation_residuals;
use sd2_core::OscParams;

fn mu() -> impl Strategy<Value = f64> {
    -0.45f64..2.5
}

fn params(max_n: usize) -> impl Strategy<Value = OscParams> {
    (0..=max_n, mu(), mu()).prop_map(|(n, x, y)| OscParams::new(n, x, y).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_shift(a in -5.0f64..5.0, n in 0usize..8) {
        let lhs = pochhammer(a, n + 1);
        let rhs = pochhammer(a, n) * (a + n as f64);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn krawtchouk_three_term(level in 2usize..10, x in 0.0f64..10.0) {
        let x = x.min(level as f64);
        let l = level as f64;
        for n in 1..level {
            let nf = n as f64;
            let next = krawtchouk_monic(n + 1, x, level).unwrap();
            let rhs = (x - l / 2.0) * krawtchouk_monic(n, x, level).unwrap()
                - nf * (l - nf + 1.0) / 4.0 * krawtchouk_monic(n - 1, x, level).unwrap();
            prop_assert!((next - rhs).abs() <= 1e-9 * next.abs().max(1.0));
        }
    }

    #[test]
    fn relations_in_every_basis(p in params(9)) {
        for o in BasisOrdering::ALL {
            let g = build(&p, o).unwrap();
            for (name, r) in relation_residuals(&g).unwrap() {
                prop_assert!(r < 1e-9, "{} {} {:?}: {}", o, name, p, r);
            }
        }
    }

    #[test]
    fn spectra_match_closed_forms(p in params(9)) {
        let g = build_circular(&p, BasisOrdering::CircularB2).unwrap();
        for (op, m) in [(SpectrumOp::J2, g.j2.clone()), (SpectrumOp::Q, g.q_operator()), (SpectrumOp::J3, g.j3.clone())] {
            let mut got: Vec<f64> = dense_eigen(&m).unwrap().values.iter().map(|z| z.re).collect();
            got.sort_by(f64::total_cmp);
            for (a, b) in got.iter().zip(spectrum_closed_form(&p, op)) {
                prop_assert!((a - b).abs() < 1e-8, "{} {:?}", op, p);
            }
        }
    }

    #[test]
    fn eigvec_residuals(p in params(11)) {
        let g = build_circular(&p, BasisOrdering::CircularB2).unwrap();
        let q = assemble_q_eigvecs(&p).unwrap();
        prop_assert!(q.max_relative_residual(&g.q_operator()).unwrap() < 1e-9);
        let j = q_to_j2_with(&q, &p, &g.j2).unwrap();
        prop_assert!(j.max_relative_residual(&g.j2).unwrap() < 1e-9);
    }

    #[test]
    fn closed_forms_agree(p in params(13)) {
        let ks: Vec<usize> = if p.n % 2 == 0 { (1..=p.n / 2).collect() } else { (0..=p.m()).collect() };
        for k in ks {
            let r = solve_recurrence(k, &p).unwrap();
            prop_assert!(closed_form_pair(k, &p).unwrap().max_rel_diff(&r) < 1e-9);
        }
    }

    #[test]
    fn isotropic_agrees(n in 1usize..14, m in mu()) {
        let p = OscParams::new(n, m, m).unwrap();
        let ks: Vec<usize> = if n % 2 == 0 { (1..=n / 2).collect() } else { (0..=p.m()).collect() };
        for k in ks {
            let r = solve_recurrence(k, &p).unwrap();
            prop_assert!(isotropic_coeffs(k, m, p.parity()).unwrap().max_rel_diff(&r) < 1e-10);
        }
    }

    #[test]
    fn links_unimodular(p in params(13)) {
        let ks = if p.n % 2 == 0 { 1..=p.n / 2 } else { 0..=p.m() };
        for k in ks {
            prop_assert!((link_coeffs(k, &p).c.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gauge_is_a_similarity(
        p in params(11).prop_filter("anisotropic", |p| (p.mu_x - p.mu_y).abs() > 1e-3),
        seed in proptest::collection::vec(prop_oneof![-3.0f64..-0.2, 0.2f64..3.0], 6),
    ) {
        let gauge = GaugeSeq::new(seed[..p.m()].to_vec()).unwrap();
        let t = block_triple(&p).unwrap();
        let unit = assemble_j3(&p, &t, &GaugeSeq::ones(p.m()));
        let d = gauge_matrix(&p, &gauge);
        let conj = matmul(&matmul(&d.try_inverse().unwrap(), &unit).unwrap(), &d).unwrap();
        prop_assert!((&conj - &assemble_j3(&p, &t, &gauge)).max_abs() <= 1e-12 * unit.max_abs().max(1.0));
        let g = build_j3_j2basis(&p, &gauge, 1e-7).unwrap();
        for (name, r) in relation_residuals(&g).unwrap() {
            prop_assert!(r < 1e-9, "{} {:?}: {}", name, p, r);
        }
    }

    #[test]
    fn json_round_trip(vals in proptest::collection::vec(-1e300f64..1e300, 18)) {
        let data: Vec<C64> = vals.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        let m = DenseMatrix::new(3, 3, data).unwrap();
        let p = OscParams::new(2, 0.3, 0.7).unwrap();
        let text = matrices_to_json(&p, "cartesian", &[("M", &m)], &Tolerances::default()).unwrap();
        let back = read_matrices_json(&text).unwrap();
        prop_assert_eq!(&back.matrices["M"], &m);
        prop_assert_eq!(back.params, p);
    }
}
