//! Invariants over randomly drawn weights.

use genjacobi::asymptotics::{predict, residues, SignConvention};
use genjacobi::cfh::{expansion_coeffs, psi_eval};
use genjacobi::cli::parse_config;
use genjacobi::mat2::Mat2;
use genjacobi::params::{AnalyticFactor, WeightParams};
use genjacobi::recurrence::stieltjes;
use num_complex::Complex64;
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = WeightParams> {
    (-0.9f64..2.0, -0.9f64..2.0, 0.05f64..2.5, -0.9f64..0.9, 0.2f64..5.0).prop_map(|(a, b, g, x0, c2)| {
        WeightParams::new(a, b, g, x0, c2, AnalyticFactor::One).unwrap()
    })
}

/// Reflection `x -> -x`: swaps the endpoint exponents, mirrors `x0` and
/// inverts the jump.
fn reflect(p: &WeightParams) -> WeightParams {
    WeightParams::new(p.beta, p.alpha, p.gamma, -p.x0, 1.0 / p.c2, p.h.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_c1_is_traceless(p in weight(), n in 1usize..500) {
        prop_assert!(residues(&p, n).c1.trace().norm() <= 1e-14);
    }

    #[test]
    fn reflection_keeps_a_and_negates_b(p in weight(), n in 20usize..400) {
        let q = reflect(&p);
        let fp = predict(&p, [n], SignConvention::RemarkForm);
        let fq = predict(&q, [n], SignConvention::RemarkForm);
        prop_assert!((fp.a_tilde[0] - fq.a_tilde[0]).abs() <= 1e-12);
        prop_assert!((fp.b_tilde[0] + fq.b_tilde[0]).abs() <= 1e-12);
    }

    #[test]
    fn constant_h_leaves_predictions_unchanged(p in weight(), k in 0.1f64..10.0, n in 20usize..400) {
        let q = WeightParams::new(p.alpha, p.beta, p.gamma, p.x0, p.c2, AnalyticFactor::Polynomial(vec![k])).unwrap();
        let fp = predict(&p, [n], SignConvention::RemarkForm);
        let fq = predict(&q, [n], SignConvention::RemarkForm);
        prop_assert!((fp.a_tilde[0] - fq.a_tilde[0]).abs() <= 1e-12);
        prop_assert!((fp.b_tilde[0] - fq.b_tilde[0]).abs() <= 1e-12);
    }

    #[test]
    fn psi_has_unit_determinant(p in weight(), r in 0.05f64..40.0, th in -3.1f64..3.1) {
        let z = Complex64::from_polar(r, th);
        if let Ok(v) = psi_eval(&p, z) {
            prop_assert!((v.matrix.det() - 1.0).norm() <= 1e-10, "det at {z}: {}", v.matrix.det());
        }
    }

    #[test]
    fn inverted_jump_conjugates_expansion(p in weight()) {
        let q = WeightParams::new(p.alpha, p.beta, p.gamma, p.x0, 1.0 / p.c2, AnalyticFactor::One).unwrap();
        let (up, tp) = expansion_coeffs(&p, 3).unwrap();
        let (uq, tq) = expansion_coeffs(&q, 3).unwrap();
        prop_assert!((tq - tp.conj()).norm() <= 1e-12 * tp.norm().max(1.0));
        for k in 0..3 {
            prop_assert!((uq[k] - up[k].conj()).norm() <= 1e-12 * up[k].norm().max(1.0));
        }
    }

    #[test]
    fn mat2_inverse_round_trip(v in proptest::array::uniform8(-3.0f64..3.0)) {
        let m = Mat2::new(
            Complex64::new(v[0], v[1]),
            Complex64::new(v[2], v[3]),
            Complex64::new(v[4], v[5]),
            Complex64::new(v[6], v[7]),
        );
        prop_assume!(m.det().norm() > 1e-3);
        prop_assert!((m * m.inverse()).dist(&Mat2::identity()) <= 1e-9 / m.det().norm());
    }

    #[test]
    fn config_round_trip(p in weight(), s in -2.0f64..2.0, n_max in 60usize..500) {
        let text = format!(
            "alpha = {}\nbeta = {}\ngamma = {}\nx0 = {}\nc2 = {}\nh.kind = exp_linear\nh.param = {s}\nn_max = {n_max}\n",
            p.alpha, p.beta, p.gamma, p.x0, p.c2
        );
        let c = parse_config(&text).unwrap();
        let want = WeightParams::new(p.alpha, p.beta, p.gamma, p.x0, p.c2, AnalyticFactor::ExpLinear(s)).unwrap();
        prop_assert_eq!(c.params, want);
        prop_assert_eq!(c.n_max, n_max);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reflected_weight_negates_b(p in weight()) {
        let tp = stieltjes(&p, 40).unwrap();
        let tq = stieltjes(&reflect(&p), 40).unwrap();
        for n in 0..40 {
            prop_assert!((tp.b[n] + tq.b[n]).abs() <= 1e-11);
            if n >= 1 {
                prop_assert!((tp.a2[n] - tq.a2[n]).abs() <= 1e-11);
            }
        }
    }

    #[test]
    fn recurrence_ignores_weight_scale(p in weight(), k in 0.1f64..10.0) {
        let q = WeightParams::new(p.alpha, p.beta, p.gamma, p.x0, p.c2, AnalyticFactor::Polynomial(vec![k])).unwrap();
        let tp = stieltjes(&p, 40).unwrap();
        let tq = stieltjes(&q, 40).unwrap();
        prop_assert!((tq.mass() / tp.mass() - k).abs() <= 1e-12 * k);
        for n in 1..40 {
            prop_assert!((tp.b[n] - tq.b[n]).abs() <= 1e-12);
            prop_assert!((tp.a2[n] - tq.a2[n]).abs() <= 1e-12);
        }
    }
}
