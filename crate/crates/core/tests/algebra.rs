use std::sync::Arc;

use num_traits::One;
use proptest::prelude::*;
use qboson_core::algebra::{
    a_matrix_element, a_op_apply, ColorTuple, Hecke, LinearOp, ModuleVector, ScalarSpec,
};
use qboson_core::scalar::{q_integer, rat, Complex64, Rational, Scalar};
use qboson_core::verify::{a_closed_form, hecke_relations, pairing_duality, row_identity};

#[test]
fn hecke_relations_four_sites_three_colors() {
    let h = Hecke::jimbo(ScalarSpec::exact(rat(2, 3), rat(-1, 5)), 3, 4).unwrap();
    for c in hecke_relations(&h) {
        assert!(c.passed() && c.cases > 0, "{c}");
    }
}

#[test]
fn hecke_relations_trivial_module() {
    let h = Hecke::trivial(ScalarSpec::exact(rat(1, 2), rat(2, 3)), 4).unwrap();
    for c in hecke_relations(&h) {
        assert!(c.passed(), "{c}");
    }
}

#[test]
fn hecke_relations_hold_in_floating_point() {
    let h = Hecke::jimbo(ScalarSpec::complex(0.3, -0.7), 2, 3).unwrap();
    let q = h.spec.q;
    for mu in h.basis() {
        let m = ModuleVector::basis(mu);
        for i in 1..3 {
            let tm = h.t(i, &m);
            let mut r = h.t(i, &tm);
            r.axpy(&(q - Complex64::one()), &tm);
            r.axpy(&-q, &m);
            assert!(r.norm() < 1e-14);
        }
    }
}

#[test]
fn duality_between_r_inverse_and_s() {
    for n in 1..=3 {
        let c = pairing_duality(&ScalarSpec::exact(rat(3, 5), rat(7, 2)), 3, n);
        assert!(c.passed(), "{c}");
    }
}

#[test]
fn t_inverse_operator_is_an_inverse() {
    let h = Arc::new(Hecke::jimbo(ScalarSpec::exact(rat(1, 3), rat(1, 1)), 2, 3).unwrap());
    let basis = h.basis();
    for i in 1..3 {
        let hh = Arc::clone(&h);
        let t = LinearOp::from_fn(&basis, move |v| hh.t(i, v));
        let hh = Arc::clone(&h);
        let ti = LinearOp::from_fn(&basis, move |v| hh.t_inv(i, v));
        assert_eq!(t.compose(&ti).distance(&LinearOp::identity(&basis)), 0.0);
    }
}

#[test]
fn a_closed_form_small_and_generic_q() {
    let c = a_closed_form(&ScalarSpec::exact(rat(2, 7), rat(0, 1)), 4, 3);
    assert!(c.passed(), "{c}");
}

#[test]
fn a_operator_on_a_single_factor_is_the_identity() {
    let spec = ScalarSpec::exact(rat(1, 2), rat(0, 1));
    for color in 1..=3u8 {
        let eta = ColorTuple::new(vec![color]);
        let image = a_op_apply(&spec, 1, &ModuleVector::basis(eta.clone())).unwrap();
        assert_eq!(image, ModuleVector::basis(eta.clone()));
        assert_eq!(
            a_matrix_element(&spec, &eta, &eta, 1).unwrap(),
            Rational::one()
        );
    }
}

#[test]
fn row_identity_exhaustive() {
    let c = row_identity(&rat(1, 4), 6, 3);
    assert!(c.passed(), "{c}");
}

proptest! {
    #[test]
    fn row_identity_random(m in prop::collection::vec(0u32..6, 1..5), num in 1i64..9, den in 1i64..9) {
        let q = rat(num, den);
        let lhs = (0..m.len()).fold(rat(0, 1), |acc, b| {
            let above: u32 = m[b + 1..].iter().sum();
            acc + q_integer(m[b] as usize, &q) * q.powi(above as i64)
        });
        let total: u32 = m.iter().sum();
        let geometric = (0..total).fold(rat(0, 1), |acc, j| acc + q.powi(j as i64));
        prop_assert_eq!(lhs, geometric);
    }

    #[test]
    fn matrix_element_matches_operator(colors in prop::collection::vec(1u8..=3, 1..=5), num in 1i64..5) {
        let spec = ScalarSpec::exact(rat(num, 5), rat(1, 3));
        let c = colors.len();
        let eta = ColorTuple::new(colors);
        let image = a_op_apply(&spec, c, &ModuleVector::basis(eta.clone())).unwrap();
        for nu in ColorTuple::all(3, c).into_iter().filter(|nu| nu.is_sorted()) {
            prop_assert_eq!(a_matrix_element(&spec, &eta, &nu, c).unwrap(), image.coeff(&nu));
        }
    }
}
