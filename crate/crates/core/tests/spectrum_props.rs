mod common;

use common::nature_distance;
use lorentz_spectrum::preserver::OrthoQ;
use lorentz_spectrum::spectrum::{
    boundary_residual, detect_infinite, interior_residual, interior_spectrum,
};
use lorentz_spectrum::{full_spectrum, Mat2, Mat3, Vec2};
use proptest::prelude::*;

const TOL: f64 = 1e-8;

fn mat3() -> impl Strategy<Value = Mat3> {
    prop::array::uniform3(prop::array::uniform3(-2.0..2.0f64)).prop_map(Mat3)
}

fn vec2() -> impl Strategy<Value = Vec2> {
    prop::array::uniform2(-2.0..2.0f64).prop_map(Vec2)
}

fn mat2() -> impl Strategy<Value = Mat2> {
    prop::array::uniform2(prop::array::uniform2(-2.0..2.0f64)).prop_map(Mat2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interior_values_are_eigenvalues(a in mat3()) {
        let p = a.char_poly();
        for e in interior_spectrum(&a, TOL) {
            prop_assert!(p.eval(e.value).abs() <= 1e-8 * p.eval_abs(e.value).max(1.0));
        }
    }

    #[test]
    fn shift_equivariance(a in mat3(), gamma in prop::sample::select(vec![-1.0, 0.5, 3.0])) {
        let s = full_spectrum(&a, TOL);
        let d = nature_distance(&full_spectrum(&a.shift(gamma), TOL), &s.shifted(gamma));
        prop_assert!(d <= TOL, "distance {}", d);
    }

    #[test]
    fn orthogonal_conjugation(a in mat3(), angle in 0.0..std::f64::consts::TAU, reflect: bool) {
        let hat = OrthoQ::givens(angle, reflect).hat();
        let b = hat * a * hat.transpose();
        let d = nature_distance(&full_spectrum(&b, TOL), &full_spectrum(&a, TOL));
        prop_assert!(d <= TOL, "distance {}", d);
    }

    #[test]
    fn witnesses_verify(a in mat3()) {
        let s = full_spectrum(&a, TOL);
        for p in &s.points {
            prop_assert!(p.interior_xi.is_some() || p.boundary.is_some() || p.nature.boundary);
            if let Some(xi) = p.interior_xi {
                prop_assert!(xi.norm() < 1.0);
                prop_assert!(interior_residual(&a, p.value, xi) <= 1e-8);
            }
            if let Some(w) = &p.boundary {
                prop_assert!(w.s >= -1e-10);
                prop_assert!((w.xi.norm() - 1.0).abs() <= 1e-8);
                prop_assert!(boundary_residual(&a, p.value, w) <= 1e-8);
            }
        }
    }

    #[test]
    fn infinite_iff_interval(a in mat3()) {
        let s = full_spectrum(&a, TOL);
        prop_assert_eq!(detect_infinite(&a, TOL).is_some(), s.is_infinite());
    }

    #[test]
    fn infinite_iff_interval_on_family(c in -2.0..2.0f64, v in vec2(), a in -2.0..2.0f64) {
        let m = Mat3::from_blocks(Mat2::scalar(c), Vec2::ZERO, v, a);
        let s = full_spectrum(&m, TOL);
        prop_assert_eq!(detect_infinite(&m, TOL).is_some(), s.is_infinite());
        if c < a + v.norm() - 1e-6 {
            prop_assert!(s.is_infinite());
        }
    }

    #[test]
    fn large_a_is_interior(tilde in mat2(), u in vec2()) {
        let a = 10.0 * (1.0 + tilde.max_abs() + u.norm());
        let m = Mat3::from_blocks(tilde, u, Vec2::ZERO, a);
        let s = full_spectrum(&m, TOL);
        prop_assert!(s.interior_part().values().iter().any(|x| (x - a).abs() <= 1e-8 * a));
    }

    #[test]
    fn spectra_are_sorted_and_disjoint(a in mat3()) {
        let s = full_spectrum(&a, TOL);
        let v = s.values();
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(s.intervals.windows(2).all(|w| w[0].hi < w[1].lo));
    }
}
