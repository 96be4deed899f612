use lorentz_spectrum::smallmat::{adj2, eig2_real, pinv_small, real_roots, RealPoly};
use lorentz_spectrum::{Mat2, Vec2};
use nalgebra::{Matrix2, SMatrix};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn mat2() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(entry()).prop_map(|e| Mat2::new([[e[0], e[1]], [e[2], e[3]]]))
}

fn mul<const R: usize, const K: usize, const C: usize>(
    x: &[[f64; K]; R],
    y: &[[f64; C]; K],
) -> [[f64; C]; R] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..K).map(|k| x[i][k] * y[k][j]).sum()))
}

fn max_diff<const R: usize, const C: usize>(x: &[[f64; C]; R], y: &[[f64; C]; R]) -> f64 {
    x.iter()
        .flatten()
        .zip(y.iter().flatten())
        .fold(0.0, |acc, (p, q)| acc.max((p - q).abs()))
}

fn penrose_error<const R: usize>(m: &[[f64; 2]; R], p: &[[f64; R]; 2]) -> f64 {
    let mpm = mul(&mul(m, p), m);
    let pmp = mul(&mul(p, m), p);
    let mp = mul(m, p);
    let pm = mul(p, m);
    let mp_t: [[f64; R]; R] = std::array::from_fn(|i| std::array::from_fn(|j| mp[j][i]));
    let pm_t: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| pm[j][i]));
    max_diff(&mpm, m)
        .max(max_diff(&pmp, p))
        .max(max_diff(&mp, &mp_t))
        .max(max_diff(&pm, &pm_t))
}

proptest! {
    #[test]
    fn adjugate_identity(m in mat2()) {
        let prod = m * adj2(&m);
        let target = Mat2::scalar(m.det());
        prop_assert!((prod - target).max_abs() <= 1e-12 * (1.0 + m.max_abs().powi(2)));
    }

    #[test]
    fn adjugate_is_inverse_times_det(m in mat2()) {
        prop_assume!(m.det().abs() > 0.1);
        let inv = Matrix2::new(m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]).try_inverse().unwrap();
        let adj = adj2(&m);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((adj.0[i][j] - m.det() * inv[(i, j)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pinv_penrose_full_rank(m in mat2()) {
        prop_assume!(m.det().abs() > 0.05);
        let p = pinv_small::<2>(&m.0, 1e-12);
        prop_assert!(penrose_error(&m.0, &p) < 1e-8);
    }

    #[test]
    fn pinv_rank_one_formula(x in prop::array::uniform2(entry()), y in prop::array::uniform2(entry())) {
        let m = [[x[0] * y[0], x[0] * y[1]], [x[1] * y[0], x[1] * y[1]]];
        let tr: f64 = m.iter().flatten().map(|e| e * e).sum();
        prop_assume!(tr > 1e-4);
        let p = pinv_small::<2>(&m, 1e-10);
        let formula: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| m[j][i] / tr));
        prop_assert!(max_diff(&p, &formula) < 1e-12);
        prop_assert!(penrose_error(&m, &p) < 1e-10);
    }

    #[test]
    fn pinv_stacked_matches_svd(m in mat2(), v in prop::array::uniform2(entry())) {
        let stacked = [m.0[0], m.0[1], v];
        let p = pinv_small::<3>(&stacked, 1e-12);
        let nm = SMatrix::<f64, 3, 2>::from_fn(|i, j| stacked[i][j]);
        let sv = nm.singular_values();
        prop_assume!(sv.min() > 1e-3 * sv.max());
        let q = nm.pseudo_inverse(1e-14).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                prop_assert!((p[i][j] - q[(i, j)]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn eig2_values_are_char_roots(m in mat2()) {
        for e in eig2_real(&m, 1e-10) {
            let residual = e.value * e.value - m.trace() * e.value + m.det();
            prop_assert!(residual.abs() < 1e-8 * (1.0 + m.max_abs().powi(2)));
            let mv = m.mul_vec(e.vector) - e.vector.scale(e.value);
            prop_assert!(mv.norm() < 1e-6 * (1.0 + m.max_abs()));
        }
    }

    #[test]
    fn roots_of_factored_polynomials(roots in prop::collection::vec(-4.0..4.0f64, 1..=4)) {
        let mut sorted = roots.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 1e-2));
        let found = real_roots(&RealPoly::from_roots(&roots), 1e-10).unwrap();
        prop_assert_eq!(found.len(), sorted.len());
        for (f, r) in found.iter().zip(&sorted) {
            prop_assert!((f.value - r).abs() < 1e-6, "{} vs {}", f.value, r);
        }
    }

    #[test]
    fn roots_match_companion_eigenvalues(c in prop::array::uniform4(entry())) {
        // Monic quartic; companion eigenvalues with negligible imaginary
        // part are the real roots.
        let p = RealPoly::new(&[c[0], c[1], c[2], c[3], 1.0]);
        let comp = SMatrix::<f64, 4, 4>::from_fn(|i, j| {
            if j == 3 { -c[i] } else if i == j + 1 { 1.0 } else { 0.0 }
        });
        let mut expected: Vec<f64> = comp
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() < 1e-3)
            .map(|z| z.re)
            .collect();
        expected.sort_by(f64::total_cmp);
        prop_assume!(expected.windows(2).all(|w| w[1] - w[0] > 1e-2));
        // Stay away from near-double roots, where tiny imaginary parts and
        // tangencies make the real count ambiguous.
        let dp = p.derivative();
        prop_assume!(expected.iter().all(|&x| dp.eval(x).abs() > 1e-2));
        let found: Vec<f64> = real_roots(&p, 1e-10).unwrap().iter().map(|r| r.value).collect();
        prop_assert_eq!(found.len(), expected.len(), "{:?} vs {:?}", found, expected);
        for (f, e) in found.iter().zip(&expected) {
            prop_assert!((f - e).abs() < 1e-6);
        }
    }
}

#[test]
fn vec2_perp_is_orthogonal() {
    let x = Vec2::new(3.0, -2.0);
    assert_eq!(x.dot(x.perp()), 0.0);
    assert_eq!(x.perp().norm(), x.norm());
}
