mod common;

use common::*;
use lorentz_spectrum::oracle::{oracle_spectrum, OracleConfig};
use lorentz_spectrum::spectrum::closed_form_spectrum;
use lorentz_spectrum::{full_spectrum, Mat3};
use rayon::prelude::*;

const TOL: f64 = 1e-8;

fn grid_tol(a: &Mat3, steps: usize) -> f64 {
    (std::f64::consts::TAU * a.max_abs().max(1.0) / steps as f64).max(1e-6)
}

#[test]
fn random_matrices_agree_with_natures() {
    let cfg = OracleConfig::default();
    let mats = matrices(11, 200);
    let stats: Vec<(bool, usize)> = mats
        .par_iter()
        .map(|a| {
            let solved = full_spectrum(a, TOL);
            let d = nature_distance(&solved, &oracle_spectrum(a, &cfg));
            let boundary = solved.points.iter().filter(|p| p.nature.boundary).count();
            (d <= grid_tol(a, cfg.theta_steps), boundary)
        })
        .collect();
    assert!(stats.iter().all(|s| s.0));
    // The corpus must exercise boundary eigenvalues, not only interior ones.
    let with_boundary = stats.iter().filter(|s| s.1 > 0).count();
    assert!(
        with_boundary > 20,
        "only {with_boundary} matrices with boundary values"
    );
}

#[test]
fn families_agree_with_oracle() {
    let cfg = OracleConfig {
        theta_steps: 20_000,
        ..OracleConfig::default()
    };
    for kind in 0..FAMILY_NAMES.len() {
        let mut r = rng(40 + kind as u64);
        for _ in 0..25 {
            let family = draw_family(&mut r, kind);
            let a = family.assemble().unwrap();
            let expected = closed_form_spectrum(&family).unwrap();
            let d = nature_distance(&expected, &oracle_spectrum(&a, &cfg));
            assert!(d <= grid_tol(&a, cfg.theta_steps), "{family:?}: {d}");
        }
    }
}

#[test]
fn oracle_finds_e31_interval() {
    let s = oracle_spectrum(&Mat3::unit(3, 1), &OracleConfig::default());
    assert_eq!(s.intervals.len(), 1);
    assert!(s.intervals[0].lo.abs() < 1e-6);
    assert!((s.intervals[0].hi - 0.5).abs() < 1e-6);
}
