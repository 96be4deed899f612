#![allow(dead_code)]

use lorentz_spectrum::oracle::spectra_equal;
use lorentz_spectrum::preserver::random_matrix;
use lorentz_spectrum::spectrum::FamilyTag;
use lorentz_spectrum::{Mat2, Mat3, Spectrum, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrices(seed: u64, count: usize) -> Vec<Mat3> {
    let mut r = rng(seed);
    (0..count).map(|_| random_matrix(&mut r, 2.0)).collect()
}

pub fn vec2(r: &mut impl Rng, bound: f64) -> Vec2 {
    Vec2::new(r.gen_range(-bound..=bound), r.gen_range(-bound..=bound))
}

pub fn mat2(r: &mut impl Rng, bound: f64) -> Mat2 {
    Mat2::new([
        [r.gen_range(-bound..=bound), r.gen_range(-bound..=bound)],
        [r.gen_range(-bound..=bound), r.gen_range(-bound..=bound)],
    ])
}

pub const FAMILY_NAMES: [&str; 4] = ["DiagCA", "ZeroTilde", "CIva", "OffDiag"];

/// Random member of family `kind` (index into [`FAMILY_NAMES`]).
pub fn draw_family(r: &mut impl Rng, kind: usize) -> FamilyTag {
    match kind {
        0 => FamilyTag::DiagCA {
            c: r.gen_range(-2.0..=2.0),
            a: r.gen_range(-2.0..=2.0),
        },
        1 => FamilyTag::ZeroTilde {
            u: vec2(r, 2.0),
            v: vec2(r, 2.0),
            a: r.gen_range(-2.0..=2.0),
        },
        2 => FamilyTag::CIva {
            c: r.gen_range(-2.0..=2.0),
            v: vec2(r, 2.0),
            a: r.gen_range(-2.0..=2.0),
        },
        _ => {
            let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
            FamilyTag::OffDiag {
                c: sign * r.gen_range(0.05..=2.0),
                d: sign * r.gen_range(0.0..=2.0),
                v: vec2(r, 2.0),
                a: r.gen_range(-2.0..=2.0),
            }
        }
    }
}

/// Largest Hausdorff distance over the whole set and the interior-only
/// and boundary-only parts.
pub fn nature_distance(s1: &Spectrum, s2: &Spectrum) -> f64 {
    let whole = spectra_equal(s1, s2, 0.0).hausdorff_distance;
    let int = spectra_equal(&s1.interior_part(), &s2.interior_part(), 0.0).hausdorff_distance;
    let bnd = spectra_equal(&s1.boundary_part(), &s2.boundary_part(), 0.0).hausdorff_distance;
    whole.max(int).max(bnd)
}

pub fn distance(s1: &Spectrum, s2: &Spectrum) -> f64 {
    spectra_equal(s1, s2, 0.0).hausdorff_distance
}
