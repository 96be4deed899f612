//! Linear maps on 3x3 matrices that preserve the L-spectrum.
//!
//! A map is stored as the 9x9 matrix acting on column-major vectorized
//! matrices, basis order `E₁₁, E₂₁, E₃₁, E₁₂, …, E₃₃`. The canonical
//! preservers are `A ↦ Q̂AQ̂ᵀ` with `Q̂ = Q ⊕ [1]`, `Q` orthogonal; every
//! L-spectrum preserver on 3x3 matrices has this form, which is what
//! [`recover_q`] reads back.

use nalgebra::SMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::oracle::spectra_equal;
use crate::smallmat::{Mat2, Mat3, Vec2};
use crate::spectrum::{full_spectrum, Spectrum};

/// Basis tag written into operator files.
pub const BASIS_COLMAJOR_EIJ: &str = "colmajor-eij";

const ORTHO_TOL: f64 = 1e-10;
const MIN_BATTERY: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PreserverError {
    #[error("matrix is not orthogonal: max |QᵀQ − I| = {0:e}")]
    NotOrthogonal(f64),
    #[error("map is not of the canonical form: {0}")]
    NotCanonical(String),
    #[error("battery needs at least {MIN_BATTERY} matrices, got {0}")]
    BatteryTooSmall(usize),
}

/// Column-major position of entry `(i, j)` (zero-based).
pub fn vec_index(i: usize, j: usize) -> usize {
    i + 3 * j
}

pub fn vectorize(a: &Mat3) -> [f64; 9] {
    std::array::from_fn(|k| a.get(k % 3, k / 3))
}

pub fn unvectorize(x: &[f64; 9]) -> Mat3 {
    let mut m = Mat3::ZERO;
    for (k, &value) in x.iter().enumerate() {
        m.0[k % 3][k / 3] = value;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap3 {
    /// Row `k` gives output coordinate `k`.
    pub matrix: [[f64; 9]; 9],
}

impl LinearMap3 {
    pub fn identity() -> Self {
        let mut matrix = [[0.0; 9]; 9];
        for (k, row) in matrix.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        LinearMap3 { matrix }
    }

    /// The map whose value on each basis matrix `E_ij` is `f(E_ij)`.
    pub fn from_fn(f: impl Fn(&Mat3) -> Mat3) -> Self {
        let mut matrix = [[0.0; 9]; 9];
        for col in 0..9 {
            let image = vectorize(&f(&Mat3::unit(col % 3 + 1, col / 3 + 1)));
            for (row, value) in matrix.iter_mut().zip(image) {
                row[col] = value;
            }
        }
        LinearMap3 { matrix }
    }

    pub fn transpose_map() -> Self {
        LinearMap3::from_fn(|a| a.transpose())
    }

    pub fn scaling(k: f64) -> Self {
        LinearMap3::from_fn(|a| a.scale(k))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap3) -> LinearMap3 {
        let mut matrix = [[0.0; 9]; 9];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..9).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        LinearMap3 { matrix }
    }

    pub fn max_abs_diff(&self, other: &LinearMap3) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .zip(other.matrix.iter().flatten())
            .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.matrix.iter().flatten().all(|x| x.is_finite())
    }

    /// Whether the smallest singular value exceeds `tol` times the largest.
    pub fn is_invertible(&self, tol: f64) -> bool {
        let m = SMatrix::<f64, 9, 9>::from_fn(|i, j| self.matrix[i][j]);
        let sv = m.singular_values();
        let max = sv.max();
        max > 0.0 && sv.min() > tol * max
    }
}

pub fn apply_map(m: &LinearMap3, a: &Mat3) -> Mat3 {
    let x = vectorize(a);
    let y: [f64; 9] = std::array::from_fn(|i| (0..9).map(|k| m.matrix[i][k] * x[k]).sum());
    unvectorize(&y)
}

/// A 2x2 orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoQ(Mat2);

impl OrthoQ {
    pub fn new(q: Mat2) -> Result<Self, PreserverError> {
        OrthoQ::with_tol(q, ORTHO_TOL)
    }

    pub fn with_tol(q: Mat2, tol: f64) -> Result<Self, PreserverError> {
        let err = (q.transpose() * q - Mat2::IDENTITY).max_abs();
        if err <= tol && q.is_finite() {
            Ok(OrthoQ(q))
        } else {
            Err(PreserverError::NotOrthogonal(err))
        }
    }

    /// Rotation by `angle`, followed by flipping the second column when
    /// `reflect` is set.
    pub fn givens(angle: f64, reflect: bool) -> Self {
        let (s, c) = angle.sin_cos();
        let sign = if reflect { -1.0 } else { 1.0 };
        OrthoQ(Mat2::new([[c, -s * sign], [s, c * sign]]))
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        OrthoQ::givens(rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_bool(0.5))
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    /// `Q ⊕ [1]`.
    pub fn hat(&self) -> Mat3 {
        Mat3::embed(&self.0)
    }
}

/// The canonical preserver `A ↦ Q̂AQ̂ᵀ`.
pub fn make_preserver(q: &OrthoQ) -> LinearMap3 {
    let hat = q.hat();
    let hat_t = hat.transpose();
    LinearMap3::from_fn(|a| hat * *a * hat_t)
}

/// Reads `Q = [p q]` off the images of `E₃₁` and `E₃₂`, which for a
/// canonical map are `[0 0; pᵀ 0]` and `[0 0; qᵀ 0]`.
pub fn recover_q(m: &LinearMap3, tol: f64) -> Result<OrthoQ, PreserverError> {
    let mut columns = [Vec2::ZERO; 2];
    for (k, j) in [1usize, 2].into_iter().enumerate() {
        let image = apply_map(m, &Mat3::unit(3, j));
        let stray = (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .filter(|&(r, c)| !(r == 2 && c < 2))
            .map(|(r, c)| image.get(r, c).abs())
            .fold(0.0, f64::max);
        if stray > tol {
            return Err(PreserverError::NotCanonical(format!(
                "image of E3{j} has entries outside its bottom-left block (max {stray:e})"
            )));
        }
        columns[k] = image.v();
    }
    OrthoQ::with_tol(Mat2::from_cols(columns[0], columns[1]), tol).map_err(|e| {
        PreserverError::NotCanonical(format!("bottom-left vectors of E31, E32 images: {e}"))
    })
}

/// Deterministic test battery. The fixed head covers the structured
/// families that discriminate preservers; random dense matrices with
/// entries in `[−2, 2]` fill the rest.
pub fn battery_gen(seed: u64, count: usize) -> Result<Vec<Mat3>, PreserverError> {
    if count < MIN_BATTERY {
        return Err(PreserverError::BatteryTooSmall(count));
    }
    let z = Mat2::ZERO;
    let o = Vec2::ZERO;
    let e1 = Vec2::new(1.0, 0.0);
    let mut out = vec![
        Mat3::IDENTITY,
        Mat3::scalar(2.0),
        Mat3::scalar(-3.0),
        // Subspace of the bottom row and the upper-right column units.
        Mat3::unit(3, 1),
        Mat3::unit(3, 2),
        Mat3::unit(1, 3),
        Mat3::unit(2, 3),
        // Bottom-row families: a + ‖v‖ > 0, = 0, < 0; then a E₃₃ with a > 0, a ≤ 0.
        Mat3::from_blocks(z, o, Vec2::new(1.0, 2.0), 0.5),
        Mat3::from_blocks(z, o, e1, -1.0),
        Mat3::from_blocks(z, o, Vec2::new(0.0, 1.0), -3.0),
        Mat3::from_blocks(z, o, o, 2.0),
        Mat3::from_blocks(z, o, o, -1.0),
        // Infinitely many L-eigenvalues: [cI 0; vᵀ a] with c < a + ‖v‖.
        Mat3::from_blocks(Mat2::scalar(1.0), o, Vec2::new(1.0, 1.0), 0.5),
        Mat3::from_blocks(Mat2::scalar(-1.0), o, Vec2::new(0.0, 2.0), -2.0),
        Mat3::from_blocks(Mat2::scalar(0.5), o, Vec2::new(-1.5, 0.5), 3.0),
        // Leading-block matrices.
        Mat3::from_blocks(Mat2::new([[1.0, 2.0], [3.0, 4.0]]), o, o, 0.0),
        Mat3::from_blocks(Mat2::new([[0.0, 1.0], [1.0, 0.0]]), o, o, 0.0),
        Mat3::from_blocks(Mat2::new([[0.0, -1.0], [1.0, 0.0]]), o, o, 0.0),
        Mat3::from_blocks(Mat2::new([[1.0, 0.0], [0.0, -1.0]]), o, o, 0.0),
        // Upper-right column.
        Mat3::from_blocks(z, Vec2::new(1.0, 1.0), o, 0.0),
        // Symmetric zero-block matrices.
        Mat3::unit(1, 3) + Mat3::unit(3, 1),
        Mat3::from_blocks(z, Vec2::new(1.0, 2.0), Vec2::new(1.0, 2.0), 0.5),
        // Off-diagonal leading block with a bottom row.
        Mat3::from_blocks(
            Mat2::new([[0.0, 2.0], [0.5, 0.0]]),
            o,
            Vec2::new(0.3, -0.7),
            0.25,
        ),
        Mat3::from_blocks(
            Mat2::new([[2.0, 0.0], [0.0, -1.0]]),
            o,
            Vec2::new(0.5, 0.5),
            1.0,
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        out.push(random_matrix(&mut rng, 2.0));
    }
    out.truncate(count);
    Ok(out)
}

/// Entries uniform in `[−bound, bound]`.
pub fn random_matrix(rng: &mut impl Rng, bound: f64) -> Mat3 {
    Mat3(std::array::from_fn(|_| {
        std::array::from_fn(|_| rng.gen_range(-bound..=bound))
    }))
}

/// Why a map was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// `φ(I₃) ≠ I₃`.
    IdentityNotFixed,
    /// The 9x9 matrix is singular.
    NotInvertible,
    /// Spectra of a battery matrix and its image differ.
    SpectrumMismatch,
    /// No spectral witness found, but the map is not of the form `Q̂AQ̂ᵀ`.
    NotCanonical(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreserverVerdict {
    pub is_preserver: bool,
    pub failure: Option<Failure>,
    pub witness: Option<Mat3>,
    /// Spectra of the witness and of its image.
    pub spectra: Option<(Spectrum, Spectrum)>,
    pub q_recovered: Option<OrthoQ>,
}

impl PreserverVerdict {
    fn pass(q: OrthoQ) -> Self {
        PreserverVerdict {
            is_preserver: true,
            failure: None,
            witness: None,
            spectra: None,
            q_recovered: Some(q),
        }
    }

    fn fail(failure: Failure, witness: Option<(Mat3, Spectrum, Spectrum)>) -> Self {
        let (witness, spectra) = match witness {
            Some((a, s1, s2)) => (Some(a), Some((s1, s2))),
            None => (None, None),
        };
        PreserverVerdict {
            is_preserver: false,
            failure: Some(failure),
            witness,
            spectra,
            q_recovered: None,
        }
    }
}

/// First battery matrix (in index order) whose spectra disagree under
/// `compare`, evaluated in parallel.
fn first_mismatch(
    m: &LinearMap3,
    battery: &[Mat3],
    tol: f64,
    compare: impl Fn(&Spectrum, &Spectrum) -> bool + Sync,
) -> Option<(Mat3, Spectrum, Spectrum)> {
    battery
        .par_iter()
        .map(|a| {
            let image = apply_map(m, a);
            let (s1, s2) = (full_spectrum(a, tol), full_spectrum(&image, tol));
            (!compare(&s1, &s2)).then_some((*a, s1, s2))
        })
        .find_first(|r| r.is_some())
        .flatten()
}

/// Sampling check of `σ_L(φ(A)) = σ_L(A)` over the battery, preceded by
/// `φ(I₃) = I₃` and invertibility, and followed by reading back `Q` and
/// matching the whole map against `A ↦ Q̂AQ̂ᵀ`.
pub fn check_preserver(m: &LinearMap3, seed: u64, count: usize, tol: f64) -> PreserverVerdict {
    let identity_image = apply_map(m, &Mat3::IDENTITY);
    if (identity_image - Mat3::IDENTITY).max_abs() > tol {
        let s1 = full_spectrum(&Mat3::IDENTITY, tol);
        let s2 = full_spectrum(&identity_image, tol);
        return PreserverVerdict::fail(Failure::IdentityNotFixed, Some((Mat3::IDENTITY, s1, s2)));
    }
    if !m.is_invertible(tol) {
        return PreserverVerdict::fail(Failure::NotInvertible, None);
    }
    let battery = match battery_gen(seed, count.max(MIN_BATTERY)) {
        Ok(b) => b,
        Err(e) => return PreserverVerdict::fail(Failure::NotCanonical(e.to_string()), None),
    };
    let same = |s1: &Spectrum, s2: &Spectrum| spectra_equal(s1, s2, tol).is_equal();
    if let Some(w) = first_mismatch(m, &battery, tol, same) {
        return PreserverVerdict::fail(Failure::SpectrumMismatch, Some(w));
    }
    let canonical = recover_q(m, tol).and_then(|q| {
        let err = make_preserver(&q).max_abs_diff(m);
        if err <= tol {
            Ok(q)
        } else {
            Err(PreserverError::NotCanonical(format!(
                "map differs from Q̂AQ̂ᵀ by {err:e}"
            )))
        }
    });
    match canonical {
        Ok(q) => PreserverVerdict::pass(q),
        Err(e) => {
            // Not of the only possible form, so some matrix must tell the
            // spectra apart; look further before reporting without witness.
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_f11e);
            let extra: Vec<Mat3> = (0..10 * count.max(MIN_BATTERY))
                .map(|_| random_matrix(&mut rng, 2.0))
                .collect();
            match first_mismatch(m, &extra, tol, same) {
                Some(w) => PreserverVerdict::fail(Failure::SpectrumMismatch, Some(w)),
                None => PreserverVerdict::fail(Failure::NotCanonical(e.to_string()), None),
            }
        }
    }
}

/// Compares interior-only and boundary-only spectra over the battery.
pub fn check_nature(m: &LinearMap3, seed: u64, count: usize, tol: f64) -> PreserverVerdict {
    let battery = match battery_gen(seed, count.max(MIN_BATTERY)) {
        Ok(b) => b,
        Err(e) => return PreserverVerdict::fail(Failure::NotCanonical(e.to_string()), None),
    };
    let same_nature = |s1: &Spectrum, s2: &Spectrum| {
        spectra_equal(&s1.interior_part(), &s2.interior_part(), tol).is_equal()
            && spectra_equal(&s1.boundary_part(), &s2.boundary_part(), tol).is_equal()
    };
    match first_mismatch(m, &battery, tol, same_nature) {
        Some(w) => PreserverVerdict::fail(Failure::SpectrumMismatch, Some(w)),
        None => PreserverVerdict {
            is_preserver: true,
            failure: None,
            witness: None,
            spectra: None,
            q_recovered: recover_q(m, tol).ok(),
        },
    }
}
