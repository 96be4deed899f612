//! Closed-form spectra of structured matrix families.
//!
//! These are written from the explicit formulas for each family and share
//! no code with the Systems I–IV solver, so they serve as an oracle for it.

use super::types::{Interval, LEigenvalue, Nature, Spectrum};
use super::SpectrumError;
use crate::smallmat::{Mat2, Mat3, Vec2};

/// Structured families with known spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyTag {
    /// `diag(c, c, a)`.
    DiagCA {
        c: f64,
        a: f64,
    },
    /// `[0 u; vᵀ a]`, `u` and `v` not both zero.
    ZeroTilde {
        u: Vec2,
        v: Vec2,
        a: f64,
    },
    /// `[cI 0; vᵀ a]`, `v ≠ 0`.
    CIva {
        c: f64,
        v: Vec2,
        a: f64,
    },
    /// `[[0, c, 0], [d, 0, 0], [v₁, v₂, a]]` with `cd ≥ 0`, `c + d ≠ 0`.
    OffDiag {
        c: f64,
        d: f64,
        v: Vec2,
        a: f64,
    },
    General,
}

impl FamilyTag {
    pub fn assemble(&self) -> Option<Mat3> {
        Some(match *self {
            FamilyTag::DiagCA { c, a } => {
                Mat3::from_blocks(Mat2::scalar(c), Vec2::ZERO, Vec2::ZERO, a)
            }
            FamilyTag::ZeroTilde { u, v, a } => Mat3::from_blocks(Mat2::ZERO, u, v, a),
            FamilyTag::CIva { c, v, a } => Mat3::from_blocks(Mat2::scalar(c), Vec2::ZERO, v, a),
            FamilyTag::OffDiag { c, d, v, a } => {
                Mat3::from_blocks(Mat2::new([[0.0, c], [d, 0.0]]), Vec2::ZERO, v, a)
            }
            FamilyTag::General => return None,
        })
    }
}

pub fn closed_form_spectrum(family: &FamilyTag) -> Result<Spectrum, SpectrumError> {
    match *family {
        FamilyTag::DiagCA { c, a } => Ok(diag_ca(c, a)),
        FamilyTag::ZeroTilde { u, v, a } => zero_tilde(u, v, a),
        FamilyTag::CIva { c, v, a } => c_iva(c, v, a),
        FamilyTag::OffDiag { c, d, v, a } => off_diag(c, d, v, a),
        FamilyTag::General => Err(SpectrumError::UnsupportedFamily),
    }
}

/// `{a}` if `c > a`, else `{a, (a+c)/2}`; `a` is interior, `(a+c)/2` boundary.
fn diag_ca(c: f64, a: f64) -> Spectrum {
    let mut points = vec![LEigenvalue::bare(a, Nature::INTERIOR)];
    if c <= a {
        points.push(LEigenvalue::bare(0.5 * (a + c), Nature::BOUNDARY));
    }
    Spectrum::canonical(points, Vec::new())
}

fn zero_tilde(u: Vec2, v: Vec2, a: f64) -> Result<Spectrum, SpectrumError> {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 && nv == 0.0 {
        return Err(SpectrumError::DomainError(
            "zero-block family needs u or v nonzero".into(),
        ));
    }
    let vu = v.dot(u);
    let mut points = Vec::new();
    let mut intervals = Vec::new();

    if nu > 0.0 {
        // Nonzero standard eigenvalues solve λ² − aλ − vᵀu = 0 with
        // eigenvector [u/λ; 1]; interior iff |λ| > ‖u‖.
        let disc = a * a + 4.0 * vu;
        if disc >= 0.0 {
            let r = disc.sqrt();
            for lambda in [0.5 * (a - r), 0.5 * (a + r)] {
                if lambda.abs() > nu {
                    points.push(LEigenvalue::bare(lambda, Nature::INTERIOR));
                }
            }
        }
        // Boundary: μ = ±‖u‖, ξ = ±u/‖u‖.
        if vu + a * nu - nu * nu >= 0.0 {
            points.push(LEigenvalue::bare(
                (a * nu + nu * nu + vu) / (2.0 * nu),
                Nature::BOUNDARY,
            ));
        }
        if nu * nu + a * nu - vu >= 0.0 {
            points.push(LEigenvalue::bare(
                (a * nu - nu * nu - vu) / (2.0 * nu),
                Nature::BOUNDARY,
            ));
        }
    } else {
        if a.abs() < nv {
            points.push(LEigenvalue::bare(0.0, Nature::INTERIOR));
        }
        if a != 0.0 {
            points.push(LEigenvalue::bare(a, Nature::INTERIOR));
        }
        if a.abs() <= nv {
            points.push(LEigenvalue::bare(0.0, Nature::BOUNDARY));
        }
        let hi = 0.5 * (a + nv);
        if hi > 0.0 {
            intervals.push(Interval::new((0.5 * (a - nv)).max(0.0), hi));
        }
    }
    Ok(Spectrum::canonical(points, intervals))
}

/// The five regimes of `c` against `a ± ‖v‖`.
fn c_iva(c: f64, v: Vec2, a: f64) -> Result<Spectrum, SpectrumError> {
    let nv = v.norm();
    if nv == 0.0 {
        return Err(SpectrumError::DomainError(
            "scalar-block family needs v nonzero".into(),
        ));
    }
    let interior = |x: f64| LEigenvalue::bare(x, Nature::INTERIOR);
    let (points, intervals) = if c < a - nv {
        (
            vec![interior(a)],
            vec![Interval::new(0.5 * (c + a - nv), 0.5 * (c + a + nv))],
        )
    } else if c == a - nv {
        (vec![interior(a)], vec![Interval::new(c, nv + c)])
    } else if c < a + nv {
        (
            vec![interior(a), interior(c)],
            vec![Interval::new(c, 0.5 * (c + a + nv))],
        )
    } else if c == a + nv {
        (
            vec![interior(a), LEigenvalue::bare(c, Nature::BOUNDARY)],
            Vec::new(),
        )
    } else {
        (vec![interior(a)], Vec::new())
    };
    Ok(Spectrum::canonical(points, intervals))
}

/// Boundary values `μ + s` with `μ = ±√(cd)`, `ξ` a unit kernel vector of
/// `Ã − μI` and `s = (vᵀξ + a − μ)/2 ≥ 0`. For `c, d > 0` the kernel
/// vectors are `±(√(c/(c+d)), √(d/(c+d)))` at `+√(cd)` and
/// `±(√(c/(c+d)), −√(d/(c+d)))` at `−√(cd)`; for `c, d < 0` the second
/// component flips sign. `a` is always interior (`ξ = 0`); `μ ≠ a` is
/// interior when `|μ − a| < |vᵀk|`.
fn off_diag(c: f64, d: f64, v: Vec2, a: f64) -> Result<Spectrum, SpectrumError> {
    if c * d < 0.0 {
        return Err(SpectrumError::DomainError(format!(
            "off-diagonal family needs cd >= 0, got c={c}, d={d}"
        )));
    }
    if c + d == 0.0 {
        return Err(SpectrumError::DomainError(
            "off-diagonal family needs c + d != 0".into(),
        ));
    }
    let sign = if c + d > 0.0 { 1.0 } else { -1.0 };
    let root = (c * d).sqrt();
    let k1 = (c / (c + d)).sqrt();
    let k2 = (d / (c + d)).sqrt();

    let mut points = vec![LEigenvalue::bare(a, Nature::INTERIOR)];
    let branches: &[(f64, Vec2)] = &[
        (root, Vec2::new(k1, sign * k2)),
        (-root, Vec2::new(k1, -sign * k2)),
    ];
    let branches = if root == 0.0 {
        &branches[..1]
    } else {
        branches
    };
    for &(mu, k) in branches {
        for xi in [k, -k] {
            let s = 0.5 * (v.dot(xi) + a - mu);
            if s >= 0.0 {
                points.push(LEigenvalue::bare(mu + s, Nature::BOUNDARY));
            }
        }
        if mu != a && (mu - a).abs() < v.dot(k).abs() {
            points.push(LEigenvalue::bare(mu, Nature::INTERIOR));
        }
    }
    Ok(Spectrum::canonical(points, Vec::new()))
}
