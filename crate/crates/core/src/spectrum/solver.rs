//! Interior and boundary L-eigenvalues of 3x3 matrices.
//!
//! Interior values are standard eigenvalues whose eigenspace contains a
//! vector `[ξ;1]` with `‖ξ‖ < 1`. Boundary values are `λ = μ + s`, `s ≥ 0`,
//! solving `(A − λI)[ξ;1] = s[−ξ;1]` with `‖ξ‖ = 1`; they are found through
//! four algebraic systems split on whether `μ` is an eigenvalue of the
//! leading block `Ã`:
//!
//! - System I: `μ` is not an eigenvalue, `‖(Ã − μI)⁻¹u‖ = 1`;
//! - System II: `u`, `v` in the ranges of `Ã − μI` and its transpose;
//! - System III: geometric multiplicity 1 and `v` outside the row space;
//! - System IV: `Ã = μI`, `u = 0`, `v ≠ 0`, which yields an interval.

use rayon::prelude::*;

use super::types::{BoundaryWitness, Interval, LEigenvalue, Spectrum, DEGENERATE_INTERVAL};
use super::SpectrumError;
use crate::smallmat::{
    adj2, cross, eig2_real, norm3, pinv_small, rank_one_kernel, rank_one_range, real_roots, Mat2,
    Mat3, RealPoly, Vec2,
};

/// Absolute tolerance for a matrix: `tol·max(1, ‖A‖_max)`.
pub fn scaled_tol(a: &Mat3, tol: f64) -> f64 {
    tol * a.max_abs().max(1.0)
}

/// Boundary part of the spectrum: isolated points and intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundarySpectrum {
    pub points: Vec<LEigenvalue>,
    pub intervals: Vec<Interval>,
}

/// Standard eigenvalues of `A` admitting an eigenvector `[ξ;1]` with
/// `‖ξ‖ < 1 − tol`.
pub fn interior_spectrum(a: &Mat3, tol: f64) -> Vec<LEigenvalue> {
    let tau = scaled_tol(a, tol);
    let Ok(roots) = real_roots(&a.char_poly(), tol) else {
        return Vec::new();
    };
    roots
        .into_iter()
        .filter_map(|root| {
            let xi = min_norm_normalized_eigvec(a, root.value, tau)?;
            (xi.norm() < 1.0 - tol).then(|| LEigenvalue::interior(root.value, xi))
        })
        .collect()
}

/// Among null vectors `x` of `A − λI` with `x₃ = 1`, the one with the
/// smallest `‖ξ‖`; `None` when every null vector has `x₃ = 0`.
fn min_norm_normalized_eigvec(a: &Mat3, lambda: f64, tau: f64) -> Option<Vec2> {
    let n = a.shift(-lambda);
    let rows = [n.row(0), n.row(1), n.row(2)];
    let best_cross = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(i, j)| cross(rows[i], rows[j]))
        .max_by(|x, y| norm3(*x).total_cmp(&norm3(*y)))
        .unwrap_or([0.0; 3]);

    if norm3(best_cross) > tau * n.max_abs().max(1.0) {
        // Rank 2: one-dimensional null space.
        let x = best_cross;
        if x[2] == 0.0 {
            return None;
        }
        return Some(Vec2::new(x[0] / x[2], x[1] / x[2]));
    }
    let dominant = rows
        .into_iter()
        .max_by(|x, y| norm3(*x).total_cmp(&norm3(*y)))
        .unwrap_or([0.0; 3]);
    if norm3(dominant) > tau {
        // Rank 1: null space is the plane r·x = 0.
        let w = Vec2::new(dominant[0], dominant[1]);
        let w2 = w.norm_sq();
        if w2 == 0.0 {
            return None;
        }
        return Some(w.scale(-dominant[2] / w2));
    }
    Some(Vec2::ZERO)
}

/// System I: roots `μ` of `‖adj(Ã − μI)u‖² − det(Ã − μI)² = 0` that are not
/// eigenvalues of `Ã`, with `s = (a − μ − vᵀ(Ã − μI)⁻¹u)/2 ≥ 0`.
pub fn solve_system_i(a: &Mat3, tol: f64) -> Vec<LEigenvalue> {
    let tau = scaled_tol(a, tol);
    let (tilde, u, v) = (a.tilde(), a.u(), a.v());
    if u.norm() <= tau {
        return Vec::new();
    }
    let resolvent = system_i_polynomial(&tilde, u);
    let Ok(roots) = real_roots(&resolvent, tol) else {
        return Vec::new();
    };
    let eig_tol = tau * (1.0 + tilde.max_abs().powi(2));
    roots
        .into_iter()
        .filter_map(|root| {
            let mu = root.value;
            let m = tilde.shift(-mu);
            let det = m.det();
            if det.abs() <= eig_tol {
                return None;
            }
            let xi = adj2(&m).mul_vec(u).scale(-1.0 / det);
            let s = 0.5 * (a.a() - mu + v.dot(xi));
            if s < -tau {
                return None;
            }
            let s = s.max(0.0);
            let xi = xi.normalized()?;
            Some(LEigenvalue::boundary(mu + s, BoundaryWitness { xi, mu, s }))
        })
        .collect()
}

/// `‖adj(Ã − μI)u‖² − det(Ã − μI)²` as a quartic in `μ`.
pub fn system_i_polynomial(tilde: &Mat2, u: Vec2) -> RealPoly {
    // adj(Ã − μI)u = adj(Ã)u − μu.
    let p = adj2(tilde).mul_vec(u);
    let d0 = tilde.det();
    let d1 = -tilde.trace();
    RealPoly::new(&[
        p.norm_sq() - d0 * d0,
        -2.0 * p.dot(u) - 2.0 * d0 * d1,
        u.norm_sq() - d1 * d1 - 2.0 * d0,
        -2.0 * d1,
        -1.0,
    ])
}

/// Systems II–IV for a real eigenvalue `μ` of `Ã`.
///
/// Returns the isolated boundary values and, for System IV, the interval
/// `μ + [max(0, (a−μ−‖v‖)/2), (a−μ+‖v‖)/2]` (demoted to a point when
/// degenerate).
pub fn solve_systems_ii_iii_iv(
    a: &Mat3,
    mu: f64,
    tol: f64,
) -> Result<(Vec<LEigenvalue>, Option<Interval>), SpectrumError> {
    let tau = scaled_tol(a, tol);
    let (tilde, u, v) = (a.tilde(), a.u(), a.v());
    let m = tilde.shift(-mu);
    if m.det().abs() > tau * (1.0 + tilde.max_abs().powi(2)) {
        return Err(SpectrumError::InvalidMu(mu));
    }
    let b = a.a() - mu;
    let mut points = Vec::new();

    if m.max_abs() <= tau {
        // Ã = μI: geometric multiplicity 2, Img(Ã − μI) = {0}.
        if u.norm() > tau {
            return Ok((points, None));
        }
        let v_norm = v.norm();
        if v_norm <= tau {
            // System II with u = v = 0: s = (a − μ)/2, any unit ξ.
            let s = 0.5 * b;
            if s >= -tau {
                let s = s.max(0.0);
                let witness = BoundaryWitness {
                    xi: Vec2::new(1.0, 0.0),
                    mu,
                    s,
                };
                points.push(LEigenvalue::boundary(mu + s, witness));
            }
            return Ok((points, None));
        }
        // System IV: |a − μ − 2s| ≤ ‖v‖ and s ≥ 0.
        let s_lo = (0.5 * (b - v_norm)).max(0.0);
        let s_hi = 0.5 * (b + v_norm);
        if s_hi < s_lo - tau {
            return Ok((points, None));
        }
        if s_hi - s_lo <= DEGENERATE_INTERVAL {
            let s = s_lo;
            let witness = system_iv_witness(v, b, mu, s);
            points.push(LEigenvalue::boundary(mu + s, witness));
            return Ok((points, None));
        }
        return Ok((points, Some(Interval::new(mu + s_lo, mu + s_hi))));
    }

    // Numerical rank 1: geometric multiplicity 1.
    let range = rank_one_range(&m);
    if range.perp().dot(u).abs() > tau {
        // u ∉ Img(Ã − μI): no boundary value through this μ.
        return Ok((points, None));
    }
    let kernel = rank_one_kernel(&m);
    let m_pinv = pinv_small(&m.0, tol);
    let xi0 = -Mat2(m_pinv).mul_vec(u);
    let stacked = [m.0[0], m.0[1], v.0];
    let stacked_pinv = pinv_small(&stacked, tol);
    let apply_stacked = |rhs: [f64; 3]| -> Vec2 {
        Vec2::new(
            stacked_pinv[0].iter().zip(rhs).map(|(p, r)| p * r).sum(),
            stacked_pinv[1].iter().zip(rhs).map(|(p, r)| p * r).sum(),
        )
    };

    if kernel.dot(v).abs() <= tau {
        // System II: s fixed by vᵀ(Ã − μI)†u = a − μ − 2s.
        let s = 0.5 * (b + v.dot(xi0));
        if s < -tau {
            return Ok((points, None));
        }
        let norm = apply_stacked([u.x(), u.y(), b - 2.0 * s]).norm();
        if norm > 1.0 + tau {
            return Ok((points, None));
        }
        let s = s.max(0.0);
        let slack = (1.0 - xi0.norm_sq()).max(0.0).sqrt();
        let xi = (xi0 + kernel.scale(slack)).normalized().unwrap_or(kernel);
        points.push(LEigenvalue::boundary(mu + s, BoundaryWitness { xi, mu, s }));
        return Ok((points, None));
    }

    // System III: ξ(s) = −[Ã − μI; vᵀ]†[u; a − μ − 2s] is affine in s and
    // ‖ξ(s)‖ = 1 is a quadratic.
    let offset = -apply_stacked([u.x(), u.y(), b]);
    let slope = apply_stacked([0.0, 0.0, 2.0]);
    let qa = slope.norm_sq();
    let qb = 2.0 * offset.dot(slope);
    let qc = offset.norm_sq() - 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    let scale = qb * qb + (4.0 * qa * qc).abs();
    if disc < -64.0 * f64::EPSILON * scale {
        return Ok((points, None));
    }
    let root = disc.max(0.0).sqrt();
    let candidates = if root <= 64.0 * f64::EPSILON * scale.sqrt() {
        vec![-qb / (2.0 * qa)]
    } else {
        vec![(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)]
    };
    for s in candidates {
        if s < -tau {
            continue;
        }
        let s = s.max(0.0);
        let xi = offset + slope.scale(s);
        let xi = xi.normalized().unwrap_or(xi);
        points.push(LEigenvalue::boundary(mu + s, BoundaryWitness { xi, mu, s }));
    }
    Ok((points, None))
}

/// Unit `ξ` with `vᵀξ = 2s − (a − μ)`, for a value inside a System IV range.
fn system_iv_witness(v: Vec2, b: f64, mu: f64, s: f64) -> BoundaryWitness {
    let dir = v.normalized().unwrap_or(Vec2::new(1.0, 0.0));
    let along = ((2.0 * s - b) / v.norm()).clamp(-1.0, 1.0);
    let across = (1.0 - along * along).max(0.0).sqrt();
    BoundaryWitness {
        xi: dir.scale(along) + dir.perp().scale(across),
        mu,
        s,
    }
}

/// Residual of `(A − λI)[ξ;1] − s[−ξ;1]`.
pub fn boundary_residual(a: &Mat3, lambda: f64, w: &BoundaryWitness) -> f64 {
    let x = [w.xi.x(), w.xi.y(), 1.0];
    let ax = a.shift(-lambda).mul_vec(x);
    let target = [-w.s * w.xi.x(), -w.s * w.xi.y(), w.s];
    norm3([ax[0] - target[0], ax[1] - target[1], ax[2] - target[2]])
}

/// Residual of `(A − λI)[ξ;1]`.
pub fn interior_residual(a: &Mat3, lambda: f64, xi: Vec2) -> f64 {
    norm3(a.shift(-lambda).mul_vec([xi.x(), xi.y(), 1.0]))
}

/// Union of System I and Systems II–IV over every real eigenvalue of `Ã`.
/// Points whose witness fails the defining equation are dropped.
pub fn boundary_spectrum(a: &Mat3, tol: f64) -> BoundarySpectrum {
    let tau = scaled_tol(a, tol);
    let mut points = solve_system_i(a, tol);
    let mut intervals = Vec::new();
    for eig in eig2_real(&a.tilde(), tol) {
        // eig2_real's eigenvalues always pass the eigenvalue test.
        if let Ok((pts, iv)) = solve_systems_ii_iii_iv(a, eig.value, tol) {
            points.extend(pts);
            intervals.extend(iv);
        }
    }
    points.retain(|p| {
        p.boundary.is_some_and(|w| {
            w.s >= -tau
                && (w.xi.norm() - 1.0).abs() <= tau
                && (p.value - (w.mu + w.s)).abs() <= tau
                && boundary_residual(a, p.value, &w) <= tau
        })
    });
    points.sort_by(|x, y| x.value.total_cmp(&y.value));
    intervals.sort_by(|x: &Interval, y| x.lo.total_cmp(&y.lo));
    BoundarySpectrum { points, intervals }
}

/// The interval of boundary values when `A = [cI 0; vᵀ a]` with `v ≠ 0`
/// and `c < a + ‖v‖`: `[max{c, (a+c−‖v‖)/2}, (a+c+‖v‖)/2]`.
///
/// Structure is tested at `τ = tol·max(1,‖A‖_max)`; the strict inequality
/// is decided by the interval being longer than the degeneracy threshold,
/// the same test the boundary solver applies.
pub fn detect_infinite(a: &Mat3, tol: f64) -> Option<Interval> {
    let tau = scaled_tol(a, tol);
    let tilde = a.tilde();
    let c = 0.5 * tilde.trace();
    if tilde.shift(-c).max_abs() > tau || a.u().norm() > tau {
        return None;
    }
    let v_norm = a.v().norm();
    if v_norm <= tau {
        return None;
    }
    let lo = c.max(0.5 * (a.a() + c - v_norm));
    let hi = 0.5 * (a.a() + c + v_norm);
    (hi - lo > DEGENERATE_INTERVAL).then(|| Interval::new(lo, hi))
}

/// `σ_L(A) = σ_int(A) ∪ σ_bd(A)` in canonical form. Interior values lying
/// in a boundary interval get a boundary witness attached.
pub fn full_spectrum(a: &Mat3, tol: f64) -> Spectrum {
    let mut points = interior_spectrum(a, tol);
    let boundary = boundary_spectrum(a, tol);
    points.extend(boundary.points);
    let mut spectrum = Spectrum::canonical(points, boundary.intervals);
    if spectrum.is_infinite() {
        let mu = 0.5 * a.tilde().trace();
        let b = a.a() - mu;
        for p in spectrum.points.iter_mut() {
            if p.nature.boundary && p.boundary.is_none() {
                let s = (p.value - mu).max(0.0);
                p.boundary = Some(system_iv_witness(a.v(), b, mu, s));
            }
        }
    }
    spectrum
}

/// [`full_spectrum`] over many matrices in parallel; output order follows
/// input order.
pub fn full_spectrum_batch(matrices: &[Mat3], tol: f64) -> Vec<Spectrum> {
    matrices.par_iter().map(|a| full_spectrum(a, tol)).collect()
}
