//! Brute-force L-spectra straight from the cone definitions, plus a
//! Hausdorff comparison of spectra.
//!
//! Boundary values are found by sweeping `ξ(θ) = (cos θ, sin θ)` and
//! solving `(A − λI)[ξ;1] = s[−ξ;1]` for `(λ, s)` by least squares at each
//! angle. Interior values come from a Schur/SVD eigen-analysis. Nothing
//! here touches the algebraic systems in [`crate::spectrum`].

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::smallmat::Mat3;
use crate::spectrum::{Interval, LEigenvalue, Nature, Spectrum};

const THETA_BISECTIONS: usize = 40;
/// Eigenvectors whose normalized third coordinate is below this cannot be
/// scaled to `[ξ;1]`.
const THIRD_COORD_CUTOFF: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub theta_steps: usize,
    pub residual_tol: f64,
    pub cluster_gap: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            theta_steps: 100_000,
            residual_tol: 1e-9,
            cluster_gap: 1e-6,
        }
    }
}

/// Least-squares solution of the 3x2 boundary system at one angle.
#[derive(Debug, Clone, Copy)]
struct Sample {
    /// Residual projected on `[ξ⊥; 0]`, signed so zero crossings show.
    residual: f64,
    lambda: f64,
    s: f64,
}

fn sample(a: &Mat3, theta: f64) -> Sample {
    let (sn, cs) = theta.sin_cos();
    let xi = [cs, sn];
    // Unknowns (λ, s): column for λ is −[ξ;1], column for s is −[−ξ;1];
    // right-hand side is −(A[ξ;1]).
    let ax = a.mul_vec([cs, sn, 1.0]);
    let cols = [[-xi[0], -xi[1], -1.0], [xi[0], xi[1], -1.0]];
    let rhs = [-ax[0], -ax[1], -ax[2]];
    let dot = |p: &[f64; 3], q: &[f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let g00 = dot(&cols[0], &cols[0]);
    let g01 = dot(&cols[0], &cols[1]);
    let g11 = dot(&cols[1], &cols[1]);
    let r0 = dot(&cols[0], &rhs);
    let r1 = dot(&cols[1], &rhs);
    let det = g00 * g11 - g01 * g01;
    let lambda = (g11 * r0 - g01 * r1) / det;
    let s = (g00 * r1 - g01 * r0) / det;
    let res: [f64; 3] = std::array::from_fn(|i| cols[0][i] * lambda + cols[1][i] * s - rhs[i]);
    Sample {
        residual: -sn * res[0] + cs * res[1],
        lambda,
        s,
    }
}

/// L-spectrum of `A` by dense angular sweep plus eigen-analysis.
pub fn oracle_spectrum(a: &Mat3, cfg: &OracleConfig) -> Spectrum {
    let mut points = oracle_interior(a);
    let (bd_points, intervals) = oracle_boundary(a, cfg);
    points.extend(bd_points);
    Spectrum::canonical(points, intervals)
}

fn oracle_interior(a: &Mat3) -> Vec<LEigenvalue> {
    let m = Matrix3::from_fn(|i, j| a.get(i, j));
    let scale = a.max_abs().max(1.0);
    let mut reals: Vec<f64> = m
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * scale)
        .map(|z| z.re)
        .collect();
    reals.sort_by(f64::total_cmp);
    // Collapse clusters from multiple eigenvalues.
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in reals {
        match clusters.last_mut() {
            Some(c) if (x - c[c.len() - 1]).abs() <= 1e-6 * scale => c.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    clusters
        .into_iter()
        .filter_map(|c| {
            let lambda = c.iter().sum::<f64>() / c.len() as f64;
            let shifted = m - Matrix3::identity() * lambda;
            let svd = shifted.svd(false, true);
            let vt = svd.v_t?;
            let null_tol = 1e-7 * scale;
            // Orthonormal null basis: right singular vectors with small σ.
            let basis: Vec<[f64; 3]> = (0..3)
                .filter(|&k| svd.singular_values[k] <= null_tol)
                .map(|k| [vt[(k, 0)], vt[(k, 1)], vt[(k, 2)]])
                .collect();
            let basis = if basis.is_empty() {
                let k = svd.singular_values.imin();
                vec![[vt[(k, 0)], vt[(k, 1)], vt[(k, 2)]]]
            } else {
                basis
            };
            // Minimum-norm x in span(basis) with x₃ = 1: x = V Vᵀe₃ / ‖Vᵀe₃‖².
            let proj: f64 = basis.iter().map(|b| b[2] * b[2]).sum();
            if proj.sqrt() <= THIRD_COORD_CUTOFF {
                return None;
            }
            let x: [f64; 3] =
                std::array::from_fn(|i| basis.iter().map(|b| b[i] * b[2]).sum::<f64>() / proj);
            let xi = crate::smallmat::Vec2::new(x[0], x[1]);
            (xi.norm() < 1.0 - 1e-9).then(|| LEigenvalue::interior(lambda, xi))
        })
        .collect()
}

fn oracle_boundary(a: &Mat3, cfg: &OracleConfig) -> (Vec<LEigenvalue>, Vec<Interval>) {
    let n = cfg.theta_steps.max(3);
    let step = TAU / n as f64;
    let rtol = cfg.residual_tol * a.max_abs().max(1.0);
    let samples: Vec<Sample> = (0..n)
        .into_par_iter()
        .map(|i| sample(a, i as f64 * step))
        .collect();
    let accepted: Vec<bool> = samples
        .iter()
        .map(|p| p.residual.abs() <= rtol && p.s >= -rtol)
        .collect();

    let mut points = Vec::new();
    let mut intervals = Vec::new();

    // Isolated solutions: sign changes of the residual, refined by bisection.
    for i in 0..n {
        let j = (i + 1) % n;
        let (ri, rj) = (samples[i].residual, samples[j].residual);
        if ri.abs() <= rtol && rj.abs() <= rtol {
            continue;
        }
        if ri * rj < 0.0 {
            let lo = i as f64 * step;
            let theta = bisect(lo, lo + step, |t| sample(a, t).residual, ri);
            let p = sample(a, theta);
            if p.residual.abs() <= rtol && p.s >= -rtol {
                points.push(LEigenvalue::bare(p.lambda + p.s.min(0.0), Nature::BOUNDARY));
            }
        }
    }

    // Runs of accepted angles: where the residual vanishes identically the
    // accepted λ sweep out intervals.
    for run in accepted_runs(&accepted) {
        let lambdas: Vec<f64> = run.iter().map(|&i| samples[i].lambda).collect();
        let (mut lo, mut hi) = lambdas
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
                (l.min(x), h.max(x))
            });
        if hi - lo <= cfg.cluster_gap {
            let best = run
                .iter()
                .min_by(|&&x, &&y| {
                    samples[x]
                        .residual
                        .abs()
                        .total_cmp(&samples[y].residual.abs())
                })
                .copied()
                .unwrap_or(run[0]);
            points.push(LEigenvalue::bare(samples[best].lambda, Nature::BOUNDARY));
            continue;
        }
        // Parabolic refinement of interior extrema.
        for k in 1..run.len().saturating_sub(1) {
            let (y0, y1, y2) = (lambdas[k - 1], lambdas[k], lambdas[k + 1]);
            let curv = y0 - 2.0 * y1 + y2;
            if curv != 0.0 && ((y1 <= y0 && y1 <= y2) || (y1 >= y0 && y1 >= y2)) {
                let vertex = y1 - (y2 - y0).powi(2) / (8.0 * curv);
                lo = lo.min(vertex);
                hi = hi.max(vertex);
            }
        }
        // Bisection at the run's edges where acceptance flips.
        if run.len() < n {
            let accept = |t: f64| {
                let p = sample(a, t);
                if p.residual.abs() <= rtol && p.s >= -rtol {
                    1.0
                } else {
                    -1.0
                }
            };
            let t_first = run[0] as f64 * step;
            let t_last = run[run.len() - 1] as f64 * step;
            for edge in [
                bisect(t_first - step, t_first, accept, -1.0),
                bisect(t_last, t_last + step, accept, 1.0),
            ] {
                let p = sample(a, edge);
                lo = lo.min(p.lambda);
                hi = hi.max(p.lambda);
            }
        }
        intervals.push(Interval::new(lo, hi));
    }
    (points, intervals)
}

/// Maximal circular runs of `true`, each as an ordered list of indices.
fn accepted_runs(accepted: &[bool]) -> Vec<Vec<usize>> {
    let n = accepted.len();
    let Some(start) = (0..n).find(|&i| !accepted[i]) else {
        return if n == 0 {
            Vec::new()
        } else {
            vec![(0..n).collect()]
        };
    };
    let mut runs = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for k in 1..=n {
        let i = (start + k) % n;
        if accepted[i] {
            current.push(i);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    runs
}

/// Bisection for a sign change of `f` on `[lo, hi]`, where `f(lo)` has the
/// sign of `f_lo`. The returned point lies on the `f_lo` side when `f` is
/// an indicator.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, f_lo: f64) -> f64 {
    let lo_sign = f_lo.signum();
    for _ in 0..THETA_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo_sign > 0.0 {
        lo
    } else {
        hi
    }
}

/// Result of comparing two spectra as subsets of ℝ.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDiff {
    pub hausdorff_distance: f64,
    /// Values of the first spectrum farther than `tol` from the second.
    pub missing: Vec<f64>,
    /// Values of the second spectrum farther than `tol` from the first.
    pub extra: Vec<f64>,
}

impl SpectrumDiff {
    pub fn is_equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Closed components of a spectrum, sorted: points become `[x, x]`.
fn components(s: &Spectrum) -> Vec<(f64, f64)> {
    let mut c: Vec<(f64, f64)> = s
        .points
        .iter()
        .map(|p| (p.value, p.value))
        .chain(s.intervals.iter().map(|iv| (iv.lo, iv.hi)))
        .collect();
    c.sort_by(|x, y| x.0.total_cmp(&y.0));
    c
}

fn distance_to(x: f64, comps: &[(f64, f64)]) -> f64 {
    comps
        .iter()
        .map(|&(lo, hi)| (lo - x).max(x - hi).max(0.0))
        .fold(f64::INFINITY, f64::min)
}

/// Points of `from` where the distance to `to` can peak: component ends
/// and midpoints of gaps in `to` that fall inside a component.
fn probe_points(from: &[(f64, f64)], to: &[(f64, f64)]) -> Vec<f64> {
    let mut probes = Vec::new();
    for &(lo, hi) in from {
        probes.push(lo);
        if hi > lo {
            probes.push(hi);
            for w in to.windows(2) {
                let mid = 0.5 * (w[0].1 + w[1].0);
                if mid > lo && mid < hi {
                    probes.push(mid);
                }
            }
            if let (Some(first), Some(last)) = (to.first(), to.last()) {
                for x in [first.0, last.1] {
                    if x > lo && x < hi {
                        probes.push(x);
                    }
                }
            }
        }
    }
    probes
}

/// Symmetric Hausdorff distance between two spectra; `missing`/`extra`
/// list the probe points of one-sided gaps larger than `tol`.
pub fn spectra_equal(s1: &Spectrum, s2: &Spectrum, tol: f64) -> SpectrumDiff {
    let (c1, c2) = (components(s1), components(s2));
    if c1.is_empty() && c2.is_empty() {
        return SpectrumDiff {
            hausdorff_distance: 0.0,
            missing: Vec::new(),
            extra: Vec::new(),
        };
    }
    let one_sided = |from: &[(f64, f64)], to: &[(f64, f64)]| -> (f64, Vec<f64>) {
        let mut worst = 0.0f64;
        let mut far = Vec::new();
        for x in probe_points(from, to) {
            let d = distance_to(x, to);
            worst = worst.max(d);
            if d > tol {
                far.push(x);
            }
        }
        (worst, far)
    };
    let (d12, missing) = one_sided(&c1, &c2);
    let (d21, extra) = one_sided(&c2, &c1);
    SpectrumDiff {
        hausdorff_distance: d12.max(d21),
        missing,
        extra,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OracleConfig {
        OracleConfig {
            theta_steps: 20_000,
            ..OracleConfig::default()
        }
    }

    fn pt(x: f64) -> LEigenvalue {
        LEigenvalue::bare(x, Nature::BOUNDARY)
    }

    #[test]
    fn identity() {
        let s = oracle_spectrum(&Mat3::IDENTITY, &cfg());
        assert_eq!(s.points.len(), 1);
        assert!((s.points[0].value - 1.0).abs() < 1e-12);
        assert!(s.intervals.is_empty());
    }

    #[test]
    fn diag_zero_zero_two() {
        let a = Mat3::new([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 2.0]]);
        let s = oracle_spectrum(&a, &cfg());
        let v = s.values();
        assert_eq!(v.len(), 2);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn e31_interval() {
        let s = oracle_spectrum(&Mat3::unit(3, 1), &cfg());
        assert_eq!(s.intervals.len(), 1);
        assert!(s.intervals[0].lo.abs() < 1e-9);
        assert!((s.intervals[0].hi - 0.5).abs() < 1e-9);
        assert_eq!(s.values(), vec![0.0]);
        assert!(s.points[0].nature.interior);
    }

    #[test]
    fn hausdorff_examples() {
        let one = Spectrum::canonical(vec![pt(1.0)], Vec::new());
        assert_eq!(spectra_equal(&one, &one, 1e-8).hausdorff_distance, 0.0);

        let near = Spectrum::canonical(vec![pt(1.0 + 2e-9)], Vec::new());
        assert!(spectra_equal(&one, &near, 1e-8).is_equal());

        let iv = Spectrum::canonical(Vec::new(), vec![Interval::new(0.0, 0.5)]);
        let neg = Spectrum::canonical(vec![pt(-0.5)], Vec::new());
        let d = spectra_equal(&iv, &neg, 1e-8);
        assert!((d.hausdorff_distance - 1.0).abs() < 1e-15);
        assert!(d.missing.contains(&0.0) && d.missing.contains(&0.5));
        assert_eq!(d.extra, vec![-0.5]);
    }

    #[test]
    fn hausdorff_sees_gap_inside_interval() {
        let iv = Spectrum::canonical(Vec::new(), vec![Interval::new(0.0, 4.0)]);
        let ends = Spectrum::canonical(vec![pt(0.0), pt(4.0)], Vec::new());
        let d = spectra_equal(&iv, &ends, 1e-8);
        assert!((d.hausdorff_distance - 2.0).abs() < 1e-15);
        assert_eq!(d.missing, vec![2.0]);
    }

    #[test]
    fn empty_spectra() {
        let e = Spectrum::empty();
        assert_eq!(spectra_equal(&e, &e, 1e-8).hausdorff_distance, 0.0);
        let one = Spectrum::canonical(vec![pt(1.0)], Vec::new());
        assert!(spectra_equal(&e, &one, 1e-8)
            .hausdorff_distance
            .is_infinite());
    }
}
