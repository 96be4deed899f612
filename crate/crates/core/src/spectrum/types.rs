use crate::smallmat::Vec2;

/// Values closer than `DEDUP_REL·max(1,|λ|)` are the same L-eigenvalue.
pub const DEDUP_REL: f64 = 1e-8;

/// Intervals no longer than this are stored as points.
pub const DEGENERATE_INTERVAL: f64 = 1e-10;

/// Which parts of the cone witness an L-eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Nature {
    pub interior: bool,
    pub boundary: bool,
}

impl Nature {
    pub const INTERIOR: Nature = Nature {
        interior: true,
        boundary: false,
    };
    pub const BOUNDARY: Nature = Nature {
        interior: false,
        boundary: true,
    };
    pub const BOTH: Nature = Nature {
        interior: true,
        boundary: true,
    };

    pub fn union(self, other: Nature) -> Nature {
        Nature {
            interior: self.interior || other.interior,
            boundary: self.boundary || other.boundary,
        }
    }
}

/// Boundary certificate: `(A − λI)[ξ;1] = s[−ξ;1]` with `‖ξ‖ = 1`, `s ≥ 0`
/// and `λ = μ + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryWitness {
    pub xi: Vec2,
    pub mu: f64,
    pub s: f64,
}

/// An L-eigenvalue with its nature flags.
///
/// Solvers attach witnesses (`[ξ;1]` stored through `ξ`, third coordinate
/// implicitly 1); the closed-form oracle leaves them empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LEigenvalue {
    pub value: f64,
    pub nature: Nature,
    pub interior_xi: Option<Vec2>,
    pub boundary: Option<BoundaryWitness>,
}

impl LEigenvalue {
    pub fn interior(value: f64, xi: Vec2) -> Self {
        LEigenvalue {
            value,
            nature: Nature::INTERIOR,
            interior_xi: Some(xi),
            boundary: None,
        }
    }

    pub fn boundary(value: f64, witness: BoundaryWitness) -> Self {
        LEigenvalue {
            value,
            nature: Nature::BOUNDARY,
            interior_xi: None,
            boundary: Some(witness),
        }
    }

    /// A value with flags only.
    pub fn bare(value: f64, nature: Nature) -> Self {
        LEigenvalue {
            value,
            nature,
            interior_xi: None,
            boundary: None,
        }
    }

    fn absorb(&mut self, other: &LEigenvalue) {
        self.nature = self.nature.union(other.nature);
        if self.interior_xi.is_none() {
            self.interior_xi = other.interior_xi;
        }
        if self.boundary.is_none() {
            self.boundary = other.boundary;
        }
    }
}

/// Closed interval of boundary L-eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn shifted(&self, gamma: f64) -> Interval {
        Interval::new(self.lo + gamma, self.hi + gamma)
    }
}

/// L-spectrum: isolated values plus closed intervals, in canonical form
/// once built through [`Spectrum::canonical`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub points: Vec<LEigenvalue>,
    pub intervals: Vec<Interval>,
}

fn dedup_slack(x: f64) -> f64 {
    DEDUP_REL * x.abs().max(1.0)
}

impl Spectrum {
    pub fn empty() -> Self {
        Spectrum::default()
    }

    /// Canonical form:
    /// - degenerate intervals become boundary points;
    /// - intervals are sorted and overlapping ones merged;
    /// - points are sorted and merged at [`DEDUP_REL`], nature flags united;
    /// - points covered by an interval are flagged boundary, and dropped
    ///   when that is their only nature.
    pub fn canonical(points: Vec<LEigenvalue>, intervals: Vec<Interval>) -> Spectrum {
        let mut points = points;
        let mut wide = Vec::with_capacity(intervals.len());
        for iv in intervals {
            if iv.width() <= DEGENERATE_INTERVAL {
                points.push(LEigenvalue::bare(0.5 * (iv.lo + iv.hi), Nature::BOUNDARY));
            } else {
                wide.push(iv);
            }
        }
        wide.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(wide.len());
        for iv in wide {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi + dedup_slack(last.hi) => {
                    last.hi = last.hi.max(iv.hi);
                }
                _ => merged.push(iv),
            }
        }

        points.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut deduped: Vec<LEigenvalue> = Vec::with_capacity(points.len());
        for p in points {
            match deduped.last_mut() {
                Some(last) if (p.value - last.value).abs() <= dedup_slack(last.value) => {
                    // Prefer the value carrying a solver witness.
                    if last.interior_xi.is_none()
                        && last.boundary.is_none()
                        && (p.interior_xi.is_some() || p.boundary.is_some())
                    {
                        last.value = p.value;
                    }
                    last.absorb(&p);
                }
                _ => deduped.push(p),
            }
        }

        let points = deduped
            .into_iter()
            .filter_map(|mut p| {
                if merged
                    .iter()
                    .any(|iv| iv.contains(p.value, dedup_slack(p.value)))
                {
                    if !p.nature.interior {
                        return None;
                    }
                    p.nature.boundary = true;
                }
                Some(p)
            })
            .collect();
        Spectrum {
            points,
            intervals: merged,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !self.intervals.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// σ_int as a spectrum of its own.
    pub fn interior_part(&self) -> Spectrum {
        Spectrum {
            points: self
                .points
                .iter()
                .filter(|p| p.nature.interior)
                .map(|p| LEigenvalue::bare(p.value, Nature::INTERIOR))
                .collect(),
            intervals: Vec::new(),
        }
    }

    /// σ_bd as a spectrum of its own.
    pub fn boundary_part(&self) -> Spectrum {
        let points = self
            .points
            .iter()
            .filter(|p| p.nature.boundary)
            .map(|p| LEigenvalue::bare(p.value, Nature::BOUNDARY))
            .collect();
        Spectrum::canonical(points, self.intervals.clone())
    }

    pub fn shifted(&self, gamma: f64) -> Spectrum {
        Spectrum {
            points: self
                .points
                .iter()
                .map(|p| LEigenvalue {
                    value: p.value + gamma,
                    ..*p
                })
                .collect(),
            intervals: self.intervals.iter().map(|iv| iv.shifted(gamma)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.points.iter().all(|p| p.value.is_finite())
            && self
                .intervals
                .iter()
                .all(|iv| iv.lo.is_finite() && iv.hi.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_interval_becomes_point() {
        let s = Spectrum::canonical(Vec::new(), vec![Interval::new(1.0, 1.0 + 1e-12)]);
        assert!(s.intervals.is_empty());
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].nature, Nature::BOUNDARY);
    }

    #[test]
    fn close_points_merge_and_unite_natures() {
        let s = Spectrum::canonical(
            vec![
                LEigenvalue::bare(2.0, Nature::INTERIOR),
                LEigenvalue::bare(2.0 + 1e-12, Nature::BOUNDARY),
                LEigenvalue::bare(-1.0, Nature::BOUNDARY),
            ],
            Vec::new(),
        );
        assert_eq!(s.values(), vec![-1.0, 2.0]);
        assert_eq!(s.points[1].nature, Nature::BOTH);
    }

    #[test]
    fn covered_boundary_points_are_absorbed() {
        let s = Spectrum::canonical(
            vec![
                LEigenvalue::bare(0.25, Nature::BOUNDARY),
                LEigenvalue::bare(0.0, Nature::INTERIOR),
                LEigenvalue::bare(0.75, Nature::BOUNDARY),
            ],
            vec![Interval::new(0.0, 0.5)],
        );
        assert_eq!(s.values(), vec![0.0, 0.75]);
        assert_eq!(s.points[0].nature, Nature::BOTH);
        assert_eq!(s.intervals, vec![Interval::new(0.0, 0.5)]);
    }

    #[test]
    fn overlapping_intervals_merge() {
        let s = Spectrum::canonical(
            Vec::new(),
            vec![
                Interval::new(1.0, 2.0),
                Interval::new(0.0, 1.0),
                Interval::new(3.0, 4.0),
            ],
        );
        assert_eq!(
            s.intervals,
            vec![Interval::new(0.0, 2.0), Interval::new(3.0, 4.0)]
        );
    }
}
