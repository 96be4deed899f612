//! Fixed-shape dense linear algebra for dimensions up to three.
//!
//! Everything here works on stack arrays. The 3x3 type knows its block
//! partition `A = [Ã u; vᵀ a]`, which the spectrum solvers read directly.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmallMatError {
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
    #[error("polynomial degree {0} exceeds 4")]
    DegreeTooHigh(usize),
}

/// Multiple of machine epsilon used as the rounding floor when deciding
/// whether a computed quantity is zero.
const ROUNDING_FACTOR: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2(pub [f64; 2]);

impl Vec2 {
    pub const ZERO: Vec2 = Vec2([0.0, 0.0]);

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2([x, y])
    }

    pub fn x(self) -> f64 {
        self.0[0]
    }

    pub fn y(self) -> f64 {
        self.0[1]
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    pub fn norm(self) -> f64 {
        self.0[0].hypot(self.0[1])
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Counter-clockwise rotation by 90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2([-self.0[1], self.0[0]])
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2([k * self.0[0], k * self.0[1]])
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn max_abs(self) -> f64 {
        self.0[0].abs().max(self.0[1].abs())
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2([-self.0[0], -self.0[1]])
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub const fn new(rows: [[f64; 2]; 2]) -> Self {
        Mat2(rows)
    }

    pub fn scalar(c: f64) -> Self {
        Mat2([[c, 0.0], [0.0, c]])
    }

    pub fn from_cols(c0: Vec2, c1: Vec2) -> Self {
        Mat2([[c0.0[0], c1.0[0]], [c0.0[1], c1.0[1]]])
    }

    pub fn row(&self, i: usize) -> Vec2 {
        Vec2(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec2 {
        Vec2([self.0[0][j], self.0[1][j]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn shift(&self, gamma: f64) -> Mat2 {
        let mut out = *self;
        out.0[0][0] += gamma;
        out.0[1][1] += gamma;
        out
    }

    pub fn mul_vec(&self, x: Vec2) -> Vec2 {
        Vec2([self.row(0).dot(x), self.row(1).dot(x)])
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        Mat2(self.0.map(|r| r.map(|x| k * x)))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j];
            }
        }
        Mat2(out)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= o.0[i][j];
            }
        }
        out
    }
}

/// Row-major 3x3 matrix with the block partition
///
/// ```text
/// A = [ Ã   u ]
///     [ vᵀ  a ]
/// ```
///
/// where `Ã` is the leading 2x2 block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub const fn new(rows: [[f64; 3]; 3]) -> Self {
        Mat3(rows)
    }

    /// The matrix unit `E_ij` (one-based indices, as in `E₃₁`).
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Mat3::ZERO;
        m.0[i - 1][j - 1] = 1.0;
        m
    }

    pub fn scalar(c: f64) -> Self {
        Mat3::IDENTITY.scale(c)
    }

    pub fn from_blocks(tilde: Mat2, u: Vec2, v: Vec2, a: f64) -> Self {
        let t = &tilde.0;
        Mat3([
            [t[0][0], t[0][1], u.0[0]],
            [t[1][0], t[1][1], u.0[1]],
            [v.0[0], v.0[1], a],
        ])
    }

    pub fn tilde(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[0][1]], [m[1][0], m[1][1]]])
    }

    pub fn u(&self) -> Vec2 {
        Vec2([self.0[0][2], self.0[1][2]])
    }

    pub fn v(&self) -> Vec2 {
        Vec2([self.0[2][0], self.0[2][1]])
    }

    pub fn a(&self) -> f64 {
        self.0[2][2]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[j][i];
            }
        }
        Mat3(out)
    }

    pub fn scale(&self, k: f64) -> Mat3 {
        Mat3(self.0.map(|r| r.map(|x| k * x)))
    }

    /// `A + γI`.
    pub fn shift(&self, gamma: f64) -> Mat3 {
        let mut out = *self;
        for i in 0..3 {
            out.0[i][i] += gamma;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Sum of the three principal 2x2 minors.
    pub fn principal_minor_sum(&self) -> f64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    /// Coefficients of `det(λI − A)` in ascending degree.
    pub fn char_poly(&self) -> RealPoly {
        RealPoly::new(&[-self.det(), self.principal_minor_sum(), -self.trace(), 1.0])
    }

    pub fn mul_vec(&self, x: [f64; 3]) -> [f64; 3] {
        self.0.map(|r| r[0] * x[0] + r[1] * x[1] + r[2] * x[2])
    }

    pub fn row(&self, i: usize) -> [f64; 3] {
        self.0[i]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Block-diagonal embedding `Q ⊕ [1]`.
    pub fn embed(q: &Mat2) -> Mat3 {
        Mat3::from_blocks(*q, Vec2::ZERO, Vec2::ZERO, 1.0)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(out)
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += o.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o.scale(-1.0)
    }
}

pub fn cross(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ]
}

pub fn norm3(x: [f64; 3]) -> f64 {
    x[0].hypot(x[1]).hypot(x[2])
}

/// Adjugate of a 2x2 matrix: `M · adj(M) = det(M) · I`.
pub fn adj2(m: &Mat2) -> Mat2 {
    let [[a, b], [c, d]] = m.0;
    Mat2([[d, -b], [-c, a]])
}

/// One real eigenvalue of a 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eig2 {
    pub value: f64,
    /// 1 or 2.
    pub geometric_multiplicity: u8,
    /// Unit-norm eigenvector. For multiplicity 2 any unit vector qualifies
    /// and `e₁` is returned.
    pub vector: Vec2,
}

/// Real eigenvalues of a 2x2 matrix from its characteristic quadratic.
///
/// A discriminant within `τ²` of zero (with `τ = tol·max(1, ‖M‖_max)`) is
/// treated as a double root; a clearly negative one yields no eigenvalues.
pub fn eig2_real(m: &Mat2, tol: f64) -> Vec<Eig2> {
    let tau = tol * m.max_abs().max(1.0);
    let half_trace = 0.5 * m.trace();
    let half_gap = 0.5 * (m.0[0][0] - m.0[1][1]);
    let disc = half_gap * half_gap + m.0[0][1] * m.0[1][0];
    if disc < -tau * tau {
        return Vec::new();
    }
    let root = disc.max(0.0).sqrt();
    let values: Vec<f64> = if root <= tau {
        vec![half_trace]
    } else {
        // The larger-magnitude root is computed directly; the other via the
        // product of roots where that avoids cancellation.
        let big = if half_trace >= 0.0 {
            half_trace + root
        } else {
            half_trace - root
        };
        let small = if big != 0.0 {
            m.det() / big
        } else {
            half_trace - root
        };
        let mut vs = vec![big, small];
        vs.sort_by(f64::total_cmp);
        vs
    };
    values
        .into_iter()
        .map(|mu| {
            let shifted = m.shift(-mu);
            if shifted.max_abs() <= tau {
                Eig2 {
                    value: mu,
                    geometric_multiplicity: 2,
                    vector: Vec2::new(1.0, 0.0),
                }
            } else {
                Eig2 {
                    value: mu,
                    geometric_multiplicity: 1,
                    vector: rank_one_kernel(&shifted),
                }
            }
        })
        .collect()
}

/// Unit vector orthogonal to the dominant row of a (numerically) rank-1
/// 2x2 matrix.
pub fn rank_one_kernel(m: &Mat2) -> Vec2 {
    let (r0, r1) = (m.row(0), m.row(1));
    let dominant = if r0.norm_sq() >= r1.norm_sq() { r0 } else { r1 };
    dominant.perp().normalized().unwrap_or(Vec2::new(1.0, 0.0))
}

/// Unit vector spanning the column space of a (numerically) rank-1 2x2
/// matrix.
pub fn rank_one_range(m: &Mat2) -> Vec2 {
    let (c0, c1) = (m.col(0), m.col(1));
    let dominant = if c0.norm_sq() >= c1.norm_sq() { c0 } else { c1 };
    dominant.normalized().unwrap_or(Vec2::new(1.0, 0.0))
}

/// Moore–Penrose pseudoinverse of an `R x 2` matrix (`R ≤ 3`), returned
/// as a `2 x R` matrix.
///
/// Dispatch: square and `|det| > τ` uses the exact inverse; numerical
/// rank 1 uses `Mᵀ / tr(MᵀM)`; full column rank uses `(MᵀM)⁻¹Mᵀ`.
pub fn pinv_small<const R: usize>(m: &[[f64; 2]; R], tol: f64) -> [[f64; R]; 2] {
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let tau = tol * scale.max(1.0);
    let mut out = [[0.0; R]; 2];
    if scale <= tau {
        return out;
    }
    let transpose = |k: f64| {
        let mut t = [[0.0; R]; 2];
        for (i, row) in m.iter().enumerate() {
            t[0][i] = k * row[0];
            t[1][i] = k * row[1];
        }
        t
    };

    if R == 2 {
        let sq = Mat2([m[0], m[1]]);
        let det = sq.det();
        if det.abs() > tau * scale.max(1.0) {
            let inv = adj2(&sq).scale(1.0 / det);
            for (orow, irow) in out.iter_mut().zip(inv.0) {
                orow[..2].copy_from_slice(&irow);
            }
            return out;
        }
    }

    let mut gram = Mat2::ZERO;
    for row in m {
        gram.0[0][0] += row[0] * row[0];
        gram.0[0][1] += row[0] * row[1];
        gram.0[1][1] += row[1] * row[1];
    }
    gram.0[1][0] = gram.0[0][1];
    let trace = gram.trace();
    // det(MᵀM) as the sum of squared 2x2 minors, which avoids the
    // cancellation of forming it from the Gram entries.
    let mut gram_det = 0.0;
    for i in 0..R {
        for k in i + 1..R {
            let minor = m[i][0] * m[k][1] - m[i][1] * m[k][0];
            gram_det += minor * minor;
        }
    }
    let half_gap = 0.5 * (gram.0[0][0] - gram.0[1][1]);
    let large = 0.5 * trace + half_gap.hypot(gram.0[0][1]);
    let small_sv = (gram_det / large).sqrt();
    if small_sv <= tau {
        return transpose(1.0 / trace);
    }
    let gram_inv = adj2(&gram).scale(1.0 / gram_det);
    for (i, orow) in out.iter_mut().enumerate() {
        for (k, row) in m.iter().enumerate() {
            orow[k] = gram_inv.0[i][0] * row[0] + gram_inv.0[i][1] * row[1];
        }
    }
    out
}

/// Polynomial with real coefficients in ascending degree, at most quartic.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u32,
}

impl RealPoly {
    pub fn new(coeffs: &[f64]) -> Self {
        RealPoly {
            coeffs: coeffs.to_vec(),
        }
    }

    /// Build from the roots of a monic polynomial.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        RealPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `Σ |cᵢ| |x|ⁱ`, the magnitude scale of a Horner evaluation at `x`.
    pub fn eval_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> RealPoly {
        RealPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        }
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Drop leading coefficients with magnitude at most `tol·‖p‖_∞`.
    fn trimmed(&self, tol: f64) -> Result<RealPoly, SmallMatError> {
        let inf = self.coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
        if inf == 0.0 || !inf.is_finite() {
            return Err(SmallMatError::ZeroPolynomial);
        }
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= tol * inf) {
            coeffs.pop();
        }
        if coeffs.len() > 5 {
            return Err(SmallMatError::DegreeTooHigh(coeffs.len() - 1));
        }
        Ok(RealPoly { coeffs })
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Whether `x` is a root of `p` at tolerance: either `p(x)` is within the
/// rounding noise of its Horner evaluation, or a complex pair of imaginary
/// part at most `tau` could sit at `x` (Taylor bound on `|p(x)|`).
fn vanishes_at(p: &RealPoly, x: f64, tau: f64) -> bool {
    let value = p.eval(x).abs();
    let mut budget = ROUNDING_FACTOR * p.eval_abs(x);
    let mut d = p.derivative().derivative();
    let mut factorial = 2.0;
    let mut power = tau * tau;
    let mut k = 2.0;
    while !d.coeffs.is_empty() {
        budget += d.eval(x).abs() / factorial * power;
        d = d.derivative();
        k += 1.0;
        factorial *= k;
        power *= tau;
    }
    value <= budget
}

/// All real roots of a polynomial of degree at most four.
///
/// Roots are isolated between consecutive critical points (real roots of
/// the derivative, found recursively): a critical point where `p`
/// vanishes at tolerance is a multiple root whose multiplicity is read off
/// the vanishing derivatives; every monotone piece with a strict sign
/// change holds exactly one simple root, found by bisection and polished
/// with two guarded Newton steps. Roots closer than `tol·max(1,|x|)`
/// are merged with summed multiplicity.
pub fn real_roots(p: &RealPoly, tol: f64) -> Result<Vec<Root>, SmallMatError> {
    let p = p.trimmed(tol)?;
    let roots = match p.degree() {
        0 => Vec::new(),
        1 => vec![Root {
            value: -p.coeffs[0] / p.coeffs[1],
            multiplicity: 1,
        }],
        _ => isolate_roots(&p, tol)?,
    };
    Ok(merge_roots(roots, tol))
}

fn isolate_roots(p: &RealPoly, tol: f64) -> Result<Vec<Root>, SmallMatError> {
    let n = p.degree();
    let lead = p.coeffs[n];
    let bound = 1.0
        + p.coeffs[..n]
            .iter()
            .fold(0.0f64, |acc, c| acc.max((c / lead).abs()));
    let critical: Vec<f64> = real_roots(&p.derivative(), tol)?
        .into_iter()
        .map(|r| r.value.clamp(-bound, bound))
        .collect();

    let mut roots = Vec::new();
    // (point, is_root)
    let mut breaks: Vec<(f64, bool)> = vec![(-bound, false)];
    for &c in &critical {
        let tau = tol * c.abs().max(1.0);
        if vanishes_at(p, c, tau) {
            roots.push(Root {
                value: c,
                multiplicity: multiplicity_at(p, c, tau),
            });
            breaks.push((c, true));
        } else {
            breaks.push((c, false));
        }
    }
    breaks.push((bound, false));

    for w in breaks.windows(2) {
        let ((lo, lo_root), (hi, hi_root)) = (w[0], w[1]);
        if lo_root || hi_root || hi <= lo {
            continue;
        }
        let (flo, fhi) = (p.eval(lo), p.eval(hi));
        if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        roots.push(Root {
            value: bisect_root(p, lo, hi, flo),
            multiplicity: 1,
        });
    }
    Ok(roots)
}

fn multiplicity_at(p: &RealPoly, x: f64, tau: f64) -> u32 {
    let mut m = 1;
    let mut d = p.derivative();
    while d.degree() > 0 && vanishes_at(&d, x, tau) {
        m += 1;
        d = d.derivative();
    }
    m
}

fn bisect_root(p: &RealPoly, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let lo_sign = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let dp = p.derivative();
    for _ in 0..2 {
        let slope = dp.eval(x);
        if slope == 0.0 {
            break;
        }
        let next = x - p.eval(x) / slope;
        if next < lo || next > hi || p.eval(next).abs() > p.eval(x).abs() {
            break;
        }
        x = next;
    }
    x
}

fn merge_roots(mut roots: Vec<Root>, tol: f64) -> Vec<Root> {
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last_mut() {
            Some(last) if (r.value - last.value).abs() <= tol * last.value.abs().max(1.0) => {
                last.multiplicity += r.multiplicity;
            }
            _ => out.push(r),
        }
    }
    out
}
