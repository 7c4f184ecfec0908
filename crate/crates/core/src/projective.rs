//! Homogeneous-coordinate linear algebra over the complex numbers.
//!
//! Points, hyperplanes, quadrics and projective maps are all stored as plain
//! coordinate arrays and compared up to a nonzero scalar factor. Nothing is
//! special about points at infinity; affine embeddings are explicit
//! ([`ProjPoint::affine`], [`ProjPoint::to_affine`]).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for every coordinate.
pub type Scalar = Complex64;

/// Default relative tolerance for incidence and equality-up-to-scale tests.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative discriminant below which a chord counts as tangent. Rounding
/// alone separates an exact double root by about √ε, so this sits just
/// above the rounding floor.
pub const TANGENCY_TOL: f64 = 1e-13;

/// Relative determinant below which a matrix counts as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

pub const I: Scalar = Complex64::new(0.0, 1.0);

/// Builds a scalar, rejecting NaN and infinities.
pub fn scalar(re: f64, im: f64) -> Result<Scalar> {
    if re.is_finite() && im.is_finite() {
        Ok(Scalar::new(re, im))
    } else {
        Err(Error::NonFinite("scalar"))
    }
}

pub fn real(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

pub(crate) fn max_abs(v: &[Scalar]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn argmax_abs(v: &[Scalar]) -> usize {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (k, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best = k;
            best_abs = a;
        }
    }
    best
}

fn check_vector(v: &[Scalar], what: &'static str) -> Result<()> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    if max_abs(v) == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Equality up to a nonzero factor: both arrays are divided by the entry at
/// the position where `a` is largest, then compared entrywise.
pub(crate) fn proportional(a: &[Scalar], b: &[Scalar], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let k = argmax_abs(a);
    let (ak, bk) = (a[k], b[k]);
    let bmax = max_abs(b);
    if ak.norm() == 0.0 || bk.norm() <= tol * bmax || bmax == 0.0 {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| (x / ak - y / bk).norm() <= tol)
}

/// Scales `v` to unit Euclidean (Hermitian) norm.
pub(crate) fn unit(v: &DVector<Scalar>) -> DVector<Scalar> {
    v / Scalar::from(v.norm())
}

/// Unit-norm representative whose first significant entry is real positive.
/// Used wherever a deterministic representative is needed for ordering.
pub(crate) fn canonical(v: &DVector<Scalar>) -> DVector<Scalar> {
    let u = unit(v);
    let m = max_abs(u.as_slice());
    let lead = u.iter().find(|z| z.norm() > 1e-8 * m).copied().unwrap_or(real(1.0));
    let phase = lead / Scalar::from(lead.norm());
    u.map(|z| z / phase)
}

fn lex_cmp(a: &DVector<Scalar>, b: &DVector<Scalar>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Point of complex projective n-space, stored as n+1 homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: DVector<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: DVector<Scalar>) -> Result<Self> {
        check_vector(coords.as_slice(), "point")?;
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[Scalar]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    pub fn from_real(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(coords.len(), coords.iter().map(|&x| real(x))))
    }

    /// Embeds an affine point `(x₁, …, xₙ)` as `(x₁ : … : xₙ : 1)`.
    pub fn affine(coords: &[f64]) -> Result<Self> {
        let mut v: Vec<Scalar> = coords.iter().map(|&x| real(x)).collect();
        v.push(real(1.0));
        Self::from_slice(&v)
    }

    pub fn coords(&self) -> &DVector<Scalar> {
        &self.coords
    }

    /// Number of homogeneous coordinates (ambient dimension plus one).
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn normalized(&self) -> DVector<Scalar> {
        unit(&self.coords)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        proportional(self.coords.as_slice(), other.coords.as_slice(), tol)
    }

    /// Dehomogenizes by the last coordinate; `None` when it is (relatively) zero.
    pub fn to_affine(&self, tol: f64) -> Option<Vec<Scalar>> {
        let n = self.coords.len();
        let w = self.coords[n - 1];
        if w.norm() <= tol * self.coords.norm() {
            return None;
        }
        Some(self.coords.iter().take(n - 1).map(|z| z / w).collect())
    }

    /// True when some rescaling makes every coordinate real.
    pub fn is_real(&self, tol: f64) -> bool {
        canonical(&self.coords).iter().all(|z| z.im.abs() <= tol)
    }
}

/// Hyperplane `Σ hᵢ xᵢ = 0`, up to scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    coeffs: DVector<Scalar>,
}

impl Hyperplane {
    pub fn new(coeffs: DVector<Scalar>) -> Result<Self> {
        check_vector(coeffs.as_slice(), "hyperplane")?;
        Ok(Self { coeffs })
    }

    pub fn from_slice(coeffs: &[Scalar]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(coeffs.len(), coeffs.iter().map(|&x| real(x))))
    }

    pub fn coeffs(&self) -> &DVector<Scalar> {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        proportional(self.coeffs.as_slice(), other.coeffs.as_slice(), tol)
    }

    /// The same coefficients read as a point of the dual space.
    pub fn as_dual_point(&self) -> ProjPoint {
        ProjPoint { coords: self.coeffs.clone() }
    }
}

/// Quadric hypersurface `xᵀ Q x = 0` with an exactly symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadric {
    matrix: DMatrix<Scalar>,
}

impl Quadric {
    pub fn new(matrix: DMatrix<Scalar>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        check_vector(matrix.as_slice(), "quadric")?;
        if matrix != matrix.transpose() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { matrix })
    }

    /// Builds a quadric from an arbitrary square matrix by taking its symmetric part.
    pub fn symmetrized(matrix: DMatrix<Scalar>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let s = (&matrix + matrix.transpose()) * real(0.5);
        Self::new(s)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(entries.len(), entries.iter().map(|&x| real(x)));
        Self::new(DMatrix::from_diagonal(&d))
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Symmetric bilinear form `xᵀ Q y` (no conjugation).
    pub fn bilinear(&self, x: &DVector<Scalar>, y: &DVector<Scalar>) -> Scalar {
        x.dot(&(&self.matrix * y))
    }

    pub fn value(&self, p: &ProjPoint) -> Result<Scalar> {
        self.check_len(p.len())?;
        Ok(self.bilinear(&p.coords, &p.coords))
    }

    /// Polar hyperplane `Q p`.
    pub fn polar(&self, p: &ProjPoint) -> Result<Hyperplane> {
        self.check_len(p.len())?;
        Hyperplane::new(&self.matrix * &p.coords)
    }

    /// Relative determinant `|det Q| / (‖Q‖_F/√k)^k`.
    pub fn relative_determinant(&self) -> f64 {
        relative_determinant(&self.matrix)
    }

    pub fn is_degenerate(&self) -> bool {
        self.relative_determinant() <= SINGULARITY_THRESHOLD
    }

    /// Dual quadric (inverse matrix, symmetrized); fails when degenerate.
    pub fn dual(&self) -> Result<Quadric> {
        let inv = self.matrix.clone().try_inverse().ok_or(Error::Singular(self.relative_determinant()))?;
        Quadric::symmetrized(inv)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.size() == other.size() && proportional(self.matrix.as_slice(), other.matrix.as_slice(), tol)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: len });
        }
        Ok(())
    }
}

pub(crate) fn relative_determinant(m: &DMatrix<Scalar>) -> f64 {
    let k = m.nrows();
    let scale = m.norm() / (k as f64).sqrt();
    if scale == 0.0 {
        return 0.0;
    }
    (m / Scalar::from(scale)).determinant().norm()
}

/// Invertible linear map of homogeneous coordinates, up to scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjMap {
    matrix: DMatrix<Scalar>,
}

impl ProjMap {
    pub fn new(matrix: DMatrix<Scalar>) -> Result<Self> {
        Self::with_threshold(matrix, SINGULARITY_THRESHOLD)
    }

    pub fn with_threshold(matrix: DMatrix<Scalar>, threshold: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        check_vector(matrix.as_slice(), "map")?;
        let rd = relative_determinant(&matrix);
        if rd <= threshold {
            return Err(Error::Singular(rd));
        }
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(real))
    }

    pub fn identity(size: usize) -> Self {
        Self { matrix: DMatrix::identity(size, size) }
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn inverse(&self) -> ProjMap {
        let inv = self.matrix.clone().try_inverse().expect("constructor guarantees an invertible matrix");
        ProjMap { matrix: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ProjMap) -> Result<ProjMap> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: other.size() });
        }
        Ok(ProjMap { matrix: &self.matrix * &other.matrix })
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        apply(self, p)
    }

    /// Image of a hyperplane: `M⁻ᵀ h`.
    pub fn apply_hyperplane(&self, h: &Hyperplane) -> Result<Hyperplane> {
        if h.len() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: h.len() });
        }
        let inv_t = self.inverse().matrix.transpose();
        Hyperplane::new(unit(&(inv_t * &h.coeffs)))
    }

    /// Image of a quadric: `M⁻ᵀ Q M⁻¹`.
    pub fn apply_quadric(&self, q: &Quadric) -> Result<Quadric> {
        if q.size() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: q.size() });
        }
        let inv = self.inverse().matrix;
        let m = inv.transpose() * &q.matrix * &inv;
        let scale = m.norm();
        Quadric::symmetrized(m / Scalar::from(scale))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.size() == other.size() && proportional(self.matrix.as_slice(), other.matrix.as_slice(), tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&ProjMap::identity(self.size()), tol)
    }
}

/// Applies a projective map to a point; the result is rescaled to unit norm.
pub fn apply(map: &ProjMap, point: &ProjPoint) -> Result<ProjPoint> {
    if point.len() != map.size() {
        return Err(Error::DimensionMismatch { expected: map.size(), found: point.len() });
    }
    let image = &map.matrix * &point.coords;
    ProjPoint::new(unit(&image))
}

/// Cross-ratio with the default tolerance; see [`cross_ratio_with_tol`].
pub fn cross_ratio(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint, p4: &ProjPoint) -> Result<Scalar> {
    cross_ratio_with_tol(p1, p2, p3, p4, 1e-9)
}

/// Cross-ratio `(p1,p2;p3,p4) = ((t1−t3)(t2−t4)) / ((t1−t4)(t2−t3))`, where
/// `tᵢ` are affine parameters of the points on their common line.
///
/// The parameters are taken homogeneously: each point is written as
/// `λᵢ a + μᵢ b` in a basis of the line, and `tᵢ − tⱼ` is replaced by the
/// bracket `λᵢμⱼ − λⱼμᵢ`, so points at parameter ∞ need no special handling.
pub fn cross_ratio_with_tol(
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
    p4: &ProjPoint,
    tol: f64,
) -> Result<Scalar> {
    let pts = [p1, p2, p3, p4];
    let n = p1.len();
    for p in &pts[1..] {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.len() });
        }
    }
    let coeffs = line_coordinates(&pts.map(|p| p.normalized()), tol)?;
    bracket_cross_ratio(&coeffs, tol)
}

/// Homogeneous coordinates `(λ, μ)` of unit vectors on a common line, in a
/// basis chosen from the best-separated pair among them.
pub(crate) fn line_coordinates(vs: &[DVector<Scalar>], tol: f64) -> Result<Vec<(Scalar, Scalar)>> {
    let mut best = (0, 1, -1.0);
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            let g = wedge_norm(&vs[i], &vs[j]);
            if g > best.2 {
                best = (i, j, g);
            }
        }
    }
    let (ia, ib, sep) = best;
    if sep <= tol {
        return Err(Error::Degenerate("all points coincide"));
    }
    let (a, b) = (&vs[ia], &vs[ib]);
    let gram = nalgebra::Matrix2::new(a.dotc(a), a.dotc(b), b.dotc(a), b.dotc(b));
    let gram_inv = gram.try_inverse().ok_or(Error::Degenerate("line basis"))?;
    let mut out = Vec::with_capacity(vs.len());
    let mut worst = 0.0f64;
    for v in vs {
        let rhs = nalgebra::Vector2::new(a.dotc(v), b.dotc(v));
        let c = gram_inv * rhs;
        let resid = (v - a * c[0] - b * c[1]).norm() / v.norm();
        worst = worst.max(resid);
        out.push((c[0], c[1]));
    }
    if worst > tol.max(1e-12) * 10.0 {
        return Err(Error::NotCollinear(worst));
    }
    Ok(out)
}

/// Norm of `a ∧ b` for Hermitian inner products (sine of the angle for unit vectors).
pub(crate) fn wedge_norm(a: &DVector<Scalar>, b: &DVector<Scalar>) -> f64 {
    let aa = a.dotc(a).re;
    let bb = b.dotc(b).re;
    let ab = a.dotc(b).norm_sqr();
    (aa * bb - ab).max(0.0).sqrt()
}

/// Cross-ratio from homogeneous line parameters.
pub(crate) fn bracket_cross_ratio(c: &[(Scalar, Scalar)], tol: f64) -> Result<Scalar> {
    let norm = |k: usize| (c[k].0.norm_sqr() + c[k].1.norm_sqr()).sqrt();
    let br = |i: usize, j: usize| c[i].0 * c[j].1 - c[j].0 * c[i].1;
    let rel = |i: usize, j: usize| br(i, j).norm() / (norm(i) * norm(j));
    let num_small = rel(0, 2) <= tol || rel(1, 3) <= tol;
    let den_small = rel(0, 3) <= tol || rel(1, 2) <= tol;
    match (num_small, den_small) {
        (true, true) => Err(Error::Degenerate("cross-ratio is 0/0")),
        (false, true) => Err(Error::Degenerate("cross-ratio is infinite")),
        _ => Ok((br(0, 2) * br(1, 3)) / (br(0, 3) * br(1, 2))),
    }
}

/// Result of intersecting a line with a quadric.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordIntersection {
    pub first: ProjPoint,
    pub second: ProjPoint,
    /// The line touches the quadric: `first` and `second` coincide.
    pub tangent: bool,
}

impl ChordIntersection {
    /// The two points ordered lexicographically on their canonical representatives.
    pub fn ordered(&self) -> (ProjPoint, ProjPoint) {
        let a = canonical(self.first.coords());
        let b = canonical(self.second.coords());
        if lex_cmp(&a, &b) == std::cmp::Ordering::Greater {
            (self.second.clone(), self.first.clone())
        } else {
            (self.first.clone(), self.second.clone())
        }
    }
}

/// Intersections of the line `ab` with the quadric, with default tolerance.
pub fn line_quadric_intersections(a: &ProjPoint, b: &ProjPoint, q: &Quadric) -> Result<ChordIntersection> {
    line_quadric_intersections_with_tol(a, b, q, DEFAULT_TOL)
}

/// Roots of `q(λa+μb) = Aλ² + 2Bλμ + Cμ² = 0`.
///
/// Uses the cancellation-free pairing `(w : A)`, `(C : w)` with
/// `w = −(B + s√(B²−AC))`, the sign `s` chosen to maximize `|w|`.
pub fn line_quadric_intersections_with_tol(
    a: &ProjPoint,
    b: &ProjPoint,
    q: &Quadric,
    tol: f64,
) -> Result<ChordIntersection> {
    q.check_len(a.len())?;
    q.check_len(b.len())?;
    let ua = a.normalized();
    let ub = b.normalized();
    if wedge_norm(&ua, &ub) <= tol {
        return Err(Error::Coincident);
    }
    let qm = q.matrix() / Scalar::from(q.matrix().norm());
    let form = |x: &DVector<Scalar>, y: &DVector<Scalar>| x.dot(&(&qm * y));
    let ca = form(&ua, &ua);
    let cb = form(&ua, &ub);
    let cc = form(&ub, &ub);
    let scale = ca.norm().max(cb.norm()).max(cc.norm());
    if scale <= tol {
        return Err(Error::Generator);
    }
    let disc = cb * cb - ca * cc;
    let tangent = disc.norm() <= TANGENCY_TOL * scale * scale;
    let root = if tangent { Scalar::from(0.0) } else { disc.sqrt() };
    let w_plus = -(cb + root);
    let w_minus = -(cb - root);
    let w = if w_plus.norm() >= w_minus.norm() { w_plus } else { w_minus };
    let point = |lam: Scalar, mu: Scalar| ProjPoint::new(unit(&(&ua * lam + &ub * mu)));
    let (first, second) = if w.norm() <= tol * scale {
        // B = 0 and AC = 0: A = 0 gives the double root a, C = 0 gives b.
        if ca.norm() <= cc.norm() {
            (point(Scalar::from(1.0), Scalar::from(0.0))?, point(Scalar::from(1.0), Scalar::from(0.0))?)
        } else {
            (point(Scalar::from(0.0), Scalar::from(1.0))?, point(Scalar::from(0.0), Scalar::from(1.0))?)
        }
    } else {
        (point(w, ca)?, point(cc, w)?)
    };
    Ok(ChordIntersection { first, second, tangent })
}

/// `|pᵀQp| / (‖Q‖ ‖p‖²) < tol`.
pub fn on_quadric(p: &ProjPoint, q: &Quadric) -> bool {
    on_quadric_with_tol(p, q, DEFAULT_TOL)
}

pub fn on_quadric_with_tol(p: &ProjPoint, q: &Quadric, tol: f64) -> bool {
    quadric_residual(p, q).map(|r| r < tol).unwrap_or(false)
}

pub(crate) fn quadric_residual(p: &ProjPoint, q: &Quadric) -> Result<f64> {
    let v = q.value(p)?;
    Ok(v.norm() / (q.matrix().norm() * p.coords().norm_squared()))
}

/// `|⟨h,p⟩| / (‖h‖‖p‖) < tol`.
pub fn incident(p: &ProjPoint, h: &Hyperplane) -> bool {
    incident_with_tol(p, h, DEFAULT_TOL)
}

pub fn incident_with_tol(p: &ProjPoint, h: &Hyperplane, tol: f64) -> bool {
    if p.len() != h.len() {
        return false;
    }
    h.coeffs().dot(p.coords()).norm() / (h.coeffs().norm() * p.coords().norm()) < tol
}

fn cross3(a: &DVector<Scalar>, b: &DVector<Scalar>) -> DVector<Scalar> {
    DVector::from_vec(vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
}

/// Line through two points of the projective plane.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<Hyperplane> {
    if p.len() != 3 || q.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.len().max(q.len()) });
    }
    Hyperplane::new(cross3(&p.normalized(), &q.normalized())).map_err(|_| Error::Coincident)
}

/// Intersection point of two lines of the projective plane.
pub fn meet(g: &Hyperplane, h: &Hyperplane) -> Result<ProjPoint> {
    if g.len() != 3 || h.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: g.len().max(h.len()) });
    }
    ProjPoint::new(cross3(&unit(g.coeffs()), &unit(h.coeffs()))).map_err(|_| Error::Coincident)
}
