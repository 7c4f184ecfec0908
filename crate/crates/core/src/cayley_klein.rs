//! Projective measurement relative to an absolute quadric.
//!
//! The distance of two points is `c · log CR(p, q; x₁, x₂)`, where `x₁, x₂`
//! are the intersections of the chord `pq` with the absolute, labelled in
//! lexicographic order of their canonical representatives. Swapping the
//! labels negates the logarithm, so distances are reported with the sign
//! fixed by `Re ≥ 0` (and `Im ≥ 0` when the real part vanishes).

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::projective::{
    cross_ratio_with_tol, line_quadric_intersections_with_tol, max_abs, quadric_residual, real, unit, wedge_norm,
    Hyperplane, ProjMap, ProjPoint, Quadric, Scalar, DEFAULT_TOL, I,
};
use crate::seed::rng_from_seed;
use crate::transfers::{klein_form, PlueckerLine};

/// Tolerance for points counted as lying on a quadric.
pub const ON_QUADRIC_TOL: f64 = 1e-9;

/// `c = 1/2`, the unit-curvature constant for real (hyperbolic) absolutes.
pub fn hyperbolic_constant() -> Scalar {
    real(0.5)
}

/// `c = 1/(2i)`, the unit-curvature constant for imaginary (elliptic) absolutes.
pub fn elliptic_constant() -> Scalar {
    Scalar::new(1.0, 0.0) / (2.0 * I)
}

fn canonical_sign(z: Scalar) -> Scalar {
    let flip = z.re < 0.0 || (z.re.abs() <= 1e-15 * z.norm() && z.im < 0.0);
    if flip {
        -z
    } else {
        z
    }
}

/// An absolute quadric with a distance constant.
#[derive(Debug, Clone, PartialEq)]
pub struct CKMetric {
    absolute: Quadric,
    c: Scalar,
}

impl CKMetric {
    pub fn new(absolute: Quadric, c: Scalar) -> Result<Self> {
        if absolute.is_degenerate() {
            return Err(Error::Singular(absolute.relative_determinant()));
        }
        if !(c.re.is_finite() && c.im.is_finite()) || c.norm() == 0.0 {
            return Err(Error::Validation { field: "c".into(), message: "must be finite and nonzero".into() });
        }
        Ok(Self { absolute, c })
    }

    /// The Klein disk `x² + y² − z² = 0` with `c = 1/2`.
    pub fn klein_disk() -> Self {
        Self::hyperbolic(2).expect("fixed absolute")
    }

    /// `x₁² + … + xₙ² − xₙ₊₁² = 0` with `c = 1/2`.
    pub fn hyperbolic(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension { group: "hyperbolic".into(), dimension: dim });
        }
        let mut d = vec![1.0; dim + 1];
        d[dim] = -1.0;
        Self::new(Quadric::diagonal(&d)?, hyperbolic_constant())
    }

    /// `x₁² + … + xₙ₊₁² = 0` with `c = 1/(2i)`.
    pub fn elliptic(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension { group: "elliptic".into(), dimension: dim });
        }
        Self::new(Quadric::diagonal(&vec![1.0; dim + 1])?, elliptic_constant())
    }

    pub fn absolute(&self) -> &Quadric {
        &self.absolute
    }

    pub fn constant(&self) -> Scalar {
        self.c
    }

    pub fn distance(&self, p: &ProjPoint, q: &ProjPoint) -> Result<Scalar> {
        ck_distance(p, q, self)
    }

    pub fn angle(&self, h1: &Hyperplane, h2: &Hyperplane) -> Result<Scalar> {
        ck_angle(h1, h2, self)
    }
}

/// `c · log CR(p, q; x₁, x₂)` along a chord; a tangent chord has length 0.
fn chord_measure(p: &ProjPoint, q: &ProjPoint, quad: &Quadric, c: Scalar) -> Result<Scalar> {
    if wedge_norm(&p.normalized(), &q.normalized()) <= DEFAULT_TOL {
        return Ok(real(0.0));
    }
    let hits = line_quadric_intersections_with_tol(p, q, quad, DEFAULT_TOL)?;
    if hits.tangent {
        return Ok(real(0.0));
    }
    let (x1, x2) = hits.ordered();
    let cr = cross_ratio_with_tol(p, q, &x1, &x2, 1e-9)?;
    Ok(canonical_sign(c * cr.ln()))
}

/// Distance of two points; fails with [`Error::OnAbsolute`] when either lies on
/// the absolute and with [`Error::Generator`] when the chord lies in it.
pub fn ck_distance(p: &ProjPoint, q: &ProjPoint, m: &CKMetric) -> Result<Scalar> {
    for x in [p, q] {
        if quadric_residual(x, &m.absolute)? < ON_QUADRIC_TOL {
            return Err(Error::OnAbsolute);
        }
    }
    chord_measure(p, q, &m.absolute, m.c)
}

/// Angle of two hyperplanes, measured in the pencil they span against the dual absolute.
pub fn ck_angle(h1: &Hyperplane, h2: &Hyperplane, m: &CKMetric) -> Result<Scalar> {
    let dual = m.absolute.dual()?;
    let (a, b) = (h1.as_dual_point(), h2.as_dual_point());
    for x in [&a, &b] {
        if quadric_residual(x, &dual)? < ON_QUADRIC_TOL {
            return Err(Error::Degenerate("hyperplane tangent to the absolute"));
        }
    }
    match chord_measure(&a, &b, &dual, m.c) {
        Err(Error::Generator) => Err(Error::Degenerate("pencil of tangent hyperplanes")),
        r => r,
    }
}

/// How the chord cross-ratio behaves for two points of the quadric itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyVerdict {
    /// The chord meets the quadric only in the two points: the ratio is 0.
    Zero,
    /// The chord is a generator: the ratio is 0/0.
    Indeterminate,
}

pub fn on_quadric_degeneracy(p: &ProjPoint, q: &ProjPoint, quad: &Quadric) -> Result<DegeneracyVerdict> {
    for x in [p, q] {
        let r = quadric_residual(x, quad)?;
        if r >= ON_QUADRIC_TOL {
            return Err(Error::NotOnQuadric(r));
        }
    }
    match line_quadric_intersections_with_tol(p, q, quad, DEFAULT_TOL) {
        Ok(_) => Ok(DegeneracyVerdict::Zero),
        Err(Error::Generator) => Ok(DegeneracyVerdict::Indeterminate),
        Err(e) => Err(e),
    }
}

/// Tangent cone from `o` to the quadric: `Q(o,o)·Q − (Qo)(Qo)ᵀ`.
fn tangent_cone(quad: &Quadric, o: &DVector<Scalar>) -> DMatrix<Scalar> {
    let qo = quad.matrix() * o;
    quad.matrix() * o.dot(&qo) - &qo * qo.transpose()
}

/// Distance on a quadric surface obtained by fixing `center`.
///
/// Off the surface, points are projected from `center` and measured against
/// the boundary conic of the projection; this equals the chord measure of
/// `p, q` against the tangent cone from `center`, whatever the image plane.
/// On the surface, the result is `c·√(−Q(p,q) / (2·Q(o,p)·Q(o,q)))` with `o`
/// and `Q` scaled to unit Frobenius norm; for the unit sphere and
/// `o = (0:0:1:1)` this is `c` times the distance of the stereographic images.
/// Two points on a common generator are at distance zero.
pub fn induced_surface_distance(
    p: &ProjPoint,
    q: &ProjPoint,
    quad: &Quadric,
    center: &ProjPoint,
    c: Scalar,
) -> Result<Scalar> {
    for x in [p, q] {
        let r = quadric_residual(x, quad)?;
        if r >= ON_QUADRIC_TOL {
            return Err(Error::NotOnQuadric(r));
        }
    }
    if p.approx_eq(q, DEFAULT_TOL) || on_quadric_degeneracy(p, q, quad)? == DegeneracyVerdict::Indeterminate {
        return Ok(real(0.0));
    }
    let o = center.normalized();
    if quadric_residual(center, quad)? >= ON_QUADRIC_TOL && center.len() == quad.size() {
        for x in [p, q] {
            if x.approx_eq(center, DEFAULT_TOL) {
                return Err(Error::Coincident);
            }
        }
        let qo = quad.matrix() * &o;
        let scale = o.dot(&qo).norm().sqrt();
        for x in [p, q] {
            let xn = x.normalized();
            if xn.dot(&qo).norm() <= 1e-9 * scale.max(qo.norm()) {
                return Err(Error::ProjectionDegenerate);
            }
        }
        let cone = Quadric::symmetrized(tangent_cone(quad, &o))?;
        return chord_measure(p, q, &cone, c);
    }
    for x in [p, q] {
        if x.approx_eq(center, DEFAULT_TOL) {
            return Err(Error::Coincident);
        }
    }
    let (pn, qn) = (unit(p.coords()), unit(q.coords()));
    let qm = quad.matrix() / Scalar::from(quad.matrix().norm());
    let form = |x: &DVector<Scalar>, y: &DVector<Scalar>| x.dot(&(&qm * y));
    let (op, oq) = (form(&o, &pn), form(&o, &qn));
    if op.norm() <= 1e-9 || oq.norm() <= 1e-9 {
        return Err(Error::ProjectionDegenerate);
    }
    let d2 = -form(&pn, &qn) / (2.0 * op * oq);
    Ok(canonical_sign(c * d2.sqrt()))
}

/// Six line-space coordinates taken as a linear complex.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearComplex {
    coeffs: [Scalar; 6],
}

impl LinearComplex {
    pub fn new(coeffs: [Scalar; 6]) -> Result<Self> {
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("complex coordinate"));
        }
        if max_abs(&coeffs) == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(c: [f64; 6]) -> Result<Self> {
        Self::new(c.map(real))
    }

    pub fn from_line(l: &PlueckerLine) -> Self {
        Self { coeffs: *l.coords() }
    }

    pub fn coeffs(&self) -> &[Scalar; 6] {
        &self.coeffs
    }

    /// A special complex is a single line: it lies on the Klein quadric.
    pub fn is_special(&self, tol: f64) -> bool {
        let n: f64 = self.coeffs.iter().map(|z| z.norm_sqr()).sum();
        klein_form(&self.coeffs, &self.coeffs).norm() / n <= tol
    }

    fn to_vector(&self) -> DVector<Scalar> {
        DVector::from_column_slice(&self.coeffs)
    }

    /// Skew form on 4-space whose null lines are the lines of the complex.
    fn null_form(&self) -> DMatrix<Scalar> {
        let mut w = DMatrix::from_element(4, 4, real(0.0));
        for (k, &(i, j)) in crate::transfers::pluecker::PLUECKER_PAIRS.iter().enumerate() {
            let c = self.coeffs[(k + 3) % 6] * 0.5;
            w[(i, j)] += c;
            w[(j, i)] -= c;
        }
        w
    }
}

/// `Ω(l₁,l₂)·Ω(a,a) / (Ω(l₁,a)·Ω(l₂,a))`, zero exactly when the lines meet.
pub fn line_invariant(l1: &LinearComplex, l2: &LinearComplex, a: &LinearComplex, klein: &Quadric) -> Result<Scalar> {
    if klein.size() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, found: klein.size() });
    }
    let (v1, v2, va) = (unit(&l1.to_vector()), unit(&l2.to_vector()), unit(&a.to_vector()));
    let km = klein.matrix() / Scalar::from(klein.matrix().norm());
    let omega = |x: &DVector<Scalar>, y: &DVector<Scalar>| x.dot(&(&km * y));
    for v in [&v1, &v2] {
        let r = omega(v, v).norm();
        if r > ON_QUADRIC_TOL {
            return Err(Error::NotOnQuadric(r));
        }
    }
    let aa = omega(&va, &va);
    if aa.norm() <= ON_QUADRIC_TOL {
        return Err(Error::Precondition("the fixed complex must be general, not a line".into()));
    }
    let (w1, w2) = (omega(&v1, &va), omega(&v2, &va));
    if w1.norm() <= ON_QUADRIC_TOL || w2.norm() <= ON_QUADRIC_TOL {
        return Err(Error::Degenerate("line belongs to the fixed complex"));
    }
    Ok(omega(&v1, &v2) * aa / (w1 * w2))
}

/// A map of 3-space whose action on lines fixes the complex `a`: a product of
/// transvections `x ↦ x + t·ω(v, x)·v` of its null form `ω`.
pub fn sample_complex_stabilizer(a: &LinearComplex, seed: u64) -> Result<ProjMap> {
    if a.is_special(ON_QUADRIC_TOL) {
        return Err(Error::Precondition("the fixed complex must be general, not a line".into()));
    }
    let w = a.null_form();
    let mut rng = rng_from_seed(seed);
    let mut g = DMatrix::<Scalar>::identity(4, 4);
    for _ in 0..4 {
        let v = DVector::from_fn(4, |_, _| real(rng.random_range(-1.0..1.0)));
        let t = real(rng.random_range(-1.0..1.0));
        let row = v.transpose() * &w;
        let step = DMatrix::identity(4, 4) + &v * row * t;
        g = step * g;
    }
    ProjMap::new(g)
}

/// A map preserving `quad` exactly: a product of `n + 1` reflections
/// `x ↦ x − 2·(vᵀQx / vᵀQv)·v` in non-isotropic vectors.
pub fn sample_isometry(quad: &Quadric, seed: u64) -> Result<ProjMap> {
    let n = quad.size();
    let q = quad.matrix() / Scalar::from(quad.matrix().norm());
    let mut rng = rng_from_seed(seed);
    let mut g = DMatrix::<Scalar>::identity(n, n);
    let mut made = 0;
    let mut attempts = 0;
    while made < n {
        attempts += 1;
        if attempts > 1000 {
            return Err(Error::SamplerMismatch { undefined: attempts - made, trials: attempts });
        }
        let v = DVector::from_fn(n, |_, _| real(rng.random_range(-1.0..1.0)));
        let qv = &q * &v;
        let vqv = v.dot(&qv);
        if vqv.norm() < 0.3 * v.norm_squared() / (n as f64).sqrt() {
            continue;
        }
        let r = DMatrix::identity(n, n) - &v * qv.transpose() * (real(2.0) / vqv);
        g = r * g;
        made += 1;
    }
    ProjMap::new(g)
}
