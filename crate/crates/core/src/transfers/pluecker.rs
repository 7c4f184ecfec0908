use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::projective::{max_abs, proportional, real, ProjMap, ProjPoint, Quadric, Scalar};

/// Index pairs of the six line coordinates, in storage order.
pub const PLUECKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Tolerance on the relative Klein relation for [`PlueckerLine::new`].
pub const KLEIN_TOL: f64 = 1e-10;

/// The Klein quadric `p₀₁p₂₃ + p₀₂p₃₁ + p₀₃p₁₂ = 0` as a symmetric 6×6 matrix.
pub fn klein_quadric() -> Quadric {
    let mut m = DMatrix::from_element(6, 6, real(0.0));
    for k in 0..3 {
        m[(k, k + 3)] = real(0.5);
        m[(k + 3, k)] = real(0.5);
    }
    Quadric::new(m).expect("constant quadric")
}

/// Polarized Klein form `Ω(x, y)`; `Ω(x, x)` is the Klein relation.
pub fn klein_form(x: &[Scalar], y: &[Scalar]) -> Scalar {
    let mut s = real(0.0);
    for k in 0..3 {
        s += x[k] * y[k + 3] + x[k + 3] * y[k];
    }
    s * 0.5
}

/// `|Ω(p, p)| / ‖p‖²`.
pub fn klein_residual(p: &[Scalar]) -> f64 {
    let n: f64 = p.iter().map(|z| z.norm_sqr()).sum();
    if n == 0.0 {
        return f64::INFINITY;
    }
    klein_form(p, p).norm() / n
}

/// A line of projective 3-space in Plücker coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlueckerLine {
    p: [Scalar; 6],
}

impl PlueckerLine {
    pub fn new(p: [Scalar; 6]) -> Result<Self> {
        if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("line coordinate"));
        }
        if max_abs(&p) == 0.0 {
            return Err(Error::ZeroVector);
        }
        let r = klein_residual(&p);
        if r > KLEIN_TOL {
            return Err(Error::NotOnQuadric(r));
        }
        Ok(Self { p })
    }

    pub fn coords(&self) -> &[Scalar; 6] {
        &self.p
    }

    pub fn to_point(&self) -> ProjPoint {
        ProjPoint::from_slice(&self.p).expect("nonzero line coordinates")
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        proportional(&self.p, &other.p, tol)
    }

    /// Relative `|Ω(L₁, L₂)|`, zero iff the lines meet.
    pub fn incidence_residual(&self, other: &Self) -> f64 {
        let na: f64 = self.p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = other.p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        klein_form(&self.p, &other.p).norm() / (na * nb)
    }

    pub fn intersects(&self, other: &Self, tol: f64) -> bool {
        self.incidence_residual(other) <= tol
    }
}

fn raw_embed(a: &DVector<Scalar>, b: &DVector<Scalar>) -> [Scalar; 6] {
    PLUECKER_PAIRS.map(|(i, j)| a[i] * b[j] - a[j] * b[i])
}

/// The line through two points of 3-space.
pub fn pluecker_embed(a: &ProjPoint, b: &ProjPoint) -> Result<PlueckerLine> {
    for p in [a, b] {
        if p.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: p.len() });
        }
    }
    let p = raw_embed(&a.normalized(), &b.normalized());
    if max_abs(&p) <= 1e-12 {
        return Err(Error::Coincident);
    }
    Ok(PlueckerLine { p })
}

/// Second compound of `g`: the induced action on line coordinates.
///
/// Entry `[(ij), (kl)] = g_ik·g_jl − g_il·g_jk`, so that
/// `embed(g·a, g·b) = conjugate(g)·embed(a, b)` exactly.
pub fn pluecker_conjugate(g: &ProjMap) -> Result<ProjMap> {
    if g.size() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: g.size() });
    }
    let m = g.matrix();
    let c = DMatrix::from_fn(6, 6, |r, s| {
        let (i, j) = PLUECKER_PAIRS[r];
        let (k, l) = PLUECKER_PAIRS[s];
        m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)]
    });
    ProjMap::new(c)
}

/// Relative deviation of `Cᵀ K C` from a multiple of `K`.
pub fn klein_preservation_residual(c: &ProjMap) -> f64 {
    let k = klein_quadric();
    let lhs = c.matrix().transpose() * k.matrix() * c.matrix();
    let factor = lhs.iter().zip(k.matrix().iter()).map(|(a, b)| a * b).sum::<Scalar>() / real(1.5);
    let diff = &lhs - k.matrix() * factor;
    diff.norm() / lhs.norm()
}
