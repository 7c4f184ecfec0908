//! Möbius maps of the extended complex plane, including the anti-holomorphic
//! family `z ↦ (a z̄ + b)/(c z̄ + d)`.

use nalgebra::{DVector, Matrix2};

use crate::error::{Error, Result};
use crate::projective::{proportional, ProjPoint, Scalar, SINGULARITY_THRESHOLD};

/// A point of the Riemann sphere: a complex number or ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Scalar),
    Infinity,
}

impl ExtendedComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite(Scalar::new(re, im))
    }

    /// From homogeneous coordinates `(z₁ : z₂)`; ∞ when `z₂` vanishes relative to `z₁`.
    pub fn from_homogeneous(num: Scalar, den: Scalar) -> Self {
        if den.norm() <= 1e-15 * num.norm() || den == Scalar::new(0.0, 0.0) {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::Finite(num / den)
        }
    }

    /// Homogeneous pair `(z : 1)` or `(1 : 0)`.
    pub fn homogeneous(&self) -> (Scalar, Scalar) {
        match *self {
            ExtendedComplex::Finite(z) => (z, Scalar::new(1.0, 0.0)),
            ExtendedComplex::Infinity => (Scalar::new(1.0, 0.0), Scalar::new(0.0, 0.0)),
        }
    }

    /// The corresponding point of the complex projective line.
    pub fn to_point(&self) -> ProjPoint {
        let (a, b) = self.homogeneous();
        ProjPoint::from_slice(&[a, b]).expect("homogeneous pair is nonzero")
    }

    pub fn from_point(p: &ProjPoint) -> Result<Self> {
        if p.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: p.len() });
        }
        Ok(Self::from_homogeneous(p.coords()[0], p.coords()[1]))
    }

    pub fn conj(&self) -> Self {
        match *self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z.conj()),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    /// Chordal closeness on the sphere, so ∞ compares sensibly with large values.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let (a, b) = self.homogeneous();
        let (c, d) = other.homogeneous();
        let cross = (a * d - b * c).norm();
        let na = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let nc = (c.norm_sqr() + d.norm_sqr()).sqrt();
        cross / (na * nc) <= tol
    }
}

/// `z ↦ (a ζ + b)/(c ζ + d)` with `ζ = z̄` when `conjugating`, else `ζ = z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub conjugating: bool,
}

impl MoebiusMap {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar, conjugating: bool) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d, conjugating };
        for z in [a, b, c, d] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite("moebius coefficient"));
            }
        }
        let scale = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()) / 2.0;
        let rel = if scale > 0.0 { m.det().norm() / scale } else { 0.0 };
        if rel <= SINGULARITY_THRESHOLD {
            return Err(Error::Singular(rel));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let one = Scalar::new(1.0, 0.0);
        let zero = Scalar::new(0.0, 0.0);
        MoebiusMap { a: one, b: zero, c: zero, d: one, conjugating: false }
    }

    pub fn from_matrix(m: &Matrix2<Scalar>, conjugating: bool) -> Result<Self> {
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)], conjugating)
    }

    pub fn matrix(&self) -> Matrix2<Scalar> {
        Matrix2::new(self.a, self.b, self.c, self.d)
    }

    pub fn det(&self) -> Scalar {
        self.a * self.d - self.b * self.c
    }

    /// Rescales so that `ad − bc = 1`.
    pub fn normalized(&self) -> Self {
        let k = self.det().sqrt();
        MoebiusMap { a: self.a / k, b: self.b / k, c: self.c / k, d: self.d / k, conjugating: self.conjugating }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let inner = if self.conjugating { other.matrix().map(|z| z.conj()) } else { other.matrix() };
        let m = self.matrix() * inner;
        MoebiusMap {
            a: m[(0, 0)],
            b: m[(0, 1)],
            c: m[(1, 0)],
            d: m[(1, 1)],
            conjugating: self.conjugating ^ other.conjugating,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        let det = self.det();
        let inv = Matrix2::new(self.d / det, -self.b / det, -self.c / det, self.a / det);
        let inv = if self.conjugating { inv.map(|z| z.conj()) } else { inv };
        MoebiusMap { a: inv[(0, 0)], b: inv[(0, 1)], c: inv[(1, 0)], d: inv[(1, 1)], conjugating: self.conjugating }
    }

    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        moebius_apply(self, z)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.conjugating == other.conjugating && proportional(self.matrix().as_slice(), other.matrix().as_slice(), tol)
    }

    /// Acts on a point of the complex projective line `(z₁ : z₂)`.
    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: p.len() });
        }
        let v = p.coords();
        let v = if self.conjugating { v.map(|z| z.conj()) } else { v.clone() };
        let w = self.matrix() * nalgebra::Vector2::new(v[0], v[1]);
        ProjPoint::new(DVector::from_vec(vec![w[0], w[1]]))
    }
}

/// Evaluates a Möbius map; poles go to ∞ and ∞ goes to `a/c`.
pub fn moebius_apply(m: &MoebiusMap, z: ExtendedComplex) -> ExtendedComplex {
    let z = if m.conjugating { z.conj() } else { z };
    let (z1, z2) = z.homogeneous();
    ExtendedComplex::from_homogeneous(m.a * z1 + m.b * z2, m.c * z1 + m.d * z2)
}
