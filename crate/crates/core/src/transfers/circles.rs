//! Tetracyclic and Lie coordinates of oriented circles in the plane.
//!
//! A point `z = x + iy` has point-sphere coordinates
//! `X(z) = (2x, 2y, |z|² − 1, i(|z|² + 1))`, which satisfy `Σ Xₖ² = 0`. A
//! circle `|p − c|² = ρ²` with orientation `σ = ±1` has
//!
//! ```text
//! u = (−cₓ, −c_y, (1 − |c|² + ρ²)/2, −i(1 + |c|² − ρ²)/2, −iσρ)
//! ```
//!
//! so that `Σ uₖXₖ(z)` (first four terms) is `|z − c|² − ρ²` and
//! `u₁² + … + u₅² = 0`. The unit circle is `(0, 0, 1, 0, ∓i)`. Point circles
//! have `u₅ = 0` and are proportional to `X(c)`. A line `n·p = d` with unit
//! normal `n` is the limit `(n₁, n₂, d, i·d, −iσ)`, recognised by
//! `u₃ + i·u₄ = 0`.

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::projective::{max_abs, proportional, real, ProjPoint, Scalar, I};

pub const LIE_SIZE: usize = 5;

/// Relative tolerance on the Lie relation for [`CircleCoords::new`].
pub const LIE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    fn of(x: f64) -> Self {
        if x < 0.0 {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }
}

/// Lie coordinates of an oriented circle, line or point, up to scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleCoords {
    u: [Scalar; 5],
}

fn inversive_product(u: &[Scalar], v: &[Scalar]) -> Scalar {
    (0..4).map(|k| u[k] * v[k]).sum()
}

fn norm2(u: &[Scalar]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

impl CircleCoords {
    pub fn new(u: [Scalar; 5]) -> Result<Self> {
        if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("circle coordinate"));
        }
        let n = max_abs(&u);
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let u = u.map(|z| z / n);
        let r = lie_product(&u, &u).norm() / norm2(&u);
        if r > LIE_TOL {
            return Err(Error::NotOnQuadric(r));
        }
        Ok(Self { u })
    }

    pub fn coords(&self) -> &[Scalar; 5] {
        &self.u
    }

    pub fn to_point(&self) -> ProjPoint {
        ProjPoint::from_slice(&self.u).expect("nonzero circle coordinates")
    }

    pub fn from_point(p: &ProjPoint) -> Result<Self> {
        if p.len() != LIE_SIZE {
            return Err(Error::DimensionMismatch { expected: LIE_SIZE, found: p.len() });
        }
        let v = p.coords();
        Self::new([v[0], v[1], v[2], v[3], v[4]])
    }

    pub fn is_point_circle(&self, tol: f64) -> bool {
        self.u[4].norm() <= tol * norm2(&self.u).sqrt()
    }

    pub fn is_line(&self, tol: f64) -> bool {
        (self.u[2] + I * self.u[3]).norm() <= tol * norm2(&self.u).sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        proportional(&self.u, &other.u, tol)
    }

    /// The same circle with the opposite orientation.
    pub fn flipped(&self) -> Self {
        let mut u = self.u;
        u[4] = -u[4];
        Self { u }
    }
}

/// The Lie form `Σ uₖvₖ` over all five coordinates.
pub fn lie_product(u: &[Scalar], v: &[Scalar]) -> Scalar {
    (0..5).map(|k| u[k] * v[k]).sum()
}

/// Point-sphere coordinates `X(z)`.
pub fn point_coords(z: Scalar) -> [Scalar; 4] {
    let r2 = z.norm_sqr();
    [real(2.0 * z.re), real(2.0 * z.im), real(r2 - 1.0), I * (r2 + 1.0)]
}

/// Inverse of [`point_coords`]; `None` for the point at infinity.
pub fn point_from_coords(x: &[Scalar]) -> Option<Scalar> {
    let h22 = (-x[2] - I * x[3]) / 2.0;
    if h22.norm() <= 1e-14 * max_abs(&x[..4]) {
        return None;
    }
    let h12 = (x[0] + I * x[1]) / 2.0;
    Some(h12 / h22)
}

/// Oriented circle with the given centre and radius.
pub fn circle_to_coords(center: Scalar, r: f64, orientation: Orientation) -> Result<CircleCoords> {
    if !(r.is_finite() && center.re.is_finite() && center.im.is_finite()) {
        return Err(Error::NonFinite("circle"));
    }
    if r < 0.0 {
        return Err(Error::Precondition(format!("radius {r} is negative")));
    }
    let c2 = center.norm_sqr();
    let r2 = r * r;
    CircleCoords::new([
        real(-center.re),
        real(-center.im),
        real((1.0 - c2 + r2) / 2.0),
        -I * ((1.0 + c2 - r2) / 2.0),
        -I * (orientation.sign() * r),
    ])
}

/// Oriented line `a·x + b·y = d`, the limiting circle through ∞.
pub fn line_to_coords(a: f64, b: f64, d: f64, orientation: Orientation) -> Result<CircleCoords> {
    if !(a.is_finite() && b.is_finite() && d.is_finite()) {
        return Err(Error::NonFinite("line"));
    }
    let n = a.hypot(b);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let (a, b, d) = (a / n, b / n, d / n);
    CircleCoords::new([real(a), real(b), real(d), I * d, -I * orientation.sign()])
}

/// Real geometric reading of Lie coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cycle {
    Circle {
        center: Scalar,
        radius: f64,
        orientation: Orientation,
    },
    /// `normal · p = offset` with `|normal| = 1`.
    Line {
        normal: [f64; 2],
        offset: f64,
        orientation: Orientation,
    },
}

fn real_part(z: Scalar, scale: f64) -> Result<f64> {
    if z.im.abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::Degenerate("circle coordinates are not real"));
    }
    Ok(z.re)
}

/// Inverse of [`circle_to_coords`] and [`line_to_coords`].
pub fn coords_to_cycle(c: &CircleCoords) -> Result<Cycle> {
    let u = c.coords();
    if c.is_line(1e-12) {
        let phase = if u[0].norm() >= u[1].norm() { u[0] } else { u[1] };
        if phase.norm() == 0.0 {
            return Err(Error::Degenerate("line at infinity has no finite reading"));
        }
        let phase = phase / phase.norm();
        let n = [real_part(u[0] / phase, 1.0)?, real_part(u[1] / phase, 1.0)?];
        let len = n[0].hypot(n[1]);
        let offset = real_part(u[2] / phase, len)? / len;
        let s = real_part(I * u[4] / phase, len)?;
        return Ok(Cycle::Line { normal: [n[0] / len, n[1] / len], offset, orientation: Orientation::of(s) });
    }
    let k = u[2] + I * u[3];
    let cx = real_part(-u[0] / k, 1.0)?;
    let cy = real_part(-u[1] / k, 1.0)?;
    let s = real_part(I * u[4] / k, 1.0)?;
    Ok(Cycle::Circle { center: Scalar::new(cx, cy), radius: s.abs(), orientation: Orientation::of(s) })
}

/// Inversive angle between two oriented circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleAngle {
    /// Angle in `[0, π]`; zero for oriented tangency.
    Real(f64),
    /// The circles do not meet in real points; carries `cos θ` with `|cos θ| > 1` or complex.
    Imaginary { cosine: Scalar },
}

impl CircleAngle {
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            CircleAngle::Real(t) => Some(t),
            CircleAngle::Imaginary { .. } => None,
        }
    }
}

fn signed_radius(c: &CircleCoords) -> Result<Scalar> {
    if c.is_point_circle(1e-12) {
        return Err(Error::Precondition("point circle has no angle".into()));
    }
    Ok(c.coords()[4])
}

/// `cos θ = −⟨u, v⟩₄ / (u₅ v₅)`.
///
/// For real circles this equals `(r₁² + r₂² − d²)/(2 σ₁r₁ σ₂r₂)`, so θ = 0
/// exactly when the oriented circles touch.
pub fn circle_cosine(c1: &CircleCoords, c2: &CircleCoords) -> Result<Scalar> {
    let s1 = signed_radius(c1)?;
    let s2 = signed_radius(c2)?;
    Ok(-inversive_product(c1.coords(), c2.coords()) / (s1 * s2))
}

pub fn circle_angle(c1: &CircleCoords, c2: &CircleCoords) -> Result<CircleAngle> {
    let cosine = circle_cosine(c1, c2)?;
    if cosine.im.abs() <= 1e-9 && cosine.re.abs() <= 1.0 + 1e-12 {
        Ok(CircleAngle::Real(cosine.re.clamp(-1.0, 1.0).acos()))
    } else {
        Ok(CircleAngle::Imaginary { cosine })
    }
}

/// `|1 − cos θ|`, the scale-free Lie tangency residual.
pub fn tangency_defect(c1: &CircleCoords, c2: &CircleCoords) -> Result<f64> {
    let s1 = signed_radius(c1)?;
    let s2 = signed_radius(c2)?;
    Ok(lie_product(c1.coords(), c2.coords()).norm() / (s1 * s2).norm())
}

/// Relative deviation of `MᵀM` from a multiple of the identity, and the multiple.
pub fn form_preservation_residual(m: &DMatrix<Scalar>) -> (f64, Scalar) {
    let n = m.nrows();
    let g = m.transpose() * m;
    let factor = g.trace() / n as f64;
    let diff = &g - DMatrix::identity(n, n) * factor;
    let scale = g.norm();
    (if scale > 0.0 { diff.norm() / scale } else { f64::INFINITY }, factor)
}

/// Applies a linear map preserving `u₁² + … + u₅²` up to a factor.
pub fn lie_apply(m: &DMatrix<Scalar>, c: &CircleCoords) -> Result<CircleCoords> {
    if m.nrows() != LIE_SIZE || m.ncols() != LIE_SIZE {
        return Err(Error::DimensionMismatch { expected: LIE_SIZE, found: m.nrows().max(m.ncols()) });
    }
    let (res, factor) = form_preservation_residual(m);
    if res > 1e-9 || factor.norm() == 0.0 {
        return Err(Error::FormNotPreserved(res));
    }
    let v = m * DVector::from_column_slice(c.coords());
    CircleCoords::new([v[0], v[1], v[2], v[3], v[4]])
}

fn hermitian_to_coords(h: &Matrix2<Scalar>) -> [Scalar; 4] {
    [h[(0, 1)] + h[(1, 0)], -I * (h[(0, 1)] - h[(1, 0)]), h[(0, 0)] - h[(1, 1)], I * (h[(0, 0)] + h[(1, 1)])]
}

fn coords_to_hermitian(x: &[Scalar]) -> Matrix2<Scalar> {
    Matrix2::new((x[2] - I * x[3]) / 2.0, (x[0] + I * x[1]) / 2.0, (x[0] - I * x[1]) / 2.0, (-x[2] - I * x[3]) / 2.0)
}

/// The 4×4 action of a Möbius map on tetracyclic coordinates.
///
/// Points correspond to `H = v v†` with `v = (z, 1)`, acted on by
/// `H ↦ M H M†` (or `M Hᵀ M†` for the conjugating family). The result `A`
/// satisfies `AᵀA = |det M|²·I`, maps `X(z)` to a multiple of `X(m(z))` and
/// circle coordinates `u₁..u₄` to those of the image circle.
pub fn moebius_to_tetracyclic(m: &MoebiusMap) -> DMatrix<Scalar> {
    let mm = m.matrix();
    let ma = mm.adjoint();
    let mut a = DMatrix::from_element(4, 4, real(0.0));
    for k in 0..4 {
        let mut e = [real(0.0); 4];
        e[k] = real(1.0);
        let h = coords_to_hermitian(&e);
        let h = if m.conjugating { h.transpose() } else { h };
        let x = hermitian_to_coords(&(mm * h * ma));
        for r in 0..4 {
            a[(r, k)] = x[r];
        }
    }
    a
}

/// The 5×5 lift `diag(A, |det M|)` of [`moebius_to_tetracyclic`], which
/// preserves the Lie form up to the factor `|det M|²` and fixes orientation.
pub fn moebius_to_lie(m: &MoebiusMap) -> DMatrix<Scalar> {
    let a = moebius_to_tetracyclic(m);
    let mut l = DMatrix::from_element(5, 5, real(0.0));
    l.view_mut((0, 0), (4, 4)).copy_from(&a);
    l[(4, 4)] = real(m.det().norm());
    l
}
