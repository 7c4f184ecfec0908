//! Binary forms and their classical covariants.
//!
//! A form of degree `d` is stored by its plain coefficients
//! `f = Σₖ aₖ x^{d−k} yᵏ`, highest power of `x` first. Covariants use the
//! raw differential expressions
//!
//! * Hessian `fₓₓ f_yy − fₓy²`,
//! * Jacobian `fₓ g_y − f_y gₓ`,
//!
//! so that for a cubic `Δ = hessian(f)`, `Q = jacobian(f, Δ)` and the
//! discriminant `R` below satisfy `Q² + 432·R·f² = −Δ³`. The quartic
//! invariants are written in the binomial coefficients
//! `f = a x⁴ + 4b x³y + 6c x²y² + 4d xy³ + e y⁴`:
//! `i = ae − 4bd + 3c²`, `j = ace + 2bcd − ad² − b²e − c³`.
//!
//! Under a substitution `(x, y) ↦ (αx + βy, γx + δy)` with determinant `D`,
//! the Hessian picks up `D²`, the Jacobian `D`, `R` and `j` pick up `D⁶` and
//! `i` picks up `D⁴`.

pub mod pencils;
pub mod roots;

use std::fmt;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::projective::{max_abs, proportional, Scalar};

pub use pencils::{
    cubic_pencil_member, cubic_pencil_member_homogeneous, quartic_pencil_member, quartic_square_members, SquareMember,
    CUBIC_DELTA_CUBE_LAMBDA,
};
pub use roots::{form_from_roots, projective_roots, roots_on_sphere, BinaryRoot, SphericalRootSet};

/// Homogeneous polynomial in two variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm {
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    /// From `a₀ … a_d`, the coefficients of `x^d, x^{d−1}y, …, y^d`.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("binary form"));
        }
        if max_abs(&coeffs) == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    /// Covariant results may vanish identically, so they skip the nonzero check.
    pub(crate) fn raw(coeffs: Vec<Scalar>) -> Self {
        Self { coeffs }
    }

    pub(crate) fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Scalar::new(0.0, 0.0); degree + 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        max_abs(&self.coeffs) <= tol
    }

    pub fn eval(&self, x: Scalar, y: Scalar) -> Scalar {
        let d = self.degree();
        self.coeffs.iter().enumerate().map(|(k, a)| a * x.powu((d - k) as u32) * y.powu(k as u32)).sum()
    }

    pub fn scale(&self, s: Scalar) -> Self {
        Self::raw(self.coeffs.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(Self::raw(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::raw(vec![Scalar::new(1.0, 0.0)]);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `∂f/∂x`; the derivative of a constant is the zero constant.
    pub fn dx(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::raw((0..d).map(|k| self.coeffs[k] * (d - k) as f64).collect())
    }

    pub fn dy(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::raw((1..=d).map(|k| self.coeffs[k] * k as f64).collect())
    }

    /// `f(αx + βy, γx + δy)` for `s = [[α, β], [γ, δ]]`.
    pub fn substitute(&self, s: &Matrix2<Scalar>) -> Self {
        let d = self.degree();
        let u = Self::raw(vec![s[(0, 0)], s[(0, 1)]]);
        let v = Self::raw(vec![s[(1, 0)], s[(1, 1)]]);
        let mut out = Self::zero(d);
        for (k, a) in self.coeffs.iter().enumerate() {
            let term = u.pow((d - k) as u32).mul(&v.pow(k as u32)).scale(*a);
            for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o += t;
            }
        }
        out
    }

    /// Equality up to a nonzero factor.
    pub fn proportional_to(&self, other: &Self, tol: f64) -> bool {
        proportional(&self.coeffs, &other.coeffs, tol)
    }

    /// `min over s of ‖self − s·other‖ / ‖self‖`; zero for proportional forms.
    pub fn proportionality_residual(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        let a = nalgebra::DVector::from_column_slice(&self.coeffs);
        let b = nalgebra::DVector::from_column_slice(&other.coeffs);
        let (na, nb) = (a.norm(), b.norm());
        if na == 0.0 || nb == 0.0 {
            return if na == nb { 0.0 } else { 1.0 };
        }
        let s = b.dotc(&a) / Scalar::from(nb * nb);
        (&a - &b * s).norm() / na
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn require_degree(&self, degree: usize) -> Result<()> {
        if self.degree() != degree {
            return Err(Error::Precondition(format!("expected a form of degree {degree}, got {}", self.degree())));
        }
        Ok(())
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.16e}{:+.16e}i)", a.re, a.im)?;
            match d - k {
                0 => {}
                1 => write!(f, "x")?,
                e => write!(f, "x^{e}")?,
            }
            match k {
                0 => {}
                1 => write!(f, "y")?,
                e => write!(f, "y^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `fₓₓ f_yy − fₓy²`, of degree `2d − 4`.
pub fn hessian(f: &BinaryForm) -> Result<BinaryForm> {
    if f.degree() < 2 {
        return Err(Error::Precondition("hessian needs degree at least 2".into()));
    }
    let (fx, fy) = (f.dx(), f.dy());
    let (fxx, fyy, fxy) = (fx.dx(), fy.dy(), fx.dy());
    fxx.mul(&fyy).add(&fxy.mul(&fxy).scale(Scalar::new(-1.0, 0.0)))
}

/// `fₓ g_y − f_y gₓ`, of degree `d + e − 2`.
pub fn jacobian_covariant(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    if f.degree() < 1 || g.degree() < 1 {
        return Err(Error::Precondition("jacobian needs degrees at least 1".into()));
    }
    f.dx().mul(&g.dy()).add(&f.dy().mul(&g.dx()).scale(Scalar::new(-1.0, 0.0)))
}

/// Discriminant `b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd` of `ax³ + bx²y + cxy² + dy³`.
pub fn cubic_invariant_r(f: &BinaryForm) -> Result<Scalar> {
    f.require_degree(3)?;
    let [a, b, c, d] = [f.coeffs[0], f.coeffs[1], f.coeffs[2], f.coeffs[3]];
    Ok(b * b * c * c - 4.0 * a * c * c * c - 4.0 * b * b * b * d - 27.0 * a * a * d * d + 18.0 * a * b * c * d)
}

/// `(i, j)` in the binomial normalization of the module documentation.
pub fn quartic_invariants(f: &BinaryForm) -> Result<(Scalar, Scalar)> {
    f.require_degree(4)?;
    let k = &f.coeffs;
    let (a, b, c, d, e) = (k[0], k[1] / 4.0, k[2] / 6.0, k[3] / 4.0, k[4]);
    let i = a * e - 4.0 * b * d + 3.0 * c * c;
    let j = a * c * e + 2.0 * b * c * d - a * d * d - b * b * e - c * c * c;
    Ok((i, j))
}

/// The covariants of a cubic: `Δ` (quadratic), `Q` (cubic) and `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicCovariants {
    pub delta: BinaryForm,
    pub q: BinaryForm,
    pub r: Scalar,
}

pub fn cubic_covariants(f: &BinaryForm) -> Result<CubicCovariants> {
    f.require_degree(3)?;
    let delta = hessian(f)?;
    let q = jacobian_covariant(f, &delta)?;
    Ok(CubicCovariants { delta, q, r: cubic_invariant_r(f)? })
}

/// The covariants of a quartic: `H` (quartic), `T` (sextic), `i` and `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticCovariants {
    pub h: BinaryForm,
    pub t: BinaryForm,
    pub i: Scalar,
    pub j: Scalar,
}

pub fn quartic_covariants(f: &BinaryForm) -> Result<QuarticCovariants> {
    f.require_degree(4)?;
    let h = hessian(f)?;
    let t = jacobian_covariant(f, &h)?;
    let (i, j) = quartic_invariants(f)?;
    Ok(QuarticCovariants { h, t, i, j })
}
