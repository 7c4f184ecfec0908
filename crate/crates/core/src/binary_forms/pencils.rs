use crate::error::{Error, Result};
use crate::projective::{max_abs, Scalar};

use super::roots::projective_roots;
use super::{cubic_covariants, quartic_covariants, BinaryForm};
use crate::moebius::ExtendedComplex;

/// `λ` at which `Q² + λRf²` equals `−Δ³`.
pub const CUBIC_DELTA_CUBE_LAMBDA: f64 = 432.0;

/// Relative size below which an invariant counts as zero.
const INVARIANT_TOL: f64 = 1e-12;

/// `Q² + λ·R·f²` for a cubic with `R ≠ 0`.
pub fn cubic_pencil_member(f: &BinaryForm, lambda: Scalar) -> Result<BinaryForm> {
    cubic_pencil_member_homogeneous(f, Scalar::new(1.0, 0.0), lambda)
}

/// `μ·Q² + λ·R·f²`; `(μ : λ) = (0 : 1)` gives `f²` reckoned twice.
pub fn cubic_pencil_member_homogeneous(f: &BinaryForm, mu: Scalar, lambda: Scalar) -> Result<BinaryForm> {
    let c = cubic_covariants(f)?;
    let scale = max_abs(f.coeffs());
    if c.r.norm() <= INVARIANT_TOL * scale.powi(4) {
        return Err(Error::Degenerate("cubic has a repeated root (R = 0)"));
    }
    c.q.pow(2).scale(mu).add(&f.pow(2).scale(lambda * c.r))
}

/// `i·H + λ·j·f` for a quartic whose invariants do not both vanish.
pub fn quartic_pencil_member(f: &BinaryForm, lambda: Scalar) -> Result<BinaryForm> {
    let c = quartic_covariants(f)?;
    let scale = max_abs(f.coeffs());
    if c.i.norm() <= INVARIANT_TOL * scale.powi(2) && c.j.norm() <= INVARIANT_TOL * scale.powi(3) {
        return Err(Error::Degenerate("quartic has i = j = 0"));
    }
    c.h.scale(c.i).add(&f.scale(lambda * c.j))
}

/// A member of the quartic pencil that is the square of a quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMember {
    pub lambda: Scalar,
    pub member: BinaryForm,
    /// Quadratic `s` with `s² ≈ member`.
    pub root: BinaryForm,
    /// `‖s² − member‖ / ‖member‖`.
    pub residual: f64,
}

/// Square root of a quartic that is (nearly) a perfect square, solved from
/// whichever end coefficient is larger.
fn quadratic_root(m: &BinaryForm) -> BinaryForm {
    let c = m.coeffs();
    let flip = c[4].norm() > c[0].norm();
    let k: Vec<Scalar> = if flip { c.iter().rev().copied().collect() } else { c.to_vec() };
    let top = max_abs(&k);
    let s = if k[0].norm() <= 1e-9 * top {
        vec![Scalar::new(0.0, 0.0), k[2].sqrt(), Scalar::new(0.0, 0.0)]
    } else {
        let p = k[0].sqrt();
        let q = k[1] / (2.0 * p);
        let r = (k[2] - q * q) / (2.0 * p);
        vec![p, q, r]
    };
    let s = if flip { s.into_iter().rev().collect() } else { s };
    BinaryForm::raw(s)
}

/// The members of `i·H + λ·j·f` that are perfect squares.
///
/// The three values of `λ` are the roots of
/// `j²λ³ − 5184·i³·λ − 746496·i³ = 0`; the product of the three quadratics
/// is proportional to `T`.
pub fn quartic_square_members(f: &BinaryForm) -> Result<Vec<SquareMember>> {
    let c = quartic_covariants(f)?;
    let scale = max_abs(f.coeffs());
    if c.j.norm() <= INVARIANT_TOL * scale.powi(3) {
        return Err(Error::Degenerate("harmonic quartic (j = 0): the pencil is constant"));
    }
    let i3 = c.i * c.i * c.i;
    let cubic = BinaryForm::new(vec![c.j * c.j, Scalar::new(0.0, 0.0), -5184.0 * i3, -746496.0 * i3])?;
    let mut out = Vec::with_capacity(3);
    for w in projective_roots(&cubic)? {
        let lambda = match w {
            ExtendedComplex::Finite(l) => l,
            ExtendedComplex::Infinity => return Err(Error::Degenerate("square member at infinite λ")),
        };
        let member = c.h.scale(c.i).add(&f.scale(lambda * c.j))?;
        let root = quadratic_root(&member);
        let diff = root.pow(2).add(&member.scale(Scalar::new(-1.0, 0.0)))?;
        let norm = max_abs(member.coeffs());
        let residual = if norm == 0.0 { 0.0 } else { max_abs(diff.coeffs()) / norm };
        out.push(SquareMember { lambda, member, root, residual });
    }
    Ok(out)
}
