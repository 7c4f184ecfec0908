use nalgebra::linalg::Schur;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::moebius::ExtendedComplex;
use crate::projective::{max_abs, Scalar};
use crate::transfers::{inverse_stereographic, SpherePoint};

use super::BinaryForm;

/// Leading or trailing coefficients below this fraction of the largest one
/// count as zero and give roots at ∞ or 0.
const DEFICIT_TOL: f64 = 1e-12;

/// Largest normalized residual `|f(w)| / Σ|aₖ||w|^{n−k}` accepted for a root.
const ROOT_RESIDUAL_TOL: f64 = 1e-6;

const SCHUR_MAX_ITER: usize = 10_000;

/// A root `(x : y)` of a binary form, as the ratio `w = x / y`.
pub type BinaryRoot = ExtendedComplex;

/// Roots of a form carried to the sphere, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalRootSet {
    pub points: Vec<SpherePoint>,
    /// Normalized residual of each root; zero for roots at ∞ and 0.
    pub residuals: Vec<f64>,
}

impl SphericalRootSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Every point of `other` has a distinct partner here within `tol`.
    pub fn matches(&self, other: &SphericalRootSet, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; self.len()];
        other.points.iter().all(|p| {
            let hit = self.points.iter().enumerate().find(|(k, q)| !used[*k] && q.distance(p) <= tol);
            match hit {
                Some((k, _)) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
    }
}

fn horner(c: &[Scalar], w: Scalar) -> (Scalar, Scalar) {
    let mut p = Scalar::new(0.0, 0.0);
    let mut dp = Scalar::new(0.0, 0.0);
    for a in c {
        dp = dp * w + p;
        p = p * w + a;
    }
    (p, dp)
}

fn normalized_residual(c: &[Scalar], w: Scalar) -> f64 {
    let r = w.norm();
    let scale: f64 = c.iter().fold(0.0, |acc, a| acc * r + a.norm());
    if scale == 0.0 {
        0.0
    } else {
        horner(c, w).0.norm() / scale
    }
}

/// Shifts tried in turn when the eigenvalue iteration stalls; symmetric root
/// sets can defeat the unshifted companion matrix.
const SHIFTS: [(f64, f64); 3] = [(0.0, 0.0), (0.1370, 0.0521), (-0.3141, 0.2718)];

/// Coefficients of `p(u + s)` in the same descending order.
fn taylor_shift(c: &[Scalar], s: Scalar) -> Vec<Scalar> {
    let mut a = c.to_vec();
    let n = a.len();
    for end in (1..n).rev() {
        for k in 1..=end {
            let prev = a[k - 1];
            a[k] += s * prev;
        }
    }
    a
}

fn companion_eigenvalues(core: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = core.len() - 1;
    let lead = core[0];
    let companion = DMatrix::<Scalar>::from_fn(n, n, |r, col| {
        if r == 0 {
            -core[col + 1] / lead
        } else if r == col + 1 {
            Scalar::new(1.0, 0.0)
        } else {
            Scalar::new(0.0, 0.0)
        }
    });
    let (_, t) = Schur::try_new(companion, f64::EPSILON, SCHUR_MAX_ITER)?.unpack();
    Some((0..n).map(|k| t[(k, k)]).collect())
}

/// All `d` projective roots with their residuals.
fn roots_with_residuals(f: &BinaryForm) -> Result<Vec<(BinaryRoot, f64)>> {
    let c = f.coeffs();
    let top = max_abs(c);
    if top == 0.0 {
        return Err(Error::ZeroVector);
    }
    let small = |a: &Scalar| a.norm() <= DEFICIT_TOL * top;
    let at_infinity = c.iter().take_while(|a| small(a)).count();
    let at_zero = c.iter().rev().take_while(|a| small(a)).count();
    let mut out: Vec<(BinaryRoot, f64)> = Vec::with_capacity(f.degree());
    out.extend(std::iter::repeat_n((ExtendedComplex::Infinity, 0.0), at_infinity));
    out.extend(std::iter::repeat_n((ExtendedComplex::Finite(Scalar::new(0.0, 0.0)), 0.0), at_zero));
    if at_infinity + at_zero >= c.len() {
        return Ok(out);
    }
    let core = &c[at_infinity..c.len() - at_zero];
    let n = core.len() - 1;
    if n == 0 {
        return Ok(out);
    }
    let (shift, eigen) = SHIFTS
        .iter()
        .find_map(|&(re, im)| {
            let s = Scalar::new(re, im);
            companion_eigenvalues(&taylor_shift(core, s)).map(|e| (s, e))
        })
        .ok_or(Error::NoConvergence(f64::INFINITY))?;
    for e in eigen {
        let mut w = e + shift;
        let before = normalized_residual(core, w);
        let (p, dp) = horner(core, w);
        if dp.norm() > 0.0 {
            let refined = w - p / dp;
            if refined.re.is_finite() && refined.im.is_finite() && normalized_residual(core, refined) < before {
                w = refined;
            }
        }
        let res = normalized_residual(core, w);
        if res.is_nan() || res > ROOT_RESIDUAL_TOL {
            return Err(Error::NoConvergence(res));
        }
        out.push((ExtendedComplex::Finite(w), res));
    }
    Ok(out)
}

/// The roots of `f` as points of the extended plane, repeated by multiplicity.
pub fn projective_roots(f: &BinaryForm) -> Result<Vec<BinaryRoot>> {
    Ok(roots_with_residuals(f)?.into_iter().map(|(w, _)| w).collect())
}

/// The roots of `f` on the sphere; ∞ is the north pole and 0 the south pole.
pub fn roots_on_sphere(f: &BinaryForm) -> Result<SphericalRootSet> {
    let rs = roots_with_residuals(f)?;
    Ok(SphericalRootSet {
        points: rs.iter().map(|(w, _)| inverse_stereographic(w)).collect(),
        residuals: rs.iter().map(|(_, r)| *r).collect(),
    })
}

/// `Π (x − wₖ y)`, with a factor `y` for each root at ∞.
pub fn form_from_roots(roots: &[BinaryRoot]) -> Result<BinaryForm> {
    if roots.is_empty() {
        return Err(Error::Precondition("need at least one root".into()));
    }
    let mut f = BinaryForm::raw(vec![Scalar::new(1.0, 0.0)]);
    for w in roots {
        let factor = match *w {
            ExtendedComplex::Infinity => BinaryForm::raw(vec![Scalar::new(0.0, 0.0), Scalar::new(1.0, 0.0)]),
            ExtendedComplex::Finite(w) => BinaryForm::raw(vec![Scalar::new(1.0, 0.0), -w]),
        };
        f = f.mul(&factor);
    }
    Ok(f)
}
