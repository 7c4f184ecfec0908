//! Surface elements `(x, y, z, p, q)` and transformations preserving the
//! united-position relation `dz − p dx − q dy = 0` up to a factor.

pub mod families;
pub mod line_elements;
pub mod maps;

use std::sync::Arc;

use nalgebra::{SMatrix, SVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from_seed};

pub use families::{
    classify_point_image, element_family_of_point, element_family_of_surface, plane_fit_residual, spread_rank,
    ElementClass, Grid,
};
pub use line_elements::{line_element_check, FnThreeMap, LineElement2D, ProlongedPlaneMap, Slope, ThreeMap};
pub use maps::{
    builtin_contact_map, legendre, partial_legendre, prolonged_cubic, swap_zp, ContactMapRegistry, ProlongedPointMap,
};

pub type Matrix5 = SMatrix<f64, 5, 5>;
pub type Vector5 = SVector<f64, 5>;

/// Relative step of the central-difference Jacobian.
pub const DEFAULT_STEP: f64 = 1e-6;

/// Default tolerance on the alignment residual.
pub const DEFAULT_CONTACT_TOL: f64 = 1e-6;

/// A point of space with a tangent-plane direction: `z` over `(x, y)` with
/// slopes `p = ∂z/∂x`, `q = ∂z/∂y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceElement {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub p: f64,
    pub q: f64,
}

impl SurfaceElement {
    pub fn new(x: f64, y: f64, z: f64, p: f64, q: f64) -> Result<Self> {
        Self::from_array([x, y, z, p, q])
    }

    pub fn from_array(v: [f64; 5]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("surface element"));
        }
        Ok(Self { x: v[0], y: v[1], z: v[2], p: v[3], q: v[4] })
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.x, self.y, self.z, self.p, self.q]
    }

    pub fn base_point(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Coefficients of `dz − p dx − q dy` in the basis `dx, dy, dz, dp, dq`.
    pub fn contact_form(&self) -> Vector5 {
        Vector5::new(-self.p, -self.q, 1.0, 0.0, 0.0)
    }
}

/// `dz − p·dx − q·dy` at `e` for the displacement `de = (dx, dy, dz, dp, dq)`.
pub fn pfaffian_residual(e: &SurfaceElement, de: &[f64; 5]) -> f64 {
    de[2] - e.p * de[0] - e.q * de[1]
}

/// A map of the five element coordinates.
///
/// `apply` returns `None` at singular points; implementations must be pure.
pub trait FiveMap: Send + Sync {
    fn name(&self) -> &str;

    fn apply(&self, v: &[f64; 5]) -> Option<[f64; 5]>;

    /// Relative step used by the default Jacobian.
    fn step(&self) -> f64 {
        DEFAULT_STEP
    }

    fn jacobian(&self, v: &[f64; 5]) -> Option<Matrix5> {
        central_difference(|w| self.apply(w), v, self.step())
    }
}

/// Central differences with step `h = step·(1 + |vⱼ|)` per coordinate.
pub fn central_difference<const N: usize>(
    f: impl Fn(&[f64; N]) -> Option<[f64; N]>,
    v: &[f64; N],
    step: f64,
) -> Option<SMatrix<f64, N, N>> {
    let mut j = SMatrix::<f64, N, N>::zeros();
    for c in 0..N {
        let h = step * (1.0 + v[c].abs());
        let mut plus = *v;
        let mut minus = *v;
        plus[c] += h;
        minus[c] -= h;
        let (fp, fm) = (f(&plus)?, f(&minus)?);
        for r in 0..N {
            let d = (fp[r] - fm[r]) / (2.0 * h);
            if !d.is_finite() {
                return None;
            }
            j[(r, c)] = d;
        }
    }
    Some(j)
}

type MapFn = dyn Fn(&[f64; 5]) -> Option<[f64; 5]> + Send + Sync;
type JacFn = dyn Fn(&[f64; 5]) -> Option<Matrix5> + Send + Sync;

/// A [`FiveMap`] built from closures.
#[derive(Clone)]
pub struct FnFiveMap {
    name: String,
    f: Arc<MapFn>,
    jac: Option<Arc<JacFn>>,
    step: f64,
}

impl FnFiveMap {
    pub fn new(name: &str, f: impl Fn(&[f64; 5]) -> Option<[f64; 5]> + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), f: Arc::new(f), jac: None, step: DEFAULT_STEP }
    }

    pub fn with_jacobian(mut self, j: impl Fn(&[f64; 5]) -> Option<Matrix5> + Send + Sync + 'static) -> Self {
        self.jac = Some(Arc::new(j));
        self
    }

    /// Drops any analytic Jacobian and uses central differences with `step`.
    pub fn with_step(mut self, step: f64) -> Self {
        self.jac = None;
        self.step = step;
        self
    }
}

impl FiveMap for FnFiveMap {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, v: &[f64; 5]) -> Option<[f64; 5]> {
        (self.f)(v)
    }

    fn step(&self) -> f64 {
        self.step
    }

    fn jacobian(&self, v: &[f64; 5]) -> Option<Matrix5> {
        match &self.jac {
            Some(j) => j(v),
            None => central_difference(|w| self.apply(w), v, self.step),
        }
    }
}

/// `outer ∘ inner`, with the chain-rule Jacobian.
pub struct Composed {
    name: String,
    outer: Arc<dyn FiveMap>,
    inner: Arc<dyn FiveMap>,
}

impl Composed {
    pub fn new(outer: Arc<dyn FiveMap>, inner: Arc<dyn FiveMap>) -> Self {
        let name = format!("{}*{}", outer.name(), inner.name());
        Self { name, outer, inner }
    }
}

impl FiveMap for Composed {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, v: &[f64; 5]) -> Option<[f64; 5]> {
        self.outer.apply(&self.inner.apply(v)?)
    }

    fn jacobian(&self, v: &[f64; 5]) -> Option<Matrix5> {
        let w = self.inner.apply(v)?;
        Some(self.outer.jacobian(&w)? * self.inner.jacobian(v)?)
    }
}

/// Alignment of the pulled-back contact form with the original one at `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    /// `‖Jᵀθ′ − ρθ‖ / ‖Jᵀθ′‖`: the sine of the angle between the covectors.
    pub residual: f64,
    /// Least-squares factor `ρ` with `Jᵀθ′ ≈ ρθ`.
    pub factor: f64,
}

/// `None` when the map or its Jacobian cannot be evaluated at `v`.
pub fn contact_alignment(m: &dyn FiveMap, v: &[f64; 5]) -> Option<Alignment> {
    let image = m.apply(v)?;
    if image.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let j = m.jacobian(v)?;
    let theta_image = Vector5::new(-image[3], -image[4], 1.0, 0.0, 0.0);
    let theta = Vector5::new(-v[3], -v[4], 1.0, 0.0, 0.0);
    let pull = j.transpose() * theta_image;
    let norm = pull.norm();
    if norm == 0.0 {
        return Some(Alignment { residual: f64::INFINITY, factor: 0.0 });
    }
    let factor = pull.dot(&theta) / theta.norm_squared();
    Some(Alignment { residual: (pull - theta * factor).norm() / norm, factor })
}

/// Where a contact check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactWitness {
    pub sample: usize,
    pub seed: u64,
    pub element: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContactVerdict {
    Contact {
        samples: usize,
        skipped: usize,
        tolerance: f64,
        max_residual: f64,
        /// Range of the proportionality factor over the samples.
        factor_range: (f64, f64),
    },
    NotContact(ContactWitness),
}

impl ContactVerdict {
    pub fn is_contact(&self) -> bool {
        matches!(self, ContactVerdict::Contact { .. })
    }
}

/// Per-sample evaluation shared by the surface- and line-element checks.
pub(crate) fn run_alignment_check<const N: usize>(
    seed: u64,
    samples: usize,
    tol: f64,
    min_samples: usize,
    eval: impl Fn(&[f64; N]) -> Option<Alignment>,
) -> Result<ContactVerdict> {
    if samples < min_samples {
        return Err(Error::Validation { field: "samples".into(), message: format!("must be at least {min_samples}") });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Validation { field: "tolerance".into(), message: "must be positive".into() });
    }
    let mut failed = 0;
    let mut max_residual: f64 = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..samples {
        let s = derive_seed(seed, k as u64);
        let mut rng = rng_from_seed(s);
        let v: [f64; N] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let Some(a) = eval(&v) else {
            failed += 1;
            continue;
        };
        if a.residual.is_nan() || a.residual > tol {
            return Ok(ContactVerdict::NotContact(ContactWitness {
                sample: k,
                seed: s,
                element: v.to_vec(),
                residual: a.residual,
                tolerance: tol,
            }));
        }
        max_residual = max_residual.max(a.residual);
        lo = lo.min(a.factor);
        hi = hi.max(a.factor);
    }
    if 2 * failed > samples {
        return Err(Error::JacobianFailure { failed, samples });
    }
    Ok(ContactVerdict::Contact { samples, skipped: failed, tolerance: tol, max_residual, factor_range: (lo, hi) })
}

/// Tests on random elements of `[−1, 1]⁵` whether `m` pulls the contact form
/// back to a multiple of itself. Sample `k` is drawn from `derive_seed(seed, k)`.
pub fn is_contact_transformation(m: &dyn FiveMap, seed: u64, samples: usize, tol: f64) -> Result<ContactVerdict> {
    run_alignment_check::<5>(seed, samples, tol, 10, |v| contact_alignment(m, v))
}
