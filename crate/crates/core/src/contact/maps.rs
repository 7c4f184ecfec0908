use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

use super::{central_difference, FiveMap, FnFiveMap, Matrix5, DEFAULT_STEP};

/// `(x, y, z, p, q) ↦ (p, q, px + qy − z, x, y)`; pulls the contact form back to its negative.
pub fn legendre() -> FnFiveMap {
    FnFiveMap::new("legendre", |v| {
        let [x, y, z, p, q] = *v;
        Some([p, q, p * x + q * y - z, x, y])
    })
    .with_jacobian(|v| {
        let [x, y, _, p, q] = *v;
        #[rustfmt::skip]
        let j = Matrix5::new(
            0.0, 0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 0.0, 1.0,
            p,   q,   -1.0, x,  y,
            1.0, 0.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0, 0.0,
        );
        Some(j)
    })
}

/// `(x, y, z, p, q) ↦ (p, y, z − px, −x, q)`, the Legendre map in `x` alone.
pub fn partial_legendre() -> FnFiveMap {
    FnFiveMap::new("partial-legendre", |v| {
        let [x, y, z, p, q] = *v;
        Some([p, y, z - p * x, -x, q])
    })
    .with_jacobian(|v| {
        let [x, _, _, p, _] = *v;
        #[rustfmt::skip]
        let j = Matrix5::new(
            0.0, 0.0, 0.0, 1.0, 0.0,
            0.0, 1.0, 0.0, 0.0, 0.0,
            -p,  0.0, 1.0, -x,  0.0,
            -1.0, 0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0, 1.0,
        );
        Some(j)
    })
}

/// Exchanges `z` and `p`; not a contact transformation.
pub fn swap_zp() -> FnFiveMap {
    FnFiveMap::new("swap-zp", |v| {
        let [x, y, z, p, q] = *v;
        Some([x, y, p, z, q])
    })
}

type PointFn = dyn Fn(&[f64; 3]) -> [f64; 3] + Send + Sync;
type DerivFn = dyn Fn(&[f64; 3]) -> Matrix3<f64> + Send + Sync;

/// A point transformation of space extended to surface elements.
///
/// The image slopes come from the normal `DΦ·(1, 0, p) × DΦ·(0, 1, q)` of
/// the image tangent plane. Elements whose image plane is vertical are
/// singular.
#[derive(Clone)]
pub struct ProlongedPointMap {
    name: String,
    phi: Arc<PointFn>,
    dphi: Option<Arc<DerivFn>>,
    step: f64,
}

impl fmt::Debug for ProlongedPointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProlongedPointMap").field("name", &self.name).finish_non_exhaustive()
    }
}

impl ProlongedPointMap {
    pub fn new(name: &str, phi: impl Fn(&[f64; 3]) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), phi: Arc::new(phi), dphi: None, step: DEFAULT_STEP }
    }

    pub fn with_derivative(mut self, d: impl Fn(&[f64; 3]) -> Matrix3<f64> + Send + Sync + 'static) -> Self {
        self.dphi = Some(Arc::new(d));
        self
    }

    /// Step of the central-difference Jacobian of the prolonged map.
    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// `x ↦ A·x + b`.
    pub fn affine(name: &str, a: Matrix3<f64>, b: Vector3<f64>) -> Self {
        Self::new(name, move |v| {
            let w = a * Vector3::new(v[0], v[1], v[2]) + b;
            [w[0], w[1], w[2]]
        })
        .with_derivative(move |_| a)
    }

    fn derivative(&self, v: &[f64; 3]) -> Option<Matrix3<f64>> {
        match &self.dphi {
            Some(d) => Some(d(v)),
            None => central_difference(|w| Some((self.phi)(w)), v, DEFAULT_STEP),
        }
    }
}

impl FiveMap for ProlongedPointMap {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, v: &[f64; 5]) -> Option<[f64; 5]> {
        let base = [v[0], v[1], v[2]];
        let image = (self.phi)(&base);
        let d = self.derivative(&base)?;
        let t1 = d * Vector3::new(1.0, 0.0, v[3]);
        let t2 = d * Vector3::new(0.0, 1.0, v[4]);
        let n = t1.cross(&t2);
        if n[2].abs() <= 1e-12 * n.norm() {
            return None;
        }
        Some([image[0], image[1], image[2], -n[0] / n[2], -n[1] / n[2]])
    }

    fn step(&self) -> f64 {
        self.step
    }
}

/// `(x, y, z) ↦ (x + 0.3y², y + 0.2 sin z, z + 0.25xy)`, a nonlinear point map
/// with its exact derivative.
pub fn prolonged_cubic() -> ProlongedPointMap {
    ProlongedPointMap::new("prolonged-cubic", |v| {
        let [x, y, z] = *v;
        [x + 0.3 * y * y, y + 0.2 * z.sin(), z + 0.25 * x * y]
    })
    .with_derivative(|v| {
        let [x, y, z] = *v;
        Matrix3::new(1.0, 0.6 * y, 0.0, 0.0, 1.0, 0.2 * z.cos(), 0.25 * y, 0.25 * x, 1.0)
    })
}

pub type ContactMapFactory = fn() -> Arc<dyn FiveMap>;

/// Name → constructor table for five-variable maps.
#[derive(Clone)]
pub struct ContactMapRegistry {
    factories: BTreeMap<String, ContactMapFactory>,
}

impl fmt::Debug for ContactMapRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

impl ContactMapRegistry {
    pub fn empty() -> Self {
        Self { factories: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("legendre", || Arc::new(legendre()));
        r.register("partial-legendre", || Arc::new(partial_legendre()));
        r.register("swap-zp", || Arc::new(swap_zp()));
        r.register("prolonged-cubic", || Arc::new(prolonged_cubic()));
        r.register("prolonged-shear", || {
            Arc::new(ProlongedPointMap::affine(
                "prolonged-shear",
                Matrix3::new(1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
                Vector3::zeros(),
            ))
        });
        r.register("prolonged-rotation", || {
            let (s, c) = 0.5f64.sin_cos();
            Arc::new(ProlongedPointMap::affine(
                "prolonged-rotation",
                Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
                Vector3::new(0.1, -0.2, 0.3),
            ))
        });
        r
    }

    pub fn register(&mut self, name: &str, factory: ContactMapFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn FiveMap>> {
        self.factories
            .get(name)
            .map(|f| f())
            .ok_or_else(|| Error::Unknown { what: "contact map", name: name.to_string() })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }
}

pub fn builtin_contact_map(name: &str) -> Result<Arc<dyn FiveMap>> {
    ContactMapRegistry::builtin().get(name)
}
