//! Named properties together with samplers of configurations they apply to.
//!
//! Configurations are sampled for a given homogeneous length: length 2 is
//! the complex line `(z : 1)`, length 5 is the space of Lie circle
//! coordinates, and any other length `n + 1` is real projective `n`-space
//! with points drawn in the affine box `[−1, 1]ⁿ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cayley_klein::CKMetric;
use crate::error::{Error, Result};
use crate::groups::{Configuration, Element, Property, PropertyValue};
use crate::projective::{cross_ratio, incident, real, wedge_norm, Hyperplane, ProjPoint, Scalar};
use crate::seed::rng_from_seed;
use crate::transfers::circles::{circle_to_coords, lie_product, Orientation, LIE_SIZE};

/// Relative threshold for the boolean relations.
pub const RELATION_TOL: f64 = 1e-8;

/// A property that can also draw configurations to test it on.
pub trait SampledProperty: Property {
    fn sample(&self, point_len: usize, seed: u64) -> Result<Configuration>;
}

fn affine_point(rng: &mut ChaCha8Rng, len: usize) -> ProjPoint {
    let mut c: Vec<f64> = (0..len - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
    c.push(1.0);
    ProjPoint::from_real(&c).expect("last coordinate is 1")
}

fn complex_point(rng: &mut ChaCha8Rng) -> ProjPoint {
    let z = Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    ProjPoint::from_slice(&[z, real(1.0)]).expect("nonzero")
}

fn random_point(rng: &mut ChaCha8Rng, len: usize) -> ProjPoint {
    if len == 2 {
        complex_point(rng)
    } else {
        affine_point(rng, len)
    }
}

fn require_len(name: &'static str, len: usize, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inapplicable { kind: name, target: if len == 5 { "Lie circle space" } else { "this space" } })
    }
}

/// Affine coordinates of a real point, or the complex number `x/y` on the line.
fn plane_coords(p: &ProjPoint) -> Option<Vec<Scalar>> {
    let a = p.to_affine(1e-12)?;
    if p.len() != 2 && a.iter().any(|z| z.im.abs() > 1e-12 * (1.0 + z.norm())) {
        return None;
    }
    Some(a)
}

fn euclid(a: &[Scalar], b: &[Scalar]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn points_of(c: &Configuration, n: usize) -> Option<Vec<&ProjPoint>> {
    let pts: Vec<&ProjPoint> = (0..n).map_while(|k| c.point(k)).collect();
    (pts.len() == n).then_some(pts)
}

fn lie_sized(len: usize) -> bool {
    len == LIE_SIZE
}

struct EuclideanDistance;

impl Property for EuclideanDistance {
    fn name(&self) -> &str {
        "euclidean-distance"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        let Some(p) = points_of(c, 2) else { return PropertyValue::Undefined };
        match (plane_coords(p[0]), plane_coords(p[1])) {
            (Some(a), Some(b)) => PropertyValue::real(euclid(&a, &b)),
            _ => PropertyValue::Undefined,
        }
    }
}

impl SampledProperty for EuclideanDistance {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        require_len("euclidean-distance", len, len >= 2 && !lie_sized(len))?;
        let mut rng = rng_from_seed(seed);
        Configuration::points(vec![random_point(&mut rng, len), random_point(&mut rng, len)])
    }
}

/// Angle at the first point between the directions to the other two.
struct Angle;

impl Property for Angle {
    fn name(&self) -> &str {
        "angle"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        let Some(p) = points_of(c, 3) else { return PropertyValue::Undefined };
        let Some(v) = p.iter().map(|x| plane_coords(x)).collect::<Option<Vec<_>>>() else {
            return PropertyValue::Undefined;
        };
        if p[0].len() == 2 {
            let w = (v[2][0] - v[0][0]) / (v[1][0] - v[0][0]);
            return if w.re.is_finite() && w.im.is_finite() {
                PropertyValue::real(w.arg().abs())
            } else {
                PropertyValue::Undefined
            };
        }
        let d1: Vec<f64> = v[1].iter().zip(&v[0]).map(|(a, b)| (a - b).re).collect();
        let d2: Vec<f64> = v[2].iter().zip(&v[0]).map(|(a, b)| (a - b).re).collect();
        let n1 = d1.iter().map(|x| x * x).sum::<f64>().sqrt();
        let n2 = d2.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n1 == 0.0 || n2 == 0.0 {
            return PropertyValue::Undefined;
        }
        let cos = d1.iter().zip(&d2).map(|(a, b)| a * b).sum::<f64>() / (n1 * n2);
        PropertyValue::real(cos.clamp(-1.0, 1.0).acos())
    }
}

impl SampledProperty for Angle {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        require_len("angle", len, len >= 2 && !lie_sized(len))?;
        let mut rng = rng_from_seed(seed);
        Configuration::points((0..3).map(|_| random_point(&mut rng, len)).collect())
    }
}

/// Cross-ratio of four collinear points.
struct CrossRatio;

impl Property for CrossRatio {
    fn name(&self) -> &str {
        "cross-ratio"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        let Some(p) = points_of(c, 4) else { return PropertyValue::Undefined };
        match cross_ratio(p[0], p[1], p[2], p[3]) {
            Ok(z) => PropertyValue::Number(z),
            Err(_) => PropertyValue::Undefined,
        }
    }
}

impl SampledProperty for CrossRatio {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        require_len("cross-ratio", len, len >= 2 && !lie_sized(len))?;
        let mut rng = rng_from_seed(seed);
        if len == 2 {
            return Configuration::points((0..4).map(|_| complex_point(&mut rng)).collect());
        }
        let a = affine_point(&mut rng, len);
        let b = affine_point(&mut rng, len);
        let pts = (0..4)
            .map(|_| {
                let t = rng.random_range(-2.0..2.0);
                ProjPoint::new(a.coords() * real(1.0 - t) + b.coords() * real(t))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::points(pts)
    }
}

/// Whether the point lies on the hyperplane.
struct Incidence;

impl Property for Incidence {
    fn name(&self) -> &str {
        "incidence"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        match (c.get(0).and_then(Element::as_point), c.get(1).and_then(Element::as_hyperplane)) {
            (Some(p), Some(h)) if p.len() == h.len() => PropertyValue::Flag(incident(p, h)),
            _ => PropertyValue::Undefined,
        }
    }
}

impl SampledProperty for Incidence {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        require_len("incidence", len, len >= 2 && !lie_sized(len))?;
        let mut rng = rng_from_seed(seed);
        let p = random_point(&mut rng, len);
        let mut h: Vec<Scalar> = (0..len).map(|_| real(rng.random_range(-1.0..1.0))).collect();
        if rng.random_bool(0.5) {
            let s: Scalar = h.iter().zip(p.coords().iter()).take(len - 1).map(|(a, b)| a * b).sum();
            h[len - 1] = -s / p.coords()[len - 1];
        }
        Configuration::new(vec![p.into(), Hyperplane::from_slice(&h)?.into()])
    }
}

/// Whether three points lie on a line.
struct Collinearity;

impl Property for Collinearity {
    fn name(&self) -> &str {
        "collinearity"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        let Some(p) = points_of(c, 3) else { return PropertyValue::Undefined };
        let n = p[0].len();
        if p.iter().any(|x| x.len() != n) {
            return PropertyValue::Undefined;
        }
        let m = nalgebra::DMatrix::from_columns(&p.iter().map(|x| x.normalized()).collect::<Vec<DVector<Scalar>>>());
        let s = m.singular_values();
        let rank = s.iter().filter(|&&x| x > RELATION_TOL * s[0]).count();
        PropertyValue::Flag(rank <= 2)
    }
}

impl SampledProperty for Collinearity {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        require_len("collinearity", len, len >= 3 && !lie_sized(len))?;
        let mut rng = rng_from_seed(seed);
        let a = affine_point(&mut rng, len);
        let b = affine_point(&mut rng, len);
        let c = if rng.random_bool(0.5) {
            let t = rng.random_range(-2.0..2.0);
            ProjPoint::new(a.coords() * real(1.0 - t) + b.coords() * real(t))?
        } else {
            affine_point(&mut rng, len)
        };
        Configuration::points(vec![a, b, c])
    }
}

/// Oriented contact of two circles given by Lie coordinates.
struct Tangency;

impl Property for Tangency {
    fn name(&self) -> &str {
        "tangency"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        let Some(p) = points_of(c, 2) else { return PropertyValue::Undefined };
        if p.iter().any(|x| x.len() != LIE_SIZE) {
            return PropertyValue::Undefined;
        }
        let (u, v) = (p[0].normalized(), p[1].normalized());
        PropertyValue::Flag(lie_product(u.as_slice(), v.as_slice()).norm() <= RELATION_TOL)
    }
}

impl SampledProperty for Tangency {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        require_len("tangency", len, lie_sized(len))?;
        let mut rng = rng_from_seed(seed);
        let c1 = Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let r1 = rng.random_range(0.2..1.0);
        let o1 = if rng.random_bool(0.5) { Orientation::Positive } else { Orientation::Negative };
        let r2 = rng.random_range(0.2..1.0);
        let second = if rng.random_bool(0.5) {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let c2 = c1 + Scalar::from_polar(r1 + r2, theta);
            let mut best = circle_to_coords(c2, r2, o1)?;
            let first = circle_to_coords(c1, r1, o1)?;
            let flipped = best.flipped();
            if lie_product(first.coords(), flipped.coords()).norm() < lie_product(first.coords(), best.coords()).norm()
            {
                best = flipped;
            }
            best
        } else {
            let c2 = Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            circle_to_coords(c2, r2, o1)?
        };
        let first = circle_to_coords(c1, r1, o1)?;
        Configuration::points(vec![first.to_point(), second.to_point()])
    }
}

/// Projective distance against a fixed absolute.
struct CkDistance {
    metric: CKMetric,
}

impl Property for CkDistance {
    fn name(&self) -> &str {
        "ck-distance"
    }

    fn evaluate(&self, c: &Configuration) -> PropertyValue {
        let Some(p) = points_of(c, 2) else { return PropertyValue::Undefined };
        match self.metric.distance(p[0], p[1]) {
            Ok(d) => PropertyValue::Number(d),
            Err(_) => PropertyValue::Undefined,
        }
    }
}

impl SampledProperty for CkDistance {
    fn sample(&self, len: usize, seed: u64) -> Result<Configuration> {
        let size = self.metric.absolute().size();
        if len != size {
            return Err(Error::DimensionMismatch { expected: size, found: len });
        }
        let mut rng = rng_from_seed(seed);
        let mut inside = || loop {
            let p = affine_point(&mut rng, len);
            let a = p.coords();
            let r2: f64 = a.iter().take(len - 1).map(|z| z.norm_sqr()).sum();
            if r2 < 0.81 {
                return p;
            }
        };
        let (p, q) = (inside(), inside());
        if wedge_norm(&p.normalized(), &q.normalized()) == 0.0 {
            return Err(Error::Coincident);
        }
        Configuration::points(vec![p, q])
    }
}

/// Metrics accepted by the `ck-distance` property, for plane dimension 2.
pub fn named_metric(name: &str, dimension: usize) -> Result<CKMetric> {
    match name {
        "klein-disk" if dimension == 2 => Ok(CKMetric::klein_disk()),
        "klein-disk" => Err(Error::UnsupportedDimension { group: name.into(), dimension }),
        "hyperbolic" => CKMetric::hyperbolic(dimension),
        "elliptic" => CKMetric::elliptic(dimension),
        _ => Err(Error::Unknown { what: "metric", name: name.to_string() }),
    }
}

pub type PropertyDescriptor = Arc<dyn SampledProperty>;

/// `(metric, dimension)` → property.
pub type PropertyFactory = fn(Option<&str>, usize) -> Result<PropertyDescriptor>;

/// Name → constructor table for properties.
#[derive(Clone)]
pub struct PropertyRegistry {
    factories: BTreeMap<String, PropertyFactory>,
}

impl fmt::Debug for PropertyRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

impl PropertyRegistry {
    pub fn empty() -> Self {
        Self { factories: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("euclidean-distance", |_, _| Ok(Arc::new(EuclideanDistance)));
        r.register("angle", |_, _| Ok(Arc::new(Angle)));
        r.register("cross-ratio", |_, _| Ok(Arc::new(CrossRatio)));
        r.register("incidence", |_, _| Ok(Arc::new(Incidence)));
        r.register("tangency", |_, _| Ok(Arc::new(Tangency)));
        r.register("collinearity", |_, _| Ok(Arc::new(Collinearity)));
        r.register("ck-distance", |metric, dim| {
            let name = metric.ok_or_else(|| Error::Validation {
                field: "metric".into(),
                message: "ck-distance needs a metric (klein-disk, hyperbolic, elliptic)".into(),
            })?;
            Ok(Arc::new(CkDistance { metric: named_metric(name, dim)? }))
        });
        r
    }

    pub fn register(&mut self, name: &str, factory: PropertyFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn get(&self, name: &str, metric: Option<&str>, dimension: usize) -> Result<PropertyDescriptor> {
        let factory =
            self.factories.get(name).ok_or_else(|| Error::Unknown { what: "property", name: name.to_string() })?;
        factory(metric, dimension)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }
}

pub fn builtin_property(name: &str, metric: Option<&str>, dimension: usize) -> Result<PropertyDescriptor> {
    PropertyRegistry::builtin().get(name, metric, dimension)
}
