use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::projective::{real, ProjMap, ProjPoint};

use super::builtin::{GroupDescriptor, TransformationGroup};
use super::configuration::Configuration;
use super::transformation::Transformation;

/// True when `t` maps `c` onto itself as a set of elements up to scale.
///
/// Elements may be permuted: a reflection swaps the two circular points and
/// still stabilizes the pair.
pub fn stabilizes(t: &Transformation, c: &Configuration, tol: f64) -> Result<bool> {
    let image = t.apply_configuration(c)?;
    Ok(image.set_eq(c, tol))
}

/// The subgroup of an affine-type group fixing one finite real point.
///
/// Samples are corrected by the translation that moves the image of the
/// point back, so they are exact members rather than filtered draws.
#[derive(Debug, Clone)]
pub struct PointStabilizer {
    base: GroupDescriptor,
    point: ProjPoint,
    affine: Vec<f64>,
    name: String,
}

impl PointStabilizer {
    pub fn new(base: GroupDescriptor, point: &ProjPoint) -> Result<Self> {
        if !base.is_affine() {
            return Err(Error::Inapplicable { kind: "non-affine group", target: "point stabilizer" });
        }
        if point.len() != base.point_len() {
            return Err(Error::DimensionMismatch { expected: base.point_len(), found: point.len() });
        }
        let coords = point.to_affine(1e-12).ok_or(Error::Precondition("the fixed point must be finite".into()))?;
        if coords.iter().any(|z| z.im.abs() > 1e-12) {
            return Err(Error::Precondition("the fixed point must be real".into()));
        }
        let name = format!("{}_stabilizer", base.name());
        Ok(Self { base, point: point.clone(), affine: coords.iter().map(|z| z.re).collect(), name })
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }
}

impl TransformationGroup for PointStabilizer {
    fn name(&self) -> &str {
        &self.name
    }

    fn dimension(&self) -> usize {
        self.base.dimension()
    }

    fn point_len(&self) -> usize {
        self.base.point_len()
    }

    fn identity(&self) -> Transformation {
        self.base.identity()
    }

    fn sample(&self, seed: u64) -> Transformation {
        let t = self.base.sample(seed);
        let Transformation::Projective { forward, .. } = &t else { return t };
        let m = forward.matrix();
        let n = self.affine.len();
        let mut p = self.affine.iter().map(|&x| real(x)).collect::<Vec<_>>();
        p.push(real(1.0));
        let image = m * nalgebra::DVector::from_vec(p);
        let w = image[n];
        let mut shift = DMatrix::identity(n + 1, n + 1);
        for k in 0..n {
            shift[(k, n)] = real(self.affine[k]) - image[k] / w;
        }
        Transformation::projective(ProjMap::new(shift * m).expect("translations keep the map invertible"))
    }

    fn contains(&self, t: &Transformation, tol: f64) -> bool {
        self.base.contains(t, tol) && t.apply_point(&self.point).map(|q| q.approx_eq(&self.point, tol)).unwrap_or(false)
    }

    fn is_affine(&self) -> bool {
        true
    }
}
