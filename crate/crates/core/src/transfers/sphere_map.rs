use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::moebius::{moebius_apply, ExtendedComplex, MoebiusMap};
use crate::projective::{real, ProjMap, ProjPoint, Quadric, Scalar};

use super::stereographic::inverse_stereographic;

/// `x² + y² + z² − w² = 0`, the unit sphere in homogeneous coordinates.
pub fn sphere_quadric() -> Quadric {
    Quadric::diagonal(&[1.0, 1.0, 1.0, -1.0]).expect("constant quadric")
}

/// Homogeneous coordinates `(x : y : z : 1)` of the sphere image of `w`.
pub fn sphere_point_of(w: &ExtendedComplex) -> DVector<Scalar> {
    let p = inverse_stereographic(w);
    DVector::from_vec(vec![real(p.x), real(p.y), real(p.z), real(1.0)])
}

// No four of these are concyclic, so their sphere images are in general position.
const FRAME: [(f64, f64); 5] = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (f64::INFINITY, 0.0), (2.0, 3.0)];
const CHECK: (f64, f64) = (-1.0, -1.0);

fn frame_point(k: usize) -> ExtendedComplex {
    let (re, im) = FRAME[k];
    if re.is_infinite() {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::finite(re, im)
    }
}

/// Projective map sending the standard frame `e₁..e₄, e₁+…+e₄` to `pts`.
fn frame_map(pts: &[DVector<Scalar>]) -> Result<DMatrix<Scalar>> {
    let basis = DMatrix::from_columns(&pts[..4]);
    let lu = basis.clone().lu();
    let weights = lu.solve(&pts[4]).ok_or(Error::Degenerate("sphere frame is singular"))?;
    if weights.iter().any(|w| w.norm() < 1e-12) {
        return Err(Error::Degenerate("sphere frame points are coplanar"));
    }
    Ok(basis * DMatrix::from_diagonal(&weights))
}

/// The projective map of 3-space that restricts to `m` on the sphere.
///
/// Determined from the images of five fixed sphere points in general
/// position and checked on a sixth. Works uniformly for the holomorphic and
/// the conjugating families.
pub fn moebius_to_sphere(m: &MoebiusMap) -> Result<ProjMap> {
    let src: Vec<_> = (0..5).map(|k| sphere_point_of(&frame_point(k))).collect();
    let dst: Vec<_> = (0..5).map(|k| sphere_point_of(&moebius_apply(m, frame_point(k)))).collect();
    let a = frame_map(&src)?;
    let b = frame_map(&dst)?;
    let a_inv = a.try_inverse().ok_or(Error::Degenerate("sphere frame is singular"))?;
    let map = ProjMap::new(b * a_inv)?;

    let z = ExtendedComplex::finite(CHECK.0, CHECK.1);
    let expected = ProjPoint::new(sphere_point_of(&moebius_apply(m, z)))?;
    let got = map.apply(&ProjPoint::new(sphere_point_of(&z))?)?;
    if !got.approx_eq(&expected, 1e-6) {
        return Err(Error::Degenerate("sphere map construction failed its check point"));
    }
    Ok(map)
}
