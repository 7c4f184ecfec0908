use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::projective::{ProjMap, ProjPoint, Scalar};

use super::builtin::conformality_residual;

const CIRCULAR_TOL: f64 = 1e-9;

/// The circular points `(1 : i : 0)` and `(1 : −i : 0)`.
pub fn circular_points() -> [ProjPoint; 2] {
    [
        ProjPoint::from_slice(&[Scalar::new(1.0, 0.0), Scalar::new(0.0, 1.0), Scalar::new(0.0, 0.0)]).expect("nonzero"),
        ProjPoint::from_slice(&[Scalar::new(1.0, 0.0), Scalar::new(0.0, -1.0), Scalar::new(0.0, 0.0)])
            .expect("nonzero"),
    ]
}

fn real_plane_map(m: &ProjMap) -> Result<DMatrix<f64>> {
    if m.size() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: m.size() });
    }
    let a = m.matrix();
    let scale = a.norm();
    if a.iter().any(|z| z.im.abs() > 1e-12 * scale) {
        return Err(Error::Precondition("map must have real entries".into()));
    }
    Ok(a.map(|z| z.re))
}

/// Similarity test through the absolute: `m` maps the circular-point pair to itself.
pub fn is_similarity_via_circular_points(m: &ProjMap) -> Result<bool> {
    real_plane_map(m)?;
    let [i, j] = circular_points();
    let mi = m.apply(&i)?;
    let mj = m.apply(&j)?;
    let fixed = mi.approx_eq(&i, CIRCULAR_TOL) && mj.approx_eq(&j, CIRCULAR_TOL);
    let swapped = mi.approx_eq(&j, CIRCULAR_TOL) && mj.approx_eq(&i, CIRCULAR_TOL);
    Ok(fixed || swapped)
}

/// Direct similarity test: affine with linear part proportional to an orthogonal matrix.
pub fn is_similarity_direct(m: &ProjMap) -> Result<bool> {
    let a = real_plane_map(m)?;
    let scale = a.norm();
    if a[(2, 0)].abs() > CIRCULAR_TOL * scale || a[(2, 1)].abs() > CIRCULAR_TOL * scale {
        return Ok(false);
    }
    let l = a.view((0, 0), (2, 2)).into_owned();
    Ok(conformality_residual(&l) <= CIRCULAR_TOL)
}
