use nalgebra::{DVector, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::moebius::ExtendedComplex;
use crate::projective::{real, wedge_norm, Hyperplane, ProjPoint, Quadric, Scalar, SINGULARITY_THRESHOLD};

/// Rational parametrization of a plane conic by the pencil of lines through
/// one of its points.
///
/// The line through `center` with direction `d(t) = d₀ + t·d₁` meets the
/// conic again at `Q(d,d)·O − 2·Q(O,d)·d`. For a centre with nonzero last
/// coordinate `t` is the affine slope; `t = ∞` means direction `d₁`. The
/// tangent direction maps to `center`.
#[derive(Debug, Clone)]
pub struct ConicParametrization {
    conic: Quadric,
    center: DVector<Scalar>,
    d0: DVector<Scalar>,
    d1: DVector<Scalar>,
}

impl ConicParametrization {
    pub fn new(conic: &Quadric, center: &ProjPoint) -> Result<Self> {
        if conic.size() != 3 || center.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: conic.size().max(center.len()) });
        }
        let rel = conic.relative_determinant();
        if rel <= SINGULARITY_THRESHOLD {
            return Err(Error::Degenerate("conic is not of rank 3"));
        }
        let o = center.normalized();
        let residual = conic.bilinear(&o, &o).norm() / conic.matrix().norm();
        if residual > 1e-9 {
            return Err(Error::NotOnQuadric(residual));
        }
        // Drop the basis vector along the dominant coordinate of O; ties go to the last index.
        let mut skip = 0;
        for k in 0..3 {
            if o[k].norm() >= o[skip].norm() {
                skip = k;
            }
        }
        let mut basis = (0..3).filter(|&k| k != skip).map(|k| {
            let mut e = DVector::from_element(3, real(0.0));
            e[k] = real(1.0);
            e
        });
        let d0 = basis.next().expect("two directions");
        let d1 = basis.next().expect("two directions");
        Ok(Self { conic: conic.clone(), center: o, d0, d1 })
    }

    pub fn conic(&self) -> &Quadric {
        &self.conic
    }

    pub fn center(&self) -> ProjPoint {
        ProjPoint::new(self.center.clone()).expect("center is nonzero")
    }

    fn direction(&self, t: &ExtendedComplex) -> DVector<Scalar> {
        let (t0, t1) = t.homogeneous();
        &self.d0 * t1 + &self.d1 * t0
    }

    pub fn point(&self, t: &ExtendedComplex) -> ProjPoint {
        let d = self.direction(t);
        let o = &self.center;
        let x = o * self.conic.bilinear(&d, &d) - &d * (self.conic.bilinear(o, &d) * 2.0);
        match ProjPoint::new(x) {
            Ok(p) => p,
            // Only the tangent direction makes both terms vanish together.
            Err(_) => self.center(),
        }
    }

    /// Parameter of a point of the conic; inverse of [`point`](Self::point).
    pub fn parameter(&self, x: &ProjPoint) -> Result<ExtendedComplex> {
        if x.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: x.len() });
        }
        let xn = x.normalized();
        if wedge_norm(&xn, &self.center) <= 1e-9 {
            // Tangent direction at O: Q(O, d) = 0.
            let num = -self.conic.bilinear(&self.center, &self.d0);
            let den = self.conic.bilinear(&self.center, &self.d1);
            return Ok(ExtendedComplex::from_homogeneous(num, den));
        }
        let m = Matrix3::from_columns(&[
            Vector3::new(self.center[0], self.center[1], self.center[2]),
            Vector3::new(self.d0[0], self.d0[1], self.d0[2]),
            Vector3::new(self.d1[0], self.d1[1], self.d1[2]),
        ]);
        let sol = m
            .lu()
            .solve(&Vector3::new(xn[0], xn[1], xn[2]))
            .ok_or(Error::Degenerate("parametrization frame is singular"))?;
        Ok(ExtendedComplex::from_homogeneous(sol[2], sol[1]))
    }

    /// The chord through the points with parameters `t1`, `t2`; the tangent
    /// line when they coincide.
    pub fn chord(&self, t1: &ExtendedComplex, t2: &ExtendedComplex) -> Result<Hyperplane> {
        let a = self.point(t1);
        let b = self.point(t2);
        if a.approx_eq(&b, 1e-12) {
            return self.conic.polar(&a);
        }
        let (a, b) = (a.normalized(), b.normalized());
        let cross = Vector3::new(a[0], a[1], a[2]).cross(&Vector3::new(b[0], b[1], b[2]));
        Hyperplane::from_slice(cross.as_slice())
    }
}

/// Point with parameter `t` on `c`, parametrized from `center`.
pub fn conic_param(c: &Quadric, center: &ProjPoint, t: &ExtendedComplex) -> Result<ProjPoint> {
    Ok(ConicParametrization::new(c, center)?.point(t))
}

/// Hesse transference: the line cutting `c` in the point pair `{t1, t2}`.
pub fn hesse_line(c: &Quadric, center: &ProjPoint, t1: &ExtendedComplex, t2: &ExtendedComplex) -> Result<Hyperplane> {
    ConicParametrization::new(c, center)?.chord(t1, t2)
}

/// `x² + y² − z²`.
pub fn unit_circle_conic() -> Quadric {
    Quadric::diagonal(&[1.0, 1.0, -1.0]).expect("constant conic")
}
