use crate::error::{Error, Result};
use crate::moebius::ExtendedComplex;
use crate::projective::Scalar;

/// Point of the unit sphere `x² + y² + z² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint { x: 0.0, y: 0.0, z: 1.0 };
    pub const SOUTH: SpherePoint = SpherePoint { x: 0.0, y: 0.0, z: -1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite("sphere point"));
        }
        let r = x * x + y * y + z * z;
        if (r - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("|p|² = {r} is not 1")));
        }
        Ok(Self { x, y, z })
    }

    /// Radially projects a nonzero vector onto the sphere.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { x: x / r, y: y / r, z: z / r })
    }

    /// Latitude and longitude in degrees, longitude in [0, 360).
    pub fn lat_lon_degrees(&self) -> (f64, f64) {
        let lat = self.z.clamp(-1.0, 1.0).asin().to_degrees();
        let lon = self.y.atan2(self.x).to_degrees().rem_euclid(360.0);
        (lat, lon)
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Projection from the north pole onto the equatorial plane.
pub fn stereographic(p: &SpherePoint) -> ExtendedComplex {
    if p.z <= 0.0 {
        ExtendedComplex::Finite(Scalar::new(p.x, p.y) / (1.0 - p.z))
    } else {
        // (x+iy)/(1−z) = (1+z)/(x−iy) on the sphere; avoids cancellation near the pole.
        let den = Scalar::new(p.x, -p.y);
        if den.norm() == 0.0 {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::from_homogeneous(Scalar::new(1.0 + p.z, 0.0), den)
        }
    }
}

/// Inverse of [`stereographic`]; ∞ goes to the north pole.
pub fn inverse_stereographic(w: &ExtendedComplex) -> SpherePoint {
    match *w {
        ExtendedComplex::Infinity => SpherePoint::NORTH,
        ExtendedComplex::Finite(w) => {
            let r2 = w.norm_sqr();
            let d = r2 + 1.0;
            SpherePoint { x: 2.0 * w.re / d, y: 2.0 * w.im / d, z: (r2 - 1.0) / d }
        }
    }
}
