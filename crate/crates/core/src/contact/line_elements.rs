use std::sync::Arc;

use nalgebra::{Matrix2, SMatrix, Vector2, Vector3};

use crate::error::{Error, Result};

use super::{central_difference, run_alignment_check, Alignment, ContactVerdict, DEFAULT_STEP};

/// Direction of a line element: a finite slope `dy/dx` or vertical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Vertical,
}

/// A plane point with a direction through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineElement2D {
    pub x: f64,
    pub y: f64,
    pub slope: Slope,
}

impl LineElement2D {
    pub fn new(x: f64, y: f64, slope: Slope) -> Result<Self> {
        let finite = match slope {
            Slope::Finite(p) => p.is_finite(),
            Slope::Vertical => true,
        };
        if !(x.is_finite() && y.is_finite() && finite) {
            return Err(Error::NonFinite("line element"));
        }
        Ok(Self { x, y, slope })
    }

    /// From a nonzero direction vector; `dx = 0` gives a vertical element.
    pub fn from_direction(x: f64, y: f64, dx: f64, dy: f64) -> Result<Self> {
        if dx == 0.0 && dy == 0.0 {
            return Err(Error::ZeroVector);
        }
        let slope = if dx == 0.0 { Slope::Vertical } else { Slope::Finite(dy / dx) };
        Self::new(x, y, slope)
    }

    /// Unit direction with nonnegative `x` component.
    pub fn direction(&self) -> [f64; 2] {
        match self.slope {
            Slope::Vertical => [0.0, 1.0],
            Slope::Finite(p) => {
                let n = p.hypot(1.0);
                [1.0 / n, p / n]
            }
        }
    }

    /// `(x, y, p)` in the finite-slope chart.
    pub fn as_array(&self) -> Option<[f64; 3]> {
        match self.slope {
            Slope::Finite(p) => Some([self.x, self.y, p]),
            Slope::Vertical => None,
        }
    }
}

/// A map of the line-element chart `(x, y, p)`.
pub trait ThreeMap: Send + Sync {
    fn name(&self) -> &str;

    fn apply(&self, v: &[f64; 3]) -> Option<[f64; 3]>;

    fn step(&self) -> f64 {
        DEFAULT_STEP
    }

    fn jacobian(&self, v: &[f64; 3]) -> Option<SMatrix<f64, 3, 3>> {
        central_difference(|w| self.apply(w), v, self.step())
    }
}

type PlaneFn = dyn Fn(&[f64; 2]) -> [f64; 2] + Send + Sync;
type ThreeFn = dyn Fn(&[f64; 3]) -> Option<[f64; 3]> + Send + Sync;

/// A point map of the plane acting on directions by its derivative.
#[derive(Clone)]
pub struct ProlongedPlaneMap {
    name: String,
    phi: Arc<PlaneFn>,
}

impl ProlongedPlaneMap {
    pub fn new(name: &str, phi: impl Fn(&[f64; 2]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), phi: Arc::new(phi) }
    }

    pub fn linear(name: &str, a: Matrix2<f64>, b: Vector2<f64>) -> Self {
        Self::new(name, move |v| {
            let w = a * Vector2::new(v[0], v[1]) + b;
            [w[0], w[1]]
        })
    }
}

impl ThreeMap for ProlongedPlaneMap {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, v: &[f64; 3]) -> Option<[f64; 3]> {
        let base = [v[0], v[1]];
        let d = central_difference(|w| Some((self.phi)(w)), &base, DEFAULT_STEP)?;
        let t = d * Vector2::new(1.0, v[2]);
        if t[0].abs() <= 1e-12 * t.norm() {
            return None;
        }
        let image = (self.phi)(&base);
        Some([image[0], image[1], t[1] / t[0]])
    }
}

/// A [`ThreeMap`] from a closure.
#[derive(Clone)]
pub struct FnThreeMap {
    name: String,
    f: Arc<ThreeFn>,
}

impl FnThreeMap {
    pub fn new(name: &str, f: impl Fn(&[f64; 3]) -> Option<[f64; 3]> + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), f: Arc::new(f) }
    }
}

impl ThreeMap for FnThreeMap {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, v: &[f64; 3]) -> Option<[f64; 3]> {
        (self.f)(v)
    }
}

fn line_alignment(m: &dyn ThreeMap, v: &[f64; 3]) -> Option<Alignment> {
    let image = m.apply(v)?;
    let j = m.jacobian(v)?;
    let theta_image = Vector3::new(-image[2], 1.0, 0.0);
    let theta = Vector3::new(-v[2], 1.0, 0.0);
    let pull = j.transpose() * theta_image;
    let norm = pull.norm();
    if norm == 0.0 {
        return Some(Alignment { residual: f64::INFINITY, factor: 0.0 });
    }
    let factor = pull.dot(&theta) / theta.norm_squared();
    Some(Alignment { residual: (pull - theta * factor).norm() / norm, factor })
}

/// Checks that `m` preserves `dy − p dx` up to a factor on random elements of `[−1, 1]³`.
pub fn line_element_check(m: &dyn ThreeMap, seed: u64, samples: usize, tol: f64) -> Result<ContactVerdict> {
    run_alignment_check::<3>(seed, samples, tol, 1, |v| line_alignment(m, v))
}
