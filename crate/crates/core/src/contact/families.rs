use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::{FiveMap, SurfaceElement, DEFAULT_STEP};

/// `n` evenly spaced values in `[min, max]`, used along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation { field: "grid".into(), message: "needs at least one node".into() });
        }
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::Validation { field: "grid".into(), message: format!("bad range [{min}, {max}]") });
        }
        Ok(Self { min, max, n })
    }

    pub fn spacing(&self) -> f64 {
        if self.n == 1 {
            0.0
        } else {
            (self.max - self.min) / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.min + k as f64 * self.spacing()).collect()
    }
}

/// All elements through `pt` with slopes `(p, q)` on `grid × grid`.
pub fn element_family_of_point(pt: [f64; 3], grid: &Grid) -> Result<Vec<SurfaceElement>> {
    let vals = grid.values();
    let mut out = Vec::with_capacity(vals.len() * vals.len());
    for &p in &vals {
        for &q in &vals {
            out.push(SurfaceElement::new(pt[0], pt[1], pt[2], p, q)?);
        }
    }
    Ok(out)
}

/// Elements `(x, y, F, Fₓ, F_y)` of the graph `z = F(x, y)` on `grid × grid`,
/// `x` varying slowest. Without `grad`, slopes come from central differences.
pub fn element_family_of_surface(
    f: &dyn Fn(f64, f64) -> f64,
    grad: Option<&dyn Fn(f64, f64) -> (f64, f64)>,
    grid: &Grid,
) -> Result<Vec<SurfaceElement>> {
    let vals = grid.values();
    let mut out = Vec::with_capacity(vals.len() * vals.len());
    for &x in &vals {
        for &y in &vals {
            let (p, q) = match grad {
                Some(g) => g(x, y),
                None => {
                    let hx = DEFAULT_STEP * (1.0 + x.abs());
                    let hy = DEFAULT_STEP * (1.0 + y.abs());
                    ((f(x + hx, y) - f(x - hx, y)) / (2.0 * hx), (f(x, y + hy) - f(x, y - hy)) / (2.0 * hy))
                }
            };
            out.push(SurfaceElement::new(x, y, f(x, y), p, q)?);
        }
    }
    Ok(out)
}

/// Singular values of the centred point cloud, largest first.
fn centred_singular_values(points: &[[f64; 3]]) -> Vec<f64> {
    let n = points.len();
    if n == 0 {
        return vec![0.0; 3];
    }
    let mean: [f64; 3] = std::array::from_fn(|k| points.iter().map(|p| p[k]).sum::<f64>() / n as f64);
    let m = DMatrix::from_fn(n, 3, |r, c| points[r][c] - mean[c]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.resize(3, 0.0);
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// RMS distance of the points from their best-fitting plane.
pub fn plane_fit_residual(points: &[[f64; 3]]) -> f64 {
    centred_singular_values(points)[2] / (points.len().max(1) as f64).sqrt()
}

/// Number of principal directions whose spread exceeds `tol`.
pub fn spread_rank(points: &[[f64; 3]], tol: f64) -> usize {
    let s = centred_singular_values(points);
    let scale = (points.len().max(1) as f64).sqrt();
    s.iter().filter(|&&x| x / scale > tol).count()
}

/// What the elements through one point become under a contact map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementClass {
    Point,
    Curve,
    Surface,
}

/// Classifies `m` by the spread of the image base points of the elements through `pt`.
pub fn classify_point_image(m: &dyn FiveMap, pt: [f64; 3], grid: &Grid) -> Result<ElementClass> {
    let family = element_family_of_point(pt, grid)?;
    let images: Vec<[f64; 3]> =
        family.iter().filter_map(|e| m.apply(&e.as_array())).map(|v| [v[0], v[1], v[2]]).collect();
    if images.len() * 2 < family.len() {
        return Err(Error::Degenerate("map is singular on most of the family"));
    }
    Ok(match spread_rank(&images, 1e-8) {
        0 => ElementClass::Point,
        1 => ElementClass::Curve,
        _ => ElementClass::Surface,
    })
}
