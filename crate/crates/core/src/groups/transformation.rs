use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::contact::FiveMap;
use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::projective::{proportional, unit, Hyperplane, ProjMap, ProjPoint, Quadric, Scalar};

use super::configuration::{Configuration, Element};

/// A named contact transformation carried by reference.
#[derive(Clone)]
pub struct ContactRef {
    pub name: String,
    pub forward: Arc<dyn FiveMap>,
    pub inverse: Option<Arc<dyn FiveMap>>,
}

impl fmt::Debug for ContactRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContactRef").field("name", &self.name).finish_non_exhaustive()
    }
}

/// A group element together with its inverse.
#[derive(Debug, Clone)]
pub enum Transformation {
    Projective {
        forward: ProjMap,
        inverse: ProjMap,
    },
    Moebius {
        forward: MoebiusMap,
        inverse: MoebiusMap,
    },
    /// Linear map of the five circle coordinates.
    Pentaspherical {
        forward: DMatrix<Scalar>,
        inverse: DMatrix<Scalar>,
    },
    Contact(ContactRef),
}

/// Matrix form of a linear or anti-linear action on homogeneous coordinates:
/// `x ↦ M·x` or `x ↦ M·x̄`.
#[derive(Debug, Clone)]
pub struct LinearAction {
    pub matrix: DMatrix<Scalar>,
    pub inverse: DMatrix<Scalar>,
    pub conjugating: bool,
}

impl LinearAction {
    fn prepare(&self, v: &DVector<Scalar>) -> DVector<Scalar> {
        if self.conjugating {
            v.map(|z| z.conj())
        } else {
            v.clone()
        }
    }

    pub fn point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(unit(&(&self.matrix * self.prepare(p.coords()))))
    }

    pub fn hyperplane(&self, h: &Hyperplane) -> Result<Hyperplane> {
        Hyperplane::new(unit(&(self.inverse.transpose() * self.prepare(h.coeffs()))))
    }

    pub fn quadric(&self, q: &Quadric) -> Result<Quadric> {
        let m = if self.conjugating { q.matrix().map(|z| z.conj()) } else { q.matrix().clone() };
        let image = self.inverse.transpose() * m * &self.inverse;
        let scale = image.norm();
        Quadric::symmetrized(image / Scalar::from(scale))
    }
}

fn invert_matrix(m: &DMatrix<Scalar>) -> Result<DMatrix<Scalar>> {
    m.clone().try_inverse().ok_or(Error::Singular(0.0))
}

impl Transformation {
    pub fn projective(forward: ProjMap) -> Self {
        let inverse = forward.inverse();
        Transformation::Projective { forward, inverse }
    }

    pub fn moebius(forward: MoebiusMap) -> Self {
        let inverse = forward.inverse();
        Transformation::Moebius { forward, inverse }
    }

    pub fn pentaspherical(forward: DMatrix<Scalar>) -> Result<Self> {
        if forward.nrows() != 5 || forward.ncols() != 5 {
            return Err(Error::DimensionMismatch { expected: 5, found: forward.nrows() });
        }
        let inverse = invert_matrix(&forward)?;
        Ok(Transformation::Pentaspherical { forward, inverse })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Transformation::Projective { .. } => "projective",
            Transformation::Moebius { .. } => "moebius",
            Transformation::Pentaspherical { .. } => "pentaspherical",
            Transformation::Contact(_) => "contact",
        }
    }

    /// Length of the coordinate vectors the map acts on, if it acts linearly.
    pub fn point_len(&self) -> Option<usize> {
        match self {
            Transformation::Projective { forward, .. } => Some(forward.size()),
            Transformation::Moebius { .. } => Some(2),
            Transformation::Pentaspherical { .. } => Some(5),
            Transformation::Contact(_) => None,
        }
    }

    pub fn linear_action(&self) -> Option<LinearAction> {
        match self {
            Transformation::Projective { forward, inverse } => Some(LinearAction {
                matrix: forward.matrix().clone(),
                inverse: inverse.matrix().clone(),
                conjugating: false,
            }),
            Transformation::Moebius { forward, .. } => {
                let m = forward.matrix();
                let inv = m.try_inverse().expect("moebius maps are invertible");
                Some(LinearAction {
                    matrix: DMatrix::from_column_slice(2, 2, m.as_slice()),
                    inverse: DMatrix::from_column_slice(2, 2, inv.as_slice()),
                    conjugating: forward.conjugating,
                })
            }
            Transformation::Pentaspherical { forward, inverse } => {
                Some(LinearAction { matrix: forward.clone(), inverse: inverse.clone(), conjugating: false })
            }
            Transformation::Contact(_) => None,
        }
    }

    fn action_for(&self, len: usize, target: &'static str) -> Result<LinearAction> {
        match self.linear_action() {
            Some(a) if a.matrix.nrows() == len => Ok(a),
            _ => Err(Error::Inapplicable { kind: self.kind(), target }),
        }
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        self.action_for(p.len(), "point")?.point(p)
    }

    pub fn apply_hyperplane(&self, h: &Hyperplane) -> Result<Hyperplane> {
        self.action_for(h.len(), "hyperplane")?.hyperplane(h)
    }

    pub fn apply_quadric(&self, q: &Quadric) -> Result<Quadric> {
        self.action_for(q.size(), "quadric")?.quadric(q)
    }

    pub fn apply_element(&self, e: &Element) -> Result<Element> {
        Ok(match e {
            Element::Point(p) => Element::Point(self.apply_point(p)?),
            Element::Hyperplane(h) => Element::Hyperplane(self.apply_hyperplane(h)?),
            Element::Quadric(q) => Element::Quadric(self.apply_quadric(q)?),
        })
    }

    pub fn apply_configuration(&self, c: &Configuration) -> Result<Configuration> {
        let elements = c.iter().map(|e| self.apply_element(e)).collect::<Result<Vec<_>>>()?;
        Configuration::new(elements)
    }

    pub fn inverse(&self) -> Result<Transformation> {
        Ok(match self {
            Transformation::Projective { forward, inverse } => {
                Transformation::Projective { forward: inverse.clone(), inverse: forward.clone() }
            }
            Transformation::Moebius { forward, inverse } => {
                Transformation::Moebius { forward: *inverse, inverse: *forward }
            }
            Transformation::Pentaspherical { forward, inverse } => {
                Transformation::Pentaspherical { forward: inverse.clone(), inverse: forward.clone() }
            }
            Transformation::Contact(c) => match &c.inverse {
                Some(inv) => Transformation::Contact(ContactRef {
                    name: format!("{}^-1", c.name),
                    forward: inv.clone(),
                    inverse: Some(c.forward.clone()),
                }),
                None => return Err(Error::Inapplicable { kind: "contact", target: "inversion" }),
            },
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        match (self, other) {
            (
                Transformation::Projective { forward: f1, inverse: i1 },
                Transformation::Projective { forward: f2, inverse: i2 },
            ) => Ok(Transformation::Projective { forward: f1.compose(f2)?, inverse: i2.compose(i1)? }),
            (
                Transformation::Moebius { forward: f1, inverse: i1 },
                Transformation::Moebius { forward: f2, inverse: i2 },
            ) => Ok(Transformation::Moebius { forward: f1.compose(f2), inverse: i2.compose(i1) }),
            (
                Transformation::Pentaspherical { forward: f1, inverse: i1 },
                Transformation::Pentaspherical { forward: f2, inverse: i2 },
            ) => Ok(Transformation::Pentaspherical { forward: f1 * f2, inverse: i2 * i1 }),
            (Transformation::Contact(a), Transformation::Contact(b)) => {
                let forward: Arc<dyn FiveMap> =
                    Arc::new(crate::contact::Composed::new(a.forward.clone(), b.forward.clone()));
                let inverse = match (&a.inverse, &b.inverse) {
                    (Some(ai), Some(bi)) => {
                        Some(Arc::new(crate::contact::Composed::new(bi.clone(), ai.clone())) as Arc<dyn FiveMap>)
                    }
                    _ => None,
                };
                Ok(Transformation::Contact(ContactRef { name: format!("{}*{}", a.name, b.name), forward, inverse }))
            }
            _ => Err(Error::Inapplicable { kind: self.kind(), target: other.kind() }),
        }
    }

    /// Equality up to scale of the defining matrices.
    pub fn approx_eq(&self, other: &Transformation, tol: f64) -> bool {
        match (self, other) {
            (Transformation::Projective { forward: a, .. }, Transformation::Projective { forward: b, .. }) => {
                a.approx_eq(b, tol)
            }
            (Transformation::Moebius { forward: a, .. }, Transformation::Moebius { forward: b, .. }) => {
                a.approx_eq(b, tol)
            }
            (Transformation::Pentaspherical { forward: a, .. }, Transformation::Pentaspherical { forward: b, .. }) => {
                a.shape() == b.shape() && proportional(a.as_slice(), b.as_slice(), tol)
            }
            (Transformation::Contact(a), Transformation::Contact(b)) => Arc::ptr_eq(&a.forward, &b.forward),
            _ => false,
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        match self {
            Transformation::Projective { forward, .. } => forward.is_identity(tol),
            Transformation::Moebius { forward, .. } => forward.approx_eq(&MoebiusMap::identity(), tol),
            Transformation::Pentaspherical { forward, .. } => {
                proportional(forward.as_slice(), DMatrix::<Scalar>::identity(5, 5).as_slice(), tol)
            }
            Transformation::Contact(_) => false,
        }
    }

    /// Distance of `forward ∘ inverse` from the identity, after scaling.
    pub fn inverse_residual(&self) -> f64 {
        let product = match self {
            Transformation::Projective { forward, inverse } => forward.matrix() * inverse.matrix(),
            Transformation::Moebius { forward, inverse } => {
                let m = forward.compose(inverse).matrix();
                DMatrix::from_column_slice(2, 2, m.as_slice())
            }
            Transformation::Pentaspherical { forward, inverse } => forward * inverse,
            Transformation::Contact(_) => return f64::INFINITY,
        };
        distance_from_identity(&product)
    }
}

/// `‖P/p₀₀ − I‖`, or ∞ when `p₀₀` vanishes.
pub(crate) fn distance_from_identity(p: &DMatrix<Scalar>) -> f64 {
    let n = p.nrows();
    let k = p[(0, 0)];
    if k.norm() == 0.0 {
        return f64::INFINITY;
    }
    (p / k - DMatrix::<Scalar>::identity(n, n)).norm()
}
