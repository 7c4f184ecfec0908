use crate::error::{Error, Result};
use crate::projective::{Hyperplane, ProjPoint, Quadric};

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Point(ProjPoint),
    Hyperplane(Hyperplane),
    Quadric(Quadric),
}

impl Element {
    pub fn kind(&self) -> &'static str {
        match self {
            Element::Point(_) => "point",
            Element::Hyperplane(_) => "hyperplane",
            Element::Quadric(_) => "quadric",
        }
    }

    /// Length of the homogeneous coordinate vector (matrix size for quadrics).
    pub fn len(&self) -> usize {
        match self {
            Element::Point(p) => p.len(),
            Element::Hyperplane(h) => h.len(),
            Element::Quadric(q) => q.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same kind and equal up to scale.
    pub fn approx_eq(&self, other: &Element, tol: f64) -> bool {
        match (self, other) {
            (Element::Point(a), Element::Point(b)) => a.len() == b.len() && a.approx_eq(b, tol),
            (Element::Hyperplane(a), Element::Hyperplane(b)) => a.len() == b.len() && a.approx_eq(b, tol),
            (Element::Quadric(a), Element::Quadric(b)) => a.size() == b.size() && a.approx_eq(b, tol),
            _ => false,
        }
    }

    pub fn as_point(&self) -> Option<&ProjPoint> {
        match self {
            Element::Point(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_hyperplane(&self) -> Option<&Hyperplane> {
        match self {
            Element::Hyperplane(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_quadric(&self) -> Option<&Quadric> {
        match self {
            Element::Quadric(q) => Some(q),
            _ => None,
        }
    }
}

impl From<ProjPoint> for Element {
    fn from(p: ProjPoint) -> Self {
        Element::Point(p)
    }
}

impl From<Hyperplane> for Element {
    fn from(h: Hyperplane) -> Self {
        Element::Hyperplane(h)
    }
}

impl From<Quadric> for Element {
    fn from(q: Quadric) -> Self {
        Element::Quadric(q)
    }
}

/// A nonempty list of points, hyperplanes and quadrics.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    elements: Vec<Element>,
}

impl Configuration {
    pub fn new(elements: Vec<Element>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Precondition("a configuration needs at least one element".into()));
        }
        Ok(Self { elements })
    }

    pub fn points(points: Vec<ProjPoint>) -> Result<Self> {
        Self::new(points.into_iter().map(Element::Point).collect())
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&Element> {
        self.elements.get(k)
    }

    pub fn point(&self, k: usize) -> Option<&ProjPoint> {
        self.get(k).and_then(Element::as_point)
    }

    /// `self ∪ other`, keeping order.
    pub fn adjoin(&self, other: &Configuration) -> Configuration {
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        Configuration { elements }
    }

    /// Equality as sets of elements up to scale: every element of `self`
    /// matches a distinct element of `other`.
    pub fn set_eq(&self, other: &Configuration, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        'outer: for e in &self.elements {
            for (k, f) in other.elements.iter().enumerate() {
                if !used[k] && e.approx_eq(f, tol) {
                    used[k] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

impl<'a> IntoIterator for &'a Configuration {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}
