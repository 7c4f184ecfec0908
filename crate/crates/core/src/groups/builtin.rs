use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::projective::{real, ProjMap, Scalar, I};
use crate::seed::{log_uniform_scale, random_orthogonal, random_rotation, rng_from_seed, uniform};
use crate::transfers::circles::{form_preservation_residual, moebius_to_lie};

use super::transformation::Transformation;

/// A transformation group given by its operations.
///
/// Membership is numeric: `contains` accepts elements that satisfy the
/// defining relations to within `tol`.
pub trait TransformationGroup: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Dimension of the space acted on.
    fn dimension(&self) -> usize;

    /// Length of the homogeneous coordinate vectors the elements act on.
    fn point_len(&self) -> usize;

    fn identity(&self) -> Transformation;

    /// Draws an element; a pure function of `seed`.
    fn sample(&self, seed: u64) -> Transformation;

    fn contains(&self, t: &Transformation, tol: f64) -> bool;

    fn compose(&self, a: &Transformation, b: &Transformation) -> Result<Transformation> {
        a.compose(b)
    }

    fn invert(&self, t: &Transformation) -> Result<Transformation> {
        t.inverse()
    }

    /// True when every element is an affine map `x ↦ Lx + t` of real space.
    fn is_affine(&self) -> bool {
        false
    }
}

pub type GroupDescriptor = Arc<dyn TransformationGroup>;

/// The real groups acting by matrices on `n + 1` homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineKind {
    /// Rigid motions and reflections.
    Isometries,
    /// Similarities including reflections.
    Principal,
    Affine,
    Projective,
}

#[derive(Debug, Clone)]
pub struct MatrixGroup {
    kind: AffineKind,
    dim: usize,
}

impl MatrixGroup {
    pub fn new(kind: AffineKind, dim: usize) -> Result<Self> {
        let ok = match kind {
            AffineKind::Isometries | AffineKind::Principal => dim == 2 || dim == 3,
            AffineKind::Affine | AffineKind::Projective => dim >= 1,
        };
        if !ok {
            return Err(Error::UnsupportedDimension { group: Self::name_of(kind).into(), dimension: dim });
        }
        Ok(Self { kind, dim })
    }

    fn name_of(kind: AffineKind) -> &'static str {
        match kind {
            AffineKind::Isometries => "euclidean_isometries",
            AffineKind::Principal => "principal",
            AffineKind::Affine => "affine",
            AffineKind::Projective => "projective",
        }
    }

    pub fn kind(&self) -> AffineKind {
        self.kind
    }

    fn sample_matrix(&self, seed: u64) -> DMatrix<f64> {
        let mut rng = rng_from_seed(seed);
        let n = self.dim;
        if self.kind == AffineKind::Projective {
            let scales = DVector::from_fn(n + 1, |_, _| log_uniform_scale(&mut rng));
            return random_orthogonal(&mut rng, n + 1)
                * DMatrix::from_diagonal(&scales)
                * random_rotation(&mut rng, n + 1);
        }
        let linear = match self.kind {
            AffineKind::Isometries => random_orthogonal(&mut rng, n),
            AffineKind::Principal => random_orthogonal(&mut rng, n) * log_uniform_scale(&mut rng),
            _ => {
                let q = random_orthogonal(&mut rng, n);
                let scales = DVector::from_fn(n, |_, _| log_uniform_scale(&mut rng));
                q * DMatrix::from_diagonal(&scales) * random_rotation(&mut rng, n)
            }
        };
        let mut m = DMatrix::identity(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&linear);
        for k in 0..n {
            m[(k, n)] = uniform(&mut rng, -1.0, 1.0);
        }
        m
    }
}

/// Real matrix `M / M[n][n]` when `M` is affine to within `tol`.
pub(crate) fn affine_normal_form(m: &DMatrix<Scalar>, tol: f64) -> Option<DMatrix<f64>> {
    let n = m.nrows() - 1;
    let k = m[(n, n)];
    let scale = m.norm();
    if k.norm() <= tol * scale {
        return None;
    }
    let a = m / k;
    let scale = a.norm();
    if a.iter().any(|z| z.im.abs() > tol * scale) {
        return None;
    }
    if (0..n).any(|j| a[(n, j)].norm() > tol * scale) {
        return None;
    }
    Some(a.map(|z| z.re))
}

/// `‖LᵀL − (tr/n)·I‖ / ‖LᵀL‖`, zero exactly for conformal `L`.
pub(crate) fn conformality_residual(l: &DMatrix<f64>) -> f64 {
    let n = l.nrows();
    let g = l.transpose() * l;
    let k = g.trace() / n as f64;
    (&g - DMatrix::identity(n, n) * k).norm() / g.norm()
}

impl TransformationGroup for MatrixGroup {
    fn name(&self) -> &str {
        Self::name_of(self.kind)
    }

    fn dimension(&self) -> usize {
        self.dim
    }

    fn point_len(&self) -> usize {
        self.dim + 1
    }

    fn identity(&self) -> Transformation {
        Transformation::projective(ProjMap::identity(self.dim + 1))
    }

    fn sample(&self, seed: u64) -> Transformation {
        let m = self.sample_matrix(seed);
        Transformation::projective(ProjMap::from_real(&m).expect("sampled matrices are well conditioned"))
    }

    fn contains(&self, t: &Transformation, tol: f64) -> bool {
        let Transformation::Projective { forward, .. } = t else { return false };
        let n = self.dim;
        if forward.size() != n + 1 {
            return false;
        }
        if self.kind == AffineKind::Projective {
            return true;
        }
        let Some(a) = affine_normal_form(forward.matrix(), tol) else { return false };
        let l = a.view((0, 0), (n, n)).into_owned();
        match self.kind {
            AffineKind::Affine => true,
            AffineKind::Principal => conformality_residual(&l) <= tol,
            AffineKind::Isometries => {
                let g = l.transpose() * &l;
                (g - DMatrix::identity(n, n)).norm() <= tol * (n as f64).sqrt()
            }
            AffineKind::Projective => unreachable!(),
        }
    }

    fn is_affine(&self) -> bool {
        self.kind != AffineKind::Projective
    }
}

/// Draws a Möbius map with `ad − bc = 1` and bounded entries; the
/// conjugating family with probability 1/2.
pub(crate) fn sample_moebius<R: Rng>(rng: &mut R) -> MoebiusMap {
    loop {
        let mut s = || Scalar::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        let (a, b, c, d) = (s(), s(), s(), s());
        let det: Scalar = a * d - b * c;
        if det.norm() < 0.2 {
            continue;
        }
        let k = det.sqrt();
        let (a, b, c, d) = (a / k, b / k, c / k, d / k);
        if a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr() > 16.0 {
            continue;
        }
        let conjugating = rng.random_bool(0.5);
        return MoebiusMap::new(a, b, c, d, conjugating).expect("det is 1");
    }
}

/// Möbius maps of the extended plane, both families.
#[derive(Debug, Clone, Default)]
pub struct MoebiusGroup;

impl TransformationGroup for MoebiusGroup {
    fn name(&self) -> &str {
        "moebius"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn point_len(&self) -> usize {
        2
    }

    fn identity(&self) -> Transformation {
        Transformation::moebius(MoebiusMap::identity())
    }

    fn sample(&self, seed: u64) -> Transformation {
        Transformation::moebius(sample_moebius(&mut rng_from_seed(seed)))
    }

    fn contains(&self, t: &Transformation, tol: f64) -> bool {
        match t {
            Transformation::Moebius { forward, .. } => {
                let scale = forward.matrix().norm_squared();
                forward.det().norm() > tol * scale
            }
            _ => false,
        }
    }
}

/// `diag(1, 1, 1, i, i)`: circle coordinates are `D·x` with `x` real.
fn real_frame() -> [Scalar; 5] {
    [real(1.0), real(1.0), real(1.0), I, I]
}

/// True when `D⁻¹ M D` is a complex multiple of a real matrix.
fn has_real_structure(m: &DMatrix<Scalar>, tol: f64) -> bool {
    let d = real_frame();
    let n = DMatrix::from_fn(5, 5, |j, k| m[(j, k)] * d[k] / d[j]);
    let lead = n.iter().copied().fold(real(0.0), |acc, z| if z.norm() > acc.norm() { z } else { acc });
    if lead.norm() == 0.0 {
        return false;
    }
    let phase = lead / lead.norm();
    let scale = lead.norm();
    n.iter().all(|z| (z / phase).im.abs() <= tol * scale)
}

/// Real reflection in the form `diag(1, 1, 1, −1, −1)`, transported to circle coordinates.
fn sample_lie_reflection<R: Rng>(rng: &mut R) -> DMatrix<Scalar> {
    let g = [1.0, 1.0, 1.0, -1.0, -1.0];
    loop {
        let v: Vec<f64> = (0..5).map(|_| uniform(rng, -1.0, 1.0)).collect();
        let q: f64 = (0..5).map(|k| g[k] * v[k] * v[k]).sum();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if q.abs() < 0.6 * n2 {
            continue;
        }
        let r = DMatrix::from_fn(5, 5, |j, k| {
            let delta = if j == k { 1.0 } else { 0.0 };
            delta - 2.0 * v[j] * v[k] * g[k] / q
        });
        let d = real_frame();
        return DMatrix::from_fn(5, 5, |j, k| real(r[(j, k)]) * d[j] / d[k]);
    }
}

/// Inversive group on oriented circles: Möbius maps lifted to the five
/// circle coordinates, `u₅` scaled with the tetracyclic block.
#[derive(Debug, Clone, Default)]
pub struct InversiveGroup;

fn sample_inversive<R: Rng>(rng: &mut R) -> DMatrix<Scalar> {
    let m = sample_moebius(rng);
    moebius_to_lie(&m) * real(log_uniform_scale(rng))
}

fn lie_form_ok(m: &DMatrix<Scalar>, tol: f64) -> bool {
    if m.nrows() != 5 || m.ncols() != 5 {
        return false;
    }
    let (res, factor) = form_preservation_residual(m);
    res <= tol && factor.norm() > 0.0 && has_real_structure(m, tol)
}

impl TransformationGroup for InversiveGroup {
    fn name(&self) -> &str {
        "inversive_pentaspherical"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn point_len(&self) -> usize {
        5
    }

    fn identity(&self) -> Transformation {
        Transformation::pentaspherical(DMatrix::identity(5, 5)).expect("identity is invertible")
    }

    fn sample(&self, seed: u64) -> Transformation {
        let m = sample_inversive(&mut rng_from_seed(seed));
        Transformation::pentaspherical(m).expect("sampled maps are invertible")
    }

    fn contains(&self, t: &Transformation, tol: f64) -> bool {
        let Transformation::Pentaspherical { forward: m, .. } = t else { return false };
        if !lie_form_ok(m, tol) {
            return false;
        }
        let scale = m.norm();
        if (0..4).any(|k| m[(4, k)].norm() > tol * scale || m[(k, 4)].norm() > tol * scale) {
            return false;
        }
        // Orientation-preserving: the time-like entries of the tetracyclic block and of u₅ agree in sign.
        let ratio = m[(3, 3)] / m[(4, 4)];
        ratio.re > 0.0
    }
}

/// Lie's group of oriented circles: all linear maps of the five circle
/// coordinates preserving `u₁² + … + u₅²` up to a factor.
#[derive(Debug, Clone, Default)]
pub struct LieSphereGroup;

impl TransformationGroup for LieSphereGroup {
    fn name(&self) -> &str {
        "lie_sphere_extended"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn point_len(&self) -> usize {
        5
    }

    fn identity(&self) -> Transformation {
        Transformation::pentaspherical(DMatrix::identity(5, 5)).expect("identity is invertible")
    }

    fn sample(&self, seed: u64) -> Transformation {
        let mut rng = rng_from_seed(seed);
        let mut m = sample_inversive(&mut rng);
        let count = rng.random_range(1..=3);
        for _ in 0..count {
            m = sample_lie_reflection(&mut rng) * m;
        }
        Transformation::pentaspherical(m).expect("sampled maps are invertible")
    }

    fn contains(&self, t: &Transformation, tol: f64) -> bool {
        let Transformation::Pentaspherical { forward: m, .. } = t else { return false };
        lie_form_ok(m, tol)
    }
}

pub type GroupFactory = fn(usize) -> Result<GroupDescriptor>;

fn plane_only(name: &str, dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::UnsupportedDimension { group: name.into(), dimension: dim });
    }
    Ok(())
}

/// Name → constructor table for groups.
#[derive(Clone)]
pub struct GroupRegistry {
    factories: BTreeMap<String, GroupFactory>,
}

impl fmt::Debug for GroupRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

impl GroupRegistry {
    pub fn empty() -> Self {
        Self { factories: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("euclidean_isometries", |d| Ok(Arc::new(MatrixGroup::new(AffineKind::Isometries, d)?)));
        r.register("principal", |d| Ok(Arc::new(MatrixGroup::new(AffineKind::Principal, d)?)));
        r.register("affine", |d| Ok(Arc::new(MatrixGroup::new(AffineKind::Affine, d)?)));
        r.register("projective", |d| Ok(Arc::new(MatrixGroup::new(AffineKind::Projective, d)?)));
        r.register("moebius", |d| {
            plane_only("moebius", d)?;
            Ok(Arc::new(MoebiusGroup))
        });
        r.register("inversive_pentaspherical", |d| {
            plane_only("inversive_pentaspherical", d)?;
            Ok(Arc::new(InversiveGroup))
        });
        r.register("lie_sphere_extended", |d| {
            plane_only("lie_sphere_extended", d)?;
            Ok(Arc::new(LieSphereGroup))
        });
        r
    }

    pub fn register(&mut self, name: &str, factory: GroupFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn get(&self, name: &str, dimension: usize) -> Result<GroupDescriptor> {
        let factory =
            self.factories.get(name).ok_or_else(|| Error::Unknown { what: "group", name: name.to_string() })?;
        factory(dimension)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }
}

pub const BUILTIN_GROUPS: [&str; 7] = [
    "euclidean_isometries",
    "principal",
    "affine",
    "projective",
    "moebius",
    "inversive_pentaspherical",
    "lie_sphere_extended",
];

pub fn builtin_group(name: &str, dimension: usize) -> Result<GroupDescriptor> {
    GroupRegistry::builtin().get(name, dimension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::ProjPoint;
    use crate::transfers::circles::lie_product;

    #[test]
    fn unknown_and_unsupported() {
        assert!(matches!(builtin_group("galilean", 2), Err(Error::Unknown { .. })));
        assert!(matches!(builtin_group("principal", 4), Err(Error::UnsupportedDimension { .. })));
        assert!(matches!(builtin_group("moebius", 3), Err(Error::UnsupportedDimension { .. })));
        assert!(builtin_group("projective", 5).is_ok());
    }

    #[test]
    fn identity_is_member_of_every_group() {
        for name in BUILTIN_GROUPS {
            let g = builtin_group(name, 2).unwrap();
            assert!(g.contains(&g.identity(), 1e-12), "{name}");
            assert!(g.contains(&g.sample(1), 1e-9), "{name}");
        }
    }

    #[test]
    fn isometries_preserve_distance() {
        let g = builtin_group("euclidean_isometries", 2).unwrap();
        let p = ProjPoint::affine(&[0.3, -0.1]).unwrap();
        let q = ProjPoint::affine(&[-1.2, 0.8]).unwrap();
        let dist = |a: &ProjPoint, b: &ProjPoint| {
            let (a, b) = (a.to_affine(1e-12).unwrap(), b.to_affine(1e-12).unwrap());
            ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
        };
        for s in 0..20 {
            let t = g.sample(s);
            let d = dist(&t.apply_point(&p).unwrap(), &t.apply_point(&q).unwrap());
            assert!((d - dist(&p, &q)).abs() < 1e-10);
        }
    }

    #[test]
    fn lie_samples_preserve_the_form() {
        let g = builtin_group("lie_sphere_extended", 2).unwrap();
        for s in 0..20 {
            let Transformation::Pentaspherical { forward, .. } = g.sample(s) else { panic!() };
            assert!(form_preservation_residual(&forward).0 < 1e-9);
            let e = DVector::from_vec(vec![real(0.0), real(0.0), real(1.0), real(0.0), -I]);
            let img = &forward * &e;
            assert!(lie_product(img.as_slice(), img.as_slice()).norm() < 1e-9 * img.norm_squared());
        }
    }

    #[test]
    fn inversive_is_not_lie_closed() {
        let lie = builtin_group("lie_sphere_extended", 2).unwrap();
        let inv = builtin_group("inversive_pentaspherical", 2).unwrap();
        let found = (0..20).any(|s| !inv.contains(&lie.sample(s), 1e-8));
        assert!(found);
    }

    #[test]
    fn sampling_is_deterministic() {
        for name in BUILTIN_GROUPS {
            let g = builtin_group(name, 2).unwrap();
            assert!(g.sample(99).approx_eq(&g.sample(99), 0.0), "{name}");
        }
    }
}
