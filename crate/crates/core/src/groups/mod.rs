//! Transformation groups as values: sampling, membership, axioms,
//! stabilizers, orbits and the randomized invariance test.

pub mod axioms;
pub mod builtin;
pub mod circular;
pub mod configuration;
pub mod invariance;
pub mod stabilizer;
pub mod transformation;

pub use axioms::{check_group_axioms, check_group_axioms_with_tol, AxiomReport};
pub use builtin::{
    builtin_group, AffineKind, GroupDescriptor, GroupFactory, GroupRegistry, InversiveGroup, LieSphereGroup,
    MatrixGroup, MoebiusGroup, TransformationGroup, BUILTIN_GROUPS,
};
pub use circular::{circular_points, is_similarity_direct, is_similarity_via_circular_points};
pub use configuration::{Configuration, Element};
pub use invariance::{invariance_test, orbit_sample, FnProperty, Property, PropertyValue, Verdict, Witness};
pub use stabilizer::{stabilizes, PointStabilizer};
pub use transformation::{ContactRef, LinearAction, Transformation};
