//! Geometries as pairs of a space and a transformation group.
//!
//! The crate computes invariants, tests invariance by randomized search for
//! counterexamples, and implements the maps that carry one geometry into
//! another: stereographic projection, conic parametrization, Plücker line
//! coordinates and circle coordinates. It also provides projective
//! measurement against an absolute quadric, covariants of binary cubics and
//! quartics, and checks for contact transformations.
//!
//! All randomized routines take an explicit seed; see [`seed`].

pub mod binary_forms;
pub mod cayley_klein;
pub mod contact;
pub mod error;
pub mod fixtures;
pub mod groups;
pub mod moebius;
pub mod projective;
pub mod properties;
pub mod seed;
pub mod transfers;

pub use error::{Error, Result};
pub use moebius::{moebius_apply, ExtendedComplex, MoebiusMap};
pub use projective::{Hyperplane, ProjMap, ProjPoint, Quadric, Scalar};
