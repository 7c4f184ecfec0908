//! Maps carrying one geometry into another: the sphere and the plane, a
//! line and a conic, lines of space and the Klein quadric, circles and the
//! Lie quadric.

pub mod circles;
pub mod conic;
pub mod pluecker;
pub mod sphere_map;
pub mod stereographic;

pub use circles::{
    circle_angle, circle_to_coords, coords_to_cycle, lie_apply, line_to_coords, moebius_to_lie, moebius_to_tetracyclic,
    tangency_defect, CircleAngle, CircleCoords, Cycle, Orientation,
};
pub use conic::{conic_param, hesse_line, ConicParametrization};
pub use pluecker::{klein_form, klein_quadric, pluecker_conjugate, pluecker_embed, PlueckerLine};
pub use sphere_map::{moebius_to_sphere, sphere_quadric};
pub use stereographic::{inverse_stereographic, stereographic, SpherePoint};
