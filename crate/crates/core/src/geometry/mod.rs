//! Weighted points, constrained smallest spheres and their KKT certificates.
//!
//! A sphere with center `z` and squared radius `s` includes a weighted point
//! `x` when `‖z − x‖² ≤ s + w_x`, excludes it when `‖z − x‖² ≥ s + w_x`, and
//! has it on the sphere when both hold.

mod oracle;
mod points;
mod position;
mod solver;
mod sphere;

pub use oracle::{smallest_circumsphere, smallest_sphere_oracle};
pub use points::{WeightedPoint, WeightedPointSet};
pub use position::{check_general_position, perturb, GpReport, GpViolation};
pub use solver::{smallest_sphere, smallest_sphere_active_set};
pub use sphere::{check_kkt, Sphere, SphereCertificate};
