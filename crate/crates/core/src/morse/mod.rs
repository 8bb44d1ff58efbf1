//! Generalized discrete gradients of radius functions.
//!
//! A generalized discrete vector field partitions a complex into face
//! intervals `[P, R]`. For the radius function `ρ_E` the intervals are
//! `[Front(S), Incl(S)]` over the smallest spheres `S`, and the singular
//! ones are exactly the critical simplices. A non-singular interval refines
//! into pairs `{Q − x, Q + x}` for any free vertex `x`, which gives an
//! ordinary discrete gradient with the same critical simplices.

mod field;
mod gradient;
mod interval;

pub use field::{
    critical_simplices, gradient_to_string, is_generalized_morse, parse_gradient, radius_gradient,
    sum_refinement, GeneralizedVectorField,
};
pub(crate) use gradient::refine_interval;
pub use gradient::{compose_gradients, is_gradient, vertex_refine, DiscreteGradient};
pub use interval::Interval;
