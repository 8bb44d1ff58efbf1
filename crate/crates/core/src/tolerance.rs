/// Numerical slack used by the geometric predicates.
///
/// `eps` classifies points as inside, on, or outside a sphere and bounds the
/// affine coefficients away from zero. `eps_gp` is the (coarser) threshold at
/// which [`check_general_position`](crate::geometry::check_general_position)
/// rejects an input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eps: f64,
    pub eps_gp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps: 1e-9,
            eps_gp: 1e-7,
        }
    }
}
