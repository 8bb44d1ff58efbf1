//! Filtered selective Delaunay complexes.
//!
//! `Del_r(X, E)` contains a simplex `Q` when some sphere of squared radius at
//! most `r²` includes `Q` and excludes `E`. The value of `Q` is the squared
//! radius `ρ_E(Q)` of the smallest such sphere. `E = ∅` gives the Čech
//! complex and `E = X` the Delaunay (alpha) complex.

mod build;
mod filtered;

pub use build::{
    build_cech, build_delaunay, build_delaunay_cech, build_selective_delaunay,
    build_selective_restricted,
};
pub use filtered::{complex_contains, parse_vertex_list, ComplexKind, FilteredComplex};

pub(crate) use build::{certify, interval_key, unify_values, IntervalKey};
pub(crate) use filtered::filtration_cmp;
