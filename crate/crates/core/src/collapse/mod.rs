//! Collapse sequences `Čech_r ↘ DelČech_r ↘ Del_r ↘ Wrap_r`, and more
//! generally `Del_r(X, E) ↘ Del_r(X, E) ∩ DelTri(X, F) ↘ Del_r(X, F)` for
//! `E ⊆ F`.
//!
//! The first collapse removes pairs `{Q − x, Q + x}` chosen by a vertex
//! pairing map. The second and the Wrap collapse vertex-refine the intervals
//! of a generalized gradient. Every sequence can be replayed with
//! [`verify_collapse`].

mod pairing;
mod sequence;
mod stages;
mod zigzag;

pub use pairing::{first_pairing_vertex, pairing_map, pairing_violations, PairingAssignment};
pub use sequence::{
    parse_collapse, verify_collapse, CollapseFailure, CollapseSequence, CollapseStep,
    ParsedCollapse,
};
pub use stages::{
    collapse_between, collapse_cech_to_delcech, collapse_del_to_wrap, collapse_delcech_to_del,
    collapse_hierarchy, collapse_restricted_to_selective, collapse_selective_to_restricted,
    CollapseHierarchy,
};
pub use zigzag::{union_point_set, zigzag_connect, ZigzagReport};
