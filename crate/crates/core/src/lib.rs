//! Radius-function complexes of finite weighted point sets.
//!
//! The crate builds Čech, Delaunay–Čech, Delaunay (alpha), selective Delaunay
//! and Wrap complexes from certified constrained smallest-sphere solves,
//! extracts the generalized discrete gradients of their radius functions,
//! constructs explicit collapse sequences
//! `Čech_r ↘ DelČech_r ↘ Del_r ↘ Wrap_r`, and compares the persistent
//! homology of the four filtrations.
//!
//! Squared radii are used throughout; a cap of `f64::INFINITY` means no cap.

pub mod collapse;
pub mod complexes;
mod error;
pub mod format;
pub mod geometry;
pub mod morse;
pub mod persistence;
mod simplex;
mod tolerance;
pub mod wrap;

pub use error::{Error, Result};
pub use simplex::Simplex;
pub use tolerance::Tolerances;
