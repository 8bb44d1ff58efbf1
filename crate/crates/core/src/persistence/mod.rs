//! Persistent homology over Z/2 of the sublevel filtrations of a
//! [`FilteredComplex`](crate::complexes::FilteredComplex).
//!
//! Simplices enter in the complex's own order (value, dimension,
//! lexicographic), which refines the sublevel filtration. Pairs born and
//! killed at the same value, as produced by every non-singular gradient
//! interval, are dropped from the barcode and kept in a side list.

mod barcode;
mod reduce;

pub use barcode::{
    betti_by_rank, compare_barcodes, compute_barcode, compute_barcode_verbose,
    inclusion_is_isomorphism, Bar, Barcode, BarcodeComparison,
};
