//! Enumeration and classification of convex lattice polygons up to
//! unimodular equivalence.
//!
//! Polygons are carried with their full lattice-point sets. The enumerator
//! starts from the largest lattice polygon of a region and removes one vertex
//! at a time, keeping one representative per class at every cardinality.

pub mod bruteforce;
pub mod cli;
pub mod constructions;
pub mod enumerator;
pub mod equivalence;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod persist;
pub mod region;

pub use enumerator::{enumerate_classes, ClassTable, EnumerationOptions, EnumerationStats};
pub use equivalence::{apply_map, are_equivalent, find_unimodular_map, UnimodularMap};
pub use error::{Error, Result};
pub use geometry::{ConvexLatticePolygon, LatticePoint};
pub use invariants::{compute_invariants, InvariantVector};
pub use region::{Rational, Region};
