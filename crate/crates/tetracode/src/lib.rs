//! Tetrahedral color code toolkit: lattice construction, X/Z decoding, and
//! Monte Carlo estimation of logical failure rates.
//!
//! The code family lives on the disphenoid honeycomb of the bcc lattice in
//! the dual description: tetrahedra are qubits, vertices are X stabilizers,
//! edges are Z stabilizers, and four colored quasivertices close off the
//! boundary. X errors produce loop-like edge syndromes and are decoded by a
//! color-restricted sweep followed by a per-vertex peel lift; Z errors
//! produce point-like vertex syndromes and are decoded by matching on
//! twice-restricted lattices with boundary-augmented exact minimum-weight
//! perfect matching, then reusing the X pipeline.

pub mod code;
pub mod gf2;
pub mod lattice;

pub use code::{
    build_honeycomb, carve_tetrahedral_code, offsets_for_distance, validate_code, BoundaryRatio,
    BuildError, CodeSpec, ErrorType, TetrahedralCode, TETRA_AXES,
};
pub use lattice::{Chain, Color, DualLattice, LatticeError, RestrictedGraph, VertexInfo};
