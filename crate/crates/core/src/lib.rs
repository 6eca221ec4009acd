//! Real phase structures on primitive tropical hypersurfaces over GF(2).
//!
//! Builds the compactified tropical hypersurface dual to a primitive
//! triangulation, computes tropical homology, the homology of the sign
//! cosheaf of a patchwork and the spectral sequence of its filtration,
//! and specializes to twisted plane curves. All arithmetic is exact.

#![allow(clippy::needless_range_loop)]

pub mod complex;
pub mod cosheaf;
pub mod curves;
pub mod error;
pub mod filtration;
pub mod gf2;
pub mod instance;
pub mod lattice;
pub mod phase;
pub mod spectral;
