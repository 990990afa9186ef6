//! Exact-arithmetic engine for the root lattice A_n: basis bookkeeping for the
//! lattice, Coxeter-plane projections, Voronoi/Delone cell geometry, prototile
//! classification, cut-and-project patch generation, and the hypercube descent
//! onto the lattice hyperplane.
//!
//! Lattice-side arithmetic is exact (rationals with denominators dividing
//! `n + 1`); floating point appears only after projecting to the plane.

pub mod catalog;
pub mod cells;
pub mod descent;
pub mod error;
pub mod hull;
pub mod lattice;
mod lp;
pub mod projection;
pub mod rat;
pub mod render;
pub mod tiling;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{AmbientVector, Basis, GramData, LatticeRank, LatticeVector};
pub use projection::{CoxeterFrame, PlanePoint};
