//! Exact-arithmetic workbench for zero schemes of Lie-algebra vector fields
//! over matrix section families, and for GKM moment-graph computations in
//! equivariant cohomology and K-theory.
//!
//! Everything is computed over exact rationals: polynomial arithmetic,
//! Gröbner bases, Čech cohomology by graded slices, moment-graph linear
//! algebra, and finite-group invariant theory.  Reports are deterministic.

// matrix and convolution code keeps indexed loops where the index symmetry
// is the point
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod poly;
pub mod laurent;
pub mod series;
pub mod order;
pub mod linalg;
pub mod groebner;
pub mod charts;
pub mod lie;
pub mod zeroscheme;
pub mod gkm;
pub mod weyl;
pub mod fixture;
pub mod report;

pub use error::{Error, Result};
pub use poly::{Grading, Homogeneity, MultiPoly, PolyRing, Rat};
