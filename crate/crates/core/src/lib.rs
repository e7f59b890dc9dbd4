//! Exact geometry of square-tiled translation surfaces.
//!
//! A surface is encoded by a pair of permutations of `n` unit squares
//! (right neighbor, top neighbor) together with a set of marked vertex
//! classes. Everything downstream is exact: saddle connections are traced
//! with rational arithmetic, embedded triangles are certified by a
//! development check, and the hyperbolic side (tessellation, graph of
//! periodic directions, coarse fundamental domain, Veech group generators)
//! is built from integer matrices in `PSL(2, Z)`.
//!
//! Floating point only ever appears in rendering and in reported
//! hyperbolic areas; no predicate depends on it.

pub mod coset;
pub mod geom;
pub mod graph;
pub mod matrix;
pub mod origami;
pub mod perm;
pub mod slope;
pub mod tess;
pub mod triangle;
pub mod veech;
pub mod verify;

pub use matrix::{GroupElement, Letter, Word};
pub use origami::{Marking, Origami, VertexClass};
pub use perm::Perm;
pub use slope::{Rat, Slope};

/// Shorthand used throughout: an exact rational with 64-bit parts.
pub type Rational = num_rational::Rational64;
