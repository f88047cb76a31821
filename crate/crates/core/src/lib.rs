//! Disjoint-edge extraction from complete simple topological graph drawings.
//!
//! A complete graph drawn in the plane with non-self-intersecting arcs, where
//! every pair of edges meets at most once (a *simple topological graph*),
//! always contains many pairwise disjoint edges. This crate implements the
//! constructive route to such a set: pick an apex vertex on the unbounded
//! cell, label the rest counterclockwise, build set systems from triangle
//! interiors and crossing patterns, compute a perfect matching with low
//! stabbing number by multiplicative reweighting, and take a greedy
//! independent set in the resulting conflict graph. Every step is backed by
//! exact rational arithmetic; the final edge set is re-verified geometrically.

pub mod arrangement;
pub mod bitrow;
pub mod drawing;
pub mod extract;
pub mod format;
pub mod gen;
pub mod geometry;
pub mod matching;
pub mod oracle;
pub mod setsys;

mod scaled;

pub use drawing::{Drawing, Labeling, VertexId};
pub use extract::ExtractionReport;
pub use geometry::{Point, Rational};
