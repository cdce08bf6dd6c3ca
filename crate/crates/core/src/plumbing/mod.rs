//! Plumbing trees with one unframed vertex and their intersection lattices.

mod graph;
mod lattice;
mod spinc;
mod torus;

pub use graph::{PlumbingGraph, Vertex};
pub use lattice::IntersectionLattice;
pub use spinc::{CharVector, SpincClass};
pub use torus::torus_knot_graph;
