//! Concordance invariants of graph knots presented by plumbing trees.
//!
//! A graph knot is a negative definite plumbing tree `Γ` with one unframed
//! vertex `v0`. The crate computes, for each Spin^c structure of the plumbed
//! three-manifold `Y(G)`, `G = Γ − v0`:
//!
//! * the upsilon function `Υ(t)` on `[0, 2]` as an exact piecewise linear
//!   function, together with `τ = −Υ'(0⁺)` and `d = Υ(0)`
//!   ([`upsilon`]),
//! * the sublevel persistent homology of the deformed lattice complex, which
//!   recovers `Υ(t)` from its free part ([`cubecx`]),
//! * the `[K, E]` generator model of the same complex together with a
//!   machine check of the surgery short exact sequence ([`kecx`]).
//!
//! All arithmetic is exact: rationals are [`num_rational::BigRational`] and
//! filtration values are scaled integers.

pub mod cli;
pub mod cubecx;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod kecx;
pub mod linalg;
pub mod plumbing;
pub mod quadratic;
pub mod rational;
pub mod report;
pub mod upsilon;

pub use error::{Error, Result};
pub use plumbing::{CharVector, IntersectionLattice, PlumbingGraph, SpincClass};
pub use quadratic::{GradingContext, TParam};
pub use rational::Rational;
pub use upsilon::{PiecewiseLinearFn, MinCertificate};

/// Version string recorded in report provenance blocks.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
