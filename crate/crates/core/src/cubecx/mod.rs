//! Weighted cube complexes and their sublevel persistent homology.

mod barcode;
mod complex;
pub mod persistence;
mod sparse;
mod stabilize;

pub use barcode::{Bar, Barcode};
pub use complex::{build, max_cells_from_env, Cell, WeightedComplex, DEFAULT_MAX_CELLS};
pub use sparse::CubeSubcomplex;
pub(crate) use sparse::filtered_barcode;
pub use stabilize::{stabilize, StabilizeOptions, Stabilized};

use crate::error::Result;
use crate::quadratic::{GradingContext, TParam};
use crate::rational::Rational;

/// Sublevel persistence of the `w_t` filtration.
pub fn persistence(w: &WeightedComplex<'_>) -> Barcode {
    w.barcode()
}

/// `Υ(t) = −(birth of the infinite bar) + c(k, t)`.
pub fn upsilon_from_barcode(b: &Barcode, ctx: &GradingContext<'_>, t: &TParam) -> Result<Rational> {
    Ok(-b.free_birth()? + ctx.grading_constant(t))
}

/// `A(□) = w_{k+2u}(□) − w_k(□) + (k·F − F²)/2`.
pub fn alexander(w: &WeightedComplex<'_>, cell: usize) -> Rational {
    crate::rational::int(w.weight_k2(cell) - w.weight_k(cell)) + w.context().c1()
}

/// Drops the infinite bars.
pub fn reduced_barcode(b: &Barcode) -> Barcode {
    b.reduced()
}
