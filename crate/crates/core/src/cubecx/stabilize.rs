use serde::Serialize;

use crate::error::{Error, Result};
use crate::plumbing::{IntersectionLattice, SpincClass};
use crate::quadratic::{GradingContext, TParam};
use crate::rational::{self, serde_str, Rational};
use crate::upsilon::minimize_chi;

use super::{max_cells_from_env, Barcode, WeightedComplex};

#[derive(Clone, Debug)]
pub struct StabilizeOptions {
    /// Initial box radius around the certified minimiser.
    pub n0: i64,
    /// Bars are compared up to `free birth + cutoff_offset` …
    pub cutoff_offset: Rational,
    /// … unless an absolute cutoff is given.
    pub cutoff: Option<Rational>,
    pub max_cells: u64,
}

impl Default for StabilizeOptions {
    fn default() -> Self {
        StabilizeOptions { n0: 2, cutoff_offset: rational::int(8), cutoff: None, max_cells: max_cells_from_env() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stabilized {
    /// Stable box radius.
    pub n: i64,
    /// Box center: the certified minimiser of `χ_t`.
    pub center: Vec<i64>,
    #[serde(with = "serde_str")]
    pub cutoff: Rational,
    /// Barcode of the box, truncated at the cutoff.
    pub barcode: Barcode,
    pub cells: usize,
}

/// Grows the box `argmin + [−N, N]^s` until the truncated barcode is the same
/// for `N` and `N + 1`.
pub fn stabilize(lattice: &IntersectionLattice, class: &SpincClass, t: &TParam, opts: &StabilizeOptions) -> Result<Stabilized> {
    if opts.n0 < 0 {
        return Err(Error::InvalidParams("initial box radius must be nonnegative".into()));
    }
    let ctx = GradingContext::new(lattice, class.representative.clone());
    let cert = minimize_chi(&ctx, t);
    let free = rational::int(2) * &cert.min_value;
    let cutoff = opts.cutoff.clone().unwrap_or_else(|| &free + &opts.cutoff_offset);
    let compute = |n: i64| -> Result<(Barcode, usize)> {
        let w = WeightedComplex::new_box(ctx.clone(), t.clone(), &cert.argmin, n, opts.max_cells)?;
        let b = w.barcode();
        debug_assert_eq!(b.free_birth().ok(), Some(free.clone()));
        Ok((b.truncated(&cutoff), w.cell_count()))
    };
    let mut n = opts.n0;
    let (mut cur, mut cells) = compute(n)?;
    loop {
        let (next, next_cells) = compute(n + 1)?;
        if next == cur {
            return Ok(Stabilized { n, center: cert.argmin, cutoff, barcode: cur, cells });
        }
        n += 1;
        cur = next;
        cells = next_cells;
    }
}
