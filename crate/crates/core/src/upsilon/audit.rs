use serde::Serialize;

use crate::error::{Error, Result};
use crate::plumbing::{IntersectionLattice, SpincClass};
use crate::quadratic::zemke_bound;
use crate::rational::{self, serde_str, Rational};

use super::PiecewiseLinearFn;

#[derive(Clone, Debug, Serialize)]
pub struct AuditPoint {
    #[serde(with = "serde_str")]
    pub t: Rational,
    #[serde(with = "serde_str")]
    pub upsilon: Rational,
    #[serde(with = "serde_str")]
    pub max_bound: Rational,
    /// A characteristic vector attaining `max_bound` (lexicographically first).
    pub maximizer: Vec<i64>,
    pub equality: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZemkeReport {
    pub class_index: usize,
    pub window_radius: i64,
    pub vectors_checked: usize,
    pub points: Vec<AuditPoint>,
    pub equality_everywhere: bool,
}

/// Checks `f(t) >= (k'² + s)/4 − t(k'·F − F²)/2` for every `k' = rep + 2Qz`
/// with `‖z‖_∞ <= window_radius`, at each breakpoint of `f`.
pub fn zemke_audit(
    lattice: &IntersectionLattice,
    class: &SpincClass,
    f: &PiecewiseLinearFn,
    window_radius: i64,
) -> Result<ZemkeReport> {
    if window_radius < 0 {
        return Err(Error::InvalidParams("window radius must be nonnegative".into()));
    }
    let s = lattice.rank();
    let side = 2 * window_radius + 1;
    let total = (side as usize).checked_pow(s as u32).ok_or_else(|| Error::InvalidParams("audit window too large".into()))?;
    let ts: Vec<Rational> = f.breakpoints().iter().map(|(t, _)| t.clone()).collect();
    let mut best: Vec<Option<(Rational, Vec<i64>)>> = vec![None; ts.len()];
    let mut z = vec![-window_radius; s];
    for _ in 0..total {
        let k = class.representative.shifted(lattice, &z).into_vec();
        for (i, t) in ts.iter().enumerate() {
            let b = zemke_bound(lattice, &k, t);
            let v = f.eval(t);
            if v < b {
                return Err(Error::AuditFailure {
                    k,
                    t: rational::format_rational(t),
                    value: rational::format_rational(&v),
                    bound: rational::format_rational(&b),
                });
            }
            let better = match &best[i] {
                None => true,
                Some((bb, bk)) => b > *bb || (b == *bb && k < *bk),
            };
            if better {
                best[i] = Some((b, k.clone()));
            }
        }
        // odometer over the box
        for c in z.iter_mut() {
            if *c < window_radius {
                *c += 1;
                break;
            }
            *c = -window_radius;
        }
    }
    let points: Vec<AuditPoint> = ts
        .into_iter()
        .zip(best)
        .map(|(t, b)| {
            let (max_bound, maximizer) = b.expect("window is nonempty");
            let upsilon = f.eval(&t);
            AuditPoint { equality: upsilon == max_bound, t, upsilon, max_bound, maximizer }
        })
        .collect();
    Ok(ZemkeReport {
        class_index: class.index,
        window_radius,
        vectors_checked: total,
        equality_everywhere: points.iter().all(|p| p.equality),
        points,
    })
}
