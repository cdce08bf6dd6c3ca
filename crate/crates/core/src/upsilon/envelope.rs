use std::collections::BTreeMap;

use serde::Serialize;

use crate::plumbing::{IntersectionLattice, SpincClass};
use crate::quadratic::GradingContext;
use crate::rational::{self, serde_str, Rational};

use super::minimize::{real_minimizer, round_vec};
use super::PiecewiseLinearFn;

/// One piece of the envelope: on `[from, to]`, `Υ(t) = −2χ_t(x) + c(k, t)`.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeLine {
    pub x: Vec<i64>,
    /// `k·x + xᵀQx`.
    pub alpha: i64,
    /// `u·x`.
    pub beta: i64,
    #[serde(with = "serde_str")]
    pub from: Rational,
    #[serde(with = "serde_str")]
    pub to: Rational,
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pub function: PiecewiseLinearFn,
    pub lines: Vec<EnvelopeLine>,
    pub candidates: u64,
}

/// Upper envelope of the lines `α + β t` over `[t0, t1]`. Returns
/// `(line index, from, to)` pieces with strictly increasing slopes.
pub(crate) fn upper_envelope(lines: &[(i64, i64)], t0: &Rational, t1: &Rational) -> Vec<(usize, Rational, Rational)> {
    let value = |i: usize, t: &Rational| rational::int(lines[i].0) + t * rational::int(lines[i].1);
    let mut cur = (0..lines.len())
        .max_by(|&a, &b| value(a, t0).cmp(&value(b, t0)).then(lines[a].1.cmp(&lines[b].1)))
        .expect("at least one line");
    let mut from = t0.clone();
    let mut pieces = Vec::new();
    loop {
        let (ac, bc) = lines[cur];
        let mut next: Option<(Rational, usize)> = None;
        for (j, &(a, b)) in lines.iter().enumerate() {
            if b <= bc {
                continue;
            }
            let t = rational::ratio(ac - a, b - bc);
            if t < from {
                continue;
            }
            let take = match &next {
                None => true,
                Some((tn, jn)) => t < *tn || (t == *tn && b > lines[*jn].1),
            };
            if take {
                next = Some((t, j));
            }
        }
        match next {
            Some((t, j)) if t < *t1 => {
                if t > from {
                    pieces.push((cur, from.clone(), t.clone()));
                }
                cur = j;
                from = t;
            }
            _ => {
                pieces.push((cur, from, t1.clone()));
                return pieces;
            }
        }
    }
}

/// The exact envelope `Υ(t) = max_x [(k + t u)·x + xᵀQx] + c(k, t)`.
///
/// The real minimisers `x*(t)` move on a segment with midpoint `m = x*(1)`
/// and `−Q`-half-length `h`, `h² = −F²/4`. With `a` the `−Q`-distance from
/// `m` to `round(m)`, every lattice minimiser for `t ∈ [0, 2]` lies within
/// `a + 2h` of `m`, so the ellipsoid `‖x − m‖² <= 2a² + 8h²` suffices.
pub fn upsilon_envelope(ctx: &GradingContext<'_>) -> Envelope {
    let l = ctx.lattice();
    let form = l.neg_form();
    let mid = real_minimizer(ctx, &rational::int(1));
    let a2 = form.dist(&round_vec(&mid), &mid);
    let h2 = -l.f_sq() / rational::int(4);
    let radius = rational::int(2) * a2 + rational::int(8) * h2;
    let k = ctx.k().as_slice();
    let q = l.q();
    // best alpha per slope, lexicographically smallest x on ties
    let mut by_beta: BTreeMap<i64, (i64, Vec<i64>)> = BTreeMap::new();
    let candidates = form.enumerate(&mid, &radius, |x| {
        let alpha = k.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + q.quad(x);
        let beta = l.u().iter().zip(x).map(|(a, b)| a * b).sum::<i64>();
        let e = by_beta.entry(beta).or_insert_with(|| (alpha, x.to_vec()));
        if alpha > e.0 || (alpha == e.0 && x < e.1.as_slice()) {
            *e = (alpha, x.to_vec());
        }
    });
    let lines: Vec<(i64, i64, Vec<i64>)> = by_beta.into_iter().map(|(b, (a, x))| (a, b, x)).collect();
    let coeffs: Vec<(i64, i64)> = lines.iter().map(|l| (l.0, l.1)).collect();
    let pieces = upper_envelope(&coeffs, &rational::int(0), &rational::int(2));
    let upsilon_at = |i: usize, t: &Rational| -> Rational {
        rational::int(coeffs[i].0) + t * rational::int(coeffs[i].1) + ctx.c0() - t * ctx.c1()
    };
    let mut breakpoints = vec![(rational::int(0), upsilon_at(pieces[0].0, &rational::int(0)))];
    for (i, _, to) in &pieces {
        breakpoints.push((to.clone(), upsilon_at(*i, to)));
    }
    let function = PiecewiseLinearFn::new(breakpoints).expect("pieces cover [0, 2]").simplified();
    let lines = pieces
        .into_iter()
        .map(|(i, from, to)| EnvelopeLine { x: lines[i].2.clone(), alpha: lines[i].0, beta: lines[i].1, from, to })
        .collect();
    Envelope { function, lines, candidates }
}

pub fn upsilon(lattice: &IntersectionLattice, class: &SpincClass) -> PiecewiseLinearFn {
    let ctx = GradingContext::new(lattice, class.representative.clone());
    upsilon_envelope(&ctx).function
}

/// `τ = −Υ'(0⁺)`.
pub fn tau(f: &PiecewiseLinearFn) -> Rational {
    -f.slopes()[0].clone()
}

/// `d = Υ(0)`.
pub fn d_invariant(f: &PiecewiseLinearFn) -> Rational {
    f.breakpoints()[0].1.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    #[test]
    fn envelope_of_lines() {
        // max(0, 1 − t, −1 + t) on [0, 2]
        let p = upper_envelope(&[(0, 0), (1, -1), (-1, 1)], &int(0), &int(2));
        assert_eq!(p, vec![(1, int(0), int(1)), (2, int(1), int(2))]);
        let p = upper_envelope(&[(0, 0), (-3, 1)], &int(0), &int(2));
        assert_eq!(p, vec![(0, int(0), int(2))]);
        // three lines through one point
        let p = upper_envelope(&[(1, -1), (0, 0), (-1, 1)], &int(0), &int(2));
        assert_eq!(p, vec![(0, int(0), int(1)), (2, int(1), int(2))]);
    }

    #[test]
    fn trefoil_upsilon() {
        let l = fixtures::load("trefoil").unwrap().lattice().unwrap();
        let c = &l.spinc_classes()[0];
        let f = upsilon(&l, c);
        assert_eq!(f.breakpoints(), &[(int(0), int(0)), (int(1), int(-1)), (int(2), int(0))]);
        assert_eq!(tau(&f), int(1));
        assert_eq!(d_invariant(&f), int(0));
    }

    #[test]
    fn rp3_upsilon() {
        let l = fixtures::load("rp3").unwrap().lattice().unwrap();
        let cs = l.spinc_classes();
        let f0 = upsilon(&l, &cs[0]);
        let f1 = upsilon(&l, &cs[1]);
        assert_eq!(f0.breakpoints(), &[(int(0), ratio(1, 4)), (int(2), ratio(-1, 4))]);
        assert_eq!(f1.breakpoints(), &[(int(0), ratio(-1, 4)), (int(2), ratio(1, 4))]);
    }
}
