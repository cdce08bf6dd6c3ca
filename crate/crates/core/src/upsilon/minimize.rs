use num_traits::ToPrimitive;
use serde::Serialize;

use crate::quadratic::{GradingContext, TParam};
use crate::rational::{self, serde_str, serde_str_vec, Rational};

/// A certified global minimum of `χ_t` over `ℤ^s`.
#[derive(Clone, Debug, Serialize)]
pub struct MinCertificate {
    pub t: TParam,
    #[serde(with = "serde_str")]
    pub min_value: Rational,
    pub argmin: Vec<i64>,
    /// Real minimiser `x* = −½ Q⁻¹ (k + t u)`.
    #[serde(with = "serde_str_vec")]
    pub center: Vec<Rational>,
    /// Every lattice minimiser lies within this squared Euclidean distance of `x*`.
    #[serde(with = "serde_str")]
    pub search_radius: Rational,
    /// Lower bound for the least eigenvalue of `−Q` used in the radius.
    #[serde(with = "serde_str")]
    pub lambda: Rational,
    pub candidates_checked: u64,
}

/// Real minimiser of `χ_t`.
pub fn real_minimizer(ctx: &GradingContext<'_>, t: &Rational) -> Vec<Rational> {
    let l = ctx.lattice();
    let y: Vec<Rational> = ctx
        .k()
        .as_slice()
        .iter()
        .zip(l.u())
        .map(|(&k, &u)| rational::int(k) + t * rational::int(u))
        .collect();
    l.apply_qinv(&y).into_iter().map(|v| v * rational::ratio(-1, 2)).collect()
}

pub(crate) fn round_vec(c: &[Rational]) -> Vec<i64> {
    c.iter().map(|v| rational::round_nearest(v).to_i64().expect("coordinate fits in i64")).collect()
}

/// `χ_t(x) − χ_t(x*) = ½ (x − x*)ᵀ(−Q)(x − x*)`, so every minimiser lies in
/// the `−Q` ellipsoid around `x*` through `round(x*)`; that ellipsoid is
/// enumerated exactly.
pub fn minimize_chi(ctx: &GradingContext<'_>, t: &TParam) -> MinCertificate {
    let form = ctx.lattice().neg_form();
    let center = real_minimizer(ctx, t.value());
    let start = round_vec(&center);
    let radius = form.dist(&start, &center);
    let mut best: Option<(i64, Vec<i64>)> = None;
    let checked = form.enumerate(&center, &radius, |x| {
        let v = ctx.scaled_two_chi_t(t, x);
        let better = match &best {
            None => true,
            Some((bv, bx)) => v < *bv || (v == *bv && x < bx.as_slice()),
        };
        if better {
            best = Some((v, x.to_vec()));
        }
    });
    let (v, argmin) = best.expect("the ellipsoid contains round(x*)");
    let lambda = form.eigenvalue_lower_bound();
    MinCertificate {
        t: t.clone(),
        min_value: rational::ratio(v, 2 * t.den()),
        argmin,
        center,
        search_radius: &radius / &lambda,
        lambda,
        candidates_checked: checked,
    }
}
