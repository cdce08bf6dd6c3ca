use crate::error::{Error, Result};
use crate::quadratic::TParam;

use super::form::{KeForm, KeGenerator, Term, VertexSet};

/// Largest `M ≥ 0` with `M(M − 1) ≤ qmax`. Terms of `B_t` with `|m| > M`
/// carry exponent above `qmax`.
pub fn m_bound(qmax: i64) -> i64 {
    let mut m = 0;
    while (m + 1) * m <= qmax {
        m += 1;
    }
    m
}

/// Reinserts bit `v` (cleared) into a subset of `G − v`.
pub(crate) fn lift_set(e: VertexSet, v: usize) -> VertexSet {
    let low = e & ((1 << v) - 1);
    let high = (e >> v) << (v + 1);
    low | high
}

pub(crate) fn insert_coord(k: &[i64], v: usize, p: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity(k.len() + 1);
    out.extend_from_slice(&k[..v]);
    out.push(p);
    out.extend_from_slice(&k[v..]);
    out
}

/// The forms `G − v`, `G`, `G₊₁(v)` and `G'` (an extra `−1` vertex on `v`)
/// around a vertex `v` away from v0.
#[derive(Clone, Debug)]
pub struct Surgery {
    pub v: usize,
    pub minus: KeForm,
    pub base: KeForm,
    pub plus: KeForm,
    pub prime: KeForm,
}

impl Surgery {
    pub fn new(base: &KeForm, v: usize) -> Result<Self> {
        if v >= base.rank() {
            return Err(Error::InvalidParams(format!("vertex index {v} out of range")));
        }
        if base.u()[v] != 0 {
            return Err(Error::Hypothesis(format!("vertex {} is adjacent to v0", base.ids()[v])));
        }
        Ok(Surgery {
            v,
            minus: base.delete_vertex(v),
            base: base.clone(),
            plus: base.bump_weight(v, 1),
            prime: base.attach_exceptional(v),
        })
    }

    /// `ψ_v[K, E] = Σ_p [K, p, E]` over `p ≡ v² (mod 2)` in `[p_lo, p_hi]`.
    pub fn psi(&self, gen: &KeGenerator, p_lo: i64, p_hi: i64) -> Vec<KeGenerator> {
        let par = self.base.q().get(self.v, self.v);
        let e = lift_set(gen.e, self.v);
        (p_lo..=p_hi)
            .filter(|p| (p - par).rem_euclid(2) == 0)
            .map(|p| KeGenerator::new(insert_coord(&gen.k, self.v, p), e))
            .collect()
    }

    /// `b · s_m(t)` for the generator `[K, p, E]` of `G`.
    pub fn s_scaled(&self, gen: &KeGenerator, m: i64, t: &TParam) -> i64 {
        let v = self.v;
        let mut kp = gen.k.clone();
        kp.push(2 * m - 1);
        let mut k1 = gen.k.clone();
        k1[v] += 2 * m - 1;
        self.plus.tg_scaled(&k1, gen.e, t) - self.prime.tg_scaled(&kp, gen.e, t) + t.den() * m * (m - 1)
    }

    /// `B_t[K, E] = Σ_m q^{s_m(t)} [K + (2m − 1) e_v, E]` for `|m| ≤ m_max`.
    pub fn b(&self, gen: &KeGenerator, t: &TParam, m_max: i64) -> Vec<Term> {
        (-m_max..=m_max)
            .map(|m| {
                let mut k = gen.k.clone();
                k[self.v] += 2 * m - 1;
                Term { target: KeGenerator::new(k, gen.e), exponent: self.s_scaled(gen, m, t) }
            })
            .collect()
    }
}

/// `ψ_v` on a generator of `G − v`; see [`Surgery::psi`].
pub fn psi_v(base: &KeForm, v: usize, gen: &KeGenerator, p_lo: i64, p_hi: i64) -> Result<Vec<KeGenerator>> {
    Ok(Surgery::new(base, v)?.psi(gen, p_lo, p_hi))
}

/// `B_t` on a generator of `G`; see [`Surgery::b`].
pub fn b_map(base: &KeForm, v: usize, gen: &KeGenerator, t: &TParam, m_max: i64) -> Result<Vec<Term>> {
    Ok(Surgery::new(base, v)?.b(gen, t, m_max))
}
