use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plumbing::{IntersectionLattice, SpincClass};
use crate::quadratic::TParam;
use crate::rational;

use super::form::{KeForm, KeGenerator, Term};
use super::window::KeWindow;

#[derive(Clone, Debug, Serialize)]
pub struct VertexRelations {
    pub vertex: String,
    pub adjacent_to_v0: bool,
    pub checked: usize,
    /// Vectors with `n ≥ 0`, where `2n = k(v) + v·v`.
    pub nonnegative_n: usize,
    pub negative_n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub t: TParam,
    pub seed: u64,
    pub samples: usize,
    pub vertices: Vec<VertexRelations>,
}

/// Exponents `(x, y)`, scaled by the denominator of `t`, of the relation
/// `q^x (k + 2v*) ∼ q^y k` with the smaller side at exponent zero.
pub fn relation_exponents(n: i64, u_v: i64, t: &TParam) -> (i64, i64) {
    let (a, b) = (t.num(), t.den());
    if u_v == 0 {
        if n >= 0 { (2 * n * b, 0) } else { (0, -2 * n * b) }
    } else if n >= 0 {
        (2 * n * b + a * u_v, 0)
    } else {
        (0, -2 * n * b - a * u_v)
    }
}

/// Checks the elementary relations on random window vectors: each side has
/// the same `gr_t`, and the exponents are the ones of `∂[k, {v}]`.
pub fn relations_audit(
    lattice: &IntersectionLattice,
    class: Option<&SpincClass>,
    t: &TParam,
    window: &KeWindow,
    samples: usize,
    seed: u64,
) -> Result<RelationsReport> {
    let form = KeForm::from_lattice(lattice);
    if window.rank() != form.rank() {
        return Err(Error::InvalidParams("window has the wrong length".into()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut ks = Vec::with_capacity(samples);
    let mut tries = 0usize;
    while ks.len() < samples && tries < samples.max(1) * 10_000 {
        tries += 1;
        let k: Vec<i64> = (0..form.rank()).map(|i| window.lo[i] + 2 * rng.gen_range(0..=(window.hi[i] - window.lo[i]) / 2)).collect();
        if class.map_or(true, |c| lattice.same_class(&k, c.representative.as_slice())) {
            ks.push(k);
        }
    }
    if ks.len() < samples {
        return Err(Error::InvalidParams(format!("window holds too few vectors of the class ({} of {samples})", ks.len())));
    }
    let b = t.den();
    let mut vertices = Vec::new();
    for v in 0..form.rank() {
        let q_vv = form.q().get(v, v);
        let u_v = form.u()[v];
        let mut rec = VertexRelations { vertex: form.ids()[v].clone(), adjacent_to_v0: u_v != 0, checked: 0, nonnegative_n: 0, negative_n: 0 };
        for k in &ks {
            let n = (k[v] + q_vv) / 2;
            let (x, y) = relation_exponents(n, u_v, t);
            let moved = form.dual_shift(k, v);
            let left = form.gr_t(&KeGenerator::new(moved.clone(), 0), t).expect("definite") - rational::ratio(x, b);
            let right = form.gr_t(&KeGenerator::new(k.clone(), 0), t).expect("definite") - rational::ratio(y, b);
            let mismatch = |detail: String| Error::GradingMismatch { vertex: form.ids()[v].clone(), k: k.clone(), detail };
            if left != right {
                return Err(mismatch(format!(
                    "n = {n}, t = {t}: gradings {} and {}",
                    rational::format_rational(&left),
                    rational::format_rational(&right)
                )));
            }
            let mut want = vec![
                Term { target: KeGenerator::new(k.clone(), 0), exponent: y },
                Term { target: KeGenerator::new(moved, 0), exponent: x },
            ];
            want.sort();
            let got = form.differential(&KeGenerator::new(k.clone(), 1 << v), t);
            if got != want {
                return Err(mismatch(format!("n = {n}, t = {t}: boundary exponents {:?}", got.iter().map(|x| x.exponent).collect::<Vec<_>>())));
            }
            rec.checked += 1;
            if n >= 0 {
                rec.nonnegative_n += 1;
            } else {
                rec.negative_n += 1;
            }
        }
        vertices.push(rec);
    }
    Ok(RelationsReport { t: t.clone(), seed, samples, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lone_vertex_relation() {
        let t = TParam::from_ratio(1, 2).unwrap();
        // n = −1 next to v0: q^m (k + 2v*) ∼ q^{m + 2 − t} k
        assert_eq!(relation_exponents(-1, 1, &t), (0, 3));
        assert_eq!(relation_exponents(0, 0, &t), (0, 0));
        let l = fixtures::load("rp3").unwrap().lattice().unwrap();
        let form = KeForm::from_lattice(&l);
        let w = KeWindow::scaled(&form, 3).unwrap();
        relations_audit(&l, None, &t, &w, 20, 1).unwrap();
    }

    #[test]
    fn trefoil_relations() {
        let l = fixtures::load("trefoil").unwrap().lattice().unwrap();
        let w = KeWindow::scaled(&KeForm::from_lattice(&l), 3).unwrap();
        let r = relations_audit(&l, None, &TParam::from_ratio(1, 3).unwrap(), &w, 50, 0).unwrap();
        assert_eq!(r.vertices.len(), 3);
        assert!(r.vertices.iter().all(|v| v.checked == 50));
    }
}
