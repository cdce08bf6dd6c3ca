use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::plumbing::IntersectionLattice;
use crate::quadratic::TParam;
use num_traits::ToPrimitive;

use crate::rational::Rational;

/// Subsets of the vertex set as bitmasks.
pub type VertexSet = u32;

pub const MAX_VERTICES: usize = 20;

/// A generator `[K, E]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KeGenerator {
    pub k: Vec<i64>,
    pub e: VertexSet,
}

impl KeGenerator {
    pub fn new(k: Vec<i64>, e: VertexSet) -> Self {
        KeGenerator { k, e }
    }

    pub fn dim(&self) -> usize {
        self.e.count_ones() as usize
    }
}

/// A differential term `q^{exponent/b} [K, E]`, exponent scaled by the
/// denominator `b` of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub target: KeGenerator,
    pub exponent: i64,
}

/// `adj = det · Q⁻¹` and `p = det · F = −adj·u`, kept integral.
#[derive(Clone, Debug)]
struct Grading {
    adj: Vec<Vec<i128>>,
    det: i128,
    p: Vec<i128>,
    up: i128,
}

/// A symmetric form with a v0 adjacency vector: the data behind the `[K, E]`
/// complex. Definiteness is not required; gradings are available when the
/// form is invertible.
#[derive(Clone, Debug)]
pub struct KeForm {
    ids: Vec<String>,
    q: IntMatrix,
    u: Vec<i64>,
    grading: Option<Grading>,
}

impl KeForm {
    pub fn new(ids: Vec<String>, q: IntMatrix, u: Vec<i64>) -> Result<Self> {
        let s = q.size();
        if s > MAX_VERTICES {
            return Err(Error::InvalidParams(format!("[K,E] model supports at most {MAX_VERTICES} vertices, got {s}")));
        }
        if ids.len() != s || u.len() != s || !q.is_symmetric() {
            return Err(Error::InvalidParams("malformed form".into()));
        }
        let grading = linalg::inverse(&q).map(|qinv| {
            let det = linalg::determinant(&q).to_i128().expect("determinant fits in i128");
            let adj: Vec<Vec<i128>> = qinv
                .iter()
                .map(|row| row.iter().map(|x| (x * Rational::from_integer(det.into())).to_integer().to_i128().expect("adjugate fits")).collect())
                .collect();
            let p: Vec<i128> = (0..s).map(|i| -(0..s).map(|j| adj[i][j] * u[j] as i128).sum::<i128>()).collect();
            let up = u.iter().zip(&p).map(|(&a, b)| a as i128 * b).sum();
            Grading { adj, det, p, up }
        });
        Ok(KeForm { ids, q, u, grading })
    }

    pub fn from_lattice(l: &IntersectionLattice) -> Self {
        KeForm::new(l.ids().to_vec(), l.q().clone(), l.u().to_vec()).expect("lattice forms are well formed")
    }

    pub fn rank(&self) -> usize {
        self.q.size()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn u(&self) -> &[i64] {
        &self.u
    }

    pub fn has_grading(&self) -> bool {
        self.grading.is_some()
    }

    pub fn full_set(&self) -> VertexSet {
        if self.rank() == 32 { u32::MAX } else { (1u32 << self.rank()) - 1 }
    }

    /// Form of `G − v`.
    pub fn delete_vertex(&self, v: usize) -> KeForm {
        let ids = self.ids.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, x)| x.clone()).collect();
        let u = self.u.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, &x)| x).collect();
        KeForm::new(ids, self.q.minor_matrix(v), u).expect("minor of a well formed form")
    }

    /// Form with the weight of `v` changed by `delta`.
    pub fn bump_weight(&self, v: usize, delta: i64) -> KeForm {
        let mut q = self.q.clone();
        q.set(v, v, q.get(v, v) + delta);
        KeForm::new(self.ids.clone(), q, self.u.clone()).expect("well formed")
    }

    /// Form with a new `−1` vertex `e` (last index) attached to `v`, away from v0.
    pub fn attach_exceptional(&self, v: usize) -> KeForm {
        let s = self.rank();
        let mut rows = self.q.rows();
        for (i, r) in rows.iter_mut().enumerate() {
            r.push((i == v) as i64);
        }
        let mut last = vec![0; s + 1];
        last[v] = 1;
        last[s] = -1;
        rows.push(last);
        let mut ids = self.ids.clone();
        let mut name = "e".to_string();
        while ids.contains(&name) {
            name.push('\'');
        }
        ids.push(name);
        let mut u = self.u.clone();
        u.push(0);
        KeForm::new(ids, IntMatrix::from_rows(&rows), u).expect("well formed")
    }

    pub fn is_characteristic(&self, k: &[i64]) -> bool {
        k.len() == self.rank() && (0..self.rank()).all(|i| (k[i] - self.q.get(i, i)).rem_euclid(2) == 0)
    }

    /// `f_G(K, I) = (K·I + I²)/2`, an integer for characteristic `K`.
    pub fn f(&self, k: &[i64], i: VertexSet) -> i64 {
        let mut acc = 0i64;
        let s = self.rank();
        for a in 0..s {
            if i & (1 << a) == 0 {
                continue;
            }
            acc += k[a];
            for b in 0..s {
                if i & (1 << b) != 0 {
                    acc += self.q.get(a, b);
                }
            }
        }
        debug_assert!(acc % 2 == 0, "K must be characteristic");
        acc / 2
    }

    /// `g_G[K, E] = min_{I ⊆ E} f_G(K, I)`.
    pub fn g(&self, k: &[i64], e: VertexSet) -> i64 {
        let (_, tab) = self.f_table(k, e);
        tab.into_iter().min().unwrap_or(0)
    }

    /// Members of `E` and `f(K, I)` for every `I ⊆ E`, indexed by the bits of
    /// `I` within the member list.
    fn f_table(&self, k: &[i64], e: VertexSet) -> (Vec<usize>, Vec<i64>) {
        let members: Vec<usize> = (0..self.rank()).filter(|&v| e & (1 << v) != 0).collect();
        let m = members.len();
        let mut tab = vec![0i64; 1 << m];
        for idx in 1..(1usize << m) {
            let low = idx.trailing_zeros() as usize;
            let prev = idx & (idx - 1);
            let w = members[low];
            let mut x = tab[prev] + (k[w] + self.q.get(w, w)) / 2;
            let mut rest = prev;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                x += self.q.get(w, members[j]);
                rest &= rest - 1;
            }
            tab[idx] = x;
        }
        (members, tab)
    }

    /// `K + 2v*`, that is `K + 2 Q e_v`.
    pub fn dual_shift(&self, k: &[i64], v: usize) -> Vec<i64> {
        (0..self.rank()).map(|i| k[i] + 2 * self.q.get(i, v)).collect()
    }

    /// `K + 2v0*`, that is `K + 2u`.
    pub fn shift_v0(&self, k: &[i64]) -> Vec<i64> {
        k.iter().zip(&self.u).map(|(a, b)| a + 2 * b).collect()
    }

    /// `(a_v[K, E], b_v[K, E])` for `v ∈ E`.
    pub fn exponents(&self, k: &[i64], e: VertexSet, v: usize) -> (i64, i64) {
        assert!(e & (1 << v) != 0, "v must lie in E");
        let rest = e & !(1 << v);
        let g = self.g(k, e);
        let a = self.g(k, rest) - g;
        let kv = self.dual_shift(k, v);
        let twice = k[v] + self.q.get(v, v);
        let b = self.g(&kv, rest) - g + twice / 2;
        (a, b)
    }

    /// `b · ᵗg[K, E] = (2b − a) g[K, E] + a g[K + 2u, E]`.
    pub fn tg_scaled(&self, k: &[i64], e: VertexSet, t: &TParam) -> i64 {
        let (a, b) = (t.num(), t.den());
        (2 * b - a) * self.g(k, e) + a * self.g(&self.shift_v0(k), e)
    }

    /// `(a_v, b_v)` for every `v ∈ E`, in increasing `v`, from one table of
    /// `f(K, I)` over `I ⊆ E`: `a_v` and `b_v` are the minima over subsets
    /// without and with `v`, less `g[K, E]`.
    fn all_exponents(&self, k: &[i64], e: VertexSet) -> Vec<(i64, i64)> {
        let (members, tab) = self.f_table(k, e);
        let m = members.len();
        let mut with = vec![i64::MAX; m];
        let mut without = vec![i64::MAX; m];
        for (idx, &x) in tab.iter().enumerate() {
            for j in 0..m {
                if idx & (1 << j) != 0 {
                    with[j] = with[j].min(x);
                } else {
                    without[j] = without[j].min(x);
                }
            }
        }
        let g = tab.iter().copied().min().unwrap_or(0);
        (0..m).map(|j| (without[j] - g, with[j] - g)).collect()
    }

    /// `∂_t [K, E]`, exponents scaled by `b`, equal terms cancelled in pairs.
    pub fn differential(&self, gen: &KeGenerator, t: &TParam) -> Vec<Term> {
        let (a, b) = (t.num(), t.den());
        let k2 = self.shift_v0(&gen.k);
        let ex0 = self.all_exponents(&gen.k, gen.e);
        let ex1 = self.all_exponents(&k2, gen.e);
        let mut count: BTreeMap<Term, u32> = BTreeMap::new();
        let members = (0..self.rank()).filter(|&v| gen.e & (1 << v) != 0);
        for (j, v) in members.enumerate() {
            let rest = gen.e & !(1 << v);
            let ((a0, b0), (a1, b1)) = (ex0[j], ex1[j]);
            let ea = (2 * b - a) * a0 + a * a1;
            let eb = (2 * b - a) * b0 + a * b1;
            *count.entry(Term { target: KeGenerator::new(gen.k.clone(), rest), exponent: ea }).or_default() += 1;
            *count.entry(Term { target: KeGenerator::new(self.dual_shift(&gen.k, v), rest), exponent: eb }).or_default() += 1;
        }
        count.into_iter().filter(|(_, c)| c % 2 == 1).map(|(t, _)| t).collect()
    }

    /// `4·b·det` times `(K² + s)/4 − t (K·F − F²)/2`.
    fn scaled_shift(&self, g: &Grading, k: &[i64], t: &TParam) -> i128 {
        let s = self.rank();
        let (a, b) = (t.num() as i128, t.den() as i128);
        let mut ksq = 0i128;
        for i in 0..s {
            if k[i] != 0 {
                let row: i128 = (0..s).map(|j| g.adj[i][j] * k[j] as i128).sum();
                ksq += k[i] as i128 * row;
            }
        }
        let kp: i128 = k.iter().zip(&g.p).map(|(&x, y)| x as i128 * y).sum();
        b * (ksq + s as i128 * g.det) - 2 * a * (kp + g.up)
    }

    /// `(K² + s)/4 − t (K·F − F²)/2`; `None` for singular forms.
    pub fn grading_shift(&self, k: &[i64], t: &TParam) -> Option<Rational> {
        let g = self.grading.as_ref()?;
        let den = 4 * t.den() as i128 * g.det;
        Some(Rational::new(self.scaled_shift(g, k, t).into(), den.into()))
    }

    /// `gr_t[K, E] = ᵗg[K, E] + |E| + (K² + s)/4 − t (K·F − F²)/2`.
    pub fn gr_t(&self, gen: &KeGenerator, t: &TParam) -> Option<Rational> {
        let g = self.grading.as_ref()?;
        let b = t.den() as i128;
        let num = 4 * g.det * (self.tg_scaled(&gen.k, gen.e, t) as i128 + b * gen.dim() as i128) + self.scaled_shift(g, &gen.k, t);
        Some(Rational::new(num.into(), (4 * b * g.det).into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn single(w: i64, adjacent: bool) -> KeForm {
        KeForm::new(vec!["v".into()], IntMatrix::from_rows(&[vec![w]]), vec![adjacent as i64]).unwrap()
    }

    /// `g` by listing all subsets explicitly.
    fn g_oracle(form: &KeForm, k: &[i64], e: VertexSet) -> i64 {
        let s = form.rank();
        let members: Vec<usize> = (0..s).filter(|&v| e & (1 << v) != 0).collect();
        let mut best = i64::MAX;
        for mask in 0..(1u32 << members.len()) {
            let chosen: Vec<usize> = (0..members.len()).filter(|&i| mask & (1 << i) != 0).map(|i| members[i]).collect();
            let kdot: i64 = chosen.iter().map(|&v| k[v]).sum();
            let sq: i64 = chosen.iter().flat_map(|&a| chosen.iter().map(move |&b| (a, b))).map(|(a, b)| form.q().get(a, b)).sum();
            best = best.min((kdot + sq) / 2);
        }
        best
    }

    #[test]
    fn f_and_g_examples() {
        let f = single(-2, true);
        assert_eq!(f.f(&[0], 0), 0);
        assert_eq!(f.f(&[0], 1), -1);
        assert_eq!(f.f(&[2], 1), 0);
        assert_eq!(f.g(&[5 - 1], 0), 0);
        assert_eq!(f.g(&[0], 1), -1);
        let tre = KeForm::from_lattice(&fixtures::load("trefoil").unwrap().lattice().unwrap());
        let k = [-1, 1, 0];
        assert_eq!(tre.g(&k, 0b110), g_oracle(&tre, &k, 0b110));
        assert_eq!(tre.g(&k, 0b110), -2);
        for e in 0..8 {
            for k in [[-1, 1, 0], [1, -3, 2], [-3, 3, 2], [3, 1, -4]] {
                assert_eq!(tre.g(&k, e), g_oracle(&tre, &k, e));
            }
        }
    }

    #[test]
    fn exponent_examples() {
        let f = single(-2, true);
        assert_eq!(f.exponents(&[0], 1, 0), (1, 0));
        assert_eq!(f.exponents(&[2], 1, 0), (0, 0));
        assert_eq!(f.exponents(&[-2], 1, 0), (2, 0));
    }

    #[test]
    fn differential_examples() {
        let f = single(-2, true);
        for t in TParam::grid(6) {
            let d = f.differential(&KeGenerator::new(vec![0], 1), &t);
            let b = t.den();
            let mut want = vec![
                Term { target: KeGenerator::new(vec![0], 0), exponent: 2 * b - t.num() },
                Term { target: KeGenerator::new(vec![-4], 0), exponent: 0 },
            ];
            want.sort();
            assert_eq!(d, want, "t = {t}");
        }
        assert!(f.differential(&KeGenerator::new(vec![0], 0), &TParam::zero()).is_empty());
        let tre = KeForm::from_lattice(&fixtures::load("trefoil").unwrap().lattice().unwrap());
        let d = tre.differential(&KeGenerator::new(vec![-1, 1, 0], 0b110), &TParam::from_ratio(1, 3).unwrap());
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn table_exponents_match_the_definition() {
        for name in ["trefoil", "double_cover"] {
            let form = KeForm::from_lattice(&fixtures::load(name).unwrap().lattice().unwrap());
            let w = crate::kecx::KeWindow::scaled(&form, 1).unwrap();
            for k in w.vectors() {
                for e in 0..=form.full_set() {
                    let fast = form.all_exponents(&k, e);
                    let slow: Vec<(i64, i64)> = (0..form.rank()).filter(|&v| e & (1 << v) != 0).map(|v| form.exponents(&k, e, v)).collect();
                    assert_eq!(fast, slow, "K = {k:?}, E = {e:b}");
                }
            }
        }
    }

    #[test]
    fn shift_matches_the_lattice_constant() {
        let l = fixtures::load("double_cover").unwrap().lattice().unwrap();
        let form = KeForm::from_lattice(&l);
        for k in crate::kecx::KeWindow::scaled(&form, 1).unwrap().vectors().into_iter().step_by(7) {
            let ctx = crate::quadratic::GradingContext::new(&l, crate::plumbing::CharVector::new(&l, k.clone()).unwrap());
            for t in TParam::grid(5) {
                assert_eq!(form.grading_shift(&k, &t), Some(ctx.grading_constant(&t)));
            }
        }
    }

    #[test]
    fn gradings() {
        let f = single(-2, true);
        assert_eq!(f.gr_t(&KeGenerator::new(vec![0], 0), &TParam::zero()), Some(ratio(1, 4)));
        let tre = KeForm::from_lattice(&fixtures::load("trefoil").unwrap().lattice().unwrap());
        for t in TParam::grid(6) {
            assert_eq!(tre.gr_t(&KeGenerator::new(vec![-1, 1, 0], 0), &t), Some(-t.value().clone()));
        }
        let singular = KeForm::new(vec!["a".into()], IntMatrix::from_rows(&[vec![0]]), vec![0]).unwrap();
        assert_eq!(singular.gr_t(&KeGenerator::new(vec![0], 0), &TParam::zero()), None);
        let _ = int(0);
    }
}
