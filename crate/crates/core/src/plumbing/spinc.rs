use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::IntersectionLattice;

/// An integer vector with `k_i ≡ Q_ii (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CharVector(Vec<i64>);

impl CharVector {
    pub fn new(lattice: &IntersectionLattice, k: Vec<i64>) -> Result<Self> {
        if k.len() != lattice.rank() {
            return Err(Error::InvalidParams(format!(
                "characteristic vector has length {}, expected {}",
                k.len(),
                lattice.rank()
            )));
        }
        if !lattice.is_characteristic(&k) {
            return Err(Error::InvalidParams(format!("{k:?} is not characteristic")));
        }
        Ok(CharVector(k))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    /// `k + 2 Q z`, in the same class.
    pub fn shifted(&self, lattice: &IntersectionLattice, z: &[i64]) -> CharVector {
        let qz = lattice.q().mul_vec(z);
        CharVector(self.0.iter().zip(qz).map(|(k, d)| k + 2 * d).collect())
    }
}

/// A Spin^c structure on `Y(G)`: a class of characteristic vectors modulo `2Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpincClass {
    pub index: usize,
    pub representative: CharVector,
}

impl IntersectionLattice {
    pub fn is_characteristic(&self, k: &[i64]) -> bool {
        k.len() == self.rank() && k.iter().enumerate().all(|(i, &x)| (x - self.q().get(i, i)).rem_euclid(2) == 0)
    }

    fn parity_base(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| self.q().get(i, i).rem_euclid(2)).collect()
    }

    /// Class index in `[0, |det Q|)`, read off the Smith normal form of `Q`.
    pub fn class_index(&self, k: &[i64]) -> usize {
        debug_assert!(self.is_characteristic(k));
        let base = self.parity_base();
        let half: Vec<BigInt> = k.iter().zip(&base).map(|(a, b)| BigInt::from((a - b) / 2)).collect();
        let snf = self.smith();
        let digits = snf.residue(&half);
        let mut index = BigInt::zero();
        for (d, m) in digits.iter().zip(&snf.diag).rev() {
            index = index * m + d;
        }
        index.to_usize().expect("class index fits")
    }

    pub fn same_class(&self, a: &[i64], b: &[i64]) -> bool {
        self.class_index(a) == self.class_index(b)
    }

    /// The class representative of maximal `k²`; ties go to the smallest `k·F`
    /// (the vector attaining the disk bound just above `t = 0`), then to the
    /// lexicographically smallest vector.
    pub fn canonical_representative(&self, k: &[i64]) -> CharVector {
        // (k + 2Qx)² = k² − 8 χ_k(x), so maximise k² by minimising χ_k, whose
        // real minimiser is −½ Q⁻¹ k.
        let s = self.rank();
        let kr: Vec<Rational> = k.iter().map(|&x| rational::int(x)).collect();
        let center: Vec<Rational> = self.apply_qinv(&kr).into_iter().map(|x| x * rational::ratio(-1, 2)).collect();
        let start: Vec<i64> = center.iter().map(|c| rational::round_nearest(c).to_i64().expect("fits")).collect();
        let radius = self.neg_form().dist(&start, &center);
        let q = self.q();
        let two_chi = |x: &[i64]| -> i64 { -(k.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + q.quad(x)) };
        let mut best: Option<(i64, Rational, Vec<i64>)> = None;
        self.neg_form().enumerate(&center, &radius, |x| {
            let v = two_chi(x);
            if best.as_ref().is_some_and(|b| v > b.0) {
                return;
            }
            let qx = q.mul_vec(x);
            let cand: Vec<i64> = (0..s).map(|i| k[i] + 2 * qx[i]).collect();
            let kf = self.pair_f(&cand);
            let better = match &best {
                None => true,
                Some((bv, bf, bk)) => v < *bv || (v == *bv && (kf < *bf || (kf == *bf && cand < *bk))),
            };
            if better {
                best = Some((v, kf, cand));
            }
        });
        CharVector(best.expect("ball contains its rounding point").2)
    }

    /// All `|det Q|` classes, ordered by index, each with its canonical representative.
    pub fn spinc_classes(&self) -> Vec<SpincClass> {
        let snf = self.smith();
        let s = self.rank();
        let base = self.parity_base();
        let n = self.class_count();
        (0..n)
            .map(|index| {
                let mut rest = index;
                let digits: Vec<BigInt> = snf
                    .diag
                    .iter()
                    .map(|m| {
                        let m = m.to_usize().expect("fits");
                        let (q, r) = rest.div_rem(&m);
                        rest = q;
                        BigInt::from(r)
                    })
                    .collect();
                let z: Vec<i64> = (0..s)
                    .map(|i| (0..s).map(|j| &snf.left_inv[i][j] * &digits[j]).sum::<BigInt>().to_i64().expect("fits"))
                    .collect();
                let k: Vec<i64> = (0..s).map(|i| base[i] + 2 * z[i]).collect();
                let representative = self.canonical_representative(&k);
                debug_assert_eq!(self.class_index(representative.as_slice()), index);
                SpincClass { index, representative }
            })
            .collect()
    }

    pub fn class_of(&self, k: &CharVector) -> SpincClass {
        SpincClass { index: self.class_index(k.as_slice()), representative: self.canonical_representative(k.as_slice()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plumbing::PlumbingGraph;

    fn lat(text: &str) -> IntersectionLattice {
        PlumbingGraph::parse(text).unwrap().lattice().unwrap()
    }

    #[test]
    fn rp3_classes() {
        let l = lat("v -2\nv0 *\nedges:\nv v0\n");
        let cs = l.spinc_classes();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].representative.as_slice(), &[0]);
        assert_eq!(cs[1].representative.as_slice(), &[-2]);
        assert!(l.same_class(&[4], &[0]));
        assert!(!l.same_class(&[2], &[0]));
    }

    #[test]
    fn chain_has_three_classes() {
        let l = lat("v0 *\nc -2\nv -2\nedges:\nv0 c\nc v\n");
        let cs = l.spinc_classes();
        assert_eq!(cs.len(), 3);
        for (i, a) in cs.iter().enumerate() {
            assert_eq!(a.index, i);
            for b in &cs[i + 1..] {
                assert!(!l.same_class(a.representative.as_slice(), b.representative.as_slice()));
            }
        }
    }

    #[test]
    fn trefoil_single_class() {
        let l = lat("c -1\na -3\nb -2\nv0 *\nedges:\nc a\nc b\nc v0\n");
        let cs = l.spinc_classes();
        assert_eq!(cs.len(), 1);
        let k = cs[0].representative.as_slice();
        assert_eq!(l.dual_square(k), rational::int(-3));
        assert_eq!(k, &[-1, 1, 0]);
        assert!(CharVector::new(&l, vec![0, 1, 0]).is_err());
    }
}
