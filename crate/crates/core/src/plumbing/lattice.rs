use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::enumerate::PositiveForm;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, SmithForm};
use crate::rational::{self, Rational};

/// The negative definite intersection form of `G = Γ − v0` with the data
/// derived from it.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    ids: Vec<String>,
    q: IntMatrix,
    qinv: Vec<Vec<Rational>>,
    u: Vec<i64>,
    f: Vec<Rational>,
    f_sq: Rational,
    det: BigInt,
    neg: PositiveForm,
    snf: SmithForm,
}

impl IntersectionLattice {
    /// Builds the lattice from a symmetric form and the v0 adjacency vector.
    pub fn from_form(ids: Vec<String>, q: IntMatrix, u: Vec<i64>) -> Result<Self> {
        let s = q.size();
        if s == 0 {
            return Err(Error::Validation("empty lattice".into()));
        }
        if ids.len() != s || u.len() != s {
            return Err(Error::Validation("dimension mismatch".into()));
        }
        if !q.is_symmetric() {
            return Err(Error::Validation("intersection form is not symmetric".into()));
        }
        let minors = linalg::leading_minors(&q);
        for (k, m) in minors.iter().enumerate() {
            // order k+1 minor must have sign (−1)^{k+1}
            let ok = if k % 2 == 0 { m.is_negative() } else { m.is_positive() };
            if !ok {
                return Err(Error::NotNegativeDefinite { order: k + 1, value: m.to_string() });
            }
        }
        let det = minors.last().cloned().expect("s >= 1");
        let qinv = linalg::inverse(&q).expect("definite forms are invertible");
        let minus_u: Vec<Rational> = u.iter().map(|&x| rational::int(-x)).collect();
        let f = linalg::solve(&q, &minus_u).expect("definite forms are invertible");
        let qr = q.to_rational();
        let f_sq: Rational = (0..s)
            .map(|i| (0..s).map(|j| &f[i] * &qr[i][j] * &f[j]).sum::<Rational>())
            .sum();
        let neg = PositiveForm::new(&q.negated()).expect("negated definite form is positive");
        let snf = linalg::smith_normal_form(&q);
        Ok(IntersectionLattice { ids, q, qinv, u, f, f_sq, det, neg, snf })
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

    pub fn qinv(&self) -> &[Vec<Rational>] {
        &self.qinv
    }

    pub fn u(&self) -> &[i64] {
        &self.u
    }

    /// The dual class with `Q·F = −u`.
    pub fn f(&self) -> &[Rational] {
        &self.f
    }

    /// `Fᵀ Q F`.
    pub fn f_sq(&self) -> &Rational {
        &self.f_sq
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Number of Spin^c structures, `|det Q|`.
    pub fn class_count(&self) -> usize {
        self.det.abs().to_usize().expect("class count fits in usize")
    }

    /// `−Q` with its exact `LDLᵀ` factorization.
    pub fn neg_form(&self) -> &PositiveForm {
        &self.neg
    }

    pub(crate) fn smith(&self) -> &SmithForm {
        &self.snf
    }

    /// `kᵀ Q⁻¹ k`.
    pub fn dual_square(&self, k: &[i64]) -> Rational {
        let s = self.rank();
        let mut acc = Rational::zero();
        for i in 0..s {
            if k[i] == 0 {
                continue;
            }
            let row: Rational = (0..s).filter(|&j| k[j] != 0).map(|j| &self.qinv[i][j] * rational::int(k[j])).sum();
            acc += row * rational::int(k[i]);
        }
        acc
    }

    /// `k·F`.
    pub fn pair_f(&self, k: &[i64]) -> Rational {
        k.iter().zip(&self.f).filter(|(&a, _)| a != 0).map(|(&a, b)| b * rational::int(a)).sum()
    }

    /// `Q⁻¹ y` for a rational vector.
    pub fn apply_qinv(&self, y: &[Rational]) -> Vec<Rational> {
        let s = self.rank();
        (0..s)
            .map(|i| (0..s).filter(|&j| !y[j].is_zero()).map(|j| &self.qinv[i][j] * &y[j]).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plumbing::PlumbingGraph;
    use crate::rational::{int, ratio};

    #[test]
    fn trefoil_lattice() {
        let g = PlumbingGraph::parse("c -1\na -3\nb -2\nv0 *\nedges:\nc a\nc b\nc v0\n").unwrap();
        let l = g.lattice().unwrap();
        assert_eq!(l.q().rows(), vec![vec![-1, 1, 1], vec![1, -3, 0], vec![1, 0, -2]]);
        assert_eq!(l.u(), &[1, 0, 0]);
        assert_eq!(*l.det(), BigInt::from(-1));
        assert_eq!(l.f(), &[int(6), int(2), int(3)]);
        assert_eq!(*l.f_sq(), int(-6));
        assert_eq!(l.dual_square(&[-1, 1, 0]), int(-3));
        assert_eq!(l.pair_f(&[-1, 1, 0]), int(-4));
    }

    #[test]
    fn single_minus_two() {
        let g = PlumbingGraph::parse("v -2\nv0 *\nedges:\nv v0\n").unwrap();
        let l = g.lattice().unwrap();
        assert_eq!(l.f(), &[ratio(1, 2)]);
        assert_eq!(*l.f_sq(), ratio(-1, 2));
    }

    #[test]
    fn indefinite_reports_minor() {
        let g = PlumbingGraph::parse("a -1\nb -1\nv *\nedges:\na b\nb v\n").unwrap();
        match g.lattice() {
            Err(Error::NotNegativeDefinite { order, value }) => {
                assert_eq!(order, 2);
                assert_eq!(value, "0");
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = PlumbingGraph::parse("a 1\nv *\nedges:\na v\n").unwrap();
        assert!(matches!(g.lattice(), Err(Error::NotNegativeDefinite { order: 1, .. })));
    }
}
