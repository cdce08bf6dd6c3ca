//! Riemann–Roch functions, grading constants and the disk bound.

use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::plumbing::{CharVector, IntersectionLattice};
use crate::rational::{self, Rational};

/// A rational parameter `t = a/b` in `[0, 2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TParam(Rational);

impl TParam {
    pub fn new(t: Rational) -> Result<Self> {
        if t.is_negative() || t > rational::int(2) {
            return Err(Error::InvalidParams(format!("t = {} lies outside [0, 2]", rational::format_rational(&t))));
        }
        if t.numer().to_i64().is_none() || t.denom().to_i64().is_none() {
            return Err(Error::InvalidParams("t has an oversized numerator or denominator".into()));
        }
        Ok(TParam(t))
    }

    pub fn from_ratio(a: i64, b: i64) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        Self::new(rational::ratio(a, b))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(rational::parse_rational(s).map_err(Error::InvalidParams)?)
    }

    pub fn zero() -> Self {
        TParam(rational::int(0))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// Reduced numerator `a`.
    pub fn num(&self) -> i64 {
        self.0.numer().to_i64().expect("checked in constructor")
    }

    /// Reduced denominator `b`.
    pub fn den(&self) -> i64 {
        self.0.denom().to_i64().expect("checked in constructor")
    }

    /// `m/d` for `m = 0..=d`, a uniform grid on `[0, 2]` of step `2/d`.
    pub fn grid(d: i64) -> Vec<TParam> {
        (0..=d).map(|m| TParam::from_ratio(2 * m, d).expect("grid in range")).collect()
    }
}

impl fmt::Display for TParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format_rational(&self.0))
    }
}

impl Serialize for TParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A characteristic vector together with its grading constants.
#[derive(Clone, Debug)]
pub struct GradingContext<'a> {
    lattice: &'a IntersectionLattice,
    k: CharVector,
    ksq: Rational,
    c0: Rational,
    c1: Rational,
}

impl<'a> GradingContext<'a> {
    pub fn new(lattice: &'a IntersectionLattice, k: CharVector) -> Self {
        let ksq = lattice.dual_square(k.as_slice());
        let c0 = (&ksq + rational::int(lattice.rank() as i64)) / rational::int(4);
        let c1 = (lattice.pair_f(k.as_slice()) - lattice.f_sq()) / rational::int(2);
        GradingContext { lattice, k, ksq, c0, c1 }
    }

    pub fn lattice(&self) -> &'a IntersectionLattice {
        self.lattice
    }

    pub fn k(&self) -> &CharVector {
        &self.k
    }

    /// `kᵀ Q⁻¹ k`.
    pub fn ksq(&self) -> &Rational {
        &self.ksq
    }

    /// `(k² + s)/4`.
    pub fn c0(&self) -> &Rational {
        &self.c0
    }

    /// `(k·F − F²)/2`.
    pub fn c1(&self) -> &Rational {
        &self.c1
    }

    /// `2 χ_k(x) = −(k·x + xᵀQx)`, always an integer.
    pub fn two_chi_k(&self, x: &[i64]) -> i64 {
        let kx: i64 = self.k.as_slice().iter().zip(x).map(|(a, b)| a * b).sum();
        -(kx + self.lattice.q().quad(x))
    }

    /// `b · 2 χ_t(x)` for `t = a/b`, an integer.
    pub fn scaled_two_chi_t(&self, t: &TParam, x: &[i64]) -> i64 {
        let ux: i64 = self.lattice.u().iter().zip(x).map(|(a, b)| a * b).sum();
        t.den() * self.two_chi_k(x) - t.num() * ux
    }

    pub fn chi_k(&self, x: &[i64]) -> Rational {
        rational::ratio(self.two_chi_k(x), 2)
    }

    /// `χ_t(x) = χ_k(x) − (t/2) u·x`.
    pub fn chi_t(&self, t: &TParam, x: &[i64]) -> Rational {
        rational::ratio(self.scaled_two_chi_t(t, x), 2 * t.den())
    }

    /// `c(k, t) = (k² + s)/4 − t (k·F − F²)/2`.
    pub fn grading_constant(&self, t: &TParam) -> Rational {
        &self.c0 - t.value() * &self.c1
    }

    /// Context for `k + 2Qz`.
    pub fn shifted(&self, z: &[i64]) -> GradingContext<'a> {
        GradingContext::new(self.lattice, self.k.shifted(self.lattice, z))
    }
}

/// The disk bound `(k² + s)/4 − t(k·F − F²)/2`, recomputed from scratch
/// by solving `Q y = k` and `Q F = −u` rather than from cached data.
pub fn zemke_bound(lattice: &IntersectionLattice, k: &[i64], t: &Rational) -> Rational {
    let q = lattice.q();
    let s = q.size();
    let kr: Vec<Rational> = k.iter().map(|&x| rational::int(x)).collect();
    let y = linalg::solve(q, &kr).expect("definite");
    let ksq: Rational = kr.iter().zip(&y).map(|(a, b)| a * b).sum();
    let mu: Vec<Rational> = lattice.u().iter().map(|&x| rational::int(-x)).collect();
    let f = linalg::solve(q, &mu).expect("definite");
    // F² = Fᵀ Q F = F·(−u)
    let fsq: Rational = f.iter().zip(&mu).map(|(a, b)| a * b).sum();
    let kf: Rational = kr.iter().zip(&f).map(|(a, b)| a * b).sum();
    (ksq + rational::int(s as i64)) / rational::int(4) - t * (kf - fsq) / rational::int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn ctx_of(l: &IntersectionLattice, k: Vec<i64>) -> GradingContext<'_> {
        GradingContext::new(l, CharVector::new(l, k).unwrap())
    }

    #[test]
    fn tparam_range() {
        assert!(TParam::parse("2/3").is_ok());
        assert!(TParam::parse("2").is_ok());
        assert!(TParam::parse("-1/3").is_err());
        assert!(TParam::parse("5/2").is_err());
        let t = TParam::parse("4/6").unwrap();
        assert_eq!((t.num(), t.den()), (2, 3));
        assert_eq!(TParam::grid(4).len(), 5);
    }

    #[test]
    fn chi_examples() {
        let l = fixtures::load("rp3").unwrap().lattice().unwrap();
        let c = ctx_of(&l, vec![0]);
        assert_eq!(c.chi_k(&[0]), int(0));
        assert_eq!(c.chi_k(&[1]), int(1));
        assert_eq!(c.grading_constant(&TParam::zero()), ratio(1, 4));
        assert_eq!(c.grading_constant(&TParam::from_ratio(2, 1).unwrap()), ratio(-1, 4));
        let c2 = ctx_of(&l, vec![-2]);
        for t in TParam::grid(6) {
            assert_eq!(c2.chi_t(&t, &[-1]), t.value() / int(2));
        }
        assert_eq!(c2.grading_constant(&TParam::zero()), ratio(-1, 4));
        assert_eq!(c2.grading_constant(&TParam::from_ratio(1, 1).unwrap()), int(0));

        let l = fixtures::load("trefoil").unwrap().lattice().unwrap();
        let c = ctx_of(&l, vec![-1, 1, 0]);
        assert_eq!(c.chi_k(&[1, 1, 1]), int(1));
        assert_eq!(c.chi_t(&TParam::from_ratio(1, 1).unwrap(), &[2, 1, 1]), int(0));
        assert_eq!(c.chi_t(&TParam::from_ratio(1, 3).unwrap(), &[0, 0, 0]), int(0));
        for t in TParam::grid(8) {
            assert_eq!(c.grading_constant(&t), -t.value());
        }
    }

    #[test]
    fn zemke_bound_examples() {
        let l = fixtures::load("trefoil").unwrap().lattice().unwrap();
        assert_eq!(zemke_bound(&l, &[-1, 1, 0], &int(1)), int(-1));
        let b = zemke_bound(&l, &[-3, 3, 2], &int(0));
        assert!(b <= int(0));
        let l = fixtures::load("rp3").unwrap().lattice().unwrap();
        assert_eq!(zemke_bound(&l, &[0], &int(0)), ratio(1, 4));
    }
}
