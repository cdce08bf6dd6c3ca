//! Exact enumeration of lattice points in an ellipsoid (Fincke–Pohst).

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{self, IntMatrix};
use crate::rational::{self, Rational};

/// A positive definite integer form `A` with its exact `L D Lᵀ` factorization.
#[derive(Clone, Debug)]
pub struct PositiveForm {
    a: IntMatrix,
    l: Vec<Vec<Rational>>,
    d: Vec<Rational>,
}

impl PositiveForm {
    /// `None` if `a` is not positive definite.
    pub fn new(a: &IntMatrix) -> Option<Self> {
        let (l, d) = linalg::ldl(&a.to_rational())?;
        Some(PositiveForm { a: a.clone(), l, d })
    }

    pub fn dim(&self) -> usize {
        self.a.size()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn pivots(&self) -> &[Rational] {
        &self.d
    }

    /// `yᵀ A y`.
    pub fn norm(&self, y: &[Rational]) -> Rational {
        let n = self.dim();
        let mut acc = Rational::zero();
        for i in 0..n {
            if y[i].is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for j in 0..n {
                let aij = self.a.get(i, j);
                if aij != 0 {
                    row += &y[j] * Rational::from_integer(BigInt::from(aij));
                }
            }
            acc += &y[i] * row;
        }
        acc
    }

    /// Distance `(x − c)ᵀ A (x − c)` from an integer point to a rational center.
    pub fn dist(&self, x: &[i64], c: &[Rational]) -> Rational {
        let y: Vec<Rational> = x.iter().zip(c).map(|(&xi, ci)| rational::int(xi) - ci).collect();
        self.norm(&y)
    }

    /// A positive rational lower bound for the least eigenvalue: the better of
    /// the Gershgorin bound and `min D_i / ‖L⁻¹‖_F²`.
    pub fn eigenvalue_lower_bound(&self) -> Rational {
        let n = self.dim();
        let linv = linalg::unit_lower_inverse(&self.l);
        let frob: Rational = linv.iter().flatten().map(|x| x * x).sum();
        let dmin = self.d.iter().min().cloned().unwrap_or_else(|| rational::int(1));
        let pivot_bound = dmin / frob;
        let gersh = (0..n)
            .map(|i| {
                let off: i64 = (0..n).filter(|&j| j != i).map(|j| self.a.get(i, j).abs()).sum();
                self.a.get(i, i) - off
            })
            .min()
            .unwrap_or(1);
        let gersh = rational::int(gersh);
        if gersh > pivot_bound { gersh } else { pivot_bound }
    }

    /// Calls `visit` on every integer `x` with `(x − c)ᵀ A (x − c) <= r`, in
    /// lexicographic order of `(x_{n−1}, …, x_0)`. Returns the count.
    pub fn enumerate<F: FnMut(&[i64])>(&self, c: &[Rational], r: &Rational, mut visit: F) -> u64 {
        let n = self.dim();
        if r.is_negative() {
            return 0;
        }
        if n == 0 {
            visit(&[]);
            return 1;
        }
        let mut x = vec![0i64; n];
        let mut count = 0;
        self.descend(n - 1, c, r, &Rational::zero(), &mut x, &mut visit, &mut count);
        count
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F: FnMut(&[i64])>(
        &self,
        i: usize,
        c: &[Rational],
        r: &Rational,
        partial: &Rational,
        x: &mut Vec<i64>,
        visit: &mut F,
        count: &mut u64,
    ) {
        let n = self.dim();
        // center of coordinate i given x_{i+1..}
        let mut m = c[i].clone();
        for j in i + 1..n {
            if !self.l[j][i].is_zero() {
                m -= &self.l[j][i] * (rational::int(x[j]) - &c[j]);
            }
        }
        let slack = r - partial;
        let span = rational::ceil_sqrt(&(slack.clone() / &self.d[i]));
        let lo = (rational::floor(&m) - &span).to_i64().expect("coordinate overflow");
        let hi = (rational::ceil(&m) + &span).to_i64().expect("coordinate overflow");
        for xi in lo..=hi {
            let diff = rational::int(xi) - &m;
            let term = &self.d[i] * &diff * &diff;
            if term > slack {
                continue;
            }
            x[i] = xi;
            let next = partial + term;
            if i == 0 {
                *count += 1;
                visit(x);
            } else {
                self.descend(i - 1, c, r, &next, x, visit, count);
            }
        }
        x[i] = 0;
    }
}
