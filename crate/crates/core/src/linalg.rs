//! Exact linear algebra over the integers and the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Dense square integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = IntMatrix::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `xᵀ M x`.
    pub fn quad(&self, x: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0i64;
            for j in 0..self.n {
                row += self.get(i, j) * x[j];
            }
            acc += x[i] * row;
        }
        acc
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn negated(&self) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Deletes row and column `k`.
    pub fn minor_matrix(&self, k: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != k).collect();
        let mut m = IntMatrix::zeros(self.n - 1);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| Rational::from_integer(BigInt::from(self.get(i, j)))).collect())
            .collect()
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| (0..self.n).map(|j| BigInt::from(self.get(i, j))).collect()).collect()
    }
}

/// Leading principal minors `det M[..k, ..k]` for `k = 1..=n` by fraction-free
/// (Bareiss) elimination without pivoting. Stops at the first vanishing minor;
/// the returned vector then has fewer than `n` entries, its last one zero.
pub fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.size();
    let mut a = m.to_bigint();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.size();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rational();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    det.to_integer()
}

/// Solves `M x = b` exactly; `None` if `M` is singular.
pub fn solve(m: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.size();
    let mut a = m.to_rational();
    for (i, row) in a.iter_mut().enumerate() {
        row.push(b[i].clone());
    }
    gauss_jordan(&mut a, n)?;
    Some((0..n).map(|i| a[i][n].clone()).collect())
}

/// Exact inverse; `None` if singular.
pub fn inverse(m: &IntMatrix) -> Option<Vec<Vec<Rational>>> {
    let n = m.size();
    let mut a = m.to_rational();
    for (i, row) in a.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { Rational::one() } else { Rational::zero() });
        }
    }
    gauss_jordan(&mut a, n)?;
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn gauss_jordan(a: &mut [Vec<Rational>], n: usize) -> Option<()> {
    let width = a.first().map_or(0, |r| r.len());
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let pivot = a[k][k].clone();
        for j in k..width {
            a[k][j] = &a[k][j] / &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..width {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    Some(())
}

/// `A = L D Lᵀ` for a symmetric positive definite rational matrix; `L` unit
/// lower triangular. `None` if some pivot is not positive.
pub fn ldl(a: &[Vec<Rational>]) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let n = a.len();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = a[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return None;
        }
        l[j][j] = Rational::one();
        for i in j + 1..n {
            let mut v = a[i][j].clone();
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &dj;
        }
        d[j] = dj;
    }
    Some((l, d))
}

/// Inverse of a unit lower triangular matrix.
pub fn unit_lower_inverse(l: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = l.len();
    let mut inv = vec![vec![Rational::zero(); n]; n];
    for j in 0..n {
        inv[j][j] = Rational::one();
        for i in j + 1..n {
            let mut v = Rational::zero();
            for k in j..i {
                v -= &l[i][k] * &inv[k][j];
            }
            inv[i][j] = v;
        }
    }
    inv
}

/// Smith normal form `U M V = diag(d_1, …, d_n)` with `d_i | d_{i+1}`,
/// `d_i >= 0`. Only the left transform and its inverse are kept.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub left_inv: Vec<Vec<BigInt>>,
}

impl SmithForm {
    /// `U x` reduced into the box `0 <= y_i < d_i` (coordinates with `d_i = 0`
    /// are left as is).
    pub fn residue(&self, x: &[BigInt]) -> Vec<BigInt> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let y: BigInt = (0..n).map(|j| &self.left[i][j] * &x[j]).sum();
                if self.diag[i].is_zero() { y } else { y.mod_floor(&self.diag[i]) }
            })
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let n = m.size();
    let mut a = m.to_bigint();
    let ident = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    };
    let mut u = ident(n);
    let mut u_inv = ident(n);

    // row_i -= c * row_j, mirrored on U and U^{-1}
    fn row_sub(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], ui: &mut [Vec<BigInt>], i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..a.len() {
            let t = c * &a[j][k];
            a[i][k] -= t;
            let t = c * &u[j][k];
            u[i][k] -= t;
            let t = c * &ui[k][i];
            ui[k][j] += t;
        }
    }
    fn row_swap(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], ui: &mut [Vec<BigInt>], i: usize, j: usize) {
        if i == j {
            return;
        }
        a.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_sub(a: &mut [Vec<BigInt>], i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for row in a.iter_mut() {
            let t = c * &row[j];
            row[i] -= t;
        }
    }
    fn col_swap(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            row_swap(&mut a, &mut u, &mut u_inv, t, bi);
            col_swap(&mut a, t, bj);
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, &mut u, &mut u_inv, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    row_sub(&mut a, &mut u, &mut u_inv, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for k in 0..n {
                a[t][k] = -a[t][k].clone();
                u[t][k] = -u[t][k].clone();
                u_inv[k][t] = -u_inv[k][t].clone();
            }
        }
    }
    SmithForm { diag: (0..n).map(|i| a[i][i].clone()).collect(), left: u, left_inv: u_inv }
}
