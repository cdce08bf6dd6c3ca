use serde::Serialize;

use crate::error::{Error, Result};

use super::form::KeForm;

/// Per-coordinate ranges `[lo_i, hi_i]` of characteristic vectors. Both ends
/// have the parity of the diagonal entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeWindow {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl KeWindow {
    pub const DEFAULT_MULTIPLIER: i64 = 3;

    pub fn new(form: &KeForm, lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != form.rank() || hi.len() != form.rank() {
            return Err(Error::InvalidParams("window has the wrong length".into()));
        }
        for i in 0..form.rank() {
            let d = form.q().get(i, i);
            if (lo[i] - d).rem_euclid(2) != 0 || (hi[i] - d).rem_euclid(2) != 0 || lo[i] > hi[i] {
                return Err(Error::InvalidParams(format!("window coordinate {i} must be a nonempty range of parity {}", d.rem_euclid(2))));
            }
        }
        Ok(KeWindow { lo, hi })
    }

    /// `[Q_ii − 2W|Q_ii|, −Q_ii + 2W|Q_ii|]`.
    pub fn scaled(form: &KeForm, w: i64) -> Result<Self> {
        if w < 0 {
            return Err(Error::InvalidParams("window multiplier must be nonnegative".into()));
        }
        let d: Vec<i64> = (0..form.rank()).map(|i| form.q().get(i, i)).collect();
        let lo = d.iter().map(|&x| x - 2 * w * x.abs()).collect();
        let hi = d.iter().map(|&x| -x + 2 * w * x.abs()).collect();
        KeWindow::new(form, lo, hi)
    }

    /// `[−r, r]` rounded inwards to the right parity.
    pub fn symmetric(form: &KeForm, r: i64) -> Result<Self> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for i in 0..form.rank() {
            let par = form.q().get(i, i).rem_euclid(2);
            let top = if (r - par).rem_euclid(2) == 0 { r } else { r - 1 };
            lo.push(-top);
            hi.push(top);
        }
        KeWindow::new(form, lo, hi)
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.iter().enumerate().all(|(i, &x)| self.lo[i] <= x && x <= self.hi[i])
    }

    pub fn count(&self) -> usize {
        (0..self.rank()).map(|i| ((self.hi[i] - self.lo[i]) / 2 + 1) as usize).product()
    }

    /// All characteristic vectors in the window, lexicographically.
    pub fn vectors(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.count());
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.hi[i] {
                    cur[i] += 2;
                    break;
                }
                cur[i] = self.lo[i];
            }
        }
    }

    /// Whether every chain of `depth` dual shifts `K ↦ K + 2v*` stays inside.
    pub fn is_interior(&self, form: &KeForm, k: &[i64], depth: i64) -> bool {
        (0..self.rank()).all(|i| {
            let step = (0..form.rank()).map(|j| form.q().get(i, j).abs()).max().unwrap_or(0);
            self.lo[i] + 2 * depth * step <= k[i] && k[i] + 2 * depth * step <= self.hi[i]
        })
    }

    /// The window with coordinate `v` removed.
    pub fn without(&self, v: usize) -> KeWindow {
        let drop = |x: &Vec<i64>| x.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, &y)| y).collect();
        KeWindow { lo: drop(&self.lo), hi: drop(&self.hi) }
    }

    /// The window with coordinate `v` widened by `by` on both sides.
    pub fn widened(&self, v: usize, by: i64) -> KeWindow {
        let mut w = self.clone();
        w.lo[v] -= by;
        w.hi[v] += by;
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn default_window_for_trefoil() {
        let form = KeForm::from_lattice(&fixtures::load("trefoil").unwrap().lattice().unwrap());
        let w = KeWindow::scaled(&form, 3).unwrap();
        assert_eq!(w.lo, vec![-7, -21, -14]);
        assert_eq!(w.hi, vec![7, 21, 14]);
        assert_eq!(w.count(), 8 * 22 * 15);
        let all = w.vectors();
        assert_eq!(all.len(), w.count());
        assert!(all.iter().all(|k| form.is_characteristic(k) && w.contains(k)));
    }

    #[test]
    fn symmetric_rounds_to_parity() {
        let form = KeForm::from_lattice(&fixtures::load("chain22").unwrap().lattice().unwrap());
        let w = KeWindow::symmetric(&form, 5).unwrap();
        assert_eq!(w.hi, vec![4, 4]);
    }
}
