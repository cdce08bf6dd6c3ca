use crate::error::{Error, Result};
use crate::plumbing::{IntersectionLattice, SpincClass};
use crate::quadratic::{GradingContext, TParam};
use crate::rational::{self, Rational};

use super::persistence::{self, Column};
use super::Barcode;

pub const DEFAULT_MAX_CELLS: u64 = 2_000_000;

/// Cell cap from `PLUMBCALC_MAX_CELLS`, else [`DEFAULT_MAX_CELLS`].
pub fn max_cells_from_env() -> u64 {
    std::env::var("PLUMBCALC_MAX_CELLS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_CELLS)
}

/// The cube `ℓ + [0,1]^I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub base: Vec<i64>,
    pub dirs: Vec<usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }
}

/// All cubes of a box (or of a subcomplex of it) with the weights `w_k`,
/// `w_{k+2u}` and `w_t = (2 − t) w_k + t w_{k+2u}`.
///
/// A cell is addressed by doubled coordinates `c_i = 2(ℓ_i − lo_i) + [i ∈ I]`,
/// flattened with the first coordinate most significant, so index order is
/// lexicographic order of cells.
#[derive(Clone, Debug)]
pub struct WeightedComplex<'a> {
    ctx: GradingContext<'a>,
    t: TParam,
    lo: Vec<i64>,
    extent: Vec<usize>,
    stride: Vec<usize>,
    present: Option<Vec<bool>>,
    dim: Vec<u8>,
    wk: Vec<i64>,
    wk2: Vec<i64>,
}

/// The box `[−N, N]^s` around the origin for the class representative.
pub fn build<'a>(lattice: &'a IntersectionLattice, class: &SpincClass, t: &TParam, n: i64) -> Result<WeightedComplex<'a>> {
    let ctx = GradingContext::new(lattice, class.representative.clone());
    WeightedComplex::new_box(ctx, t.clone(), &vec![0; lattice.rank()], n, max_cells_from_env())
}

impl<'a> WeightedComplex<'a> {
    /// The box `center + [−n, n]^s`.
    pub fn new_box(ctx: GradingContext<'a>, t: TParam, center: &[i64], n: i64, max_cells: u64) -> Result<Self> {
        if n < 0 {
            return Err(Error::InvalidParams("box radius must be nonnegative".into()));
        }
        let lo: Vec<i64> = center.iter().map(|c| c - n).collect();
        let hi: Vec<i64> = center.iter().map(|c| c + n).collect();
        Self::over_range(ctx, t, lo, hi, None, max_cells)
    }

    /// The largest subcomplex of the bounding box of `vertices` all of whose
    /// vertices belong to `vertices`.
    pub fn from_vertices(ctx: GradingContext<'a>, t: TParam, vertices: &[Vec<i64>], max_cells: u64) -> Result<Self> {
        let s = ctx.lattice().rank();
        if vertices.is_empty() {
            return Err(Error::InvalidParams("empty vertex set".into()));
        }
        let lo: Vec<i64> = (0..s).map(|i| vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..s).map(|i| vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let mut w = Self::over_range(ctx, t, lo, hi, Some(Vec::new()), max_cells)?;
        let total = w.dim.len();
        let mut present = vec![false; total];
        for v in vertices {
            let c: Vec<usize> = (0..s).map(|i| 2 * (v[i] - w.lo[i]) as usize).collect();
            present[w.flatten(&c)] = true;
        }
        // a cube is present when both of its faces in any one direction are
        for idx in w.order_by_dim() {
            if w.dim[idx] == 0 {
                continue;
            }
            let i = w.first_dir(idx);
            present[idx] = present[idx - w.stride[i]] && present[idx + w.stride[i]];
        }
        w.present = Some(present);
        Ok(w)
    }

    fn over_range(
        ctx: GradingContext<'a>,
        t: TParam,
        lo: Vec<i64>,
        hi: Vec<i64>,
        present: Option<Vec<bool>>,
        max_cells: u64,
    ) -> Result<Self> {
        let s = lo.len();
        let extent: Vec<usize> = lo.iter().zip(&hi).map(|(l, h)| (2 * (h - l) + 1) as usize).collect();
        let mut total: u64 = 1;
        for &e in &extent {
            total = total.saturating_mul(e as u64);
        }
        if total > max_cells {
            return Err(Error::Capacity { cells: total, limit: max_cells });
        }
        let total = total as usize;
        let mut stride = vec![1usize; s];
        for i in (0..s.saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * extent[i + 1];
        }
        let mut w = WeightedComplex {
            ctx,
            t,
            lo,
            extent,
            stride,
            present,
            dim: vec![0; total],
            wk: vec![0; total],
            wk2: vec![0; total],
        };
        let u = w.ctx.lattice().u().to_vec();
        let mut c = vec![0usize; s];
        let mut x = vec![0i64; s];
        for idx in 0..total {
            w.unflatten(idx, &mut c);
            let d = c.iter().filter(|&&ci| ci % 2 == 1).count();
            w.dim[idx] = d as u8;
            if d == 0 {
                for i in 0..s {
                    x[i] = w.lo[i] + (c[i] / 2) as i64;
                }
                let chi = w.ctx.two_chi_k(&x) / 2;
                let ux: i64 = u.iter().zip(&x).map(|(a, b)| a * b).sum();
                w.wk[idx] = chi;
                w.wk2[idx] = chi - ux;
            }
        }
        for idx in w.order_by_dim() {
            if w.dim[idx] == 0 {
                continue;
            }
            let i = w.first_dir(idx);
            let (a, b) = (idx - w.stride[i], idx + w.stride[i]);
            w.wk[idx] = w.wk[a].max(w.wk[b]);
            w.wk2[idx] = w.wk2[a].max(w.wk2[b]);
        }
        Ok(w)
    }

    fn order_by_dim(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.dim.len()).collect();
        idx.sort_by_key(|&i| self.dim[i]);
        idx
    }

    fn first_dir(&self, idx: usize) -> usize {
        (0..self.lo.len()).find(|&i| (idx / self.stride[i]) % self.extent[i] % 2 == 1).expect("positive dimension")
    }

    fn flatten(&self, c: &[usize]) -> usize {
        c.iter().zip(&self.stride).map(|(a, b)| a * b).sum()
    }

    fn unflatten(&self, idx: usize, c: &mut [usize]) {
        for i in 0..c.len() {
            c[i] = (idx / self.stride[i]) % self.extent[i];
        }
    }

    pub fn context(&self) -> &GradingContext<'a> {
        &self.ctx
    }

    pub fn t(&self) -> &TParam {
        &self.t
    }

    /// Grid size including absent cells of a subcomplex.
    pub fn grid_len(&self) -> usize {
        self.dim.len()
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.dim.len() && self.present.as_ref().map_or(true, |p| p[idx])
    }

    /// Indices of the cells, in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim.len()).filter(move |&i| self.contains(i))
    }

    pub fn cell_count(&self) -> usize {
        self.cells().count()
    }

    /// Number of cells of each dimension `0..=s`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.lo.len() + 1];
        for i in self.cells() {
            out[self.dim[i] as usize] += 1;
        }
        out
    }

    pub fn cell(&self, idx: usize) -> Cell {
        let s = self.lo.len();
        let mut c = vec![0; s];
        self.unflatten(idx, &mut c);
        Cell {
            base: (0..s).map(|i| self.lo[i] + (c[i] / 2) as i64).collect(),
            dirs: (0..s).filter(|&i| c[i] % 2 == 1).collect(),
        }
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        let s = self.lo.len();
        let mut c = vec![0usize; s];
        for i in 0..s {
            let off = cell.base[i] - self.lo[i];
            if off < 0 {
                return None;
            }
            c[i] = 2 * off as usize;
        }
        for &i in &cell.dirs {
            c[i] += 1;
        }
        if (0..s).any(|i| c[i] >= self.extent[i]) {
            return None;
        }
        let idx = self.flatten(&c);
        self.contains(idx).then_some(idx)
    }

    pub fn dim(&self, idx: usize) -> usize {
        self.dim[idx] as usize
    }

    /// The `2·dim` codimension one faces.
    pub fn faces(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.dim(idx));
        for i in 0..self.lo.len() {
            if (idx / self.stride[i]) % self.extent[i] % 2 == 1 {
                out.push(idx - self.stride[i]);
                out.push(idx + self.stride[i]);
            }
        }
        out
    }

    pub fn weight_k(&self, idx: usize) -> i64 {
        self.wk[idx]
    }

    pub fn weight_k2(&self, idx: usize) -> i64 {
        self.wk2[idx]
    }

    /// `b · w_t` for `t = a/b`.
    pub fn scaled_weight_t(&self, idx: usize) -> i64 {
        let (a, b) = (self.t.num(), self.t.den());
        (2 * b - a) * self.wk[idx] + a * self.wk2[idx]
    }

    pub fn weight_t(&self, idx: usize) -> Rational {
        rational::ratio(self.scaled_weight_t(idx), self.t.den())
    }

    /// Sublevel persistence, cells ordered by `(w_t, dim, lexicographic)`.
    pub fn barcode(&self) -> Barcode {
        let mut order: Vec<usize> = self.cells().collect();
        let level: Vec<i64> = (0..self.dim.len()).map(|i| if self.contains(i) { self.scaled_weight_t(i) } else { 0 }).collect();
        order.sort_by_key(|&i| (level[i], self.dim[i], i));
        let mut pos = vec![usize::MAX; self.dim.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let columns: Vec<Column> = order
            .iter()
            .map(|&i| {
                let mut col: Vec<usize> = self.faces(i).into_iter().map(|f| pos[f]).collect();
                col.sort_unstable();
                col
            })
            .collect();
        let dims: Vec<u8> = order.iter().map(|&i| self.dim[i]).collect();
        let levels: Vec<i64> = order.iter().map(|&i| level[i]).collect();
        let red = persistence::reduce(&columns, &dims);
        Barcode::from_reduction(&red, &levels, &dims, self.t.den())
    }
}
