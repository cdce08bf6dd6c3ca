use std::collections::{HashMap, HashSet};

use crate::quadratic::{GradingContext, TParam};

use super::persistence::{self, Column};
use super::{Barcode, Cell};

/// The cubes all of whose vertices lie in an arbitrary finite vertex set,
/// stored as an explicit list. Used where the vertex set is too skew for a
/// bounding box grid.
#[derive(Clone, Debug)]
pub struct CubeSubcomplex {
    t: TParam,
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    level: Vec<i64>,
}

impl CubeSubcomplex {
    pub fn from_vertices(ctx: &GradingContext<'_>, t: &TParam, vertices: &[Vec<i64>]) -> Self {
        let s = ctx.lattice().rank();
        let set: HashSet<&[i64]> = vertices.iter().map(|v| v.as_slice()).collect();
        let u = ctx.lattice().u();
        let (a, b) = (t.num(), t.den());
        let mut cells = Vec::new();
        let mut level = Vec::new();
        for x in vertices {
            for mask in 0u32..(1 << s) {
                let dirs: Vec<usize> = (0..s).filter(|&i| mask & (1 << i) != 0).collect();
                let mut ok = true;
                let mut wk = i64::MIN;
                let mut wk2 = i64::MIN;
                let mut sub = mask;
                loop {
                    let y: Vec<i64> = (0..s).map(|i| x[i] + ((sub >> i) & 1) as i64).collect();
                    if !set.contains(y.as_slice()) {
                        ok = false;
                        break;
                    }
                    let chi = ctx.two_chi_k(&y) / 2;
                    let uy: i64 = u.iter().zip(&y).map(|(p, q)| p * q).sum();
                    wk = wk.max(chi);
                    wk2 = wk2.max(chi - uy);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
                if ok {
                    cells.push(Cell { base: x.clone(), dirs });
                    level.push((2 * b - a) * wk + a * wk2);
                }
            }
        }
        let index = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        CubeSubcomplex { t: t.clone(), cells, index, level }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    /// `b · w_t` of a cell.
    pub fn scaled_level(&self, idx: usize) -> i64 {
        self.level[idx]
    }

    pub fn faces(&self, idx: usize) -> Vec<usize> {
        let c = &self.cells[idx];
        let mut out = Vec::with_capacity(2 * c.dim());
        for &i in &c.dirs {
            let dirs: Vec<usize> = c.dirs.iter().copied().filter(|&j| j != i).collect();
            let mut up = c.base.clone();
            up[i] += 1;
            for base in [c.base.clone(), up] {
                out.push(self.index[&Cell { base, dirs: dirs.clone() }]);
            }
        }
        out
    }

    pub fn barcode(&self) -> Barcode {
        let mut order: Vec<usize> = (0..self.cells.len()).collect();
        order.sort_by(|&i, &j| {
            (self.level[i], self.cells[i].dim(), &self.cells[i]).cmp(&(self.level[j], self.cells[j].dim(), &self.cells[j]))
        });
        filtered_barcode(&order, &self.level, |i| self.cells[i].dim() as u8, |i| self.faces(i), self.t.den())
    }
}

/// Persistence of a filtered complex given in filtration `order`.
pub(crate) fn filtered_barcode(
    order: &[usize],
    level: &[i64],
    dim: impl Fn(usize) -> u8,
    faces: impl Fn(usize) -> Vec<usize>,
    scale: i64,
) -> Barcode {
    let mut pos = vec![usize::MAX; level.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let columns: Vec<Column> = order
        .iter()
        .map(|&i| {
            let mut col: Vec<usize> = faces(i).into_iter().map(|f| pos[f]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let dims: Vec<u8> = order.iter().map(|&i| dim(i)).collect();
    let levels: Vec<i64> = order.iter().map(|&i| level[i]).collect();
    let red = persistence::reduce(&columns, &dims);
    Barcode::from_reduction(&red, &levels, &dims, scale)
}
