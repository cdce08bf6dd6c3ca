use std::collections::HashMap;

use serde::Serialize;

use crate::cubecx::{filtered_barcode, Bar, Barcode, CubeSubcomplex};
use crate::error::{Error, Result};
use crate::plumbing::IntersectionLattice;
use crate::quadratic::{GradingContext, TParam};
use crate::rational::{self, Rational};
use crate::upsilon::minimize_chi;

use super::form::{KeForm, KeGenerator};
use super::window::KeWindow;

/// Homology of the window complex of one class.
#[derive(Clone, Debug, Serialize)]
pub struct WindowHomology {
    pub class_index: usize,
    pub cells: usize,
    /// No cell outside the window has level below this, so bars born below
    /// it are bars of the full complex.
    #[serde(with = "rational::serde_str")]
    pub cutoff: Rational,
    pub barcode: Barcode,
    /// Bars born below the cutoff; those dying at or above it are infinite.
    pub trusted: Barcode,
    /// Whether the lattice minimizer lies in the window and the free bar
    /// starts at `2 min χ_t`.
    pub free_birth_checked: bool,
}

/// Lower bound for `w_t` on vertices whose `K` leaves the window.
///
/// On vertices `w_t = c(k, t) − (K² + s)/4 + t (K·F − F²)/2`, a convex
/// function of `K` with minimum at `K = −t u`; crossing the hyperplane
/// `K_i = h` costs at least `(h + t u_i)² / (4 |Q_ii|)`.
pub fn window_cutoff(lattice: &IntersectionLattice, window: &KeWindow, ctx: &GradingContext<'_>, t: &TParam) -> Rational {
    let s = lattice.rank();
    let tv = t.value();
    let quarter = rational::ratio(1, 4);
    let base = ctx.grading_constant(t) - rational::ratio(s as i64, 4) + lattice.f_sq() * (tv * tv * &quarter - tv * rational::ratio(1, 2));
    let mut best: Option<Rational> = None;
    for i in 0..s {
        let star = -(tv * rational::int(lattice.u()[i]));
        let d = rational::int(lattice.q().get(i, i).abs() * 4);
        for h in [window.hi[i] + 2, window.lo[i] - 2] {
            let gap = rational::int(h) - &star;
            let c = &gap * &gap / &d;
            if best.as_ref().map_or(true, |b| &c < b) {
                best = Some(c);
            }
        }
    }
    base + best.unwrap_or_default()
}

fn trusted(barcode: &Barcode, cutoff: &Rational) -> Barcode {
    Barcode::new(
        barcode
            .degrees()
            .iter()
            .map(|bars| {
                bars.iter()
                    .filter(|b| &b.birth < cutoff)
                    .map(|b| Bar {
                        birth: b.birth.clone(),
                        length: b.length.clone().filter(|l| &(&b.birth + l) < cutoff),
                    })
                    .collect()
            })
            .collect(),
    )
}

/// For each class, the cubes whose vertices `x` have `k + 2Qx` in the window,
/// with barcodes computed from cube weights and again from `[K, E]` gradings
/// and differentials. Fails if the two disagree anywhere.
pub fn window_homology(lattice: &IntersectionLattice, window: &KeWindow, t: &TParam) -> Result<Vec<WindowHomology>> {
    let form = KeForm::from_lattice(lattice);
    if window.rank() != form.rank() {
        return Err(Error::InvalidParams("window has the wrong length".into()));
    }
    let b = t.den();
    let all = window.vectors();
    let mismatch = |detail: String| Error::Exactness { check: "homology_matches_cubes".into(), detail };
    let mut out = Vec::new();
    for class in lattice.spinc_classes() {
        let k = class.representative.as_slice().to_vec();
        let ctx = GradingContext::new(lattice, class.representative.clone());
        let constant = ctx.grading_constant(t);
        let mut verts = Vec::new();
        for kk in &all {
            if !lattice.same_class(kk, &k) {
                continue;
            }
            let diff: Vec<Rational> = kk.iter().zip(&k).map(|(a, b)| rational::ratio(a - b, 2)).collect();
            verts.push(lattice.apply_qinv(&diff).iter().map(|r| rational::to_i64(r).expect("same class")).collect::<Vec<i64>>());
        }
        let cutoff = window_cutoff(lattice, window, &ctx, t);
        if verts.is_empty() {
            out.push(WindowHomology { class_index: class.index, cells: 0, cutoff, barcode: Barcode::default(), trusted: Barcode::default(), free_birth_checked: false });
            continue;
        }
        let cubes = CubeSubcomplex::from_vertices(&ctx, t, &verts);

        // the same cells as [K, E] generators
        let gens: Vec<KeGenerator> = cubes
            .cells()
            .iter()
            .map(|cell| {
                let kk: Vec<i64> = k.iter().zip(lattice.q().mul_vec(&cell.base)).map(|(a, b)| a + 2 * b).collect();
                KeGenerator::new(kk, cell.dirs.iter().map(|&i| 1u32 << i).sum())
            })
            .collect();
        let index: HashMap<&KeGenerator, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut level = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            let gr = form.gr_t(g, t).expect("definite form");
            let l = (rational::int(g.dim() as i64) - gr + &constant) * rational::int(b);
            let l = rational::to_i64(&l).expect("integral level");
            if l != cubes.scaled_level(i) {
                return Err(mismatch(format!("class {}: level {} vs cube weight {} at {:?}", class.index, l, cubes.scaled_level(i), g)));
            }
            level.push(l);
        }
        let mut faces: Vec<Vec<usize>> = Vec::with_capacity(gens.len());
        for g in &gens {
            let mut f = Vec::new();
            for x in form.differential(g, t) {
                match index.get(&x.target) {
                    Some(&j) => f.push(j),
                    None => return Err(mismatch(format!("class {}: boundary of {:?} leaves the window", class.index, g))),
                }
            }
            faces.push(f);
        }
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by(|&i, &j| (level[i], gens[i].dim(), &gens[i]).cmp(&(level[j], gens[j].dim(), &gens[j])));
        let ke = filtered_barcode(&order, &level, |i| gens[i].dim() as u8, |i| faces[i].clone(), b);
        let cube = cubes.barcode();
        if ke != cube {
            return Err(mismatch(format!("class {}: barcodes differ", class.index)));
        }
        let cert = minimize_chi(&ctx, t);
        let mut free_birth_checked = false;
        if verts.contains(&cert.argmin) {
            let want = &cert.min_value * rational::int(2);
            let birth = cube.infinite_bars().iter().filter(|(d, _)| *d == 0).map(|(_, bar)| bar.birth.clone()).min();
            if birth.as_ref() != Some(&want) {
                return Err(mismatch(format!("class {}: free birth differs from 2 min chi_t = {}", class.index, rational::format_rational(&want))));
            }
            free_birth_checked = true;
        }
        let trusted = trusted(&cube, &cutoff);
        out.push(WindowHomology { class_index: class.index, cells: gens.len(), cutoff, barcode: cube, trusted, free_birth_checked });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cutoff_bounds_every_outside_vertex() {
        let l = fixtures::load("trefoil").unwrap().lattice().unwrap();
        let form = KeForm::from_lattice(&l);
        let inner = KeWindow::scaled(&form, 1).unwrap();
        let outer = KeWindow::scaled(&form, 3).unwrap();
        let class = &l.spinc_classes()[0];
        let ctx = GradingContext::new(&l, class.representative.clone());
        for t in TParam::grid(3) {
            let cut = window_cutoff(&l, &inner, &ctx, &t);
            for kk in outer.vectors() {
                if inner.contains(&kk) {
                    continue;
                }
                let w = ctx.grading_constant(&t) - form.grading_shift(&kk, &t).unwrap();
                assert!(w >= cut, "K = {kk:?}");
            }
        }
    }

    #[test]
    fn chain_window_is_floer_simple() {
        let l = fixtures::load("chain22").unwrap().lattice().unwrap();
        let w = KeWindow::scaled(&KeForm::from_lattice(&l), 3).unwrap();
        for t in TParam::grid(3) {
            for h in window_homology(&l, &w, &t).unwrap() {
                assert_eq!(h.trusted.bar_count(), 1, "class {} at t = {t}", h.class_index);
                assert_eq!(h.trusted.infinite_bars().len(), 1);
                assert_eq!(h.trusted.infinite_bars()[0].0, 0);
            }
        }
    }
}
