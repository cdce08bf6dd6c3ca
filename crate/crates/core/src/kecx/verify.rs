use std::collections::{BTreeMap, HashMap, HashSet};


use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plumbing::IntersectionLattice;
use crate::quadratic::TParam;
use crate::rational;

use super::form::{KeForm, KeGenerator, Term, VertexSet};
use super::maps::{insert_coord, m_bound, Surgery};
use super::homology::window_homology;
use super::window::KeWindow;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Explicit window for `G`; otherwise the scaled default.
    pub window: Option<KeWindow>,
    pub multiplier: i64,
    /// Exponent cutoff, in units of `q`.
    pub qmax: i64,
    pub max_generators: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { window: None, multiplier: KeWindow::DEFAULT_MULTIPLIER, qmax: 10, max_generators: 4_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub vertex: String,
    pub t: TParam,
    pub qmax: i64,
    pub window: KeWindow,
    pub checks: Vec<CheckResult>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Runs every check and returns the report, failing only on bad input.
pub fn run_exactness_checks(lattice: &IntersectionLattice, vertex: &str, t: &TParam, opts: &VerifyOptions) -> Result<ExactnessReport> {
    let base = KeForm::from_lattice(lattice);
    let v = base.index_of(vertex).ok_or_else(|| Error::InvalidParams(format!("unknown vertex {vertex}")))?;
    let sur = Surgery::new(&base, v)?;
    if opts.qmax < 0 {
        return Err(Error::InvalidParams("qmax must be nonnegative".into()));
    }
    let window = match &opts.window {
        Some(w) => KeWindow::new(&base, w.lo.clone(), w.hi.clone())?,
        None => KeWindow::scaled(&base, opts.multiplier)?,
    };
    let mm = m_bound(opts.qmax);
    let plus_window = window.widened(v, 2 * mm + 1);
    let total = plus_window.count() as u64 * (1u64 << base.rank());
    if total > opts.max_generators {
        return Err(Error::Capacity { cells: total, limit: opts.max_generators });
    }
    let ctx = Ctx { sur: &sur, t, jmax: opts.qmax * t.den(), mm, window: &window, plus_window: &plus_window };
    let minus_window = window.without(v);

    let mut checks = Vec::new();
    for (name, form, w) in [("minus", &sur.minus, &minus_window), ("base", &sur.base, &window), ("plus", &sur.plus, &plus_window)] {
        checks.push(check_d_squared(name, form, w, t));
    }
    for (name, form, w) in [("minus", &sur.minus, &minus_window), ("base", &sur.base, &window), ("plus", &sur.plus, &plus_window)] {
        if form.has_grading() {
            checks.push(check_grading(name, form, w, t));
        }
    }
    checks.push(check_psi_chain_map(&ctx, &minus_window));
    checks.push(check_psi_injective(&ctx, &minus_window));
    checks.push(check_b_exponents(&ctx));
    checks.push(check_b_chain_map(&ctx));
    checks.push(check_b_after_psi(&ctx, &minus_window));
    checks.extend(check_pieces(&ctx, &minus_window));
    checks.push(check_homology(lattice, &window, t));
    Ok(ExactnessReport { vertex: vertex.to_string(), t: t.clone(), qmax: opts.qmax, window, checks })
}

/// Runs the checks and turns the first failure into [`Error::Exactness`].
pub fn verify_exact(lattice: &IntersectionLattice, vertex: &str, t: &TParam, opts: &VerifyOptions) -> Result<ExactnessReport> {
    let report = run_exactness_checks(lattice, vertex, t, opts)?;
    match report.first_failure() {
        Some(c) => Err(Error::Exactness { check: c.name.clone(), detail: c.detail.clone() }),
        None => Ok(report),
    }
}

struct Ctx<'a> {
    sur: &'a Surgery,
    t: &'a TParam,
    jmax: i64,
    mm: i64,
    window: &'a KeWindow,
    plus_window: &'a KeWindow,
}

fn pass(name: impl Into<String>, detail: String) -> CheckResult {
    CheckResult { name: name.into(), pass: true, detail }
}

fn fail(name: impl Into<String>, detail: String) -> CheckResult {
    CheckResult { name: name.into(), pass: false, detail }
}

fn generators(form: &KeForm, w: &KeWindow) -> Vec<KeGenerator> {
    let full = form.full_set();
    w.vectors()
        .into_iter()
        .flat_map(|k| (0..=full).map(move |e| KeGenerator::new(k.clone(), e)))
        .collect()
}

/// Sum over F2: terms appearing an even number of times cancel.
fn mod2(terms: impl IntoIterator<Item = Term>) -> BTreeMap<Term, ()> {
    let mut count: BTreeMap<Term, u32> = BTreeMap::new();
    for t in terms {
        *count.entry(t).or_default() += 1;
    }
    count.into_iter().filter(|(_, c)| c % 2 == 1).map(|(t, _)| (t, ())).collect()
}

fn check_d_squared(name: &str, form: &KeForm, w: &KeWindow, t: &TParam) -> CheckResult {
    let name = format!("d_squared_{name}");
    let gens = generators(form, w);
    let bad = gens.par_iter().find_map_any(|g| {
        let first = form.differential(g, t);
        if let Some(x) = first.iter().find(|x| x.exponent < 0) {
            return Some(format!("negative exponent {} in d{:?}", x.exponent, g));
        }
        let second = mod2(first.iter().flat_map(|x| {
            form.differential(&x.target, t).into_iter().map(move |y| Term { target: y.target, exponent: x.exponent + y.exponent })
        }));
        second.keys().next().map(|x| format!("d²{:?} contains {:?}", g, x))
    });
    match bad {
        None => pass(name, format!("{} generators, exponents nonnegative", gens.len())),
        Some(d) => fail(name, d),
    }
}

fn check_grading(name: &str, form: &KeForm, w: &KeWindow, t: &TParam) -> CheckResult {
    let name = format!("grading_drop_{name}");
    let gens = generators(form, w);
    let b = t.den();
    let bad = gens.par_iter().find_map_any(|g| {
        let gr = form.gr_t(g, t).expect("graded form");
        form.differential(g, t).into_iter().find_map(|x| {
            let gt = form.gr_t(&x.target, t).expect("graded form");
            let drop = &gr - (gt - rational::ratio(x.exponent, b));
            (drop != rational::int(1)).then(|| format!("{:?} -> {:?}: drop {}", g, x, rational::format_rational(&drop)))
        })
    });
    match bad {
        None => pass(name, format!("{} generators", gens.len())),
        Some(d) => fail(name, d),
    }
}

/// Largest change of the `v` coordinate under one dual shift by another vertex.
fn v_step(sur: &Surgery) -> i64 {
    (0..sur.base.rank()).filter(|&w| w != sur.v).map(|w| 2 * sur.base.q().get(sur.v, w).abs()).max().unwrap_or(0)
}

fn check_psi_chain_map(c: &Ctx<'_>, minus_window: &KeWindow) -> CheckResult {
    let name = "psi_chain_map";
    let (sur, v) = (c.sur, c.sur.v);
    let (lo, hi) = (c.window.lo[v], c.window.hi[v]);
    let step = v_step(sur);
    let keep = |x: &Term| x.target.k[v] >= lo + step && x.target.k[v] <= hi - step;
    let gens = generators(&sur.minus, minus_window);
    let bad = gens.par_iter().find_map_any(|g| {
        let lhs = mod2(sur.minus.differential(g, c.t).into_iter().flat_map(|x| {
            sur.psi(&x.target, lo, hi).into_iter().map(move |y| Term { target: y, exponent: x.exponent })
        }));
        let rhs = mod2(sur.psi(g, lo, hi).into_iter().flat_map(|y| sur.base.differential(&y, c.t)));
        let l: Vec<&Term> = lhs.keys().filter(|x| keep(x)).collect();
        let r: Vec<&Term> = rhs.keys().filter(|x| keep(x)).collect();
        (l != r).then(|| format!("at {:?}: psi d gives {} terms, d psi gives {}", g, l.len(), r.len()))
    });
    match bad {
        None => pass(name, format!("{} generators, targets with v-coordinate in [{}, {}]", gens.len(), lo + step, hi - step)),
        Some(d) => fail(name, d),
    }
}

fn check_psi_injective(c: &Ctx<'_>, minus_window: &KeWindow) -> CheckResult {
    let name = "psi_injective";
    let v = c.sur.v;
    let mut seen: HashSet<KeGenerator> = HashSet::new();
    for g in generators(&c.sur.minus, minus_window) {
        let img = c.sur.psi(&g, c.window.lo[v], c.window.hi[v]);
        if img.is_empty() {
            return fail(name, format!("empty image of {:?}", g));
        }
        for y in img {
            if !seen.insert(y.clone()) {
                return fail(name, format!("images overlap at {:?}", y));
            }
        }
    }
    pass(name, format!("{} generators hit, supports disjoint", seen.len()))
}

fn check_b_exponents(c: &Ctx<'_>) -> CheckResult {
    let name = "b_exponents";
    let gens = generators(&c.sur.base, c.window);
    let reach = c.mm + 1;
    let bad = gens.par_iter().find_map_any(|g| {
        for m in -reach..=reach {
            let s = c.sur.s_scaled(g, m, c.t);
            if s < 0 {
                return Some(format!("s_{m} = {s}/{} < 0 at {:?}", c.t.den(), g));
            }
            if g.e & (1 << c.sur.v) == 0 && s != c.t.den() * m * (m - 1) {
                return Some(format!("s_{m} = {s}/{} differs from m(m-1) at {:?}", c.t.den(), g));
            }
            if m.abs() == reach && s <= c.jmax {
                return Some(format!("s_{m} = {s}/{} within the cutoff at {:?}", c.t.den(), g));
            }
        }
        None
    });
    match bad {
        None => pass(name, format!("{} generators, |m| <= {}", gens.len(), reach)),
        Some(d) => fail(name, d),
    }
}

fn b_truncated(c: &Ctx<'_>, g: &KeGenerator) -> Vec<Term> {
    c.sur.b(g, c.t, c.mm).into_iter().filter(|x| x.exponent <= c.jmax).collect()
}

fn check_b_chain_map(c: &Ctx<'_>) -> CheckResult {
    let name = "b_chain_map";
    let gens = generators(&c.sur.base, c.window);
    let jmax = c.jmax;
    let bad = gens.par_iter().find_map_any(|g| {
        let lhs = mod2(b_truncated(c, g).into_iter().flat_map(|x| {
            c.sur.plus.differential(&x.target, c.t).into_iter().map(move |y| Term { target: y.target, exponent: x.exponent + y.exponent })
        }));
        let rhs = mod2(c.sur.base.differential(g, c.t).into_iter().flat_map(|x| {
            b_truncated(c, &x.target).into_iter().map(move |y| Term { target: y.target, exponent: x.exponent + y.exponent })
        }));
        let l: Vec<&Term> = lhs.keys().filter(|x| x.exponent <= jmax).collect();
        let r: Vec<&Term> = rhs.keys().filter(|x| x.exponent <= jmax).collect();
        (l != r).then(|| format!("at {:?}: d B gives {} terms, B d gives {}", g, l.len(), r.len()))
    });
    match bad {
        None => pass(name, format!("{} generators, exponents <= {}/{}", gens.len(), jmax, c.t.den())),
        Some(d) => fail(name, d),
    }
}

fn check_b_after_psi(c: &Ctx<'_>, minus_window: &KeWindow) -> CheckResult {
    let name = "b_after_psi_vanishes";
    let v = c.sur.v;
    let (lo, hi) = (c.window.lo[v], c.window.hi[v]);
    let (ilo, ihi) = (lo + 2 * c.mm - 1, hi - 2 * c.mm + 1);
    let gens = generators(&c.sur.minus, minus_window);
    let cancelled: usize = gens
        .par_iter()
        .map(|g| {
            let all: Vec<Term> = c.sur.psi(g, lo, hi).iter().flat_map(|y| b_truncated(c, y)).filter(|x| x.target.k[v] >= ilo && x.target.k[v] <= ihi).collect();
            let n = all.len();
            if mod2(all).is_empty() { Ok(n) } else { Err(g.clone()) }
        })
        .collect::<std::result::Result<Vec<usize>, KeGenerator>>()
        .map(|v| v.iter().sum())
        .unwrap_or(usize::MAX);
    if cancelled == usize::MAX {
        return fail(name, "a B(psi) image survives on the interior".into());
    }
    pass(name, format!("{} generators, {} terms cancel in pairs, targets with v-coordinate in [{}, {}]", gens.len(), cancelled, ilo, ihi))
}

/// Rank over F2 of sparse columns.
fn f2_rank(cols: Vec<Vec<usize>>) -> usize {
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    for mut col in cols {
        col.sort_unstable();
        col = mod2_rows(col);
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(p) => col = xor(&col, p),
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn mod2_rows(sorted: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(sorted.len());
    for r in sorted {
        if out.last() == Some(&r) {
            out.pop();
        } else {
            out.push(r);
        }
    }
    out
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Exactness piece by piece. `A_t` and `B_t` only touch the `v` coordinate,
/// so the sequence splits over pairs `(K restricted to G − v, E)`.
fn check_pieces(c: &Ctx<'_>, minus_window: &KeWindow) -> Vec<CheckResult> {
    let v = c.sur.v;
    let (lo, hi) = (c.window.lo[v], c.window.hi[v]);
    let (plo, phi) = (c.plus_window.lo[v], c.plus_window.hi[v]);
    let (ilo, ihi) = (lo + 2 * c.mm - 1, hi - 2 * c.mm + 1);
    let layers = (c.jmax + 1) as usize;
    let ps: Vec<i64> = (lo..=hi).step_by(2).collect();
    let full = c.sur.base.full_set();
    let pieces: Vec<(Vec<i64>, VertexSet)> =
        minus_window.vectors().into_iter().flat_map(|k| (0..=full).map(move |e| (k.clone(), e))).collect();

    #[derive(Default)]
    struct Outcome {
        injective: Option<String>,
        surjective: Option<String>,
        hat: Option<String>,
    }

    let outcomes: Vec<Outcome> = pieces
        .par_iter()
        .map(|(kminus, e)| {
            let mut out = Outcome::default();
            let row_of = |p2: i64| ((p2 - plo) / 2) as usize;
            let mut cols: Vec<Vec<usize>> = Vec::with_capacity(ps.len() * layers);
            let mut hat_cols: Vec<Vec<usize>> = Vec::with_capacity(ps.len());
            for &p in &ps {
                let g = KeGenerator::new(insert_coord(kminus, v, p), *e);
                let terms = b_truncated(c, &g);
                for j in 0..layers as i64 {
                    cols.push(
                        terms
                            .iter()
                            .filter(|x| j + x.exponent <= c.jmax)
                            .map(|x| row_of(x.target.k[v]) * layers + (j + x.exponent) as usize)
                            .collect(),
                    );
                }
                hat_cols.push(terms.iter().filter(|x| x.exponent == 0).map(|x| row_of(x.target.k[v])).collect());
            }
            let ncols = cols.len();
            let rank = f2_rank(cols.clone());
            if rank != ncols {
                out.injective = Some(format!("piece {:?}/{:b}: rank {} < {} columns", kminus, e, rank, ncols));
            }
            let interior = |row: usize| {
                let p2 = plo + 2 * (row / layers) as i64;
                p2 >= ilo && p2 <= ihi
            };
            let nrows = if ihi >= ilo { ((ihi - ilo) / 2 + 1) as usize * layers } else { 0 };
            let restricted: Vec<Vec<usize>> = cols.into_iter().map(|col| col.into_iter().filter(|&r| interior(r)).collect()).collect();
            let rank_int = f2_rank(restricted);
            if rank_int != nrows {
                out.surjective = Some(format!("piece {:?}/{:b}: rank {} on {} interior rows", kminus, e, rank_int, nrows));
            }
            if e & (1 << v) == 0 {
                let hat_int = |row: &usize| {
                    let p2 = plo + 2 * *row as i64;
                    p2 > lo && p2 < hi
                };
                let restricted: Vec<Vec<usize>> = hat_cols.iter().map(|col| col.iter().copied().filter(hat_int).collect()).collect();
                let sum = mod2_rows({
                    let mut all: Vec<usize> = restricted.iter().flatten().copied().collect();
                    all.sort_unstable();
                    all
                });
                let r = f2_rank(restricted);
                if r + 1 != ps.len() || !sum.is_empty() {
                    out.hat = Some(format!("piece {:?}/{:b}: hat rank {} on {} columns", kminus, e, r, ps.len()));
                }
            }
            out
        })
        .collect();
    let _ = phi;
    let first = |f: fn(&Outcome) -> &Option<String>| outcomes.iter().find_map(|o| f(o).clone());
    let n = pieces.len();
    let mut res = Vec::new();
    for (name, found, ok) in [
        ("b_injective", first(|o| &o.injective), format!("{n} pieces, {} layers", layers)),
        ("b_surjective_interior", first(|o| &o.surjective), format!("{n} pieces, target v-coordinate in [{ilo}, {ihi}]")),
        ("hat_kernel_is_image", first(|o| &o.hat), format!("{} pieces with v outside E", n / 2)),
    ] {
        res.push(match found {
            None => pass(name, ok),
            Some(d) => fail(name, d),
        });
    }
    res
}

fn check_homology(lattice: &IntersectionLattice, window: &KeWindow, t: &TParam) -> CheckResult {
    let name = "homology_matches_cubes";
    match window_homology(lattice, window, t) {
        Err(e) => fail(name, e.to_string()),
        Ok(classes) => {
            let notes: Vec<String> = classes
                .iter()
                .map(|h| {
                    let mut note = format!(
                        "class {}: {} cells, {} bars, {} born below {}",
                        h.class_index,
                        h.cells,
                        h.barcode.bar_count(),
                        h.trusted.bar_count(),
                        rational::format_rational(&h.cutoff)
                    );
                    if h.free_birth_checked {
                        note.push_str(", free birth = 2 min chi_t");
                    }
                    note
                })
                .collect();
            pass(name, notes.join("; "))
        }
    }
}
