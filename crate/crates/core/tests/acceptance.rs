//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL`
//! line to the real stdout, so the lines show up without `--nocapture`.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use plumbcalc::cubecx::{self, StabilizeOptions};
use plumbcalc::kecx::{relations_audit, verify_exact, window_homology, KeForm, KeWindow, VerifyOptions};
use plumbcalc::linalg::IntMatrix;
use plumbcalc::plumbing::torus_knot_graph;
use plumbcalc::rational::{self, int, ratio, Rational};
use plumbcalc::upsilon::{self, minimize_chi, zemke_audit};
use plumbcalc::{fixtures, CharVector, GradingContext, IntersectionLattice, PiecewiseLinearFn, SpincClass, TParam};

const FIXTURE_NAMES: [&str; 7] = ["trefoil", "double_cover", "unknot", "rp3", "chain22", "t25", "t34"];

fn report(n: u32, failures: &[String], detail: &str) {
    let line = if failures.is_empty() {
        format!("criterion {n}: PASS ({detail})\n")
    } else {
        format!("criterion {n}: FAIL ({})\n", failures.join("; "))
    };
    let mut out = std::io::stdout();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(failures.is_empty(), "{}", line.trim_end());
}

fn lattice(name: &str) -> IntersectionLattice {
    fixtures::load(name).unwrap().lattice().unwrap()
}

fn for_box(s: usize, r: i64, mut f: impl FnMut(&[i64])) {
    let mut x = vec![-r; s];
    loop {
        f(&x);
        let mut i = 0;
        while i < s && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == s {
            return;
        }
        x[i] += 1;
    }
}

/// `Υ(t) = max_x (k·x + x·Qx + t u·x) + (k² + s)/4 − t(k·F − F²)/2` with the
/// maximum over the box `‖x‖_∞ ≤ r`, kept as the upper envelope of lines
/// `A + tS` (only the best `A` per slope `S` matters).
struct BruteEnvelope {
    lines: BTreeMap<i64, i64>,
    c0: Rational,
    c1: Rational,
}

impl BruteEnvelope {
    fn new(l: &IntersectionLattice, k: &[i64], r: i64) -> Self {
        let s = l.rank();
        let q = l.q();
        let mut lines = BTreeMap::new();
        for_box(s, r, |x| {
            let mut a = 0;
            let mut slope = 0;
            for i in 0..s {
                a += k[i] * x[i];
                slope += l.u()[i] * x[i];
                for j in 0..s {
                    a += x[i] * q.get(i, j) * x[j];
                }
            }
            let e = lines.entry(slope).or_insert(a);
            *e = (*e).max(a);
        });
        let c0 = (l.dual_square(k) + int(s as i64)) / int(4);
        let c1 = -(l.pair_f(k) - l.f_sq()) / int(2);
        BruteEnvelope { lines, c0, c1 }
    }

    fn eval(&self, t: &Rational) -> Rational {
        let best = self.lines.iter().map(|(&s, &a)| int(a) + t * int(s)).max().unwrap();
        best + &self.c0 + t * &self.c1
    }

    /// `−Υ'(0⁺)`: the steepest line among those attaining the maximum at 0.
    fn tau(&self) -> Rational {
        let top = *self.lines.values().max().unwrap();
        let slope = self.lines.iter().filter(|(_, &a)| a == top).map(|(&s, _)| s).max().unwrap();
        -(int(slope) + &self.c1)
    }
}

fn sixteenths() -> Vec<Rational> {
    (0..=16).map(|m| ratio(m, 8)).collect()
}

fn pl(points: &[(i64, i64)]) -> PiecewiseLinearFn {
    PiecewiseLinearFn::new(points.iter().map(|&(t, y)| (int(t), int(y))).collect()).unwrap()
}

#[test]
fn criterion_1_trefoil() {
    let l = lattice("trefoil");
    let classes = l.spinc_classes();
    let mut failures = vec![];
    let start = Instant::now();
    let f = upsilon::upsilon(&l, &classes[0]);
    let elapsed = start.elapsed();
    if classes.len() != 1 {
        failures.push(format!("{} classes", classes.len()));
    }
    if f != pl(&[(0, 0), (1, -1), (2, 0)]) {
        failures.push(format!("breakpoints {:?}", f.breakpoints()));
    }
    if upsilon::tau(&f) != int(1) || upsilon::d_invariant(&f) != int(0) {
        failures.push("tau or d".into());
    }
    if elapsed > Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    let brute = BruteEnvelope::new(&l, classes[0].representative.as_slice(), 10);
    for t in sixteenths() {
        if brute.eval(&t) != f.eval(&t) {
            failures.push(format!("oracle disagrees at t = {t}"));
        }
    }
    if brute.tau() != int(1) {
        failures.push("oracle tau".into());
    }
    report(1, &failures, &format!("Υ = [(0,0),(1,−1),(2,0)], τ = 1, d = 0 in {elapsed:?}; 17-point oracle over ‖x‖ ≤ 10 agrees"));
}

#[test]
fn criterion_2_unknot() {
    let l = lattice("unknot");
    let mut failures = vec![];
    let start = Instant::now();
    for class in l.spinc_classes() {
        let f = upsilon::upsilon(&l, &class);
        if f.breakpoints().iter().any(|(_, y)| *y != int(0)) {
            failures.push(format!("breakpoints {:?}", f.breakpoints()));
        }
        if upsilon::tau(&f) != int(0) || upsilon::d_invariant(&f) != int(0) {
            failures.push("tau or d".into());
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(2, &failures, &format!("Υ ≡ 0, τ = 0, d = 0 in {elapsed:?}"));
}

#[test]
fn criterion_3_single_minus_two() {
    let l = lattice("rp3");
    let mut failures = vec![];
    let classes = l.spinc_classes();
    let expected = [(ratio(1, 4), ratio(-1, 4)), (ratio(-1, 4), ratio(1, 4))];
    let mut ds = vec![];
    for class in &classes {
        let f = upsilon::upsilon(&l, class);
        let d = upsilon::d_invariant(&f);
        // the window maximum of (k² + 1)/4 over the class
        let mut best: Option<Rational> = None;
        for z in -6..=6 {
            let k = class.representative.shifted(&l, &[z]);
            let v = (l.dual_square(k.as_slice()) + int(1)) / int(4);
            if best.as_ref().map_or(true, |b| v > *b) {
                best = Some(v);
            }
        }
        if best.as_ref() != Some(&d) {
            failures.push(format!("class {}: d = {d}, window max {best:?}", class.index));
        }
        // the representative has min χ_t = 0, so Υ is exactly c(k, t)
        let ctx = GradingContext::new(&l, class.representative.clone());
        let (c0, c1) = expected.iter().find(|(c0, _)| *c0 == d).cloned().unwrap_or((int(99), int(99)));
        for t in sixteenths() {
            let tp = TParam::new(t.clone()).unwrap();
            let min = (-10..=10).map(|x| ctx.chi_t(&tp, &[x])).min().unwrap();
            if min != int(0) {
                failures.push(format!("class {}: min χ at t = {t} is {min}", class.index));
            }
            if f.eval(&t) != &c0 + &t * &c1 {
                failures.push(format!("class {}: Υ({t}) = {}", class.index, f.eval(&t)));
            }
        }
        ds.push(d);
    }
    ds.sort();
    if ds != [ratio(-1, 4), ratio(1, 4)] {
        failures.push(format!("d values {ds:?}"));
    }
    report(3, &failures, "d ∈ {1/4, −1/4}, Υ = ±(1/4 − t/4)");
}

#[test]
fn criterion_4_torus_knots() {
    let mut failures = vec![];
    let mut details = vec![];
    for ((p, q), tau) in [((2, 5), 2), ((3, 4), 3)] {
        let start = Instant::now();
        let l = torus_knot_graph(p, q).unwrap().lattice().unwrap();
        if l.det().magnitude().to_u64() != Some(1) {
            failures.push(format!("T({p},{q}): |det| = {}", l.det()));
            continue;
        }
        let class = &l.spinc_classes()[0];
        let f = upsilon::upsilon(&l, class);
        if upsilon::tau(&f) != int(tau) {
            failures.push(format!("T({p},{q}): τ = {}", upsilon::tau(&f)));
        }
        let brute = BruteEnvelope::new(&l, class.representative.as_slice(), 12);
        if brute.tau() != int(tau) {
            failures.push(format!("T({p},{q}): oracle τ = {}", brute.tau()));
        }
        let ts: Vec<Rational> = sixteenths().into_iter().chain(f.breakpoints().iter().map(|(t, _)| t.clone())).collect();
        for t in &ts {
            if brute.eval(t) != f.eval(t) {
                failures.push(format!("T({p},{q}): oracle disagrees at t = {t}"));
            }
        }
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(30) {
            failures.push(format!("T({p},{q}) took {elapsed:?}"));
        }
        details.push(format!("T({p},{q}) τ = {tau} in {elapsed:?}"));
    }
    report(4, &failures, &details.join(", "));
}

#[test]
fn criterion_5_coset_invariance() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut failures = vec![];
    let mut runs = 0;
    for name in FIXTURE_NAMES {
        let l = lattice(name);
        for class in l.spinc_classes() {
            let f = upsilon::upsilon(&l, &class);
            for _ in 0..20 {
                let z: Vec<i64> = (0..l.rank()).map(|_| rng.gen_range(-3..=3)).collect();
                let moved = SpincClass { index: class.index, representative: class.representative.shifted(&l, &z) };
                if upsilon::upsilon(&l, &moved) != f {
                    failures.push(format!("{name} class {} shifted by {z:?}", class.index));
                }
                runs += 1;
            }
        }
    }
    report(5, &failures, &format!("{runs} shifted representatives"));
}

#[test]
fn criterion_6_disk_bound_audit() {
    let mut failures = vec![];
    let mut checked = 0;
    for name in FIXTURE_NAMES {
        let g = fixtures::load(name).unwrap();
        let l = g.lattice().unwrap();
        for class in l.spinc_classes() {
            let f = upsilon::upsilon(&l, &class);
            match zemke_audit(&l, &class, &f, 2) {
                Err(e) => failures.push(format!("{name} class {}: {e}", class.index)),
                Ok(r) => {
                    checked += r.vectors_checked;
                    if g.bad_vertices().len() <= 2 && !r.equality_everywhere {
                        let ts: Vec<String> = r.points.iter().filter(|p| !p.equality).map(|p| p.t.to_string()).collect();
                        let reach = (3..=8).find(|&r| zemke_audit(&l, &class, &f, r).map_or(false, |r| r.equality_everywhere));
                        let reach = reach.map_or("not within 8".to_string(), |r| format!("reached at radius {r}"));
                        failures.push(format!("{name} class {}: no equality within radius 2 at t = {} ({reach})", class.index, ts.join(", ")));
                    }
                }
            }
        }
    }
    report(6, &failures, &format!("inequality on {checked} vectors, equality at every breakpoint"));
}

#[test]
fn criterion_7_cube_engine() {
    let mut failures = vec![];
    let start = Instant::now();
    let mut complexes = 0;
    let mut max_cells = 0;
    for name in FIXTURE_NAMES {
        let g = fixtures::load(name).unwrap();
        let bad = g.bad_vertices().len();
        let l = g.lattice().unwrap();
        for class in l.spinc_classes() {
            let f = upsilon::upsilon(&l, &class);
            let ctx = GradingContext::new(&l, class.representative.clone());
            for t in TParam::grid(8) {
                let opts = StabilizeOptions { max_cells: 100_000, ..Default::default() };
                let st = match cubecx::stabilize(&l, &class, &t, &opts) {
                    Ok(st) => st,
                    Err(e) => {
                        failures.push(format!("{name} class {} t = {t}: {e}", class.index));
                        continue;
                    }
                };
                complexes += 1;
                max_cells = max_cells.max(st.cells);
                let tag = format!("{name} class {} t = {t}", class.index);
                let inf = st.barcode.infinite_bars();
                if inf.len() != 1 || inf[0].0 != 0 {
                    failures.push(format!("{tag}: infinite bars in degrees {:?}", inf.iter().map(|b| b.0).collect::<Vec<_>>()));
                    continue;
                }
                match cubecx::upsilon_from_barcode(&st.barcode, &ctx, &t) {
                    Ok(u) if u == f.eval(t.value()) => {}
                    other => failures.push(format!("{tag}: barcode gives {other:?}")),
                }
                let reduced = cubecx::reduced_barcode(&st.barcode);
                let ok = if bad == 0 { reduced.is_empty() } else { reduced.top_degree().map_or(true, |p| p < bad) };
                if !ok {
                    failures.push(format!("{tag}: reduced bars up to degree {:?} with {bad} bad vertices", reduced.top_degree()));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(7, &failures, &format!("{complexes} complexes, at most {max_cells} cells, {elapsed:?}"));
}

#[test]
fn criterion_8_surgery_sequence() {
    let mut failures = vec![];
    let start = Instant::now();
    let ts = ["0", "2/3", "1"].map(|t| TParam::parse(t).unwrap());
    let mut checks = 0;
    for (name, vertex, multiplier) in [("chain22", "v", 3), ("trefoil", "a", 3), ("double_cover", "y", 1)] {
        let l = lattice(name);
        for t in &ts {
            let opts = VerifyOptions { multiplier, ..Default::default() };
            match verify_exact(&l, vertex, t, &opts) {
                Ok(r) => checks += r.checks.len(),
                Err(e) => failures.push(format!("{name} {vertex} t = {t}: {e}")),
            }
        }
    }
    // Floer simple: the trusted window homology is one free bar in degree 0,
    // and it matches the cube engine on the same vertices
    let l = lattice("chain22");
    let w = KeWindow::scaled(&KeForm::from_lattice(&l), 3).unwrap();
    for t in &ts {
        match window_homology(&l, &w, t) {
            Ok(hs) => {
                for h in hs {
                    let inf = h.trusted.infinite_bars();
                    if h.trusted.bar_count() != 1 || inf.len() != 1 || inf[0].0 != 0 || !h.free_birth_checked {
                        failures.push(format!("chain22 class {} t = {t}: trusted bars {:?}", h.class_index, h.trusted));
                    }
                }
            }
            Err(e) => failures.push(format!("chain22 window homology t = {t}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}"));
    }
    report(8, &failures, &format!("{checks} checks on chain22/v, trefoil/a, double_cover/y; chain22 window Floer simple; {elapsed:?}"));
}

/// A random tree on at most four vertices whose negated form is strictly
/// diagonally dominant.
fn random_instance(rng: &mut StdRng) -> IntersectionLattice {
    let s = rng.gen_range(1..=4usize);
    let mut rows = vec![vec![0i64; s]; s];
    let mut u = vec![0i64; s];
    for i in 0..s {
        let parent = rng.gen_range(0..=i);
        if parent == 0 {
            u[i] = 1;
        } else {
            rows[i][parent - 1] = 1;
            rows[parent - 1][i] = 1;
        }
    }
    for i in 0..s {
        let deg: i64 = rows[i].iter().sum();
        rows[i][i] = -(deg + 1 + rng.gen_range(0..=2));
    }
    let ids = (0..s).map(|i| format!("x{i}")).collect();
    IntersectionLattice::from_form(ids, IntMatrix::from_rows(&rows), u).unwrap()
}

#[test]
fn criterion_9_minimizer_and_convexity() {
    let mut rng = StdRng::seed_from_u64(9);
    let mut failures = vec![];
    let mut points = 0usize;
    for case in 0..200 {
        let l = random_instance(&mut rng);
        let s = l.rank();
        let q = l.q();
        let k: Vec<i64> = (0..s)
            .map(|i| {
                let x: i64 = rng.gen_range(-3..=3);
                if (x - q.get(i, i)).rem_euclid(2) == 0 { x } else if x > 0 { x - 1 } else { x + 1 }
            })
            .collect();
        let b = rng.gen_range(1..=12);
        let t = TParam::from_ratio(rng.gen_range(0..=2 * b), b).unwrap();
        let ctx = GradingContext::new(&l, CharVector::new(&l, k.clone()).unwrap());
        let cert = minimize_chi(&ctx, &t);
        // 2χ_t(x) ≥ λ|x|² − |k + tu| |x| with λ the Gershgorin margin of −Q,
        // and χ_t(0) = 0, so every minimiser has |x| ≤ |k + tu| / λ
        let lam = (0..s).map(|i| -q.get(i, i) - (0..s).filter(|&j| j != i).map(|j| q.get(i, j).abs()).sum::<i64>()).min().unwrap();
        let norm_sq: Rational = (0..s).map(|i| { let y = int(k[i]) + t.value() * int(l.u()[i]); &y * &y }).sum();
        let r = rational::ceil_sqrt(&(norm_sq / int(lam * lam))).to_i64().unwrap();
        let mut best: Option<Rational> = None;
        for_box(s, r, |x| {
            let v = ctx.chi_t(&t, x);
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
            points += 1;
        });
        if best.as_ref() != Some(&cert.min_value) || ctx.chi_t(&t, &cert.argmin) != cert.min_value {
            failures.push(format!("case {case}: certificate {} vs exhaustive {best:?}", cert.min_value));
        }
        let f = upsilon::upsilon(&l, &l.class_of(ctx.k()));
        let slopes = f.slopes();
        if !f.is_convex() || slopes.windows(2).any(|w| w[0] > w[1]) {
            failures.push(format!("case {case}: Υ not convex"));
        }
    }
    report(9, &failures, &format!("200 instances, {points} lattice points searched, zero mismatches"));
}

#[test]
fn criterion_10_relations() {
    let mut failures = vec![];
    let mut checked = 0;
    for name in FIXTURE_NAMES {
        let l = lattice(name);
        let w = KeWindow::scaled(&KeForm::from_lattice(&l), 1).unwrap();
        for (i, t) in ["0", "1/3", "2/3", "1", "2"].iter().enumerate() {
            let t = TParam::parse(t).unwrap();
            match relations_audit(&l, None, &t, &w, 50, 10 + i as u64) {
                Ok(r) => checked += r.vertices.iter().map(|v| v.checked).sum::<usize>(),
                Err(e) => failures.push(format!("{name} t = {t}: {e}")),
            }
        }
    }
    report(10, &failures, &format!("{checked} relations on 50 window vectors per fixture and t"));
}
