//! Serializable reports shared by the command line front end and the FFI.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cubecx::{self, Barcode, StabilizeOptions};
use crate::error::{Error, Result};
use crate::kecx::{self, ExactnessReport, KeForm, KeWindow, VerifyOptions};
use crate::plumbing::{IntersectionLattice, PlumbingGraph, SpincClass};
use crate::quadratic::{GradingContext, TParam};
use crate::rational::{self, serde_str, Rational};
use crate::upsilon::{self, minimize_chi, PiecewiseLinearFn, ZemkeReport};
use crate::ENGINE_VERSION;

/// Which Spin^c classes to report on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpincSelector {
    #[default]
    All,
    Index(usize),
}

impl FromStr for SpincSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "all" => Ok(SpincSelector::All),
            x => x.parse().map(SpincSelector::Index).map_err(|_| format!("expected `all` or a class index, got `{x}`")),
        }
    }
}

impl SpincSelector {
    pub fn select(&self, lattice: &IntersectionLattice) -> Result<Vec<SpincClass>> {
        let all = lattice.spinc_classes();
        match *self {
            SpincSelector::All => Ok(all),
            SpincSelector::Index(i) if i < all.len() => Ok(vec![all[i].clone()]),
            SpincSelector::Index(i) => Err(Error::InvalidParams(format!("class index {i} out of range (there are {})", all.len()))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub engine: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit_radius: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_radius: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_cells: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_multiplier: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qmax: Option<i64>,
}

impl Provenance {
    fn new() -> Self {
        Provenance {
            engine: "plumbcalc",
            version: ENGINE_VERSION,
            audit_radius: None,
            t_grid: None,
            box_radius: None,
            max_cells: None,
            window_multiplier: None,
            qmax: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub index: usize,
    pub representative: Vec<i64>,
    pub upsilon: PiecewiseLinearFn,
    pub tau: Rational,
    pub d: Rational,
    pub audit: Option<ZemkeReport>,
    /// `(t, Υ(t))` on the requested grid.
    pub samples: Vec<(Rational, Rational)>,
}

impl Serialize for ClassReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClassReport", 8)?;
        st.serialize_field("index", &self.index)?;
        st.serialize_field("representative", &self.representative)?;
        st.serialize_field("upsilon", &self.upsilon)?;
        st.serialize_field("tau", &rational::format_rational(&self.tau))?;
        st.serialize_field("d", &rational::format_rational(&self.d))?;
        // recomputed here rather than stored
        st.serialize_field("upsilon_at_zero_equals_d", &(self.upsilon.eval(&rational::int(0)) == self.d))?;
        if let Some(a) = &self.audit {
            st.serialize_field("audit", a)?;
        }
        if !self.samples.is_empty() {
            let pairs: Vec<[String; 2]> =
                self.samples.iter().map(|(t, v)| [rational::format_rational(t), rational::format_rational(v)]).collect();
            st.serialize_field("samples", &pairs)?;
        }
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub input: String,
    pub class_count: usize,
    pub bad_vertices: Vec<String>,
    pub classes: Vec<ClassReport>,
    pub provenance: Provenance,
}

/// `Υ`, `τ` and `d` per class, optionally audited against the disk bound on
/// `rep + 2Qz`, `‖z‖_∞ ≤ audit_radius`.
pub fn invariant_report(
    input: &str,
    graph: &PlumbingGraph,
    selector: SpincSelector,
    audit_radius: Option<i64>,
    t_grid: Option<i64>,
) -> Result<InvariantReport> {
    let lattice = graph.lattice()?;
    let classes = selector.select(&lattice)?;
    let grid = match t_grid {
        Some(d) if d <= 0 => return Err(Error::InvalidParams("t-grid denominator must be positive".into())),
        Some(d) => TParam::grid(d),
        None => Vec::new(),
    };
    let out: Vec<Result<ClassReport>> = classes
        .par_iter()
        .map(|class| {
            let f = upsilon::upsilon(&lattice, class);
            let audit = audit_radius.map(|r| upsilon::zemke_audit(&lattice, class, &f, r)).transpose()?;
            Ok(ClassReport {
                index: class.index,
                representative: class.representative.as_slice().to_vec(),
                tau: upsilon::tau(&f),
                d: upsilon::d_invariant(&f),
                samples: grid.iter().map(|t| (t.value().clone(), f.eval(t.value()))).collect(),
                upsilon: f,
                audit,
            })
        })
        .collect();
    let mut provenance = Provenance::new();
    provenance.audit_radius = audit_radius;
    provenance.t_grid = t_grid;
    Ok(InvariantReport {
        input: input.to_string(),
        class_count: lattice.class_count(),
        bad_vertices: graph.bad_vertices(),
        classes: out.into_iter().collect::<Result<_>>()?,
        provenance,
    })
}

/// `t,upsilon,class` rows at the breakpoints and the grid `2m/d`, with exact
/// sidecar columns.
pub fn upsilon_csv(report: &InvariantReport, grid_denominator: i64) -> String {
    let mut out = String::from("t,upsilon,class,t_exact,upsilon_exact\n");
    let grid = TParam::grid(grid_denominator.max(1));
    for c in &report.classes {
        let mut ts: Vec<Rational> = c.upsilon.breakpoints().iter().map(|(t, _)| t.clone()).collect();
        ts.extend(grid.iter().map(|t| t.value().clone()));
        ts.sort();
        ts.dedup();
        for t in ts {
            let v = c.upsilon.eval(&t);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                rational::format_decimal(&t),
                rational::format_decimal(&v),
                c.index,
                rational::format_rational(&t),
                rational::format_rational(&v)
            );
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyClassReport {
    pub index: usize,
    pub representative: Vec<i64>,
    /// `box` for the requested origin box, `stabilized` for a box grown
    /// around the minimiser.
    pub method: &'static str,
    pub box_radius: i64,
    pub center: Vec<i64>,
    pub cells: usize,
    #[serde(with = "rational::serde_str_opt", skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<Rational>,
    pub barcode: Barcode,
    pub reduced: Barcode,
    #[serde(with = "serde_str")]
    pub free_birth: Rational,
    /// `Υ(t)` read off the free bar.
    #[serde(with = "serde_str")]
    pub upsilon: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub input: String,
    pub t: TParam,
    pub classes: Vec<HomologyClassReport>,
    pub provenance: Provenance,
}

fn homology_class(lattice: &IntersectionLattice, class: &SpincClass, t: &TParam, box_radius: Option<i64>, max_cells: u64) -> Result<HomologyClassReport> {
    let ctx = GradingContext::new(lattice, class.representative.clone());
    let free = rational::int(2) * minimize_chi(&ctx, t).min_value;
    let constant = ctx.grading_constant(t);
    if let Some(n) = box_radius {
        let w = cubecx::WeightedComplex::new_box(ctx.clone(), t.clone(), &vec![0; lattice.rank()], n, max_cells)?;
        let b = w.barcode();
        if b.free_birth().ok().as_ref() == Some(&free) {
            return Ok(HomologyClassReport {
                index: class.index,
                representative: class.representative.as_slice().to_vec(),
                method: "box",
                box_radius: n,
                center: vec![0; lattice.rank()],
                cells: w.cell_count(),
                cutoff: None,
                reduced: b.reduced(),
                upsilon: -&free + &constant,
                free_birth: free,
                barcode: b,
            });
        }
    }
    let st = cubecx::stabilize(lattice, class, t, &StabilizeOptions { max_cells, ..Default::default() })?;
    let free_birth = st.barcode.free_birth()?;
    Ok(HomologyClassReport {
        index: class.index,
        representative: class.representative.as_slice().to_vec(),
        method: "stabilized",
        box_radius: st.n,
        center: st.center.clone(),
        cells: st.cells,
        cutoff: Some(st.cutoff.clone()),
        reduced: st.barcode.reduced(),
        upsilon: -&free_birth + &constant,
        free_birth,
        barcode: st.barcode,
    })
}

/// Barcodes at one `t` per class. A given origin box is used when it already
/// holds the free bar; otherwise the box is grown around the minimiser.
pub fn homology_report(
    input: &str,
    graph: &PlumbingGraph,
    selector: SpincSelector,
    t: &TParam,
    box_radius: Option<i64>,
    max_cells: u64,
) -> Result<HomologyReport> {
    let lattice = graph.lattice()?;
    let classes = selector.select(&lattice)?;
    let out: Vec<Result<HomologyClassReport>> =
        classes.par_iter().map(|c| homology_class(&lattice, c, t, box_radius, max_cells)).collect();
    let mut provenance = Provenance::new();
    provenance.box_radius = box_radius;
    provenance.max_cells = Some(max_cells);
    Ok(HomologyReport { input: input.to_string(), t: t.clone(), classes: out.into_iter().collect::<Result<_>>()?, provenance })
}

/// `class,degree,birth,length` rows; infinite bars have length `inf`.
pub fn homology_csv(report: &HomologyReport) -> String {
    let mut out = String::from("class,degree,birth,length,birth_exact,length_exact\n");
    for c in &report.classes {
        for (d, bars) in c.barcode.degrees().iter().enumerate() {
            for b in bars {
                let (len, len_exact) = match &b.length {
                    Some(l) => (rational::format_decimal(l), rational::format_rational(l)),
                    None => ("inf".into(), "inf".into()),
                };
                let _ = writeln!(out, "{},{},{},{},{},{}", c.index, d, rational::format_decimal(&b.birth), len, rational::format_rational(&b.birth), len_exact);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub input: String,
    pub pass: bool,
    #[serde(flatten)]
    pub exactness: ExactnessReport,
    pub provenance: Provenance,
}

/// Exactness checks for the surgery sequence at `vertex`. The report is
/// returned even when a check fails; callers decide how to surface it.
pub fn verify_report(input: &str, graph: &PlumbingGraph, vertex: &str, t: &TParam, multiplier: Option<i64>, qmax: i64) -> Result<VerifyReport> {
    let lattice = graph.lattice()?;
    let mut opts = VerifyOptions { qmax, ..Default::default() };
    if let Some(w) = multiplier {
        opts.multiplier = w;
    }
    let exactness = kecx::run_exactness_checks(&lattice, vertex, t, &opts)?;
    let mut provenance = Provenance::new();
    provenance.window_multiplier = Some(opts.multiplier);
    provenance.qmax = Some(qmax);
    Ok(VerifyReport { input: input.to_string(), pass: exactness.passed(), exactness, provenance })
}

/// The default `[K, E]` window of a graph.
pub fn default_window(graph: &PlumbingGraph, multiplier: i64) -> Result<KeWindow> {
    KeWindow::scaled(&KeForm::from_lattice(&graph.lattice()?), multiplier)
}
