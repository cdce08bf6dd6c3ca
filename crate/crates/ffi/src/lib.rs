//! C ABI over the plumbcalc engines.
//!
//! Graphs and upsilon functions are opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PcStatus`]; on failure [`pc_last_error_message`] describes the error
//! for the calling thread. Rationals cross the boundary as `int64_t`
//! numerator/denominator pairs in lowest terms.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use plumbcalc::report::{self, SpincSelector};
use plumbcalc::{fixtures, rational, upsilon, Error, PiecewiseLinearFn, PlumbingGraph, Rational};

/// Status codes. Values 2 to 5 match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    /// Parse or validation error, bad parameter, violated hypothesis, I/O.
    InvalidInput = 2,
    NotNegativeDefinite = 3,
    /// Complex too large or no free part in the truncation.
    Capacity = 4,
    /// A failed audit, exactness or grading check.
    CheckFailed = 5,
    NullArgument = 10,
    OutOfRange = 11,
    /// A rational does not fit in `int64_t`.
    Overflow = 12,
    Internal = 13,
}

impl From<&Error> for PcStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            3 => PcStatus::NotNegativeDefinite,
            4 => PcStatus::Capacity,
            5 => PcStatus::CheckFailed,
            _ => PcStatus::InvalidInput,
        }
    }
}

/// A parsed plumbing graph with its intersection lattice.
pub struct PcGraph {
    graph: PlumbingGraph,
    lattice: plumbcalc::IntersectionLattice,
}

/// `Υ(t)` of one Spin^c class.
pub struct PcUpsilon {
    f: PiecewiseLinearFn,
    tau: Rational,
    d: Rational,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: PcStatus, msg: &str) -> PcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> PcStatus) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PcStatus::Internal, "internal panic"),
    }
}

fn from_error(e: Error) -> PcStatus {
    fail(PcStatus::from(&e), &e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PcStatus> {
    if s.is_null() {
        return Err(fail(PcStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(PcStatus::InvalidInput, "string is not UTF-8"))
}

unsafe fn write_pair(r: &Rational, num: *mut i64, den: *mut i64) -> PcStatus {
    if num.is_null() || den.is_null() {
        return fail(PcStatus::NullArgument, "null output pointer");
    }
    match rational::to_i64_pair(r) {
        Some((n, d)) => {
            *num = n;
            *den = d;
            PcStatus::Ok
        }
        None => fail(PcStatus::Overflow, "rational does not fit in int64_t"),
    }
}

fn into_graph(graph: PlumbingGraph, out: *mut *mut PcGraph) -> PcStatus {
    match graph.lattice() {
        Ok(lattice) => {
            unsafe { *out = Box::into_raw(Box::new(PcGraph { graph, lattice })) };
            PcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();
    VERSION.as_ptr() as *const c_char
}

/// Parses a graph in the text or JSON format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_parse(text: *const c_char, out: *mut *mut PcGraph) -> PcStatus {
    guard(|| {
        if out.is_null() {
            return fail(PcStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match PlumbingGraph::parse(text) {
            Ok(g) => into_graph(g, out),
            Err(e) => from_error(e),
        }
    })
}

/// Loads a built-in fixture by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_load_fixture(name: *const c_char, out: *mut *mut PcGraph) -> PcStatus {
    guard(|| {
        if out.is_null() {
            return fail(PcStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match fixtures::load(name) {
            Ok(g) => into_graph(g, out),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `g` must come from `pc_graph_parse` or `pc_graph_load_fixture`, or be null.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_free(g: *mut PcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of Spin^c classes, `|det Q|`.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_class_count(g: *const PcGraph, out: *mut usize) -> PcStatus {
    if g.is_null() || out.is_null() {
        return fail(PcStatus::NullArgument, "null argument");
    }
    *out = (*g).lattice.class_count();
    PcStatus::Ok
}

/// Computes `Υ(t)` for class `class_index`.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_upsilon(g: *const PcGraph, class_index: usize, out: *mut *mut PcUpsilon) -> PcStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(PcStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let lattice = &(*g).lattice;
        let classes = lattice.spinc_classes();
        let Some(class) = classes.get(class_index) else {
            return fail(PcStatus::OutOfRange, &format!("class index {class_index} out of range ({} classes)", classes.len()));
        };
        let f = upsilon::upsilon(lattice, class);
        let (tau, d) = (upsilon::tau(&f), upsilon::d_invariant(&f));
        *out = Box::into_raw(Box::new(PcUpsilon { f, tau, d }));
        PcStatus::Ok
    })
}

/// # Safety
/// `u` must be a live upsilon handle.
#[no_mangle]
pub unsafe extern "C" fn pc_upsilon_breakpoint_count(u: *const PcUpsilon) -> usize {
    if u.is_null() {
        return 0;
    }
    (*u).f.breakpoints().len()
}

/// Breakpoint `i` as `(t, Υ(t))`.
///
/// # Safety
/// `u` must be a live upsilon handle and the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pc_upsilon_breakpoint(
    u: *const PcUpsilon,
    i: usize,
    t_num: *mut i64,
    t_den: *mut i64,
    v_num: *mut i64,
    v_den: *mut i64,
) -> PcStatus {
    if u.is_null() {
        return fail(PcStatus::NullArgument, "null handle");
    }
    let Some((t, v)) = (*u).f.breakpoints().get(i) else {
        return fail(PcStatus::OutOfRange, "breakpoint index out of range");
    };
    match write_pair(t, t_num, t_den) {
        PcStatus::Ok => write_pair(v, v_num, v_den),
        s => s,
    }
}

/// `τ = −Υ'(0⁺)`.
///
/// # Safety
/// `u` must be a live upsilon handle and the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pc_upsilon_tau(u: *const PcUpsilon, num: *mut i64, den: *mut i64) -> PcStatus {
    if u.is_null() {
        return fail(PcStatus::NullArgument, "null handle");
    }
    write_pair(&(*u).tau, num, den)
}

/// `d = Υ(0)`.
///
/// # Safety
/// `u` must be a live upsilon handle and the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pc_upsilon_d(u: *const PcUpsilon, num: *mut i64, den: *mut i64) -> PcStatus {
    if u.is_null() {
        return fail(PcStatus::NullArgument, "null handle");
    }
    write_pair(&(*u).d, num, den)
}

/// # Safety
/// `u` must come from `pc_upsilon`, or be null.
#[no_mangle]
pub unsafe extern "C" fn pc_upsilon_free(u: *mut PcUpsilon) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// The invariants report for all classes as JSON. `audit_radius <= 0`
/// skips the disk bound audit. Release the string with `pc_string_free`.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_invariants_json(g: *const PcGraph, audit_radius: i64, out: *mut *mut c_char) -> PcStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(PcStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let audit = (audit_radius > 0).then_some(audit_radius);
        let r = match report::invariant_report("graph", &(*g).graph, SpincSelector::All, audit, None) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        match serde_json::to_string(&r) {
            Ok(s) => {
                *out = CString::new(s).expect("JSON has no NUL").into_raw();
                PcStatus::Ok
            }
            Err(e) => fail(PcStatus::Internal, &e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
