//! C ABI for the gauge-certify toolkit.
//!
//! Conventions:
//! - Handles (`GcBody`, `GcOracle`, `GcGraph`) are opaque; create them with
//!   the `gc_*_new`-style constructors and release them with the matching
//!   `gc_*_free`. Freeing a null pointer is a no-op.
//! - Every fallible call returns a [`GcStatus`]; on failure
//!   [`gc_last_error_message`] holds a thread-local description valid until
//!   the next failing call on the same thread.
//! - Points and covectors are `double` buffers of the handle's dimension,
//!   owned by the caller. Extended values use IEEE infinity.
//! - Strings returned through `char **` are NUL-terminated, allocated by this
//!   library, and must be released with [`gc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gauge_certify::barrier::{Barrier, BarrierWithLinear};
use gauge_certify::bodies::{ConvexBody, PNorm};
use gauge_certify::certify::{certify_convexity, envelope, minty_test, monotonicity_check,
    CertifyOptions, MonoVerdict};
use gauge_certify::cli::certification_report_json;
use gauge_certify::error::Error;
use gauge_certify::expr::expr_oracle;
use gauge_certify::grid::{DomainBox, Grid};
use gauge_certify::registry;
use gauge_certify::subdiff::{sample_graph, FunctionOracle, SampleOptions, SubgradientGraph};
use gauge_certify::variational::{ekeland, minimization_trace, TraceConfig};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    InvalidInput = 1,
    OutOfDomain = 2,
    EmptyGraph = 3,
    PreconditionFailed = 4,
    InternalError = 5,
    NullPointer = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Norm order for ball bodies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcPNorm {
    Inf = 0,
    One = 1,
    Two = 2,
}

/// Opaque convex body handle.
pub struct GcBody {
    inner: ConvexBody,
}

/// Opaque function oracle handle.
pub struct GcOracle {
    inner: FunctionOracle,
}

/// Opaque subdifferential graph handle.
pub struct GcGraph {
    inner: SubgradientGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error message had NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> GcStatus {
    match err {
        Error::InvalidInput(_) => GcStatus::InvalidInput,
        Error::OutOfDomain(_) => GcStatus::OutOfDomain,
        Error::EmptyGraph(_) => GcStatus::EmptyGraph,
        Error::Precondition { .. } => GcStatus::PreconditionFailed,
        Error::Internal(_) => GcStatus::InternalError,
    }
}

fn fail(err: Error) -> GcStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn null_arg(name: &str) -> GcStatus {
    set_error(format!("argument '{name}' is null"));
    GcStatus::NullPointer
}

/// Runs a closure, converting panics into a status instead of unwinding
/// across the FFI boundary.
fn guarded(f: impl FnOnce() -> GcStatus) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            GcStatus::Panic
        }
    }
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, GcStatus> {
    if ptr.is_null() {
        return Err(GcStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8".into());
        GcStatus::InvalidUtf8
    })
}

fn box_out<T>(value: T, out: *mut *mut T) -> GcStatus {
    unsafe { *out = Box::into_raw(Box::new(value)) };
    GcStatus::Ok
}

fn string_out(text: String, out: *mut *mut c_char) -> GcStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            GcStatus::Ok
        }
        Err(_) => {
            set_error("output string had interior NUL".into());
            GcStatus::InternalError
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last error on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Frees a string allocated by this library.
///
/// # Safety
/// `s` must come from a `char **` out-parameter of this library and must not
/// have been freed already.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Bodies
// ---------------------------------------------------------------------------

/// Creates the open p-norm ball of the given radius.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_body_ball(
    dim: usize,
    radius: f64,
    p: GcPNorm,
    out: *mut *mut GcBody,
) -> GcStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let p = match p {
            GcPNorm::One => PNorm::One,
            GcPNorm::Two => PNorm::Two,
            GcPNorm::Inf => PNorm::Inf,
        };
        match ConvexBody::ball(dim, radius, p) {
            Ok(b) => box_out(GcBody { inner: b }, out),
            Err(e) => fail(e),
        }
    })
}

/// Creates the polytope `{ x : <a_i, x> < 1 }` from `n_normals` rows of
/// length `dim` stored row-major in `normals`.
///
/// # Safety
/// `normals` must hold `n_normals * dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_body_polytope(
    dim: usize,
    n_normals: usize,
    normals: *const f64,
    out: *mut *mut GcBody,
) -> GcStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let Some(flat) = slice_arg(normals, n_normals * dim) else {
            return null_arg("normals");
        };
        let rows: Vec<Vec<f64>> = flat.chunks(dim.max(1)).map(|c| c.to_vec()).collect();
        match ConvexBody::polytope(rows) {
            Ok(b) => box_out(GcBody { inner: b }, out),
            Err(e) => fail(e),
        }
    })
}

/// Creates the segment tube `([p, q] + delta B°) − {p}` (anchor at the
/// origin).
///
/// # Safety
/// `p` and `q` must hold `dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_body_tube(
    dim: usize,
    p: *const f64,
    q: *const f64,
    delta: f64,
    out: *mut *mut GcBody,
) -> GcStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let (Some(p), Some(q)) = (slice_arg(p, dim), slice_arg(q, dim)) else {
            return null_arg("p/q");
        };
        match ConvexBody::tube(p, q, delta) {
            Ok(b) => box_out(GcBody { inner: b }, out),
            Err(e) => fail(e),
        }
    })
}

/// Dimension of the body (0 for null).
///
/// # Safety
/// `body` must be null or a live handle from a body constructor.
#[no_mangle]
pub unsafe extern "C" fn gc_body_dim(body: *const GcBody) -> usize {
    if body.is_null() {
        return 0;
    }
    (*body).inner.dim()
}

/// Releases a body handle.
///
/// # Safety
/// `body` must come from a body constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gc_body_free(body: *mut GcBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// Minkowski gauge of the body at `x` (`len == dim`). `out_proximity` may be
/// null; when given it receives `1 − value` inside the body and 0 outside.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gc_gauge(
    body: *const GcBody,
    x: *const f64,
    len: usize,
    out_value: *mut f64,
    out_proximity: *mut f64,
) -> GcStatus {
    guarded(|| {
        if body.is_null() {
            return null_arg("body");
        }
        if out_value.is_null() {
            return null_arg("out_value");
        }
        let Some(x) = slice_arg(x, len) else {
            return null_arg("x");
        };
        match (*body).inner.gauge(x) {
            Ok(g) => {
                *out_value = g.value;
                if !out_proximity.is_null() {
                    *out_proximity = g.boundary_proximity;
                }
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// A Fenchel subgradient of the gauge at `x`; writes `len` doubles to `out`.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gc_gauge_subgradient(
    body: *const GcBody,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> GcStatus {
    guarded(|| {
        if body.is_null() {
            return null_arg("body");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(x) = slice_arg(x, len) else {
            return null_arg("x");
        };
        match (*body).inner.gauge_subgradient(x) {
            Ok(g) => {
                std::ptr::copy_nonoverlapping(g.as_ptr(), out, g.len());
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Euclidean sandwich radii `inner·B ⊂ U ⊂ outer·B`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_radius_bounds(
    body: *const GcBody,
    out_inner: *mut f64,
    out_outer: *mut f64,
) -> GcStatus {
    guarded(|| {
        if body.is_null() {
            return null_arg("body");
        }
        if out_inner.is_null() || out_outer.is_null() {
            return null_arg("out_inner/out_outer");
        }
        let rb = (*body).inner.radius_bounds();
        *out_inner = rb.inner;
        *out_outer = rb.outer;
        GcStatus::Ok
    })
}

/// Scaled barrier `scale·mu/(1−mu)` at `x`; `+inf` outside the body.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gc_barrier_eval(
    body: *const GcBody,
    scale: f64,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> GcStatus {
    guarded(|| {
        if body.is_null() {
            return null_arg("body");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(x) = slice_arg(x, len) else {
            return null_arg("x");
        };
        let bar = match Barrier::new((*body).inner.clone(), scale) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        match bar.eval(x) {
            Ok(v) => {
                *out = v;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Barrier subgradient at `x` (requires gauge < 1); writes `len` doubles.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gc_barrier_subgradient(
    body: *const GcBody,
    scale: f64,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> GcStatus {
    guarded(|| {
        if body.is_null() {
            return null_arg("body");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(x) = slice_arg(x, len) else {
            return null_arg("x");
        };
        let bar = match Barrier::new((*body).inner.clone(), scale) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        match bar.subgradient(x) {
            Ok(g) => {
                std::ptr::copy_nonoverlapping(g.as_ptr(), out, g.len());
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Certified Lipschitz constant of the barrier on `{ k <= level }`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_barrier_level_lipschitz(
    body: *const GcBody,
    scale: f64,
    level: f64,
    out: *mut f64,
) -> GcStatus {
    guarded(|| {
        if body.is_null() {
            return null_arg("body");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let bar = match Barrier::new((*body).inner.clone(), scale) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        match bar.level_lipschitz(level) {
            Ok(l) => {
                *out = l;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

unsafe fn make_domain(dim: usize, lo: *const f64, hi: *const f64) -> Result<DomainBox, GcStatus> {
    let (Some(lo), Some(hi)) = (slice_arg(lo, dim), slice_arg(hi, dim)) else {
        return Err(null_arg("lo/hi"));
    };
    DomainBox::new(lo.to_vec(), hi.to_vec()).map_err(fail)
}

/// Creates a registry oracle (`quadratic`, `abs`, `neg_abs`, `cube`,
/// `max_affine`, `indicator_box`, `step`) on the box `[lo, hi]`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `lo`/`hi` hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn gc_oracle_registry(
    name: *const c_char,
    dim: usize,
    lo: *const f64,
    hi: *const f64,
    out: *mut *mut GcOracle,
) -> GcStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let name = match str_arg(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let domain = match make_domain(dim, lo, hi) {
            Ok(d) => d,
            Err(status) => return status,
        };
        match registry::by_name(name, domain) {
            Ok(f) => box_out(GcOracle { inner: f }, out),
            Err(e) => fail(e),
        }
    })
}

/// Creates an oracle from a custom expression (see docs/functions.md).
///
/// # Safety
/// `expr` must be a NUL-terminated string; `lo`/`hi` hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn gc_oracle_expr(
    expr: *const c_char,
    dim: usize,
    lo: *const f64,
    hi: *const f64,
    out: *mut *mut GcOracle,
) -> GcStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let src = match str_arg(expr) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let domain = match make_domain(dim, lo, hi) {
            Ok(d) => d,
            Err(status) => return status,
        };
        match expr_oracle(src, domain) {
            Ok(f) => box_out(GcOracle { inner: f }, out),
            Err(e) => fail(e),
        }
    })
}

/// Dimension of the oracle's domain (0 for null).
///
/// # Safety
/// `oracle` must be null or a live handle from an oracle constructor.
#[no_mangle]
pub unsafe extern "C" fn gc_oracle_dim(oracle: *const GcOracle) -> usize {
    if oracle.is_null() {
        return 0;
    }
    (*oracle).inner.dim()
}

/// Evaluates the oracle; `+inf` is a legal result.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gc_oracle_eval(
    oracle: *const GcOracle,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> GcStatus {
    guarded(|| {
        if oracle.is_null() {
            return null_arg("oracle");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(x) = slice_arg(x, len) else {
            return null_arg("x");
        };
        match (*oracle).inner.eval_checked(x) {
            Ok(v) => {
                *out = v;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases an oracle handle.
///
/// # Safety
/// `oracle` must come from an oracle constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gc_oracle_free(oracle: *mut GcOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

// ---------------------------------------------------------------------------
// Graphs and checks
// ---------------------------------------------------------------------------

fn sample_options(lambdas: &[f64], tilt_count: usize) -> SampleOptions {
    let mut opts = SampleOptions::default();
    if !lambdas.is_empty() {
        opts.lambdas = lambdas.to_vec();
    }
    if tilt_count > 0 {
        opts.tilt_count = tilt_count;
    }
    opts
}

/// Samples the proximal subdifferential graph of the oracle over its domain
/// grid. Pass `n_lambdas = 0` / `tilt_count = 0` for the defaults
/// (λ ∈ {0.1, 0.01}, 5 tilts per axis).
///
/// # Safety
/// `lambdas` must hold `n_lambdas` doubles (may be null when `n_lambdas` is
/// 0); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_sample_graph(
    oracle: *const GcOracle,
    resolution: usize,
    lambdas: *const f64,
    n_lambdas: usize,
    tilt_count: usize,
    out: *mut *mut GcGraph,
) -> GcStatus {
    guarded(|| {
        if oracle.is_null() {
            return null_arg("oracle");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let lam = if n_lambdas == 0 {
            &[][..]
        } else {
            match slice_arg(lambdas, n_lambdas) {
                Some(s) => s,
                None => return null_arg("lambdas"),
            }
        };
        let f = &(*oracle).inner;
        let grid = match Grid::new(f.domain().clone(), resolution) {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        match sample_graph(f, &grid, &sample_options(lam, tilt_count)) {
            Ok(g) => box_out(GcGraph { inner: g }, out),
            Err(e) => fail(e),
        }
    })
}

/// Number of samples in the graph (0 for null).
///
/// # Safety
/// `graph` must be null or a live handle from `gc_sample_graph`.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_len(graph: *const GcGraph) -> usize {
    if graph.is_null() {
        return 0;
    }
    (*graph).inner.len()
}

/// Copies sample `index` into `out_x`/`out_xstar` (each `dim` doubles) and
/// `out_fx`.
///
/// # Safety
/// Buffers must hold the graph's dimension; `index < gc_graph_len`.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_sample(
    graph: *const GcGraph,
    index: usize,
    out_x: *mut f64,
    out_xstar: *mut f64,
    out_fx: *mut f64,
) -> GcStatus {
    guarded(|| {
        if graph.is_null() {
            return null_arg("graph");
        }
        if out_x.is_null() || out_xstar.is_null() || out_fx.is_null() {
            return null_arg("out_x/out_xstar/out_fx");
        }
        let samples = (*graph).inner.samples();
        let Some(s) = samples.get(index) else {
            set_error(format!("sample index {index} out of range {}", samples.len()));
            return GcStatus::InvalidInput;
        };
        std::ptr::copy_nonoverlapping(s.x.as_ptr(), out_x, s.x.len());
        std::ptr::copy_nonoverlapping(s.xstar.as_ptr(), out_xstar, s.xstar.len());
        *out_fx = s.fx;
        GcStatus::Ok
    })
}

/// Releases a graph handle.
///
/// # Safety
/// `graph` must come from `gc_sample_graph` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_free(graph: *mut GcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Exact pairwise monotonicity sweep. `out_worst` receives the minimum
/// pairing product (`+inf` when the graph has fewer than two samples).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_monotonicity_check(
    graph: *const GcGraph,
    tol: f64,
    out_monotone: *mut bool,
    out_worst: *mut f64,
) -> GcStatus {
    guarded(|| {
        if graph.is_null() {
            return null_arg("graph");
        }
        if out_monotone.is_null() || out_worst.is_null() {
            return null_arg("out_monotone/out_worst");
        }
        match monotonicity_check(&(*graph).inner, tol) {
            Ok(rep) => {
                *out_monotone = rep.verdict == MonoVerdict::Monotone;
                *out_worst = rep.worst_value;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Monotone-relation test of the probe `(x0, x0star)` against the graph.
///
/// # Safety
/// `x0`/`x0star` must hold `len` doubles; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_minty_test(
    graph: *const GcGraph,
    x0: *const f64,
    x0star: *const f64,
    len: usize,
    tol: f64,
    out_related: *mut bool,
    out_worst: *mut f64,
) -> GcStatus {
    guarded(|| {
        if graph.is_null() {
            return null_arg("graph");
        }
        if out_related.is_null() || out_worst.is_null() {
            return null_arg("out_related/out_worst");
        }
        let (Some(x0), Some(x0star)) = (slice_arg(x0, len), slice_arg(x0star, len)) else {
            return null_arg("x0/x0star");
        };
        match minty_test(&(*graph).inner, x0, x0star, tol) {
            Ok(rep) => {
                *out_related = rep.related;
                *out_worst = rep.worst_value;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Subgradient envelope `max { f(x) + <x*, xbar − x> }` over the graph.
///
/// # Safety
/// `xbar` must hold `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_envelope(
    graph: *const GcGraph,
    xbar: *const f64,
    len: usize,
    out: *mut f64,
) -> GcStatus {
    guarded(|| {
        if graph.is_null() {
            return null_arg("graph");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let Some(xbar) = slice_arg(xbar, len) else {
            return null_arg("xbar");
        };
        match envelope(&(*graph).inner, xbar) {
            Ok(v) => {
                *out = v;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the full convexity certification pipeline and returns the report as
/// a JSON string (same shape as the CLI; see docs/report.schema.json).
///
/// # Safety
/// `lambdas` as in [`gc_sample_graph`]; `out_json` must be valid and the
/// result freed with [`gc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gc_certify_json(
    oracle: *const GcOracle,
    resolution: usize,
    lambdas: *const f64,
    n_lambdas: usize,
    tilt_count: usize,
    out_json: *mut *mut c_char,
) -> GcStatus {
    guarded(|| {
        if oracle.is_null() {
            return null_arg("oracle");
        }
        if out_json.is_null() {
            return null_arg("out_json");
        }
        let lam = if n_lambdas == 0 {
            &[][..]
        } else {
            match slice_arg(lambdas, n_lambdas) {
                Some(s) => s,
                None => return null_arg("lambdas"),
            }
        };
        let opts = CertifyOptions {
            resolution: if resolution >= 2 { resolution } else { 201 },
            sample: sample_options(lam, tilt_count),
            ..Default::default()
        };
        match certify_convexity(&(*oracle).inner, &opts) {
            Ok(rep) => string_out(certification_report_json(&rep).to_string(), out_json),
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Variational
// ---------------------------------------------------------------------------

/// Constructive Ekeland principle over `grid ∩ body`; writes the terminal
/// point into `out_y` (`len` doubles) and its value into `out_fy`.
///
/// # Safety
/// Buffers must hold `len` doubles matching the oracle dimension.
#[no_mangle]
pub unsafe extern "C" fn gc_ekeland(
    oracle: *const GcOracle,
    body: *const GcBody,
    resolution: usize,
    start: *const f64,
    len: usize,
    eps: f64,
    lambda: f64,
    out_y: *mut f64,
    out_fy: *mut f64,
) -> GcStatus {
    guarded(|| {
        if oracle.is_null() || body.is_null() {
            return null_arg("oracle/body");
        }
        if out_y.is_null() || out_fy.is_null() {
            return null_arg("out_y/out_fy");
        }
        let Some(start) = slice_arg(start, len) else {
            return null_arg("start");
        };
        let f = &(*oracle).inner;
        let grid = match Grid::new(f.domain().clone(), resolution) {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        match ekeland(f, &(*body).inner, &grid, start, eps, lambda) {
            Ok(res) => {
                std::ptr::copy_nonoverlapping(res.y.as_ptr(), out_y, res.y.len());
                *out_fy = res.fy;
                GcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the instrumented minimization trace for `f + scale·k(· − anchor) −
/// <linear, · − anchor>` and returns the full record as a JSON string.
///
/// # Safety
/// `linear`/`anchor` must hold `len` doubles; `out_json` as in
/// [`gc_certify_json`].
#[no_mangle]
pub unsafe extern "C" fn gc_trace_json(
    oracle: *const GcOracle,
    body: *const GcBody,
    scale: f64,
    linear: *const f64,
    anchor: *const f64,
    len: usize,
    n_max: usize,
    base_resolution: usize,
    out_json: *mut *mut c_char,
) -> GcStatus {
    guarded(|| {
        if oracle.is_null() || body.is_null() {
            return null_arg("oracle/body");
        }
        if out_json.is_null() {
            return null_arg("out_json");
        }
        let (Some(linear), Some(anchor)) = (slice_arg(linear, len), slice_arg(anchor, len))
        else {
            return null_arg("linear/anchor");
        };
        let bar = match Barrier::new((*body).inner.clone(), scale) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        let g = match BarrierWithLinear::new(bar, linear.to_vec()) {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        let cfg = TraceConfig {
            n_max: if n_max == 0 { 12 } else { n_max },
            base_resolution: if base_resolution >= 2 { base_resolution } else { 101 },
            ..Default::default()
        };
        match minimization_trace(&(*oracle).inner, &(*body).inner, &g, anchor, &cfg) {
            Ok(rec) => match serde_json::to_string(&rec) {
                Ok(text) => string_out(text, out_json),
                Err(e) => {
                    set_error(format!("serialization failed: {e}"));
                    GcStatus::InternalError
                }
            },
            Err(e) => fail(e),
        }
    })
}
