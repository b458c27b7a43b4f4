//! C interface to `minmatch`.
//!
//! Graphs are opaque handles created by `mm_graph_parse` and released with
//! `mm_graph_free`. Every fallible call returns an `MmStatus`; on failure
//! the message is available from `mm_last_error_message` on the same
//! thread. Strings returned through out-parameters are owned by the caller
//! and must be released with `mm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use minmatch::canon::canonical_form;
use minmatch::family::{classify, search_family, SearchConfig};
use minmatch::matching::{count_matchings, is_minimally_k_matchable};
use minmatch::reduction::reduce;
use minmatch::{Error, Multigraph};

/// Opaque multigraph handle.
pub struct MmGraph(Multigraph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    DomainError = 5,
    ResourceGuard = 6,
    Panic = 7,
}

/// Result of the minimally-k-matchable test.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MmMinimality {
    pub k: u64,
    pub is_k_matchable: bool,
    pub is_minimal: bool,
    pub has_witness: bool,
    /// Edge id whose deletion keeps k matchings; valid when `has_witness`.
    pub witness_edge: usize,
    /// Matching count, capped at 2k - 1.
    pub count: u64,
    pub count_exact: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MmStatus {
    match e {
        Error::Syntax { .. } | Error::LoopEdge { .. } | Error::VertexOutOfRange { .. } => MmStatus::ParseError,
        Error::InvalidArgument(_) => MmStatus::InvalidArgument,
        Error::ResourceGuard { .. } => MmStatus::ResourceGuard,
        _ => MmStatus::DomainError,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guarded<F>(f: F) -> MmStatus
where
    F: FnOnce() -> Result<(), (MmStatus, String)> + UnwindSafe,
{
    match catch_unwind(f) {
        Ok(Ok(())) => MmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MmStatus::Panic
        }
    }
}

fn fail(e: Error) -> (MmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MmStatus, String) {
    (MmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const MmGraph) -> Result<&'a Multigraph, (MmStatus, String)> {
    // SAFETY: the caller passes a handle from mm_graph_parse or null.
    unsafe { g.as_ref() }.map(|h| &h.0).ok_or_else(|| null("graph"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (MmStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (MmStatus::DomainError, "string contains a nul byte".to_string()))?;
    // SAFETY: checked non-null above; the caller provides writable storage.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Parses mg-v1 text into a new graph handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_graph_parse(text: *const c_char, out: *mut *mut MmGraph) -> MmStatus {
    guarded(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        // SAFETY: non-null and nul-terminated per the contract.
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|e| (MmStatus::InvalidUtf8, e.to_string()))?;
        let g = Multigraph::parse(text).map_err(fail)?;
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(MmGraph(g))) };
        Ok(())
    })
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `g` must come from `mm_graph_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mm_graph_free(g: *mut MmGraph) {
    if !g.is_null() {
        // SAFETY: ownership returns to Rust exactly once per the contract.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_graph_vertex_count(g: *const MmGraph, out: *mut usize) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        // SAFETY: checked non-null.
        unsafe { out.as_mut() }.map(|o| *o = g.vertex_count()).ok_or_else(|| null("output pointer"))
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_graph_edge_count(g: *const MmGraph, out: *mut usize) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        // SAFETY: checked non-null.
        unsafe { out.as_mut() }.map(|o| *o = g.edge_count()).ok_or_else(|| null("output pointer"))
    })
}

/// Counts perfect matchings, stopping at `cap` unless it is zero.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_count_matchings(g: *const MmGraph, cap: u64, out: *mut u64) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        let cap = (cap != 0).then_some(cap);
        // SAFETY: checked non-null.
        unsafe { out.as_mut() }
            .map(|o| *o = count_matchings(g, cap))
            .ok_or_else(|| null("output pointer"))
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_minimality(g: *const MmGraph, k: u64, out: *mut MmMinimality) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        if k == 0 {
            return Err((MmStatus::InvalidArgument, "k must be positive".into()));
        }
        let v = is_minimally_k_matchable(g, k);
        let r = MmMinimality {
            k,
            is_k_matchable: v.is_k_matchable,
            is_minimal: v.is_minimal,
            has_witness: v.witness_edge.is_some(),
            witness_edge: v.witness_edge.map_or(0, |e| e.0),
            count: v.count,
            count_exact: v.count_exact,
        };
        // SAFETY: checked non-null.
        unsafe { out.as_mut() }.map(|o| *o = r).ok_or_else(|| null("output pointer"))
    })
}

/// Writes the reduction trace as JSON.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_reduce_json(g: *const MmGraph, out: *mut *mut c_char) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        let json = serde_json::to_string(&reduce(g)).expect("trace serializes");
        unsafe { write_string(out, json) }
    })
}

/// Writes the classification record as JSON.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_classify_json(g: *const MmGraph, k: u64, out: *mut *mut c_char) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        let c = classify(g, k).map_err(fail)?;
        unsafe { write_string(out, serde_json::to_string(&c).expect("record serializes")) }
    })
}

/// Writes the canonical mg-v1 text and the automorphism group order,
/// saturated at `UINT64_MAX`. `out_automorphisms` may be null.
///
/// # Safety
/// `g` must be a live handle, `out_canonical` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_canonical_form(
    g: *const MmGraph,
    out_canonical: *mut *mut c_char,
    out_automorphisms: *mut u64,
) -> MmStatus {
    guarded(|| {
        let g = unsafe { graph_ref(g) }?;
        let form = canonical_form(g).map_err(fail)?;
        unsafe { write_string(out_canonical, form.canonical) }?;
        // SAFETY: null is allowed and skipped.
        if let Some(a) = unsafe { out_automorphisms.as_mut() } {
            *a = u64::try_from(form.automorphism_count).unwrap_or(u64::MAX);
        }
        Ok(())
    })
}

/// Runs the family search and writes the report as JSON. `workers = 0`
/// uses every available core.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_search_family_json(
    k: u64,
    max_vertices: usize,
    workers: usize,
    out: *mut *mut c_char,
) -> MmStatus {
    guarded(|| {
        let mut cfg = SearchConfig::new(k, max_vertices);
        if workers != 0 {
            cfg.worker_count = workers;
        }
        let report = search_family(&cfg).map_err(fail)?;
        unsafe { write_string(out, serde_json::to_string(&report).expect("report serializes")) }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mm_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in write_string.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
