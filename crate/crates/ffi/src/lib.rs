//! C ABI for the discrete-homotopy library.
//!
//! Every fallible call returns a [`DhStatus`]; on failure the message is
//! available from [`dh_last_error`] on the same thread. Strings handed out
//! by the library must be released with [`dh_string_free`], handles with
//! their own `*_free`.

use discrete_homotopy::covering::verify_r_covering;
use discrete_homotopy::fpgroup::{abelianize, identify, Presentation};
use discrete_homotopy::fundamental::cw_presentation;
use discrete_homotopy::graph::{BasedGraph, Graph, GraphJson, GraphMap, GraphMapJson, GraphRef};
use discrete_homotopy::ncomplex::{homology, neighborhood_complex};
use discrete_homotopy::obstruct::{find_hom, HomSearch};
use discrete_homotopy::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DhStatus {
    Ok = 0,
    Param = 1,
    Lookup = 2,
    Validation = 3,
    Precondition = 4,
    Budget = 5,
    Parse = 6,
    Internal = 7,
    Io = 8,
    NullPointer = 9,
    Panic = 10,
}

/// Opaque graph handle.
pub struct DhGraph {
    inner: Graph,
}

/// Opaque graph-map handle.
pub struct DhMap {
    inner: GraphMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DhStatus {
    match e {
        Error::Param(_) => DhStatus::Param,
        Error::Lookup(_) => DhStatus::Lookup,
        Error::Validation(_) => DhStatus::Validation,
        Error::Precondition(_) => DhStatus::Precondition,
        Error::Budget(_) => DhStatus::Budget,
        Error::Parse(_) => DhStatus::Parse,
        Error::Internal(_) => DhStatus::Internal,
        Error::Io(_) => DhStatus::Io,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Lib(Error::Parse(e.to_string()))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DhStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            DhStatus::NullPointer
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            DhStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail::Lib(Error::Parse(format!("{what}: {e}"))))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    *out = v;
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul removed")
        .into_raw()
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn dh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph from a family spec such as `cycle,5` or `petersen`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_from_family(
    spec: *const c_char,
    out: *mut *mut DhGraph,
) -> DhStatus {
    guard(|| {
        let spec = text(spec, "spec")?;
        let g = GraphRef::Named(format!("family:{spec}")).resolve(Path::new("."))?;
        put(out, Box::into_raw(Box::new(DhGraph { inner: g })), "out")
    })
}

/// Builds a graph from its JSON form (`vertices`, `edges`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_from_json(
    json: *const c_char,
    out: *mut *mut DhGraph,
) -> DhStatus {
    guard(|| {
        let gj: GraphJson = serde_json::from_str(text(json, "json")?)?;
        put(
            out,
            Box::into_raw(Box::new(DhGraph {
                inner: gj.to_graph()?,
            })),
            "out",
        )
    })
}

/// # Safety
/// `g` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_free(g: *mut DhGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_vertex_count(g: *const DhGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_edge_count(g: *const DhGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_graph_to_json(g: *const DhGraph, out: *mut *mut c_char) -> DhStatus {
    guard(|| {
        let g = handle(g, "graph")?;
        let s = serde_json::to_string(&GraphJson::from_graph(&g.inner, None))?;
        put(out, c_string(s), "out")
    })
}

/// Reads a map from JSON (`domain`, `codomain`, `map`). Graph references
/// are resolved against the current directory.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_map_from_json(json: *const c_char, out: *mut *mut DhMap) -> DhStatus {
    guard(|| {
        let mj: GraphMapJson = serde_json::from_str(text(json, "json")?)?;
        put(
            out,
            Box::into_raw(Box::new(DhMap {
                inner: mj.to_map(Path::new("."))?,
            })),
            "out",
        )
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dh_map_to_json(m: *const DhMap, out: *mut *mut c_char) -> DhStatus {
    guard(|| {
        let m = handle(m, "map")?;
        put(
            out,
            c_string(serde_json::to_string(&GraphMapJson::from_map(&m.inner))?),
            "out",
        )
    })
}

/// # Safety
/// `m` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dh_map_free(m: *mut DhMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Presentation of π₁^r(G, base) as `<x1,... | ...>`.
///
/// # Safety
/// `g` must be a live handle, `base` a NUL-terminated id, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_pi1_presentation(
    g: *const DhGraph,
    base: *const c_char,
    r: usize,
    out: *mut *mut c_char,
) -> DhStatus {
    guard(|| {
        let bg = BasedGraph::new(handle(g, "graph")?.inner.clone(), text(base, "base")?)?;
        put(
            out,
            c_string(cw_presentation(&bg, r)?.presentation.to_string()),
            "out",
        )
    })
}

/// Name of π₁^r(G, base): `Z`, `F2`, `Z/2`, `1`, ... A result that the
/// coset budget could not certify is still written and the call returns
/// `Budget`.
///
/// # Safety
/// `g` must be a live handle, `base` a NUL-terminated id, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_pi1_identify(
    g: *const DhGraph,
    base: *const c_char,
    r: usize,
    max_cosets: usize,
    out: *mut *mut c_char,
) -> DhStatus {
    guard(|| {
        let bg = BasedGraph::new(handle(g, "graph")?.inner.clone(), text(base, "base")?)?;
        let id = identify(&cw_presentation(&bg, r)?.presentation, max_cosets);
        put(out, c_string(id.to_string()), "out")?;
        if id.is_certified() {
            Ok(())
        } else {
            Err(Error::Budget("group not certified within the coset budget".into()).into())
        }
    })
}

/// Identifies a presentation `<a,b | ...>` and writes
/// `{"group": ..., "abelianization": ...}`.
///
/// # Safety
/// `presentation` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_group_identify(
    presentation: *const c_char,
    max_cosets: usize,
    out: *mut *mut c_char,
) -> DhStatus {
    guard(|| {
        let p = Presentation::parse(text(presentation, "presentation")?)?;
        let v = serde_json::json!({
            "group": identify(&p, max_cosets).to_string(),
            "abelianization": abelianize(&p).to_string(),
        });
        put(out, c_string(v.to_string()), "out")
    })
}

/// Checks that `m` is an r-covering. `pass` receives 1 or 0; `report`, if
/// not NULL, receives the certificate as JSON.
///
/// # Safety
/// `m` must be a live handle; `pass` writable; `report` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn dh_cover_verify(
    m: *const DhMap,
    r: usize,
    pass: *mut i32,
    report: *mut *mut c_char,
) -> DhStatus {
    guard(|| {
        let c = verify_r_covering(&handle(m, "map")?.inner, r);
        put(pass, c.pass as i32, "pass")?;
        if !report.is_null() {
            *report = c_string(serde_json::to_string(&c)?);
        }
        Ok(())
    })
}

/// Searches for a graph map G → H. On success `out` holds a new map, or
/// NULL when none exists. `Budget` means the search gave up after `cap`
/// nodes.
///
/// # Safety
/// `g`, `h` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_find_hom(
    g: *const DhGraph,
    h: *const DhGraph,
    cap: u64,
    out: *mut *mut DhMap,
) -> DhStatus {
    guard(|| {
        let (g, h) = (handle(g, "source")?, handle(h, "target")?);
        put(out, ptr::null_mut(), "out")?;
        match find_hom(&g.inner, &h.inner, cap) {
            HomSearch::Found(f) => put(out, Box::into_raw(Box::new(DhMap { inner: f })), "out"),
            HomSearch::None => Ok(()),
            HomSearch::Inconclusive { nodes } => {
                Err(Error::Budget(format!("search stopped after {nodes} nodes")).into())
            }
        }
    })
}

/// Homology of N_r(G) through degree 2 as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dh_ncomplex_homology(
    g: *const DhGraph,
    r: usize,
    out: *mut *mut c_char,
) -> DhStatus {
    guard(|| {
        let c = neighborhood_complex(&handle(g, "graph")?.inner, r)?;
        put(out, c_string(serde_json::to_string(&homology(&c))?), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn owned(p: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
        unsafe { dh_string_free(p) };
        s
    }

    fn graph(spec: &str) -> *mut DhGraph {
        let c = CString::new(spec).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(
            unsafe { dh_graph_from_family(c.as_ptr(), &mut g) },
            DhStatus::Ok
        );
        g
    }

    #[test]
    fn pi1_through_the_abi() {
        let g = graph("cycle,5");
        assert_eq!(unsafe { dh_graph_vertex_count(g) }, 5);
        assert_eq!(unsafe { dh_graph_edge_count(g) }, 5);
        let base = CString::new("0").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            unsafe { dh_pi1_identify(g, base.as_ptr(), 2, 10_000, &mut s) },
            DhStatus::Ok
        );
        assert_eq!(owned(s), "Z");
        assert_eq!(
            unsafe { dh_pi1_identify(g, base.as_ptr(), 5, 10_000, &mut s) },
            DhStatus::Ok
        );
        assert_eq!(owned(s), "Z/2");
        assert_eq!(
            unsafe { dh_pi1_presentation(g, base.as_ptr(), 2, &mut s) },
            DhStatus::Ok
        );
        assert!(owned(s).starts_with('<'));
        unsafe { dh_graph_free(g) };
    }

    #[test]
    fn errors_are_reported() {
        let bad = CString::new("nosuchfamily,3").unwrap();
        let mut g = ptr::null_mut();
        let st = unsafe { dh_graph_from_family(bad.as_ptr(), &mut g) };
        assert_ne!(st, DhStatus::Ok);
        assert!(g.is_null());
        assert!(!dh_last_error().is_null());
        let st = unsafe { dh_graph_from_family(ptr::null(), &mut g) };
        assert_eq!(st, DhStatus::NullPointer);
        let c5 = graph("cycle,5");
        let base = CString::new("zz").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            unsafe { dh_pi1_identify(c5, base.as_ptr(), 2, 100, &mut s) },
            DhStatus::Lookup
        );
        unsafe { dh_graph_free(c5) };
    }

    #[test]
    fn maps_and_coverings() {
        let c10 = graph("cycle,10");
        let c5 = graph("cycle,5");
        let mut m = ptr::null_mut();
        assert_eq!(
            unsafe { dh_find_hom(c10, c5, 1_000_000, &mut m) },
            DhStatus::Ok
        );
        assert!(!m.is_null());
        let mut pass = -1;
        assert_eq!(
            unsafe { dh_cover_verify(m, 1, &mut pass, ptr::null_mut()) },
            DhStatus::Ok
        );
        assert!(pass == 0 || pass == 1);
        unsafe { dh_map_free(m) };

        let json = CString::new(
            r#"{"domain":"family:cycle,10","codomain":"family:cycle,5",
               "map":{"0":"0","1":"1","2":"2","3":"3","4":"4","5":"0","6":"1","7":"2","8":"3","9":"4"}}"#,
        )
        .unwrap();
        assert_eq!(
            unsafe { dh_map_from_json(json.as_ptr(), &mut m) },
            DhStatus::Ok
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            unsafe { dh_cover_verify(m, 7, &mut pass, &mut report) },
            DhStatus::Ok
        );
        assert_eq!(pass, 1);
        assert!(owned(report).contains("\"pass\":true"));
        unsafe { dh_map_free(m) };

        let k3 = graph("complete,3");
        let k2 = graph("complete,2");
        assert_eq!(
            unsafe { dh_find_hom(k3, k2, 1_000_000, &mut m) },
            DhStatus::Ok
        );
        assert!(m.is_null());
        for g in [c10, c5, k3, k2] {
            unsafe { dh_graph_free(g) };
        }
    }

    #[test]
    fn json_round_trip_and_groups() {
        let g = graph("petersen");
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { dh_graph_to_json(g, &mut s) }, DhStatus::Ok);
        let text = CString::new(owned(s)).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(
            unsafe { dh_graph_from_json(text.as_ptr(), &mut h) },
            DhStatus::Ok
        );
        assert_eq!(
            unsafe { (dh_graph_vertex_count(h), dh_graph_edge_count(h)) },
            (10, 15)
        );
        assert_eq!(unsafe { dh_ncomplex_homology(h, 2, &mut s) }, DhStatus::Ok);
        assert!(owned(s).contains("h1"));
        let p = CString::new("<a,b | a^2, b^3, (ab)^2>").unwrap();
        assert_eq!(
            unsafe { dh_group_identify(p.as_ptr(), 1000, &mut s) },
            DhStatus::Ok
        );
        assert!(owned(s).contains("order 6"));
        unsafe {
            dh_graph_free(g);
            dh_graph_free(h);
        }
    }
}
