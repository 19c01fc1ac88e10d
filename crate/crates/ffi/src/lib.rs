//! C ABI for `flasque`.
//!
//! Groups and lattices live behind opaque handles. Every fallible function
//! returns an [`FlqStatus`]; on failure the message is available from
//! [`flq_last_error`] on the same thread. Strings handed out by the library
//! are NUL-terminated UTF-8 and must be released with [`flq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use flasque::cohomology::{profile, SubgroupMode};
use flasque::groups::{catalog, group_to_value, parse_group, FiniteGroup};
use flasque::lattices::{lattice_to_value, lenstra_lattice, parse_lattice, GLattice};
use flasque::monomial::parse_monomial_action;
use flasque::resolutions::{flabby_resolution, is_invertible};
use flasque::verdict::{
    monomial_instance_verdict, monomial_universal_verdict, multiplicative_verdict, noether_verdict, torus_verdict,
    FieldDescriptor,
};
use flasque::Error;
use serde_json::Value;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// A size bound was exceeded.
    Resource = 3,
    /// An internal consistency check failed.
    Internal = 4,
    /// An input string was not valid UTF-8.
    Utf8 = 5,
    /// The library panicked; the handle arguments should be considered lost.
    Panic = 6,
}

/// Opaque group handle.
pub struct FlqGroup {
    inner: Arc<FiniteGroup>,
}

/// Opaque lattice handle.
pub struct FlqLattice {
    inner: GLattice,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(FlqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Resource(_) => FlqStatus::Resource,
            Error::Internal(_) => FlqStatus::Internal,
            _ => FlqStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(FlqStatus::InvalidInput, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FlqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FlqStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            FlqStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(FlqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(FlqStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn group_ref<'a>(p: *const FlqGroup) -> Result<&'a FlqGroup, Fail> {
    p.as_ref().ok_or_else(|| null("group"))
}

unsafe fn lattice_ref<'a>(p: *const FlqLattice) -> Result<&'a FlqLattice, Fail> {
    p.as_ref().ok_or_else(|| null("lattice"))
}

unsafe fn give_string(out: *mut *mut c_char, v: &Value) -> Result<(), Fail> {
    let out = out_ptr(out, "out")?;
    let text = serde_json::to_string(v)?;
    *out = CString::new(text).expect("JSON has no NUL bytes").into_raw();
    Ok(())
}

/// `"Q"`, `"C"`, `"custom:<path>"`, or a field descriptor as JSON text.
fn parse_field(s: &str) -> Result<FieldDescriptor, Fail> {
    if s.trim_start().starts_with('{') {
        return Ok(FieldDescriptor::from_value(&serde_json::from_str(s)?)?);
    }
    Ok(flasque::cli::parse_field(s)?)
}

/// JSON text, or a bare name that is not valid JSON.
fn parse_doc(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn flq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn flq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_group_from_catalog(name: *const c_char, out: *mut *mut FlqGroup) -> FlqStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let out = out_ptr(out, "out")?;
        let g = catalog(name)?;
        *out = Box::into_raw(Box::new(FlqGroup { inner: Arc::new(g) }));
        Ok(())
    })
}

/// A group document, or a catalog name as a JSON string.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_group_from_json(json: *const c_char, out: *mut *mut FlqGroup) -> FlqStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let out = out_ptr(out, "out")?;
        let g = parse_group(&serde_json::from_str(text)?)?;
        *out = Box::into_raw(Box::new(FlqGroup { inner: Arc::new(g) }));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_group_order(g: *const FlqGroup, out: *mut usize) -> FlqStatus {
    guard(|| {
        let g = group_ref(g)?;
        *out_ptr(out, "out")? = g.inner.order();
        Ok(())
    })
}

/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_group_to_json(g: *const FlqGroup, out: *mut *mut c_char) -> FlqStatus {
    guard(|| give_string(out, &group_to_value(&group_ref(g)?.inner)))
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flq_group_free(g: *mut FlqGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// A lattice document, or a lattice name such as `lenstra:3` (bare or as a
/// JSON string).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_from_json(json: *const c_char, out: *mut *mut FlqLattice) -> FlqStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let out = out_ptr(out, "out")?;
        let m = parse_lattice(&parse_doc(text))?;
        *out = Box::into_raw(Box::new(FlqLattice { inner: m }));
        Ok(())
    })
}

/// The lattice `I_q` for `q = 2^n`, `2 <= n <= 6`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_lenstra(n: u32, out: *mut *mut FlqLattice) -> FlqStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let m = lenstra_lattice(n)?.m;
        *out = Box::into_raw(Box::new(FlqLattice { inner: m }));
        Ok(())
    })
}

/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_rank(m: *const FlqLattice, out: *mut usize) -> FlqStatus {
    guard(|| {
        let m = lattice_ref(m)?;
        *out_ptr(out, "out")? = m.inner.rank();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_to_json(m: *const FlqLattice, out: *mut *mut c_char) -> FlqStatus {
    guard(|| give_string(out, &lattice_to_value(&lattice_ref(m)?.inner)))
}

/// A new handle for the group the lattice is defined over.
///
/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_group(m: *const FlqLattice, out: *mut *mut FlqGroup) -> FlqStatus {
    guard(|| {
        let m = lattice_ref(m)?;
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(FlqGroup { inner: m.inner.group().clone() }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_free(m: *mut FlqLattice) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Ĥ⁻¹ and H¹ over prime-power subgroups, or over all subgroups when
/// `all_subgroups` is true.
///
/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_profile_json(
    m: *const FlqLattice,
    all_subgroups: bool,
    out: *mut *mut c_char,
) -> FlqStatus {
    guard(|| {
        let mode = if all_subgroups { SubgroupMode::All } else { SubgroupMode::PrimePower };
        let p = profile(&lattice_ref(m)?.inner, mode)?;
        give_string(out, &p.to_value())
    })
}

/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_resolve_json(m: *const FlqLattice, out: *mut *mut c_char) -> FlqStatus {
    guard(|| give_string(out, &flabby_resolution(&lattice_ref(m)?.inner)?.to_value()))
}

/// Writes whether the lattice is a direct summand of a permutation lattice.
///
/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_is_invertible(m: *const FlqLattice, out: *mut bool) -> FlqStatus {
    guard(|| {
        let m = lattice_ref(m)?;
        let out = out_ptr(out, "out")?;
        *out = is_invertible(&m.inner)?.invertible;
        Ok(())
    })
}

/// The full decision, with witness section when invertible.
///
/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_lattice_invertibility_json(m: *const FlqLattice, out: *mut *mut c_char) -> FlqStatus {
    guard(|| give_string(out, &is_invertible(&lattice_ref(m)?.inner)?.to_value()))
}

/// Verdict on `k(G)`. `field` is `"Q"`, `"C"`, `"custom:<path>"` or a
/// field descriptor as JSON text.
///
/// # Safety
/// `g` must be a live group handle, `field` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn flq_noether_verdict_json(
    g: *const FlqGroup,
    field: *const c_char,
    out: *mut *mut c_char,
) -> FlqStatus {
    guard(|| {
        let g = group_ref(g)?;
        let k = parse_field(read_str(field, "field")?)?;
        give_string(out, &noether_verdict(&g.inner, &k)?.to_value())
    })
}

/// # Safety
/// `m` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_torus_verdict_json(m: *const FlqLattice, out: *mut *mut c_char) -> FlqStatus {
    guard(|| give_string(out, &torus_verdict(&lattice_ref(m)?.inner)?.to_value()))
}

/// Verdict on `k(M)^G`.
///
/// # Safety
/// `m` must be a live lattice handle, `field` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn flq_multiplicative_verdict_json(
    m: *const FlqLattice,
    field: *const c_char,
    out: *mut *mut c_char,
) -> FlqStatus {
    guard(|| {
        let m = lattice_ref(m)?;
        let k = parse_field(read_str(field, "field")?)?;
        give_string(out, &multiplicative_verdict(&m.inner, &k)?.to_value())
    })
}

/// Verdict over `C` on every monomial action of `G`.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn flq_monomial_universal_verdict_json(g: *const FlqGroup, out: *mut *mut c_char) -> FlqStatus {
    guard(|| give_string(out, &monomial_universal_verdict(&group_ref(g)?.inner).to_value()))
}

/// Verdict on one monomial action given as a JSON document.
///
/// # Safety
/// `action` and `field` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn flq_monomial_verdict_json(
    action: *const c_char,
    field: *const c_char,
    out: *mut *mut c_char,
) -> FlqStatus {
    guard(|| {
        let a = parse_monomial_action(&serde_json::from_str(read_str(action, "action")?)?)?;
        let k = parse_field(read_str(field, "field")?)?;
        give_string(out, &monomial_instance_verdict(&a, &k)?.to_value())
    })
}
