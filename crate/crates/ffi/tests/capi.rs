use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use flasque_ffi::*;
use serde_json::Value;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_json(p: *mut c_char) -> Value {
    assert!(!p.is_null());
    let v = serde_json::from_str(CStr::from_ptr(p).to_str().unwrap()).unwrap();
    flq_string_free(p);
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(flq_last_error()).to_str().unwrap().to_string() }
}

#[test]
fn group_handles() {
    unsafe {
        let mut g: *mut FlqGroup = ptr::null_mut();
        assert_eq!(flq_group_from_catalog(c("S3").as_ptr(), &mut g), FlqStatus::Ok);
        let mut n = 0usize;
        assert_eq!(flq_group_order(g, &mut n), FlqStatus::Ok);
        assert_eq!(n, 6);

        let mut text = ptr::null_mut();
        assert_eq!(flq_group_to_json(g, &mut text), FlqStatus::Ok);
        let doc = CString::new(serde_json::to_string(&take_json(text)).unwrap()).unwrap();
        let mut h: *mut FlqGroup = ptr::null_mut();
        assert_eq!(flq_group_from_json(doc.as_ptr(), &mut h), FlqStatus::Ok);
        assert_eq!(flq_group_order(h, &mut n), FlqStatus::Ok);
        assert_eq!(n, 6);

        flq_group_free(g);
        flq_group_free(h);
        flq_group_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g: *mut FlqGroup = ptr::null_mut();
        assert_eq!(flq_group_from_catalog(c("NotAGroup").as_ptr(), &mut g), FlqStatus::InvalidInput);
        assert!(g.is_null());
        assert!(last_error().contains("unknown group name"));

        assert_eq!(flq_group_from_catalog(ptr::null(), &mut g), FlqStatus::NullPointer);
        assert_eq!(flq_group_order(ptr::null(), ptr::null_mut()), FlqStatus::NullPointer);

        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(flq_group_from_catalog(bad.as_ptr().cast(), &mut g), FlqStatus::Utf8);

        assert_eq!(flq_group_from_json(c("{\"table\": [[0, 1], [1, 1]]}").as_ptr(), &mut g), FlqStatus::InvalidInput);

        // the order bound is a resource error, not an input error
        let mut m: *mut FlqLattice = ptr::null_mut();
        assert_eq!(flq_lattice_lenstra(9, &mut m), FlqStatus::InvalidInput);
        assert_eq!(flq_group_from_catalog(c("C64xC64").as_ptr(), &mut g), FlqStatus::Resource);

        assert_eq!(flq_group_from_catalog(c("C4").as_ptr(), &mut g), FlqStatus::Ok);
        assert_eq!(last_error(), "");
        flq_group_free(g);
    }
}

#[test]
fn lattices_and_verdicts() {
    unsafe {
        let mut m: *mut FlqLattice = ptr::null_mut();
        assert_eq!(flq_lattice_lenstra(3, &mut m), FlqStatus::Ok);
        let mut r = 0usize;
        assert_eq!(flq_lattice_rank(m, &mut r), FlqStatus::Ok);
        assert_eq!(r, 7);

        let mut text = ptr::null_mut();
        assert_eq!(flq_lattice_profile_json(m, true, &mut text), FlqStatus::Ok);
        let prof = take_json(text);
        assert_eq!(prof["is_flabby"], false);
        assert_eq!(prof["is_coflabby"], true);

        let mut inv = true;
        assert_eq!(flq_lattice_is_invertible(m, &mut inv), FlqStatus::Ok);
        assert!(!inv);

        assert_eq!(flq_torus_verdict_json(m, &mut text), FlqStatus::Ok);
        let v = take_json(text);
        assert_eq!(v["answer"], "No");
        assert_eq!(v["trace"][0]["cite"], "Theorem 2.8");

        assert_eq!(flq_lattice_resolve_json(m, &mut text), FlqStatus::Ok);
        let res = take_json(text);
        assert_eq!(res["M"]["rank"], 7);

        let mut g: *mut FlqGroup = ptr::null_mut();
        assert_eq!(flq_lattice_group(m, &mut g), FlqStatus::Ok);
        let mut n = 0usize;
        flq_group_order(g, &mut n);
        assert_eq!(n, 4);
        flq_group_free(g);
        flq_lattice_free(m);

        assert_eq!(flq_lattice_from_json(c("regular:S3").as_ptr(), &mut m), FlqStatus::Ok);
        assert_eq!(flq_lattice_is_invertible(m, &mut inv), FlqStatus::Ok);
        assert!(inv);
        assert_eq!(flq_lattice_invertibility_json(m, &mut text), FlqStatus::Ok);
        assert!(take_json(text)["witness"].is_array());
        assert_eq!(flq_multiplicative_verdict_json(m, c("Q").as_ptr(), &mut text), FlqStatus::Ok);
        assert_eq!(take_json(text)["answer"], "Yes");
        flq_lattice_free(m);

        let sign = c(r#"{"group": "C2", "rank": 1, "action": {"1": [[-1]]}}"#);
        assert_eq!(flq_lattice_from_json(sign.as_ptr(), &mut m), FlqStatus::Ok);
        assert_eq!(flq_lattice_to_json(m, &mut text), FlqStatus::Ok);
        assert_eq!(take_json(text)["rank"], 1);
        flq_lattice_free(m);
    }
}

#[test]
fn noether_and_monomial() {
    unsafe {
        let mut g: *mut FlqGroup = ptr::null_mut();
        flq_group_from_catalog(c("C8").as_ptr(), &mut g);
        let mut text = ptr::null_mut();
        assert_eq!(flq_noether_verdict_json(g, c("Q").as_ptr(), &mut text), FlqStatus::Ok);
        let v = take_json(text);
        assert_eq!(v["answer"], "No");
        assert_eq!(v["trace"][0]["cite"], "Theorem 2.9");

        assert_eq!(flq_noether_verdict_json(g, c("C").as_ptr(), &mut text), FlqStatus::Ok);
        assert_eq!(take_json(text)["answer"], "Yes");

        let field = c(r#"{"name": "F", "characteristic": 2}"#);
        assert_eq!(flq_noether_verdict_json(g, field.as_ptr(), &mut text), FlqStatus::Ok);
        assert_eq!(take_json(text)["answer"], "Yes");

        assert_eq!(flq_noether_verdict_json(g, c("R").as_ptr(), &mut text), FlqStatus::InvalidInput);
        assert_eq!(flq_monomial_universal_verdict_json(g, &mut text), FlqStatus::Ok);
        assert_eq!(take_json(text)["answer"], "Yes");
        flq_group_free(g);

        let action = c(r#"{"lattice": "regular:C3", "d": 1}"#);
        assert_eq!(flq_monomial_verdict_json(action.as_ptr(), c("Q").as_ptr(), &mut text), FlqStatus::Ok);
        assert_eq!(take_json(text)["answer"], "Yes");
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(flq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/flasque.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["flq_group_from_catalog", "flq_lattice_is_invertible", "flq_string_free", "FLQ_STATUS_RESOURCE"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"flasque.h\"\nint main(void) { FlqGroup *g = 0; return flq_group_from_catalog(\"C2\", &g) == FLQ_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler; skipping");
            return;
        }
    };
    assert!(status.success());
}
