use std::ffi::{CStr, CString};
use std::ptr;

use impalg_ffi::*;

const E1: &str = "elements: a b 1\n1 1 a\n1 1 1\na b 1\n";

fn parse(text: &str) -> *mut ImpalgTable {
    let c = CString::new(text).unwrap();
    let mut t = ptr::null_mut();
    let s = unsafe { impalg_table_parse(c.as_ptr(), &mut t) };
    assert_eq!(s, ImpalgStatus::Ok);
    assert!(!t.is_null());
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(impalg_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn eval(t: *const ImpalgTable, prop: &str) -> (ImpalgStatus, i32, Vec<u8>) {
    let p = CString::new(prop).unwrap();
    let (mut sat, mut w, mut arity) = (7, [0u8; 3], 9usize);
    let s = unsafe { impalg_eval_property(t, p.as_ptr(), &mut sat, w.as_mut_ptr(), &mut arity) };
    (s, sat, w[..arity.min(3)].to_vec())
}

#[test]
fn parse_eval_free() {
    let t = parse(E1);
    assert_eq!(unsafe { impalg_table_size(t) }, 3);
    let (s, sat, w) = eval(t, "Ex");
    assert_eq!(s, ImpalgStatus::Ok);
    assert_eq!(sat, 0);
    assert_eq!(w, vec![0, 1, 0]);
    let (_, sat, w) = eval(t, "M");
    assert_eq!((sat, w.len()), (1, 0));
    let (_, sat, _) = eval(t, "DN");
    assert_eq!(sat, -1);
    let (s, _, _) = eval(t, "Nope");
    assert_eq!(s, ImpalgStatus::UnknownProperty);
    assert!(last_error().contains("Nope"));
    unsafe { impalg_table_free(t) };
}

#[test]
fn parse_errors() {
    let bad = CString::new("elements: a 1\na\n").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { impalg_table_parse(bad.as_ptr(), &mut t) },
        ImpalgStatus::Parse
    );
    assert!(t.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { impalg_table_parse(ptr::null(), &mut t) },
        ImpalgStatus::NullArgument
    );
    assert_eq!(
        unsafe { impalg_table_parse(bad.as_ptr(), ptr::null_mut()) },
        ImpalgStatus::NullArgument
    );
    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { impalg_table_parse(invalid.as_ptr().cast(), &mut t) },
        ImpalgStatus::InvalidUtf8
    );
    unsafe { impalg_table_free(ptr::null_mut()) };
    assert_eq!(unsafe { impalg_table_size(ptr::null()) }, 0);
}

#[test]
fn classify_into_buffer() {
    let t = parse(E1);
    let mut needed = 0usize;
    let s = unsafe { impalg_classify(t, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(s, ImpalgStatus::BufferTooSmall);
    assert_eq!(needed, "RM".len() + 1);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    let s = unsafe { impalg_classify(t, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!(s, ImpalgStatus::Ok);
    assert_eq!(
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(),
        "RM"
    );
    unsafe { impalg_table_free(t) };
}

#[test]
fn census_counts() {
    let base = CString::new("RM").unwrap();
    let empty = CString::new("").unwrap();
    let (mut count, mut proper) = (0u64, 0u64);
    let s = unsafe {
        impalg_census_count(
            3,
            base.as_ptr(),
            empty.as_ptr(),
            ptr::null(),
            2,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::Ok);
    assert_eq!(count, 81);
    let bck = CString::new("BCK").unwrap();
    let s = unsafe {
        impalg_census_count(
            3,
            base.as_ptr(),
            empty.as_ptr(),
            bck.as_ptr(),
            1,
            &mut count,
            &mut proper,
        )
    };
    assert_eq!(s, ImpalgStatus::Ok);
    assert_eq!((count, proper), (5, 2));
    let hilbert = CString::new("Hilbert").unwrap();
    unsafe {
        impalg_census_count(
            3,
            base.as_ptr(),
            empty.as_ptr(),
            hilbert.as_ptr(),
            1,
            &mut count,
            &mut proper,
        )
    };
    assert_eq!(proper, u64::MAX);
    let filter = CString::new("Re,Ex").unwrap();
    let s = unsafe {
        impalg_census_count(
            3,
            base.as_ptr(),
            filter.as_ptr(),
            ptr::null(),
            1,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::Ok);
    assert!(count > 0 && count < 81);
}

#[test]
fn census_errors() {
    let base = CString::new("RM").unwrap();
    let empty = CString::new("").unwrap();
    let mut count = 0u64;
    let s = unsafe {
        impalg_census_count(
            9,
            base.as_ptr(),
            empty.as_ptr(),
            ptr::null(),
            1,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::SizeTooLarge);
    let s = unsafe {
        impalg_census_count(
            6,
            base.as_ptr(),
            empty.as_ptr(),
            ptr::null(),
            1,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::NeedsPruning);
    let bad = CString::new("XYZ").unwrap();
    let s = unsafe {
        impalg_census_count(
            3,
            bad.as_ptr(),
            empty.as_ptr(),
            ptr::null(),
            1,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::UnknownBase);
    let s = unsafe {
        impalg_census_count(
            3,
            base.as_ptr(),
            empty.as_ptr(),
            bad.as_ptr(),
            1,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::UnknownClass);
    let s = unsafe {
        impalg_census_count(
            3,
            base.as_ptr(),
            bad.as_ptr(),
            ptr::null(),
            1,
            &mut count,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, ImpalgStatus::UnknownProperty);
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/impalg.h")).unwrap();
    for f in [
        "impalg_last_error",
        "impalg_table_parse",
        "impalg_table_free",
        "impalg_table_size",
        "impalg_eval_property",
        "impalg_classify",
        "impalg_census_count",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct ImpalgTable ImpalgTable;"));
    assert!(header.contains("IMPALG_STATUS_BUFFER_TOO_SMALL = 9"));
}
