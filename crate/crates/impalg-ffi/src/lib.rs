//! C interface to `impalg`.
//!
//! Every fallible call returns an [`ImpalgStatus`]. On failure the message
//! for the calling thread is available through [`impalg_last_error`].
//! Tables are opaque handles owned by the caller and released with
//! [`impalg_table_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use impalg::classes::{classify, registry};
use impalg::io::parse_any;
use impalg::props::{eval_all, eval_property};
use impalg::search::{census_filtered, BaseConstraint, SearchError};
use impalg::{PropSet, PropertyId, Table};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpalgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownProperty = 4,
    UnknownBase = 5,
    UnknownClass = 6,
    SizeTooLarge = 7,
    NeedsPruning = 8,
    BufferTooSmall = 9,
    Internal = 10,
}

/// Opaque operation table.
pub struct ImpalgTable {
    inner: Table,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: ImpalgStatus, msg: impl Into<String>) -> ImpalgStatus {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

fn guard(f: impl FnOnce() -> ImpalgStatus) -> ImpalgStatus {
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(ImpalgStatus::Internal, "internal panic"))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, ImpalgStatus> {
    if p.is_null() {
        return Err(fail(ImpalgStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ImpalgStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn parse_filter(list: &str) -> Result<PropSet, ImpalgStatus> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<PropertyId>()
                .map_err(|e| fail(ImpalgStatus::UnknownProperty, e.to_string()))
        })
        .collect()
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn impalg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a table in the text or structured format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn impalg_table_parse(
    text: *const c_char,
    out: *mut *mut ImpalgTable,
) -> ImpalgStatus {
    guard(|| {
        if out.is_null() {
            return fail(ImpalgStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_any(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(ImpalgTable { inner: p.table }));
                ImpalgStatus::Ok
            }
            Err(e) => fail(ImpalgStatus::Parse, e.to_string()),
        }
    })
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `table` must come from [`impalg_table_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn impalg_table_free(table: *mut ImpalgTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn impalg_table_size(table: *const ImpalgTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.size())
}

/// Evaluates one property. `satisfied` receives 1 or 0, or -1 for a
/// bounded property on a table without zero. When the property fails, the
/// element indices of the witness go to `witness` and their count to
/// `arity`; otherwise `arity` is 0.
///
/// # Safety
/// All pointers must be valid; `witness` must have room for 3 entries.
#[no_mangle]
pub unsafe extern "C" fn impalg_eval_property(
    table: *const ImpalgTable,
    property: *const c_char,
    satisfied: *mut i32,
    witness: *mut u8,
    arity: *mut usize,
) -> ImpalgStatus {
    guard(|| {
        let Some(t) = table.as_ref() else {
            return fail(ImpalgStatus::NullArgument, "null table");
        };
        if satisfied.is_null() || witness.is_null() || arity.is_null() {
            return fail(ImpalgStatus::NullArgument, "null output pointer");
        }
        let prop = match str_arg(property).and_then(|s| {
            s.parse::<PropertyId>()
                .map_err(|e| fail(ImpalgStatus::UnknownProperty, e.to_string()))
        }) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let r = eval_property(&t.inner, prop);
        *satisfied = if r.applicable {
            i32::from(r.satisfied)
        } else {
            -1
        };
        *arity = 0;
        if let Some(w) = r.witness {
            for (i, &e) in w.vars().iter().enumerate() {
                *witness.add(i) = e;
            }
            *arity = w.vars().len();
        }
        ImpalgStatus::Ok
    })
}

/// Writes the comma-separated ids of all classes containing the table into
/// `buf` (NUL-terminated). `needed` receives the required capacity
/// including the terminator; a short buffer yields `BufferTooSmall`.
///
/// # Safety
/// `buf` must have room for `cap` bytes; `needed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn impalg_classify(
    table: *const ImpalgTable,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> ImpalgStatus {
    guard(|| {
        let Some(t) = table.as_ref() else {
            return fail(ImpalgStatus::NullArgument, "null table");
        };
        if needed.is_null() {
            return fail(ImpalgStatus::NullArgument, "null output pointer");
        }
        let text = classify(&eval_all(&t.inner)).join(",");
        *needed = text.len() + 1;
        if buf.is_null() || cap < text.len() + 1 {
            return fail(ImpalgStatus::BufferTooSmall, "buffer too small");
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        ImpalgStatus::Ok
    })
}

/// Counts tables of size `n` over `base` satisfying every property in the
/// comma-separated `filter` (may be empty). With a null `class` the total
/// goes to `count`; otherwise the members of that class, and `proper`
/// (if non-null) receives the proper-member count or `UINT64_MAX` when the
/// class has no proper variant.
///
/// # Safety
/// String arguments must be NUL-terminated; `class` and `proper` may be null.
#[no_mangle]
pub unsafe extern "C" fn impalg_census_count(
    n: usize,
    base: *const c_char,
    filter: *const c_char,
    class: *const c_char,
    jobs: usize,
    count: *mut u64,
    proper: *mut u64,
) -> ImpalgStatus {
    guard(|| {
        if count.is_null() {
            return fail(ImpalgStatus::NullArgument, "null output pointer");
        }
        let base = match str_arg(base).and_then(|s| {
            s.parse::<BaseConstraint>()
                .map_err(|e| fail(ImpalgStatus::UnknownBase, e.to_string()))
        }) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let filter = match str_arg(filter).and_then(parse_filter) {
            Ok(f) => f,
            Err(s) => return s,
        };
        let class = if class.is_null() {
            None
        } else {
            match str_arg(class).and_then(|c| {
                registry()
                    .lookup(c)
                    .map_err(|e| fail(ImpalgStatus::UnknownClass, e.to_string()))
            }) {
                Ok(d) => Some(d.id),
                Err(s) => return s,
            }
        };
        let report = match census_filtered(n, base, filter, jobs.max(1)) {
            Ok(r) => r,
            Err(e) => {
                let status = match e {
                    SearchError::SizeTooLarge(_) => ImpalgStatus::SizeTooLarge,
                    SearchError::NeedsPruning => ImpalgStatus::NeedsPruning,
                    _ => ImpalgStatus::Internal,
                };
                return fail(status, e.to_string());
            }
        };
        match class {
            None => *count = report.total,
            Some(id) => {
                *count = report
                    .per_class
                    .iter()
                    .find(|(c, _)| *c == id)
                    .map_or(0, |&(_, k)| k);
                if !proper.is_null() {
                    *proper = report.proper(id).unwrap_or(u64::MAX);
                }
            }
        }
        ImpalgStatus::Ok
    })
}
