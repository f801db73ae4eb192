//! C ABI over the `morita` library.
//!
//! Objects cross the boundary as opaque handles; structured results cross as
//! canonical JSON strings owned by the library and released with
//! [`morita_string_free`]. Every function returns a [`MoritaStatus`]; on
//! anything but `Ok` or `Failed`, [`morita_last_error_message`] describes the
//! error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use morita::context::{ContextObject, MatrixRing};
use morita::gallery::{self, GalleryOptions};
use morita::spec::{canonical_json, Named, SpecBuilder, Workspace};
use morita::surgery::{certify_equivalence, Surgery, SurgeryResult};
use morita::tensor::TensorSpace;
use morita::{Error, FieldSpec};
use serde_json::{json, Value};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoritaStatus {
    Ok = 0,
    /// A verification failed or a certificate was refused.
    Failed = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    Io = 4,
    Parse = 5,
    UnresolvedReference = 6,
    MalformedInput = 7,
    FieldMismatch = 8,
    AlgebraMismatch = 9,
    CornerMismatch = 10,
    ContextInvalid = 11,
    BadPrime = 12,
    InvariantViolated = 13,
    OtherInput = 14,
    Panic = 15,
}

/// A loaded spec file.
pub struct MoritaWorkspace {
    inner: Workspace,
}

/// The outcome of one corner replacement.
pub struct MoritaSurgery {
    field: FieldSpec,
    context: String,
    result: SurgeryResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MoritaStatus {
    match e {
        Error::Parse { .. } => MoritaStatus::Parse,
        Error::UnresolvedReference(_) => MoritaStatus::UnresolvedReference,
        Error::MalformedInput(_) => MoritaStatus::MalformedInput,
        Error::FieldMismatch { .. } => MoritaStatus::FieldMismatch,
        Error::AlgebraMismatch(_) | Error::WrongArity { .. } => MoritaStatus::AlgebraMismatch,
        Error::CornerMismatch(_) => MoritaStatus::CornerMismatch,
        Error::ContextInvalid(_) => MoritaStatus::ContextInvalid,
        Error::BadPrime(_) => MoritaStatus::BadPrime,
        Error::InvariantViolated(_) => MoritaStatus::InvariantViolated,
        _ => MoritaStatus::OtherInput,
    }
}

struct Fail(MoritaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Outcome<T> = Result<T, Fail>;

fn guard(f: impl FnOnce() -> Outcome<MoritaStatus>) -> MoritaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            MoritaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(Fail(MoritaStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(MoritaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref().ok_or_else(|| Fail(MoritaStatus::NullArgument, format!("{what} is null")))
}

/// Stores `doc` in `*out` when `out` is not null.
unsafe fn emit(out: *mut *mut c_char, doc: &Value) {
    if !out.is_null() {
        let s = CString::new(canonical_json(doc)).expect("JSON has no nul bytes");
        *out = s.into_raw();
    }
}

fn verdict(pass: bool) -> MoritaStatus {
    if pass {
        MoritaStatus::Ok
    } else {
        MoritaStatus::Failed
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn morita_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent error on this thread; valid until the next
/// failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn morita_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must be null or a string produced by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn morita_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a spec document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_workspace_load(json: *const c_char, out: *mut *mut MoritaWorkspace) -> MoritaStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(MoritaStatus::NullArgument, "out is null".into()));
        }
        let w = Workspace::load(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(MoritaWorkspace { inner: w }));
        Ok(MoritaStatus::Ok)
    })
}

/// Reads and parses a spec file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_workspace_load_file(
    path: *const c_char,
    out: *mut *mut MoritaWorkspace,
) -> MoritaStatus {
    guard(|| {
        let p = text(path, "path")?;
        let contents = std::fs::read_to_string(p).map_err(|e| Fail(MoritaStatus::Io, format!("cannot read {p}: {e}")))?;
        let c = CString::new(contents).map_err(|_| Fail(MoritaStatus::Parse, "file contains a NUL byte".into()))?;
        Ok(morita_workspace_load(c.as_ptr(), out))
    })
}

/// # Safety
/// `w` must be null or a handle from `morita_workspace_load*`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn morita_workspace_free(w: *mut MoritaWorkspace) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// The workspace re-serialized as canonical spec JSON.
///
/// # Safety
/// `w` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_workspace_to_json(w: *const MoritaWorkspace, out: *mut *mut c_char) -> MoritaStatus {
    guard(|| {
        let w = handle(w, "workspace")?;
        let doc: Value = serde_json::from_str(&w.inner.to_spec().to_json_string()).expect("spec is JSON");
        emit(out, &doc);
        Ok(MoritaStatus::Ok)
    })
}

/// Verifies the axioms of the named object. Returns `Ok` or `Failed`, and the
/// full report through `report` when it is not null.
///
/// # Safety
/// `w` must be a live handle, `name` a NUL-terminated string, `report` null
/// or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_verify(
    w: *const MoritaWorkspace,
    name: *const c_char,
    report: *mut *mut c_char,
) -> MoritaStatus {
    guard(|| {
        let w = handle(w, "workspace")?;
        let name = text(name, "name")?;
        let obj = w.inner.get(name)?;
        let r = match &obj {
            Named::Algebra(a) => a.verify(),
            Named::Bimodule(b) => b.verify(),
            Named::Context(c) => c.verify(),
        };
        emit(report, &json!({ "object": name, "kind": obj.kind(), "pass": r.passes(), "report": r.to_json() }));
        Ok(verdict(r.passes()))
    })
}

/// Dimension of the generalised matrix ring of the named context.
///
/// # Safety
/// `w` must be a live handle, `name` a NUL-terminated string, `dim` valid.
#[no_mangle]
pub unsafe extern "C" fn morita_matrix_ring_dim(
    w: *const MoritaWorkspace,
    name: *const c_char,
    dim: *mut usize,
) -> MoritaStatus {
    guard(|| {
        let w = handle(w, "workspace")?;
        if dim.is_null() {
            return Err(Fail(MoritaStatus::NullArgument, "dim is null".into()));
        }
        let g = w.inner.generalised(text(name, "name")?)?;
        *dim = MatrixRing::new(&g)?.dim();
        Ok(MoritaStatus::Ok)
    })
}

/// `dim(M ⊗_A N)` for two named bimodules.
///
/// # Safety
/// `w` must be a live handle, both names NUL-terminated strings, `dim` valid.
#[no_mangle]
pub unsafe extern "C" fn morita_tensor_dim(
    w: *const MoritaWorkspace,
    left: *const c_char,
    right: *const c_char,
    dim: *mut usize,
) -> MoritaStatus {
    guard(|| {
        let w = handle(w, "workspace")?;
        if dim.is_null() {
            return Err(Fail(MoritaStatus::NullArgument, "dim is null".into()));
        }
        let module = |n: &str| match w.inner.get(n)? {
            Named::Bimodule(b) => Ok(b),
            other => Err(Error::MalformedInput(format!("{n:?} is a {}, not a bimodule", other.kind()))),
        };
        let m = module(text(left, "left")?)?;
        let n = module(text(right, "right")?)?;
        *dim = TensorSpace::new(&m, &n)?.dim();
        Ok(MoritaStatus::Ok)
    })
}

/// Replaces corner `t` (1-based) of the named context through the named
/// classical context.
///
/// # Safety
/// `w` must be a live handle, both names NUL-terminated strings, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn morita_corner_replace(
    w: *const MoritaWorkspace,
    context: *const c_char,
    classical: *const c_char,
    t: usize,
    out: *mut *mut MoritaSurgery,
) -> MoritaStatus {
    guard(|| {
        let w = handle(w, "workspace")?;
        if out.is_null() {
            return Err(Fail(MoritaStatus::NullArgument, "out is null".into()));
        }
        let name = text(context, "context")?;
        let g = w.inner.generalised(name)?;
        let c = w.inner.classical(text(classical, "classical")?)?;
        if t == 0 || t > g.n() {
            return Err(Error::MalformedInput(format!("t = {t} is out of range 1..={}", g.n())).into());
        }
        let result = Surgery::new(&g, &c, t - 1)?.run()?;
        *out = Box::into_raw(Box::new(MoritaSurgery { field: w.inner.field, context: name.to_string(), result }));
        Ok(MoritaStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a handle from `morita_corner_replace`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn morita_surgery_free(s: *mut MoritaSurgery) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimensions of the matrix rings before and after the replacement.
///
/// # Safety
/// `s` must be a live handle; `before` and `after` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn morita_surgery_ring_dims(
    s: *const MoritaSurgery,
    before: *mut usize,
    after: *mut usize,
) -> MoritaStatus {
    guard(|| {
        let s = handle(s, "surgery")?;
        if before.is_null() || after.is_null() {
            return Err(Fail(MoritaStatus::NullArgument, "output pointer is null".into()));
        }
        *before = s.result.ring.dim();
        *after = s.result.composed_ring.dim();
        Ok(MoritaStatus::Ok)
    })
}

/// Block dimensions, ligation ranks and the verification report.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_surgery_report(s: *const MoritaSurgery, out: *mut *mut c_char) -> MoritaStatus {
    guard(|| {
        let s = handle(s, "surgery")?;
        let r = &s.result;
        let lig = |l: &morita::surgery::Ligation| json!({ "rank": l.rank(), "target_dim": l.target_dim() });
        emit(
            out,
            &json!({
                "t": r.t + 1,
                "dims": { "input": r.input.dims(), "composed": r.composed.dims() },
                "ring_dims": [r.ring.dim(), r.composed_ring.dim()],
                "ligations": { "alpha": lig(&r.alpha), "alpha_prime": lig(&r.alpha_prime) },
                "pass": r.report.passes(),
                "report": r.report.to_json(),
            }),
        );
        Ok(verdict(r.report.passes()))
    })
}

/// The composed context as a spec document.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_surgery_composed_spec(s: *const MoritaSurgery, out: *mut *mut c_char) -> MoritaStatus {
    guard(|| {
        let s = handle(s, "surgery")?;
        let mut b = SpecBuilder::new(s.field);
        b.add_context(&format!("{}.composed", s.context), &ContextObject::Generalised(s.result.composed.clone()));
        let doc: Value = serde_json::from_str(&b.finish().to_json_string()).expect("spec is JSON");
        emit(out, &doc);
        Ok(MoritaStatus::Ok)
    })
}

/// Decides the equivalence certificate: `Ok` when granted, `Failed` when
/// refused. The certificate or refusal, with its evidence, goes to `out`.
///
/// # Safety
/// `s` must be a live handle; `out` null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_surgery_certify(s: *const MoritaSurgery, out: *mut *mut c_char) -> MoritaStatus {
    guard(|| {
        let s = handle(s, "surgery")?;
        match certify_equivalence(&s.result) {
            Ok(c) => {
                emit(out, &c.to_json());
                Ok(MoritaStatus::Ok)
            }
            Err(r) => {
                emit(out, &r.to_json());
                Ok(MoritaStatus::Failed)
            }
        }
    })
}

/// Runs a worked instance by name. Negative values select the defaults, as
/// does zero for `p`, `k` and `split`. Returns `Ok` when every expectation holds, `Failed` otherwise.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn morita_gallery_run(
    name: *const c_char,
    p: i64,
    k: i64,
    split: i64,
    theta: i64,
    out: *mut *mut c_char,
) -> MoritaStatus {
    guard(|| {
        let name = text(name, "name")?;
        let opts = GalleryOptions {
            p: u64::try_from(p).ok().filter(|&x| x > 0),
            k: usize::try_from(k).ok().filter(|&x| x > 0),
            split: usize::try_from(split).ok().filter(|&x| x > 0),
            theta: u32::try_from(theta).ok(),
        };
        let inst = gallery::run(name, &opts)?;
        emit(out, &inst.to_json());
        Ok(verdict(inst.passes()))
    })
}

/// Symbolic name of a status code, e.g. `"MORITA_STATUS_OK"`.
#[no_mangle]
pub extern "C" fn morita_status_name(status: MoritaStatus) -> *const c_char {
    let s: &'static str = match status {
        MoritaStatus::Ok => "MORITA_STATUS_OK\0",
        MoritaStatus::Failed => "MORITA_STATUS_FAILED\0",
        MoritaStatus::NullArgument => "MORITA_STATUS_NULL_ARGUMENT\0",
        MoritaStatus::InvalidUtf8 => "MORITA_STATUS_INVALID_UTF8\0",
        MoritaStatus::Io => "MORITA_STATUS_IO\0",
        MoritaStatus::Parse => "MORITA_STATUS_PARSE\0",
        MoritaStatus::UnresolvedReference => "MORITA_STATUS_UNRESOLVED_REFERENCE\0",
        MoritaStatus::MalformedInput => "MORITA_STATUS_MALFORMED_INPUT\0",
        MoritaStatus::FieldMismatch => "MORITA_STATUS_FIELD_MISMATCH\0",
        MoritaStatus::AlgebraMismatch => "MORITA_STATUS_ALGEBRA_MISMATCH\0",
        MoritaStatus::CornerMismatch => "MORITA_STATUS_CORNER_MISMATCH\0",
        MoritaStatus::ContextInvalid => "MORITA_STATUS_CONTEXT_INVALID\0",
        MoritaStatus::BadPrime => "MORITA_STATUS_BAD_PRIME\0",
        MoritaStatus::InvariantViolated => "MORITA_STATUS_INVARIANT_VIOLATED\0",
        MoritaStatus::OtherInput => "MORITA_STATUS_OTHER_INPUT\0",
        MoritaStatus::Panic => "MORITA_STATUS_PANIC\0",
    };
    s.as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses_cover_input_errors() {
        assert_eq!(status_of(&Error::BadPrime(6)), MoritaStatus::BadPrime);
        assert_eq!(status_of(&Error::NotIdempotent), MoritaStatus::OtherInput);
        assert_eq!(status_of(&Error::Parse { line: 1, column: 2, message: "x".into() }), MoritaStatus::Parse);
    }

    #[test]
    fn panics_become_status_codes() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, MoritaStatus::Panic);
        let msg = unsafe { CStr::from_ptr(morita_last_error_message()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
    }

    #[test]
    fn status_names_are_terminated() {
        let n = unsafe { CStr::from_ptr(morita_status_name(MoritaStatus::CornerMismatch)) };
        assert_eq!(n.to_str().unwrap(), "MORITA_STATUS_CORNER_MISMATCH");
        let v = unsafe { CStr::from_ptr(morita_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
