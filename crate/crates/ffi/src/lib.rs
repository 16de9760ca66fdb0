//! C ABI for `refutekit`.
//!
//! Every entry point returns an [`RkStatus`]. On failure the message is kept
//! per thread and read back with [`rk_last_error_message`]. Handles are opaque
//! and must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use refutekit::covers::{build_fko_witness, verify_fko_witness, CoverSearch};
use refutekit::instances::{gen_random_xor, read_instance, XorInstance};
use refutekit::refute::{brute_force_val, refute_poly, verify_certificate, RefutationCertificate, RefuteConfig};
use refutekit::Error;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkStatus {
    Ok = 0,
    InvalidArgument = 1,
    Parse = 2,
    Io = 3,
    Guard = 4,
    Unsupported = 5,
    Internal = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Opaque XOR instance.
pub struct RkXorInstance(XorInstance);

/// Opaque refutation certificate.
pub struct RkCertificate(RefutationCertificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(RkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parameter(_) => RkStatus::InvalidArgument,
            Error::Parse { .. } | Error::Json(_) => RkStatus::Parse,
            Error::Io { .. } => RkStatus::Io,
            Error::Guard(_) => RkStatus::Guard,
            Error::Unsupported(_) => RkStatus::Unsupported,
            Error::Invariant(_) => RkStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RkStatus::NullPointer, format!("{what} is null"))
}

fn call(f: impl FnOnce() -> Result<(), Failure>) -> RkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RkStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            RkStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RkStatus::InvalidArgument, format!("{what} is not utf-8")))
}

/// Message of the last failure on this thread. Empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Read an XOR instance, format picked from the extension.
///
/// # Safety
/// `path` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_xor_instance_read(path: *const c_char, out: *mut *mut RkXorInstance) -> RkStatus {
    call(|| {
        let path = str_arg(path, "path")?;
        let inst = read_instance(Path::new(path), None)?.into_xor()?;
        write(out, Box::into_raw(Box::new(RkXorInstance(inst))), "out")
    })
}

/// Uniformly random k-XOR instance with random signs.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rk_xor_instance_generate(
    n: u32,
    k: u32,
    m: usize,
    seed: u64,
    out: *mut *mut RkXorInstance,
) -> RkStatus {
    call(|| {
        let inst = gen_random_xor(n, k, m, seed)?;
        write(out, Box::into_raw(Box::new(RkXorInstance(inst))), "out")
    })
}

/// # Safety
/// `inst` must come from this library and not be freed already. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rk_xor_instance_free(inst: *mut RkXorInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of variables, arity and number of clauses.
///
/// # Safety
/// `inst` must be a live handle; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_xor_instance_dims(
    inst: *const RkXorInstance,
    n: *mut u32,
    k: *mut u32,
    m: *mut usize,
) -> RkStatus {
    call(|| {
        let inst = &deref(inst, "inst")?.0;
        write(n, inst.n, "n")?;
        write(k, inst.k, "k")?;
        write(m, inst.m(), "m")
    })
}

/// Refute at level `ell`. `certificate` may be null when only the value is wanted.
///
/// # Safety
/// `inst` must be a live handle; `alg_val` writable; `certificate` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_refute_poly(
    inst: *const RkXorInstance,
    ell: usize,
    eps: f64,
    alg_val: *mut f64,
    certificate: *mut *mut RkCertificate,
) -> RkStatus {
    call(|| {
        let inst = &deref(inst, "inst")?.0;
        let cfg = RefuteConfig {
            eps,
            ..RefuteConfig::default()
        };
        let r = refute_poly(inst, ell, &cfg)?;
        write(alg_val, r.alg_val, "alg_val")?;
        if !certificate.is_null() {
            certificate.write(Box::into_raw(Box::new(RkCertificate(r.certificate))));
        }
        Ok(())
    })
}

/// Serialize a certificate. Release the string with [`rk_string_free`].
///
/// # Safety
/// `cert` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_certificate_to_json(cert: *const RkCertificate, out: *mut *mut c_char) -> RkStatus {
    call(|| {
        let cert = &deref(cert, "cert")?.0;
        let text = serde_json::to_string(cert).map_err(Error::from)?;
        let text = CString::new(text).map_err(|e| Failure(RkStatus::Internal, e.to_string()))?;
        write(out, text.into_raw(), "out")
    })
}

/// Parse a certificate from JSON.
///
/// # Safety
/// `json` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_certificate_from_json(json: *const c_char, out: *mut *mut RkCertificate) -> RkStatus {
    call(|| {
        let text = str_arg(json, "json")?;
        let cert: RefutationCertificate = serde_json::from_str(text).map_err(Error::from)?;
        write(out, Box::into_raw(Box::new(RkCertificate(cert))), "out")
    })
}

/// # Safety
/// `cert` must come from this library and not be freed already. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rk_certificate_free(cert: *mut RkCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Recompute a certificate. `inst` may be null, which skips the digest and
/// instance checks. `*ok` is set to whether the replay matched.
///
/// # Safety
/// `cert` must be a live handle, `inst` null or live, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rk_certificate_replay(
    cert: *const RkCertificate,
    inst: *const RkXorInstance,
    ok: *mut bool,
    recomputed: *mut f64,
) -> RkStatus {
    call(|| {
        let cert = &deref(cert, "cert")?.0;
        let inst = inst.as_ref().map(|i| &i.0);
        let rep = verify_certificate(cert, inst);
        if !rep.ok {
            set_error(rep.problems.join("; "));
        }
        write(ok, rep.ok, "ok")?;
        write(recomputed, rep.recomputed, "recomputed")
    })
}

/// Exact value by enumeration. Fails with `Guard` on large instances.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_brute_force_val(inst: *const RkXorInstance, out: *mut f64) -> RkStatus {
    call(|| {
        let inst = &deref(inst, "inst")?.0;
        write(out, brute_force_val(inst)?, "out")
    })
}

/// Build and check a disjoint even-cover witness. Writes the certified
/// upper bound and the number of covers used.
///
/// # Safety
/// `inst` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rk_fko_build_verify(
    inst: *const RkXorInstance,
    max_len: usize,
    want: usize,
    seed: u64,
    bound: *mut f64,
    covers: *mut usize,
) -> RkStatus {
    call(|| {
        let inst = &deref(inst, "inst")?.0;
        let cfg = CoverSearch {
            seed,
            ..CoverSearch::default()
        };
        let w = build_fko_witness(inst, max_len, want, &cfg)?;
        let b = verify_fko_witness(inst, &w)?;
        write(bound, b.bound, "bound")?;
        write(covers, b.covers, "covers")
    })
}
