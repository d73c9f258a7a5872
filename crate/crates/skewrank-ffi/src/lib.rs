//! C interface to the skewrank library.
//!
//! Every function returns an [`SkStatus`] and writes its result through an
//! out pointer. Strings handed to the caller are heap allocated and must be
//! released with [`sk_string_free`]; handles are opaque and released with
//! their matching `_free` function. After any status other than `Ok` a
//! human-readable message is available from [`sk_last_error_message`].
//!
//! Structured results (group info, skew invariants, decompositions, apolar
//! reports, selftest reports) are exchanged as JSON strings in the same
//! schemas the command-line tool reads and writes.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use skewrank::apolar::{
    rs_bound_report, steinberg_check, sylvester_binary_rank, STEINBERG_MAX_DEGREE,
    STEINBERG_MAX_ORDER,
};
use skewrank::error::Error;
use skewrank::groups::{FamilySpec, ReflectionGroup, DEFAULT_CAP};
use skewrank::io;
use skewrank::selftest::run_selftest;
use skewrank::skew::build_skew_invariant;
use skewrank::waring::{decompose, verify, WaringDecomposition};

/// Result of every library call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SkStatus {
    /// The call succeeded.
    Ok = 0,
    /// A pointer argument was null or a string was not valid UTF-8.
    BadArgument = 1,
    /// The group or form specification was invalid or failed to parse.
    BadSpec = 2,
    /// Group enumeration hit the element cap.
    CapExceeded = 3,
    /// The requested eigenvalue order is not regular for the group.
    NotRegular = 4,
    /// A decomposition did not reproduce the expected form.
    VerificationFailed = 5,
    /// The computation exceeds the built-in size budget.
    BudgetExceeded = 6,
    /// An internal invariant was violated.
    Internal = 7,
}

/// Built-in group families for [`sk_group_family`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SkFamily {
    /// Coordinate permutations of C^n; params = [n].
    Symmetric = 0,
    /// Signed coordinate permutations; params = [n].
    Hyperoctahedral = 1,
    /// Signed permutations with an even number of sign changes; params = [n].
    Demihyperoctahedral = 2,
    /// G(de, e, n); params = [d, e, n].
    Imprimitive = 3,
    /// Symmetry group of the regular m-gon; params = [m].
    Dihedral = 4,
    /// Product of cyclic groups scaling each coordinate; params lists the
    /// exponents a_1..a_k of the invariant x_1^{a_1} ... x_k^{a_k}.
    CyclicProduct = 5,
}

/// Opaque handle to an enumerated reflection group.
pub struct SkGroup {
    inner: ReflectionGroup,
}

/// Opaque handle to a verified decomposition of a form into powers of
/// linear forms.
pub struct SkDecomposition {
    inner: WaringDecomposition,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap());
}

fn status_for(e: &Error) -> SkStatus {
    match e {
        Error::CapExceeded { .. } => SkStatus::CapExceeded,
        Error::NotRegular { .. } => SkStatus::NotRegular,
        Error::VerificationFailed(_) => SkStatus::VerificationFailed,
        Error::BudgetExceeded(_) => SkStatus::BudgetExceeded,
        _ => SkStatus::BadSpec,
    }
}

/// Runs a fallible body, translating errors and panics into statuses.
fn run(body: impl FnOnce() -> Result<(), Error>) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SkStatus::Ok,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_for(&e)
        }
        Err(_) => {
            set_error("internal panic");
            SkStatus::Internal
        }
    }
}

fn bad_argument(msg: &str) -> SkStatus {
    set_error(msg);
    SkStatus::BadArgument
}

unsafe fn str_arg<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        None
    } else {
        CStr::from_ptr(p).to_str().ok()
    }
}

fn write_string(s: String, out: *mut *mut c_char) -> Result<(), Error> {
    let c = CString::new(s).map_err(|_| Error::Parse("output contains a NUL byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn largest_regular(g: &ReflectionGroup) -> Result<u32, Error> {
    let regular = g.regular_numbers()?;
    regular.last().copied().ok_or(Error::NotRegular { d: 0 })
}

/// Version of the library as a static string; never freed.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on the calling thread. The pointer
/// stays valid until the next failing call on the same thread; do not free
/// it.
#[no_mangle]
pub extern "C" fn sk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
///
/// `s` must be null or a pointer obtained from a `char **` out parameter of
/// this library that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds one of the built-in group families. `params` carries the family
/// parameters as documented on [`SkFamily`]; `cap` bounds the number of
/// elements enumerated, with 0 selecting the default cap.
///
/// # Safety
///
/// `kind` must be a valid [`SkFamily`] value, `params` must point to
/// `nparams` readable integers (or be null when `nparams` is 0), and `out`
/// must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_family(
    kind: SkFamily,
    params: *const u32,
    nparams: usize,
    cap: usize,
    out: *mut *mut SkGroup,
) -> SkStatus {
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    if params.is_null() && nparams > 0 {
        return bad_argument("params pointer is null");
    }
    let params: Vec<u32> = if nparams == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(params, nparams).to_vec()
    };
    run(|| {
        let need = |k: usize| -> Result<(), Error> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidFamily(format!(
                    "family takes {k} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let spec = match kind {
            SkFamily::Symmetric => {
                need(1)?;
                FamilySpec::Symmetric { n: params[0] }
            }
            SkFamily::Hyperoctahedral => {
                need(1)?;
                FamilySpec::Hyperoctahedral { n: params[0] }
            }
            SkFamily::Demihyperoctahedral => {
                need(1)?;
                FamilySpec::Demihyperoctahedral { n: params[0] }
            }
            SkFamily::Imprimitive => {
                need(3)?;
                FamilySpec::Imprimitive {
                    d: params[0],
                    e: params[1],
                    n: params[2],
                }
            }
            SkFamily::Dihedral => {
                need(1)?;
                FamilySpec::Dihedral { m: params[0] }
            }
            SkFamily::CyclicProduct => {
                if params.is_empty() {
                    return Err(Error::InvalidFamily(
                        "cyclic products need at least one exponent".into(),
                    ));
                }
                FamilySpec::CyclicProduct {
                    exponents: params.clone(),
                }
            }
        };
        let cap = if cap == 0 { DEFAULT_CAP } else { cap };
        let inner = ReflectionGroup::build_family(&spec, cap)?;
        *out = Box::into_raw(Box::new(SkGroup { inner }));
        Ok(())
    })
}

/// Builds a group from a JSON configuration listing generator matrices, as
/// accepted by the command-line tool's `--config` option. `cap` of 0 selects
/// the default element cap; the config's own `cap` field, if present, wins.
///
/// # Safety
///
/// `json` must be a valid NUL-terminated string and `out` a valid writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_from_config(
    json: *const c_char,
    cap: usize,
    out: *mut *mut SkGroup,
) -> SkStatus {
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    let Some(text) = str_arg(json) else {
        return bad_argument("config string must be non-null valid UTF-8");
    };
    run(|| {
        let dto: io::GroupConfigDto = serde_json::from_str(text)?;
        let cap = if cap == 0 { DEFAULT_CAP } else { cap };
        let inner = io::group_from_config(&dto, cap)?;
        *out = Box::into_raw(Box::new(SkGroup { inner }));
        Ok(())
    })
}

/// Releases a group handle.
///
/// # Safety
///
/// `g` must be null or a handle from this library not freed already.
#[no_mangle]
pub unsafe extern "C" fn sk_group_free(g: *mut SkGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of elements in the group, or 0 if `g` is null.
///
/// # Safety
///
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn sk_group_order(g: *const SkGroup) -> u64 {
    if g.is_null() {
        0
    } else {
        (*g).inner.order() as u64
    }
}

/// Dimension of the space the group acts on, or 0 if `g` is null.
///
/// # Safety
///
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn sk_group_nvars(g: *const SkGroup) -> usize {
    if g.is_null() {
        0
    } else {
        (*g).inner.nvars()
    }
}

/// Writes the group's order, degrees, reflection data and regular numbers
/// as a JSON object.
///
/// # Safety
///
/// `g` must be a live group handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_info_json(
    g: *const SkGroup,
    out: *mut *mut c_char,
) -> SkStatus {
    if g.is_null() || out.is_null() {
        return bad_argument("group and out pointers must be non-null");
    }
    run(|| {
        let info = io::group_info(&(*g).inner)?;
        write_string(io::to_json_string(&info)?, out)
    })
}

/// Writes the group's fundamental skew invariant as a JSON object.
///
/// # Safety
///
/// `g` must be a live group handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_skew_json(
    g: *const SkGroup,
    out: *mut *mut c_char,
) -> SkStatus {
    if g.is_null() || out.is_null() {
        return bad_argument("group and out pointers must be non-null");
    }
    run(|| {
        let f = build_skew_invariant(&(*g).inner)?;
        write_string(io::to_json_string(&io::skew_to_dto(&f))?, out)
    })
}

/// Writes the group back out as a generator-matrix JSON configuration
/// accepted by [`sk_group_from_config`].
///
/// # Safety
///
/// `g` must be a live group handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_config_json(
    g: *const SkGroup,
    out: *mut *mut c_char,
) -> SkStatus {
    if g.is_null() || out.is_null() {
        return bad_argument("group and out pointers must be non-null");
    }
    run(|| {
        let config = io::group_to_config(&(*g).inner, None);
        write_string(io::to_json_string(&config)?, out)
    })
}

/// Decomposes the group's skew invariant into a sum of D-th powers of
/// linear forms, verifies the result exactly, and returns a handle to it.
/// `regular_number` selects the eigenvalue order to use; 0 selects the
/// largest regular number.
///
/// # Safety
///
/// `g` must be a live group handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_decompose(
    g: *const SkGroup,
    regular_number: u32,
    out: *mut *mut SkDecomposition,
) -> SkStatus {
    if g.is_null() || out.is_null() {
        return bad_argument("group and out pointers must be non-null");
    }
    run(|| {
        let group = &(*g).inner;
        let f = build_skew_invariant(group)?;
        let d = if regular_number == 0 {
            largest_regular(group)?
        } else {
            regular_number
        };
        let dec = decompose(group, d)?;
        let ver = verify(&dec, &f.polynomial)?;
        if !ver.exact {
            return Err(Error::VerificationFailed(format!(
                "expansion of the {}-term decomposition is not a nonzero multiple of f",
                dec.terms.len()
            )));
        }
        let report = rs_bound_report(&f.polynomial, Some(&dec))?;
        let mut dto = io::decomposition_to_dto(&dec, &ver)?;
        dto.certified = Some(report.certified);
        let json = io::to_json_string(&dto)?;
        *out = Box::into_raw(Box::new(SkDecomposition { inner: dec, json }));
        Ok(())
    })
}

/// Reconstructs a decomposition handle from its JSON form.
///
/// # Safety
///
/// `json` must be a valid NUL-terminated string and `out` a valid writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_decomposition_from_json(
    json: *const c_char,
    out: *mut *mut SkDecomposition,
) -> SkStatus {
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    let Some(text) = str_arg(json) else {
        return bad_argument("decomposition string must be non-null valid UTF-8");
    };
    run(|| {
        let dto: io::DecompositionDto = serde_json::from_str(text)?;
        let (dec, _claimed) = io::decomposition_from_dto(&dto)?;
        let json = io::to_json_string(&dto)?;
        *out = Box::into_raw(Box::new(SkDecomposition { inner: dec, json }));
        Ok(())
    })
}

/// Releases a decomposition handle.
///
/// # Safety
///
/// `d` must be null or a handle from this library not freed already.
#[no_mangle]
pub unsafe extern "C" fn sk_decomposition_free(d: *mut SkDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of powers of linear forms in the decomposition, or 0 if `d` is
/// null.
///
/// # Safety
///
/// `d` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn sk_decomposition_term_count(d: *const SkDecomposition) -> usize {
    if d.is_null() {
        0
    } else {
        (*d).inner.terms.len()
    }
}

/// Common exponent of the powers in the decomposition, or 0 if `d` is null.
///
/// # Safety
///
/// `d` must be null or a live decomposition handle.
#[no_mangle]
pub unsafe extern "C" fn sk_decomposition_exponent(d: *const SkDecomposition) -> u32 {
    if d.is_null() {
        0
    } else {
        (*d).inner.exponent
    }
}

/// Writes the decomposition as a JSON object.
///
/// # Safety
///
/// `d` must be a live decomposition handle and `out` a valid writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_decomposition_json(
    d: *const SkDecomposition,
    out: *mut *mut c_char,
) -> SkStatus {
    if d.is_null() || out.is_null() {
        return bad_argument("decomposition and out pointers must be non-null");
    }
    run(|| write_string((*d).json.clone(), out))
}

/// Checks that the decomposition expands to a nonzero scalar multiple of
/// the group's skew invariant. Returns `Ok` on an exact match and
/// `VerificationFailed` otherwise.
///
/// # Safety
///
/// `g` and `d` must be live handles from this library.
#[no_mangle]
pub unsafe extern "C" fn sk_group_verify_decomposition(
    g: *const SkGroup,
    d: *const SkDecomposition,
) -> SkStatus {
    if g.is_null() || d.is_null() {
        return bad_argument("group and decomposition pointers must be non-null");
    }
    run(|| {
        let f = build_skew_invariant(&(*g).inner)?;
        let dec = &(*d).inner;
        if dec.nvars != f.polynomial.nvars() {
            return Err(Error::VerificationFailed(format!(
                "decomposition lives in {} variables but the group acts on {}",
                dec.nvars,
                f.polynomial.nvars()
            )));
        }
        let ver = verify(dec, &f.polynomial)?;
        if ver.exact {
            Ok(())
        } else {
            Err(Error::VerificationFailed(
                "expansion is not a nonzero multiple of the skew invariant".into(),
            ))
        }
    })
}

/// Writes the apolar rank report for the group's skew invariant as JSON,
/// including the invariant-operator annihilation check and, when the bounds
/// meet, certification of the rank.
///
/// # Safety
///
/// `g` must be a live group handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_group_apolar_json(
    g: *const SkGroup,
    out: *mut *mut c_char,
) -> SkStatus {
    if g.is_null() || out.is_null() {
        return bad_argument("group and out pointers must be non-null");
    }
    run(|| {
        let group = &(*g).inner;
        let f = build_skew_invariant(group)?;
        let degree = f
            .polynomial
            .homogeneous_degree()
            .ok_or_else(|| Error::BadForm("skew invariant is not homogeneous".into()))?;
        if degree > STEINBERG_MAX_DEGREE {
            return Err(Error::BudgetExceeded(format!(
                "form degree {degree} exceeds the report budget {STEINBERG_MAX_DEGREE}"
            )));
        }
        if group.order() > STEINBERG_MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "group order {} exceeds the report budget {STEINBERG_MAX_ORDER}",
                group.order()
            )));
        }
        let d = largest_regular(group)?;
        let dec = decompose(group, d)?;
        let report = rs_bound_report(&f.polynomial, Some(&dec))?;
        let mut dto = io::apolar_to_dto(&report);
        dto.steinberg = Some(steinberg_check(group, &f)?);
        write_string(io::to_json_string(&dto)?, out)
    })
}

/// Writes the apolar rank report for a textual form such as
/// `"x^5 - y^5"` as JSON. When `sylvester` is true and the form is binary,
/// the report also carries its exact rank.
///
/// # Safety
///
/// `form` must be a valid NUL-terminated string and `out` a valid writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_form_apolar_json(
    form: *const c_char,
    sylvester: bool,
    out: *mut *mut c_char,
) -> SkStatus {
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    let Some(text) = str_arg(form) else {
        return bad_argument("form string must be non-null valid UTF-8");
    };
    run(|| {
        let f = io::parse_form(text)?;
        let degree = f
            .homogeneous_degree()
            .ok_or_else(|| Error::BadForm("apolar reports need a nonzero homogeneous form".into()))?;
        if degree > STEINBERG_MAX_DEGREE {
            return Err(Error::BudgetExceeded(format!(
                "form degree {degree} exceeds the report budget {STEINBERG_MAX_DEGREE}"
            )));
        }
        let report = rs_bound_report(&f, None)?;
        let mut dto = io::apolar_to_dto(&report);
        if sylvester {
            dto.sylvester_rank = Some(sylvester_binary_rank(&f)?);
        }
        write_string(io::to_json_string(&dto)?, out)
    })
}

/// Runs the built-in check suite and writes its JSON report. `only` may be
/// null to run everything, or name a substring selecting a subset of
/// checks. The call succeeds as long as the suite runs; consult the
/// report's `failed` count for the outcome.
///
/// # Safety
///
/// `only` must be null or a valid NUL-terminated string, and `out` a valid
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_selftest_json(
    seed: u64,
    only: *const c_char,
    out: *mut *mut c_char,
) -> SkStatus {
    if out.is_null() {
        return bad_argument("out pointer is null");
    }
    let only = if only.is_null() {
        None
    } else {
        match str_arg(only) {
            Some(s) => Some(s),
            None => return bad_argument("filter string must be valid UTF-8"),
        }
    };
    run(|| {
        let report = run_selftest(seed, only);
        write_string(io::to_json_string(&report)?, out)
    })
}
