//! C interface to `dlexplain`.
//!
//! Strings cross the boundary as NUL-terminated UTF-8. Strings returned
//! through out-pointers are owned by the caller and released with
//! [`dlx_string_free`]. On failure a call returns a non-zero [`DlxStatus`] and
//! [`dlx_last_error_message`] describes the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dlexplain::fol::{render_fol, translate_gci};
use dlexplain::learner::{search, verify_solution, SearchConfig};
use dlexplain::reasoner::{materialize, MaterializedKb};
use dlexplain::report;
use dlexplain::text::{parse_axiom_open, parse_expression, parse_kb, parse_problem};
use num_rational::Rational64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlxStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Well-formed input that cannot be processed, such as an unknown example.
    Data = 4,
    InvalidConfig = 5,
    Internal = 6,
}

/// A parsed and materialized knowledge base.
pub struct DlxKb {
    mkb: MaterializedKb,
}

/// Search settings. Ratios are given as numerator and denominator.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DlxConfig {
    pub max_expansions: usize,
    pub max_length: usize,
    pub top_k: usize,
    pub length_penalty_num: i64,
    pub length_penalty_den: i64,
    pub noise_num: i64,
    pub noise_den: i64,
    pub expansion_penalty_num: i64,
    pub expansion_penalty_den: i64,
    pub enable_disjunction: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(DlxStatus, String);

type Res<T> = Result<T, Fail>;

fn guard(f: impl FnOnce() -> Res<()>) -> DlxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DlxStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            DlxStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(DlxStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(DlxStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn emit(out: *mut *mut c_char, s: String) -> Res<()> {
    let c = CString::new(s).map_err(|_| Fail(DlxStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T) -> Res<()> {
    if out.is_null() {
        Err(Fail(DlxStatus::NullArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn parse_fail(e: impl std::fmt::Display) -> Fail {
    Fail(DlxStatus::Parse, e.to_string())
}

fn ratio(num: i64, den: i64, name: &str) -> Res<Rational64> {
    if den == 0 {
        return Err(Fail(DlxStatus::InvalidConfig, format!("{name} has a zero denominator")));
    }
    Ok(Rational64::new(num, den))
}

impl DlxConfig {
    fn to_search_config(self) -> Res<SearchConfig> {
        let cfg = SearchConfig {
            max_expansions: self.max_expansions,
            max_length: self.max_length,
            top_k: self.top_k,
            length_penalty: ratio(self.length_penalty_num, self.length_penalty_den, "length_penalty")?,
            noise: ratio(self.noise_num, self.noise_den, "noise")?,
            enable_disjunction: self.enable_disjunction,
            expansion_penalty: ratio(self.expansion_penalty_num, self.expansion_penalty_den, "expansion_penalty")?,
        };
        cfg.validate().map_err(|e| Fail(DlxStatus::InvalidConfig, e.to_string()))?;
        Ok(cfg)
    }
}

/// Default search settings.
#[no_mangle]
pub extern "C" fn dlx_config_default() -> DlxConfig {
    let d = SearchConfig::default();
    DlxConfig {
        max_expansions: d.max_expansions,
        max_length: d.max_length,
        top_k: d.top_k,
        length_penalty_num: *d.length_penalty.numer(),
        length_penalty_den: *d.length_penalty.denom(),
        noise_num: *d.noise.numer(),
        noise_den: *d.noise.denom(),
        expansion_penalty_num: *d.expansion_penalty.numer(),
        expansion_penalty_den: *d.expansion_penalty.denom(),
        enable_disjunction: d.enable_disjunction,
    }
}

/// Parse `.dlkb` text and materialize it into `*out`.
///
/// # Safety
/// `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlx_kb_parse(text_ptr: *const c_char, out: *mut *mut DlxKb) -> DlxStatus {
    guard(|| {
        check_out(out)?;
        let kb = parse_kb(text(text_ptr, "kb text")?).map_err(parse_fail)?;
        *out = Box::into_raw(Box::new(DlxKb { mkb: materialize(&kb) }));
        Ok(())
    })
}

/// Release a knowledge base. Null is ignored.
///
/// # Safety
/// `kb` must come from [`dlx_kb_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dlx_kb_free(kb: *mut DlxKb) {
    if !kb.is_null() {
        drop(Box::from_raw(kb));
    }
}

/// Number of individuals in the knowledge base, or 0 for null.
///
/// # Safety
/// `kb` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dlx_kb_individual_count(kb: *const DlxKb) -> usize {
    kb.as_ref().map_or(0, |k| k.mkb.universe_size())
}

unsafe fn handle<'a>(kb: *const DlxKb) -> Res<&'a DlxKb> {
    kb.as_ref().ok_or_else(|| Fail(DlxStatus::NullArgument, "kb is null".into()))
}

/// Score `expr` against a problem (`+ ind` / `- ind` lines); writes a JSON object.
///
/// # Safety
/// String arguments must be NUL-terminated; `kb` a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dlx_verify(
    kb: *const DlxKb,
    problem: *const c_char,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> DlxStatus {
    guard(|| {
        check_out(out)?;
        let mkb = &handle(kb)?.mkb;
        let sig = &mkb.base().signature;
        let problem = parse_problem(text(problem, "problem")?, sig).map_err(parse_fail)?;
        let expr = parse_expression(text(expr, "expr")?, sig).map_err(parse_fail)?;
        let solution = verify_solution(mkb, &expr, &problem, &SearchConfig::default())
            .map_err(|e| Fail(DlxStatus::Data, e.to_string()))?;
        emit(out, report::to_line(&report::verify_json(&solution)))
    })
}

/// Run the learner; writes the JSON report. A null `config` means defaults.
///
/// # Safety
/// As for [`dlx_verify`]; `config` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn dlx_learn(
    kb: *const DlxKb,
    problem: *const c_char,
    config: *const DlxConfig,
    out: *mut *mut c_char,
) -> DlxStatus {
    guard(|| {
        check_out(out)?;
        let mkb = &handle(kb)?.mkb;
        let problem = parse_problem(text(problem, "problem")?, &mkb.base().signature).map_err(parse_fail)?;
        let cfg = config.as_ref().copied().unwrap_or_else(|| dlx_config_default()).to_search_config()?;
        let outcome = search(mkb, &problem, &cfg).map_err(|e| Fail(DlxStatus::Data, e.to_string()))?;
        emit(out, report::to_line(&report::learn_json(&cfg, &outcome)))
    })
}

/// Translate `<expr> => <expr>` into a first-order formula.
///
/// # Safety
/// `axiom` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dlx_translate(axiom: *const c_char, out: *mut *mut c_char) -> DlxStatus {
    guard(|| {
        check_out(out)?;
        let axiom = parse_axiom_open(text(axiom, "axiom")?).map_err(parse_fail)?;
        emit(out, render_fol(&translate_gci(&axiom)))
    })
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dlx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dlx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
