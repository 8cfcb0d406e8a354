//! C ABI for the exact sequence engine: opaque handles for sequences and
//! patterns, status-code returns, and string exchange for exact values.
//!
//! Conventions, mirrored in the generated `include/cantor_rep.h`:
//!
//! - Every function returns a [`CantorStatus`]; results leave through `out`
//!   parameters and are written only on `CANTOR_STATUS_OK`.
//! - Any `char *` the library hands out must be released with
//!   [`cantor_string_free`]; handles with their matching `_free` function.
//! - Exact rationals cross the boundary as `p/q` strings, sequences as
//!   `pre(per)` notation, structured data as JSON documents.
//! - After a non-OK status, [`cantor_last_error_message`] describes the
//!   failure (thread-local).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cantor_rep::{
    binary_value, cmts_value, decode_representation, enumerate_table, fiber_unit_interval,
    format_rational, metric, parse_pattern, parse_rational, represent_point, run_suite, BinSeq,
    Error, Fiber, MatchRule, Pattern, PatternPoint, PointDoc, SuiteConfig, Word,
};

/// Outcome of one call. Non-OK leaves the out parameters untouched.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CantorStatus {
    /// Success; out parameters are filled.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input failed to parse or violated a documented precondition.
    InvalidInput = 2,
    /// A decode query matched no pattern point.
    NoMatch = 3,
    /// Internal panic was caught at the boundary.
    Panic = 4,
}

/// Opaque handle: one eventually periodic binary sequence in canonical form.
pub struct CantorSeq(BinSeq);

/// Opaque handle: one parsed pattern document.
pub struct CantorPattern(Pattern);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cleaned = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cleaned));
}

fn fail(status: CantorStatus, message: String) -> CantorStatus {
    set_error(message);
    status
}

fn fail_error(e: &Error) -> CantorStatus {
    let status = match e {
        Error::NoMatch(_) => CantorStatus::NoMatch,
        _ => CantorStatus::InvalidInput,
    };
    fail(status, e.to_string())
}

fn fail_null(name: &str) -> CantorStatus {
    fail(CantorStatus::NullArgument, format!("{name} must not be null"))
}

fn guarded(body: impl FnOnce() -> CantorStatus) -> CantorStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(cause) => {
            let message = cause
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| cause.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(CantorStatus::Panic, format!("internal panic: {message}"))
        }
    }
}

/// Reads a NUL-terminated UTF-8 argument.
unsafe fn read_str<'a>(raw: *const c_char, name: &str) -> Result<&'a str, CantorStatus> {
    if raw.is_null() {
        return Err(fail_null(name));
    }
    unsafe { CStr::from_ptr(raw) }
        .to_str()
        .map_err(|_| fail(CantorStatus::InvalidInput, format!("{name} is not UTF-8")))
}

fn export_string(text: String) -> *mut c_char {
    CString::new(text)
        .expect("exported text never contains NUL")
        .into_raw()
}

unsafe fn write_value<T>(out: *mut T, value: T, name: &str) -> CantorStatus {
    if out.is_null() {
        return fail_null(name);
    }
    unsafe { out.write(value) };
    CantorStatus::Ok
}

/// Boxes the handle only after the destination check, so a null `out`
/// cannot leak it.
unsafe fn write_handle<T>(out: *mut *mut T, value: T, name: &str) -> CantorStatus {
    if out.is_null() {
        return fail_null(name);
    }
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    CantorStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, text: String, name: &str) -> CantorStatus {
    if out.is_null() {
        return fail_null(name);
    }
    unsafe { out.write(export_string(text)) };
    CantorStatus::Ok
}

unsafe fn seq_arg<'a>(handle: *const CantorSeq, name: &str) -> Result<&'a BinSeq, CantorStatus> {
    if handle.is_null() {
        return Err(fail_null(name));
    }
    Ok(unsafe { &(*handle).0 })
}

unsafe fn pattern_arg<'a>(
    handle: *const CantorPattern,
    name: &str,
) -> Result<&'a Pattern, CantorStatus> {
    if handle.is_null() {
        return Err(fail_null(name));
    }
    Ok(unsafe { &(*handle).0 })
}

/// Returns a copy of the last error message on this thread, or null if no
/// call has failed yet. Free it with `cantor_string_free`.
#[no_mangle]
pub extern "C" fn cantor_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|msg| export_string(msg.to_string_lossy().into_owned()))
            .unwrap_or(ptr::null_mut())
    })
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub extern "C" fn cantor_string_free(text: *mut c_char) {
    if !text.is_null() {
        unsafe { drop(CString::from_raw(text)) };
    }
}

/// Parses `pre(per)` notation (for example `01(10)`) into a sequence handle.
#[no_mangle]
pub extern "C" fn cantor_seq_parse(text: *const c_char, out: *mut *mut CantorSeq) -> CantorStatus {
    guarded(|| {
        let text = match unsafe { read_str(text, "text") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match text.parse::<BinSeq>() {
            Ok(seq) => unsafe { write_handle(out, CantorSeq(seq), "out") },
            Err(e) => fail_error(&e),
        }
    })
}

/// Builds a sequence from raw preamble and period bits (each 0 or 1).
/// `pre` may be null when `pre_len` is 0; the period must be nonempty.
#[no_mangle]
pub extern "C" fn cantor_seq_new(
    pre: *const u8,
    pre_len: usize,
    per: *const u8,
    per_len: usize,
    out: *mut *mut CantorSeq,
) -> CantorStatus {
    guarded(|| {
        if pre.is_null() && pre_len > 0 {
            return fail_null("pre");
        }
        if per.is_null() && per_len > 0 {
            return fail_null("per");
        }
        let pre = if pre_len == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(pre, pre_len) }.to_vec()
        };
        let per = if per_len == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(per, per_len) }.to_vec()
        };
        match BinSeq::new(pre, per) {
            Ok(seq) => unsafe { write_handle(out, CantorSeq(seq), "out") },
            Err(e) => fail_error(&e),
        }
    })
}

/// Releases a sequence handle. Null is ignored.
#[no_mangle]
pub extern "C" fn cantor_seq_free(seq: *mut CantorSeq) {
    if !seq.is_null() {
        unsafe { drop(Box::from_raw(seq)) };
    }
}

/// Writes the canonical `pre(per)` notation of the sequence.
#[no_mangle]
pub extern "C" fn cantor_seq_notation(
    seq: *const CantorSeq,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let seq = match unsafe { seq_arg(seq, "seq") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        unsafe { write_string(out, seq.to_string(), "out") }
    })
}

/// Writes bit i of the sequence (positions start at 1).
#[no_mangle]
pub extern "C" fn cantor_seq_bit(seq: *const CantorSeq, i: u64, out: *mut u8) -> CantorStatus {
    guarded(|| {
        let seq = match unsafe { seq_arg(seq, "seq") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        if i < 1 {
            return fail(
                CantorStatus::InvalidInput,
                "sequence positions start at 1".to_string(),
            );
        }
        unsafe { write_value(out, seq.bit(i as usize), "out") }
    })
}

/// Writes whether two sequences are equal (canonical forms coincide).
#[no_mangle]
pub extern "C" fn cantor_seq_equal(
    a: *const CantorSeq,
    b: *const CantorSeq,
    out: *mut bool,
) -> CantorStatus {
    guarded(|| {
        let (a, b) = match (unsafe { seq_arg(a, "a") }, unsafe { seq_arg(b, "b") }) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        unsafe { write_value(out, a == b, "out") }
    })
}

/// Writes the exact distance `Σ |a_i − b_i| / 2^i` as a `p/q` string.
#[no_mangle]
pub extern "C" fn cantor_seq_metric(
    a: *const CantorSeq,
    b: *const CantorSeq,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let (a, b) = match (unsafe { seq_arg(a, "a") }, unsafe { seq_arg(b, "b") }) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        unsafe { write_string(out, format_rational(&metric(a, b)), "out") }
    })
}

/// Writes the exact binary value `Σ x_i / 2^i` as a `p/q` string.
#[no_mangle]
pub extern "C" fn cantor_seq_binary_value(
    seq: *const CantorSeq,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let seq = match unsafe { seq_arg(seq, "seq") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        unsafe { write_string(out, format_rational(&binary_value(seq)), "out") }
    })
}

/// Writes the exact middle-thirds coordinate `Σ 2·x_i / 3^i` as `p/q`.
#[no_mangle]
pub extern "C" fn cantor_seq_cmts_value(
    seq: *const CantorSeq,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let seq = match unsafe { seq_arg(seq, "seq") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        unsafe { write_string(out, format_rational(&cmts_value(seq)), "out") }
    })
}

/// Prefixes the sequence with a finite word given as a bit string like "10".
#[no_mangle]
pub extern "C" fn cantor_seq_apply_word(
    word: *const c_char,
    seq: *const CantorSeq,
    out: *mut *mut CantorSeq,
) -> CantorStatus {
    guarded(|| {
        let word_text = match unsafe { read_str(word, "word") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let seq = match unsafe { seq_arg(seq, "seq") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match word_text.parse::<Word>() {
            Ok(w) => unsafe { write_handle(out, CantorSeq(w.apply(seq)), "out") },
            Err(e) => fail_error(&e),
        }
    })
}

/// Writes whether the sequence starts with the given word (lies in its cone).
#[no_mangle]
pub extern "C" fn cantor_word_cone_contains(
    word: *const c_char,
    seq: *const CantorSeq,
    out: *mut bool,
) -> CantorStatus {
    guarded(|| {
        let word_text = match unsafe { read_str(word, "word") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let seq = match unsafe { seq_arg(seq, "seq") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match word_text.parse::<Word>() {
            Ok(w) => unsafe { write_value(out, w.cone_contains(seq), "out") },
            Err(e) => fail_error(&e),
        }
    })
}

/// Writes the fiber of a rational `p/q` in [0,1] under the binary-value map,
/// as a JSON array of `pre(per)` notations (one or two elements).
#[no_mangle]
pub extern "C" fn cantor_fiber_unit_interval(
    value: *const c_char,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let text = match unsafe { read_str(value, "value") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let fiber = parse_rational(text).and_then(|y| fiber_unit_interval(&y));
        match fiber {
            Ok(fiber) => {
                let notations: Vec<String> =
                    fiber.iter().map(|e| e.to_string()).collect();
                let json = serde_json::to_string(&notations).expect("strings serialize");
                unsafe { write_string(out, json, "out") }
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Parses a pattern document (JSON) into a pattern handle.
#[no_mangle]
pub extern "C" fn cantor_pattern_parse(
    json: *const c_char,
    out: *mut *mut CantorPattern,
) -> CantorStatus {
    guarded(|| {
        let text = match unsafe { read_str(json, "json") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_pattern(text) {
            Ok(pattern) => unsafe { write_handle(out, CantorPattern(pattern), "out") },
            Err(e) => fail_error(&e),
        }
    })
}

/// Releases a pattern handle. Null is ignored.
#[no_mangle]
pub extern "C" fn cantor_pattern_free(pattern: *mut CantorPattern) {
    if !pattern.is_null() {
        unsafe { drop(Box::from_raw(pattern)) };
    }
}

/// Compiles one query point, given as a JSON document like
/// `{"path":[],"arc":1,"t":"1/2"}` or `{"path":[1],"node":"c"}`, and writes
/// the address row (point, fiber, cone words) as JSON.
#[no_mangle]
pub extern "C" fn cantor_represent_point(
    pattern: *const CantorPattern,
    point_json: *const c_char,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let pattern = match unsafe { pattern_arg(pattern, "pattern") } {
            Ok(p) => p,
            Err(status) => return status,
        };
        let text = match unsafe { read_str(point_json, "point_json") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let entry = serde_json::from_str::<PointDoc>(text)
            .map_err(Error::from)
            .and_then(|doc| PatternPoint::from_doc(&doc))
            .and_then(|point| represent_point(pattern, &point));
        match entry {
            Ok(entry) => {
                let json =
                    serde_json::to_string(&entry.to_row()).expect("rows serialize");
                unsafe { write_string(out, json, "out") }
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Decodes a finite address set, given as a JSON array of `pre(per)`
/// notations, back to the pattern point it represents. Writes JSON
/// `{"point": {...}, "rule": "representative" | "cone-member"}`.
#[no_mangle]
pub extern "C" fn cantor_decode_representation(
    pattern: *const CantorPattern,
    fiber_json: *const c_char,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let pattern = match unsafe { pattern_arg(pattern, "pattern") } {
            Ok(p) => p,
            Err(status) => return status,
        };
        let text = match unsafe { read_str(fiber_json, "fiber_json") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let decoded = serde_json::from_str::<Vec<String>>(text)
            .map_err(Error::from)
            .and_then(|texts| {
                texts
                    .iter()
                    .map(|t| t.parse::<BinSeq>())
                    .collect::<cantor_rep::Result<Vec<_>>>()
            })
            .and_then(Fiber::new)
            .and_then(|fiber| decode_representation(pattern, &fiber));
        match decoded {
            Ok(decoded) => {
                let rule = match decoded.rule {
                    MatchRule::Representative => "representative",
                    MatchRule::ConeMember => "cone-member",
                };
                let json = serde_json::json!({
                    "point": decoded.point.to_doc(),
                    "rule": rule,
                });
                unsafe { write_string(out, json.to_string(), "out") }
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Enumerates the full address table (every node, every arc sampled at
/// k/denominator) and writes it as a JSON array of address rows.
#[no_mangle]
pub extern "C" fn cantor_enumerate_table(
    pattern: *const CantorPattern,
    denominator: u64,
    out: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let pattern = match unsafe { pattern_arg(pattern, "pattern") } {
            Ok(p) => p,
            Err(status) => return status,
        };
        match enumerate_table(pattern, denominator) {
            Ok(entries) => {
                let rows: Vec<_> = entries.iter().map(|e| e.to_row()).collect();
                let json = serde_json::to_string(&rows).expect("rows serialize");
                unsafe { write_string(out, json, "out") }
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Runs the invariant suite at the given truncation depth and sample count.
/// Writes the report as JSON lines and whether every check passed.
#[no_mangle]
pub extern "C" fn cantor_run_suite(
    depth: usize,
    random_samples: usize,
    out_pass: *mut bool,
    out_report: *mut *mut c_char,
) -> CantorStatus {
    guarded(|| {
        let config = SuiteConfig {
            depth,
            samples: random_samples,
            ..SuiteConfig::default()
        };
        match run_suite(&config) {
            Ok(report) => {
                let mut lines = String::new();
                for record in &report.records {
                    lines.push_str(
                        &serde_json::to_string(record).expect("records serialize"),
                    );
                    lines.push('\n');
                }
                if out_pass.is_null() {
                    return fail_null("out_pass");
                }
                let status = unsafe { write_string(out_report, lines, "out_report") };
                if status == CantorStatus::Ok {
                    unsafe { out_pass.write(report.pass()) };
                }
                status
            }
            Err(e) => fail_error(&e),
        }
    })
}
