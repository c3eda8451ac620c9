//! C interface to `b4ns-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`-style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`B4nsStatus`]; on failure the message is kept per thread and can
//! be read with [`b4ns_last_error`]. Complex arrays are interleaved
//! `(re, im)` pairs in FFT slot order.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the stated length; handles
//! must come from this library and be freed at most once.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use b4ns_core::evolution::{self, Derivative, EquationSpec, Trajectory};
use b4ns_core::experiments::{run_scenario, ExperimentConfig, ResultRecord, Scenario};
use b4ns_core::picard::{self, Sign, SignPattern};
use b4ns_core::spectral::{self, Grid, SpectralField};
use b4ns_core::{variation, Complex64, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B4nsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Constraint = 3,
    Numerical = 4,
    Io = 5,
    Format = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Nonlinearity derivative: `Modulus` is `|∇|`, `Coordinate` is `∂_{x_axis}`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B4nsDerivative {
    Modulus = 0,
    Coordinate = 1,
}

/// A band-limited field on a periodic grid.
pub struct B4nsField(SpectralField);

/// An equation `i∂_t u − Δ²u = ∂P(u, ū)`.
pub struct B4nsSpec(EquationSpec);

/// Time samples of a solution.
pub struct B4nsTrajectory(Trajectory);

/// Outcome of a scenario run.
pub struct B4nsRecord(ResultRecord);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> B4nsStatus {
    match err {
        Error::Grid(_) | Error::Domain(_) | Error::Config(_) => B4nsStatus::InvalidArgument,
        Error::Constraint(_) => B4nsStatus::Constraint,
        Error::Overflow { .. } | Error::BlowUp { .. } => B4nsStatus::Numerical,
        Error::Format(_) | Error::Json(_) => B4nsStatus::Format,
        Error::Io(_) => B4nsStatus::Io,
        Error::Scenario { source, .. } => status_of(source),
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Status(B4nsStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn guard(body: impl FnOnce() -> Outcome) -> B4nsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => B4nsStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            B4nsStatus::NullPointer
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            B4nsStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Outcome {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Outcome {
    unsafe { put(out, Box::into_raw(Box::new(value)), "out") }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure::Status(B4nsStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// Copies `s` plus a terminating NUL into `buf` if it fits; `*required`
/// always receives the needed size in bytes.
unsafe fn write_text(s: &str, buf: *mut c_char, len: usize, required: *mut usize) -> Outcome {
    let need = s.len() + 1;
    if !required.is_null() {
        unsafe { required.write(need) };
    }
    if buf.is_null() || len < need {
        return Err(Failure::Status(B4nsStatus::BufferTooSmall, format!("buffer of {len} bytes, need {need}")));
    }
    unsafe {
        ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
        buf.add(s.len()).write(0);
    }
    Ok(())
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Copies the calling thread's last error message (NUL-terminated) into
/// `buf`. Returns the number of bytes the full message needs, including the
/// terminator; nothing is written when `len` is too small.
#[no_mangle]
pub unsafe extern "C" fn b4ns_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let mut need = 0;
        let _ = unsafe { write_text(&msg, buf, len, &mut need) };
        need
    })
}

/// A field from `count = n^dim` interleaved coefficients.
#[no_mangle]
pub unsafe extern "C" fn b4ns_field_new(
    dim: usize,
    n: usize,
    length: f64,
    coeffs: *const f64,
    count: usize,
    out: *mut *mut B4nsField,
) -> B4nsStatus {
    guard(|| {
        let grid = Grid::new(dim, n, length)?;
        let raw = unsafe { slice(coeffs, 2 * count, "coeffs") }?;
        let values = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        unsafe { put_handle(out, B4nsField(SpectralField::new(grid, values)?)) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_field_free(field: *mut B4nsField) {
    unsafe { free_handle(field) }
}

/// Number of complex coefficients.
#[no_mangle]
pub unsafe extern "C" fn b4ns_field_len(field: *const B4nsField, out: *mut usize) -> B4nsStatus {
    guard(|| {
        let f = unsafe { get(field, "field") }?;
        unsafe { put(out, f.0.coeffs().len(), "out") }
    })
}

/// Copies the coefficients into `buf`, which holds `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn b4ns_field_coeffs(field: *const B4nsField, buf: *mut f64, len: usize) -> B4nsStatus {
    guard(|| {
        let f = unsafe { get(field, "field") }?;
        let coeffs = f.0.coeffs();
        if len < coeffs.len() {
            return Err(Failure::Status(
                B4nsStatus::BufferTooSmall,
                format!("room for {len} coefficients, need {}", coeffs.len()),
            ));
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        let dst = unsafe { std::slice::from_raw_parts_mut(buf, 2 * coeffs.len()) };
        for (d, c) in dst.chunks_exact_mut(2).zip(coeffs) {
            d[0] = c.re;
            d[1] = c.im;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_field_sobolev_norm(
    field: *const B4nsField,
    s: f64,
    homogeneous: bool,
    out: *mut f64,
) -> B4nsStatus {
    guard(|| {
        let f = unsafe { get(field, "field") }?;
        unsafe { put(out, spectral::sobolev_norm(&f.0, s, homogeneous)?, "out") }
    })
}

/// `S(t)φ` as a new field.
#[no_mangle]
pub unsafe extern "C" fn b4ns_free_propagate(field: *const B4nsField, t: f64, out: *mut *mut B4nsField) -> B4nsStatus {
    guard(|| {
        let f = unsafe { get(field, "field") }?;
        if !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite, got {t}")).into());
        }
        unsafe { put_handle(out, B4nsField(evolution::free_propagate(&f.0, t))) }
    })
}

/// The single monomial `u^α ū^{degree−α}` under the given derivative.
#[no_mangle]
pub unsafe extern "C" fn b4ns_spec_monomial(
    dim: usize,
    degree: usize,
    alpha: usize,
    derivative: B4nsDerivative,
    axis: usize,
    out: *mut *mut B4nsSpec,
) -> B4nsStatus {
    guard(|| {
        let d = match derivative {
            B4nsDerivative::Modulus => Derivative::Modulus,
            B4nsDerivative::Coordinate => Derivative::Coordinate(axis),
        };
        unsafe { put_handle(out, B4nsSpec(EquationSpec::monomial(dim, degree, alpha, d)?)) }
    })
}

/// Multiplies every coefficient by `factor`; `0` gives the free equation.
#[no_mangle]
pub unsafe extern "C" fn b4ns_spec_scale(spec: *mut B4nsSpec, factor: f64) -> B4nsStatus {
    guard(|| {
        let s = unsafe { spec.as_mut() }.ok_or(Failure::Null("spec"))?;
        s.0 = s.0.scaled(factor);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_spec_free(spec: *mut B4nsSpec) {
    unsafe { free_handle(spec) }
}

/// Integrates on `[0, horizon]` with step `dt`, keeping every `stride`-th
/// state.
#[no_mangle]
pub unsafe extern "C" fn b4ns_evolve(
    field: *const B4nsField,
    spec: *const B4nsSpec,
    horizon: f64,
    dt: f64,
    stride: usize,
    out: *mut *mut B4nsTrajectory,
) -> B4nsStatus {
    guard(|| {
        let (f, s) = unsafe { (get(field, "field")?, get(spec, "spec")?) };
        unsafe { put_handle(out, B4nsTrajectory(evolution::evolve(&f.0, &s.0, horizon, dt, stride)?)) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_trajectory_len(traj: *const B4nsTrajectory, out: *mut usize) -> B4nsStatus {
    guard(|| {
        let t = unsafe { get(traj, "trajectory") }?;
        unsafe { put(out, t.0.len(), "out") }
    })
}

fn sample_index(t: &Trajectory, index: usize) -> Result<usize, Failure> {
    if index < t.len() {
        Ok(index)
    } else {
        Err(Error::Domain(format!("sample {index} out of range for {} samples", t.len())).into())
    }
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_trajectory_time(traj: *const B4nsTrajectory, index: usize, out: *mut f64) -> B4nsStatus {
    guard(|| {
        let t = unsafe { get(traj, "trajectory") }?;
        let k = sample_index(&t.0, index)?;
        unsafe { put(out, t.0.times()[k], "out") }
    })
}

/// A copy of sample `index` as a new field.
#[no_mangle]
pub unsafe extern "C" fn b4ns_trajectory_state(
    traj: *const B4nsTrajectory,
    index: usize,
    out: *mut *mut B4nsField,
) -> B4nsStatus {
    guard(|| {
        let t = unsafe { get(traj, "trajectory") }?;
        let k = sample_index(&t.0, index)?;
        unsafe { put_handle(out, B4nsField(t.0.states()[k].clone())) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_trajectory_free(traj: *mut B4nsTrajectory) {
    unsafe { free_handle(traj) }
}

/// p-variation of a real path, optionally with a terminal jump to zero.
#[no_mangle]
pub unsafe extern "C" fn b4ns_p_variation_scalar(
    values: *const f64,
    len: usize,
    p: f64,
    endpoint_jump: bool,
    out: *mut f64,
) -> B4nsStatus {
    guard(|| {
        let v = unsafe { slice(values, len, "values") }?;
        unsafe { put(out, variation::p_variation_scalar(v, p, endpoint_jump)?, "out") }
    })
}

/// `−|ξ|⁴ + Σ ±_j |ξ_j|⁴`; `signs[j]` is `+1` or `−1`.
#[no_mangle]
pub unsafe extern "C" fn b4ns_resonance_omega(
    xi_out: f64,
    xi_in: *const f64,
    signs: *const i8,
    m: usize,
    out: *mut f64,
) -> B4nsStatus {
    guard(|| {
        let (xs, ss) = unsafe { (slice(xi_in, m, "xi_in")?, slice(signs, m, "signs")?) };
        let signs = ss
            .iter()
            .map(|&s| match s {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                _ => Err(Error::Domain(format!("sign must be ±1, got {s}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pattern = SignPattern::new(signs)?;
        unsafe { put(out, picard::resonance_omega(xi_out, xs, &pattern)?, "out") }
    })
}

/// `∫₀ᵗ e^{iΩs} ds` written to `(re, im)`.
#[no_mangle]
pub unsafe extern "C" fn b4ns_oscillatory_weight(omega: f64, t: f64, re: *mut f64, im: *mut f64) -> B4nsStatus {
    guard(|| {
        let w = picard::oscillatory_weight(omega, t);
        unsafe {
            put(re, w.re, "re")?;
            put(im, w.im, "im")
        }
    })
}

/// Runs the named scenario. `config` is the text of a `key = value` file and
/// may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn b4ns_run_scenario(
    scenario: *const c_char,
    config: *const c_char,
    out: *mut *mut B4nsRecord,
) -> B4nsStatus {
    guard(|| {
        let name: Scenario = unsafe { text(scenario, "scenario") }?.parse()?;
        let cfg = if config.is_null() {
            ExperimentConfig::new(name)
        } else {
            ExperimentConfig::parse(name, unsafe { text(config, "config") }?)?
        };
        unsafe { put_handle(out, B4nsRecord(run_scenario(&cfg)?)) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_record_pass(record: *const B4nsRecord, out: *mut bool) -> B4nsStatus {
    guard(|| {
        let r = unsafe { get(record, "record") }?;
        unsafe { put(out, r.0.pass, "out") }
    })
}

/// Scalar output `key` of a record.
#[no_mangle]
pub unsafe extern "C" fn b4ns_record_output(
    record: *const B4nsRecord,
    key: *const c_char,
    out: *mut f64,
) -> B4nsStatus {
    guard(|| {
        let r = unsafe { get(record, "record") }?;
        let k = unsafe { text(key, "key") }?;
        let v = *r.0.outputs.get(k).ok_or_else(|| Error::Domain(format!("no output named `{k}`")))?;
        unsafe { put(out, v, "out") }
    })
}

/// The record as JSON. See [`b4ns_last_error`] for the buffer protocol:
/// `*required` receives the size needed including the terminator.
#[no_mangle]
pub unsafe extern "C" fn b4ns_record_json(
    record: *const B4nsRecord,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> B4nsStatus {
    guard(|| {
        let r = unsafe { get(record, "record") }?;
        let json = serde_json::to_string(&r.0).map_err(Error::from)?;
        unsafe { write_text(&json, buf, len, required) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn b4ns_record_free(record: *mut B4nsRecord) {
    unsafe { free_handle(record) }
}
