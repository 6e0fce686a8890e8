//! C ABI over the `evanescent` library.
//!
//! Objects cross the boundary as opaque handles created by `ev_*_new` and
//! released by the matching `ev_*_free`. Every fallible call returns an
//! [`EvStatus`]; on failure a message is kept per thread and can be read with
//! [`ev_last_error_message`]. Results are written through out-pointers, which
//! are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use evanescent::layered::{self, Incidence, Layer, Medium, MediumStack, Polarization};
use evanescent::oracle::{self, BoundStateProblem, Profile1D};
use evanescent::waveguide::{self, ModeSpec};
use evanescent::wkb::{self, RegionKind, Span};
use evanescent::{Grid1D, PotentialProfile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NoConvergence = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvPolarization {
    S = 0,
    P = 1,
}

impl From<EvPolarization> for Polarization {
    fn from(p: EvPolarization) -> Self {
        match p {
            EvPolarization::S => Polarization::S,
            EvPolarization::P => Polarization::P,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvRegionKind {
    Allowed = 0,
    Forbidden = 1,
    TurningPoint = 2,
}

/// Opaque waveguide mode.
pub struct EvMode(ModeSpec);
/// Opaque layered stack.
pub struct EvStack(MediumStack);
/// Opaque zero-energy potential `V = U - E` on a uniform grid.
pub struct EvPotential(PotentialProfile);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EvDispersion {
    pub omega: f64,
    pub omega_c: f64,
    pub k_re: f64,
    pub k_im: f64,
    /// Nonzero when `v_p` and `v_g` are defined (above cutoff).
    pub propagating: i32,
    pub v_p: f64,
    pub v_g: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EvScattering {
    pub r_re: f64,
    pub r_im: f64,
    pub t_re: f64,
    pub t_im: f64,
    pub reflectance: f64,
    pub transmittance: f64,
    pub phase_t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EvAmplitudes {
    pub r_re: f64,
    pub r_im: f64,
    pub t_re: f64,
    pub t_im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EvRegion {
    pub kind: EvRegionKind,
    pub start: usize,
    pub end: usize,
    pub x_a: f64,
    pub x_b: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

struct Failure(EvStatus, String);

impl Failure {
    fn invalid(e: impl ToString) -> Self {
        Failure(EvStatus::InvalidArgument, e.to_string())
    }
    fn domain(e: impl ToString) -> Self {
        Failure(EvStatus::Domain, e.to_string())
    }
}

impl From<oracle::OracleError> for Failure {
    fn from(e: oracle::OracleError) -> Self {
        let status = match e {
            oracle::OracleError::NoConvergence => EvStatus::NoConvergence,
            oracle::OracleError::InvalidParameter(_) | oracle::OracleError::Field(_) => EvStatus::InvalidArgument,
            _ => EvStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            EvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EvStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(EvStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(EvStatus::NullPointer, "null handle".into()))
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string and returns its length without the terminator.
/// With a null `buf` or too small a `len` nothing is written, so the caller
/// can query the length first.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ev_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > bytes.len() {
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
            *buf.add(bytes.len()) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ev_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `result` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_critical_angle(n1: f64, n2: f64, result: *mut f64) -> EvStatus {
    guard(|| {
        let result = out(result)?;
        Medium::new(n1).map_err(Failure::invalid)?;
        Medium::new(n2).map_err(Failure::invalid)?;
        *result = layered::critical_angle(n1, n2)
            .ok_or_else(|| Failure::domain("no critical angle from a rarer into a denser medium"))?;
        Ok(())
    })
}

/// # Safety
/// `mode` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_mode_new(a: f64, b: f64, n1: u32, n2: u32, mode: *mut *mut EvMode) -> EvStatus {
    guard(|| {
        let mode = out(mode)?;
        let spec = ModeSpec::new(a, b, n1, n2).map_err(Failure::invalid)?;
        *mode = Box::into_raw(Box::new(EvMode(spec)));
        Ok(())
    })
}

/// # Safety
/// `mode` must be null or a handle from `ev_mode_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ev_mode_free(mode: *mut EvMode) {
    if !mode.is_null() {
        drop(Box::from_raw(mode));
    }
}

/// # Safety
/// `mode` must be a live handle and `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_mode_dispersion(mode: *const EvMode, omega: f64, result: *mut EvDispersion) -> EvStatus {
    guard(|| {
        let mode = handle(mode)?;
        let result = out(result)?;
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Failure::invalid("omega must be finite and non-negative"));
        }
        let p = waveguide::dispersion_point(&mode.0, omega);
        *result = EvDispersion {
            omega: p.omega,
            omega_c: p.omega_c,
            k_re: p.k.re,
            k_im: p.k.im,
            propagating: i32::from(p.v_p.is_some()),
            v_p: p.v_p.unwrap_or(f64::NAN),
            v_g: p.v_g.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// A stack with no layers between two half-spaces.
///
/// # Safety
/// `stack` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_new(n_entry: f64, n_exit: f64, stack: *mut *mut EvStack) -> EvStatus {
    guard(|| {
        let stack = out(stack)?;
        let s = MediumStack::new(
            Medium::new(n_entry).map_err(Failure::invalid)?,
            Vec::new(),
            Medium::new(n_exit).map_err(Failure::invalid)?,
        );
        *stack = Box::into_raw(Box::new(EvStack(s)));
        Ok(())
    })
}

/// Parses `{"entry":{"n":..},"layers":[{"n":..,"d":..}],"exit":{"n":..}}`.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `stack` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_from_json(json: *const c_char, stack: *mut *mut EvStack) -> EvStatus {
    guard(|| {
        let stack = out(stack)?;
        if json.is_null() {
            return Err(Failure(EvStatus::NullPointer, "null json".into()));
        }
        let text = CStr::from_ptr(json).to_str().map_err(Failure::invalid)?;
        let s: MediumStack = serde_json::from_str(text).map_err(Failure::invalid)?;
        *stack = Box::into_raw(Box::new(EvStack(s)));
        Ok(())
    })
}

/// Appends a layer on the exit side.
///
/// # Safety
/// `stack` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_push_layer(stack: *mut EvStack, n: f64, thickness: f64) -> EvStatus {
    guard(|| {
        let stack = stack
            .as_mut()
            .ok_or_else(|| Failure(EvStatus::NullPointer, "null handle".into()))?;
        stack.0.layers.push(Layer::new(n, thickness).map_err(Failure::invalid)?);
        Ok(())
    })
}

/// # Safety
/// `stack` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_free(stack: *mut EvStack) {
    if !stack.is_null() {
        drop(Box::from_raw(stack));
    }
}

fn incidence(omega: f64, theta0: f64, pol: EvPolarization) -> Result<Incidence, Failure> {
    Incidence::new(omega, theta0, pol.into()).map_err(Failure::invalid)
}

/// Transfer-matrix reflection and transmission.
///
/// # Safety
/// `stack` must be a live handle and `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_scattering(
    stack: *const EvStack,
    omega: f64,
    theta0: f64,
    polarization: EvPolarization,
    result: *mut EvScattering,
) -> EvStatus {
    guard(|| {
        let stack = handle(stack)?;
        let result = out(result)?;
        let inc = incidence(omega, theta0, polarization)?;
        let s = layered::stack_scattering(&stack.0, &inc).map_err(Failure::domain)?;
        *result = EvScattering {
            r_re: s.r.re,
            r_im: s.r.im,
            t_re: s.t.re,
            t_im: s.t.im,
            reflectance: s.reflectance,
            transmittance: s.transmittance,
            phase_t: s.phase_t,
        };
        Ok(())
    })
}

/// Group delay of the transmitted wave. A `d_omega` of zero selects the
/// default step.
///
/// # Safety
/// `stack` must be a live handle and `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_group_delay(
    stack: *const EvStack,
    omega: f64,
    theta0: f64,
    polarization: EvPolarization,
    d_omega: f64,
    result: *mut f64,
) -> EvStatus {
    guard(|| {
        let stack = handle(stack)?;
        let result = out(result)?;
        let inc = incidence(omega, theta0, polarization)?;
        let step = (d_omega != 0.0).then_some(d_omega);
        *result = layered::group_delay(&stack.0, &inc, step).map_err(Failure::domain)?;
        Ok(())
    })
}

/// Amplitudes from direct integration of the wave equation (S polarization).
///
/// # Safety
/// `stack` must be a live handle and `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_stack_oracle(
    stack: *const EvStack,
    omega: f64,
    theta0: f64,
    result: *mut EvAmplitudes,
) -> EvStatus {
    guard(|| {
        let stack = handle(stack)?;
        let result = out(result)?;
        let inc = incidence(omega, theta0, EvPolarization::S)?;
        let a = oracle::integrate_helmholtz_1d(&Profile1D::from_stack(&stack.0, &inc))?;
        *result = EvAmplitudes {
            r_re: a.r.re,
            r_im: a.r.im,
            t_re: a.t.re,
            t_im: a.t.im,
        };
        Ok(())
    })
}

/// Samples `U` on `n` uniform points over `[x_min, x_max]` and stores the
/// zero-energy form `U - energy`.
///
/// # Safety
/// `u` must point to `n` readable doubles; `potential` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_potential_new(
    x_min: f64,
    x_max: f64,
    u: *const f64,
    n: usize,
    energy: f64,
    potential: *mut *mut EvPotential,
) -> EvStatus {
    guard(|| {
        let potential = out(potential)?;
        if u.is_null() {
            return Err(Failure(EvStatus::NullPointer, "null samples".into()));
        }
        let samples = std::slice::from_raw_parts(u, n);
        let grid = Grid1D::new(x_min, x_max, n).map_err(Failure::invalid)?;
        let v = PotentialProfile::from_potential(grid, samples, energy).map_err(Failure::invalid)?;
        *potential = Box::into_raw(Box::new(EvPotential(v)));
        Ok(())
    })
}

/// # Safety
/// `potential` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ev_potential_free(potential: *mut EvPotential) {
    if !potential.is_null() {
        drop(Box::from_raw(potential));
    }
}

/// Writes up to `cap` regions into `regions` and the total count into
/// `count`. Returns `BufferTooSmall` (with `count` set) when `cap` is short.
///
/// # Safety
/// `potential` must be a live handle, `regions` null or valid for `cap`
/// writes, `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_potential_regions(
    potential: *const EvPotential,
    regions: *mut EvRegion,
    cap: usize,
    count: *mut usize,
) -> EvStatus {
    guard(|| {
        let potential = handle(potential)?;
        let count = out(count)?;
        let classes = wkb::classify_regions(&potential.0, None);
        *count = classes.regions.len();
        if regions.is_null() || cap < classes.regions.len() {
            return Err(Failure(EvStatus::BufferTooSmall, "region buffer too small".into()));
        }
        for (i, r) in classes.regions.iter().enumerate() {
            *regions.add(i) = EvRegion {
                kind: match r.kind {
                    RegionKind::Allowed => EvRegionKind::Allowed,
                    RegionKind::Forbidden => EvRegionKind::Forbidden,
                    RegionKind::TurningPoint => EvRegionKind::TurningPoint,
                },
                start: r.span.start,
                end: r.span.end,
                x_a: r.x_a,
                x_b: r.x_b,
            };
        }
        Ok(())
    })
}

/// Euclidean and Lorentzian actions over grid indices `start..=end`.
///
/// # Safety
/// `potential` must be a live handle; `euclidean` and `lorentzian` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ev_potential_action(
    potential: *const EvPotential,
    start: usize,
    end: usize,
    euclidean: *mut f64,
    lorentzian: *mut f64,
) -> EvStatus {
    guard(|| {
        let potential = handle(potential)?;
        let (e, l) = (out(euclidean)?, out(lorentzian)?);
        let a = wkb::wkb_action(&potential.0, Span::new(start, end)).map_err(Failure::domain)?;
        *e = a.euclidean;
        *l = a.lorentzian;
        Ok(())
    })
}

/// Imaginary-time lapse `|dS_r/dE|` through a forbidden span.
///
/// # Safety
/// `potential` must be a live handle and `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_potential_imaginary_time(
    potential: *const EvPotential,
    start: usize,
    end: usize,
    d_energy: f64,
    result: *mut f64,
) -> EvStatus {
    guard(|| {
        let potential = handle(potential)?;
        let result = out(result)?;
        *result = wkb::imaginary_time_lapse(&potential.0, Span::new(start, end), d_energy)
            .map_err(Failure::domain)?;
        Ok(())
    })
}

/// Eigenvalue of a flat infinite well inside `[lo, hi]`.
///
/// # Safety
/// `result` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ev_infinite_well_energy(
    width: f64,
    mass: f64,
    hbar: f64,
    lo: f64,
    hi: f64,
    result: *mut f64,
) -> EvStatus {
    guard(|| {
        let result = out(result)?;
        let problem = BoundStateProblem::infinite_well(width, mass, hbar)?;
        *result = oracle::bound_state_energy(&problem, (lo, hi))?;
        Ok(())
    })
}
