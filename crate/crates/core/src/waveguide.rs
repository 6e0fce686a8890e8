//! Rectangular box modes and guided-wave dispersion (c = 1).
//!
//! A mode `(n1, n2)` of an `a x b` cross-section has the transverse profile
//! `sin(pi n1 x / a) sin(pi n2 y / b)` and cutoff `omega_c = pi sqrt(n1^2/a^2 + n2^2/b^2)`.
//! The axial wavenumber obeys `k^2 = omega^2 - omega_c^2`; below cutoff it is
//! taken with `Im k > 0`, i.e. the wave is fed from `z = -inf` and decays toward `+z`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::branch_sqrt_diff_sq;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveguideError {
    #[error("cross-section sides must be positive and finite (a = {a}, b = {b})")]
    BadGeometry { a: f64, b: f64 },
    #[error("mode indices must be at least 1 (n1 = {n1}, n2 = {n2})")]
    BadModeIndex { n1: u32, n2: u32 },
    #[error("point ({x}, {y}) lies outside the cross-section")]
    OutOfBox { x: f64, y: f64 },
    #[error("omega = {omega} is at or above cutoff {omega_c}")]
    NotEvanescent { omega: f64, omega_c: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMode", into = "RawMode")]
pub struct ModeSpec {
    a: f64,
    b: f64,
    n1: u32,
    n2: u32,
}

#[derive(Serialize, Deserialize)]
struct RawMode {
    a: f64,
    b: f64,
    n1: u32,
    n2: u32,
}

impl TryFrom<RawMode> for ModeSpec {
    type Error = WaveguideError;
    fn try_from(r: RawMode) -> Result<Self, WaveguideError> {
        ModeSpec::new(r.a, r.b, r.n1, r.n2)
    }
}

impl From<ModeSpec> for RawMode {
    fn from(m: ModeSpec) -> Self {
        RawMode {
            a: m.a,
            b: m.b,
            n1: m.n1,
            n2: m.n2,
        }
    }
}

impl ModeSpec {
    pub fn new(a: f64, b: f64, n1: u32, n2: u32) -> Result<Self, WaveguideError> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(WaveguideError::BadGeometry { a, b });
        }
        if n1 == 0 || n2 == 0 {
            return Err(WaveguideError::BadModeIndex { n1, n2 });
        }
        Ok(ModeSpec { a, b, n1, n2 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn indices(&self) -> (u32, u32) {
        (self.n1, self.n2)
    }

    /// `n1^2/a^2 + n2^2/b^2`
    fn transverse_sum(&self) -> f64 {
        let p = self.n1 as f64 / self.a;
        let q = self.n2 as f64 / self.b;
        p * p + q * q
    }
}

pub fn cutoff_frequency(mode: &ModeSpec) -> f64 {
    PI * mode.transverse_sum().sqrt()
}

/// `k = sqrt(omega^2 - omega_c^2)`: real and `>= 0` above cutoff, `i|k|` below.
pub fn axial_wavenumber(mode: &ModeSpec, omega: f64) -> Complex64 {
    branch_sqrt_diff_sq(omega, cutoff_frequency(mode))
}

/// `E = pi^2 hbar^2 / (2m) (n1^2/a^2 + n2^2/b^2 + k^2/pi^2)`, complex when `k` is.
pub fn box_energy(mode: &ModeSpec, k: Complex64, mass: f64, hbar: f64) -> Result<Complex64, WaveguideError> {
    if !(mass > 0.0 && hbar > 0.0) {
        return Err(WaveguideError::InvalidParameter("mass and hbar must be positive"));
    }
    let scale = PI * PI * hbar * hbar / (2.0 * mass);
    Ok(scale * (mode.transverse_sum() + k * k / (PI * PI)))
}

/// Unnormalised mode function of one `(mode, k)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub mode: ModeSpec,
    pub k: Complex64,
}

impl ModeFunction {
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<Complex64, WaveguideError> {
        let m = &self.mode;
        if !(0.0..=m.a).contains(&x) || !(0.0..=m.b).contains(&y) {
            return Err(WaveguideError::OutOfBox { x, y });
        }
        let sx = (PI * m.n1 as f64 * x / m.a).sin();
        let sy = (PI * m.n2 as f64 * y / m.b).sin();
        Ok(sx * sy * (Complex64::i() * self.k * z).exp())
    }
}

pub fn mode_wavefunction(mode: &ModeSpec, k: Complex64) -> ModeFunction {
    ModeFunction { mode: *mode, k }
}

/// One row of a dispersion table. Velocities exist only above cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoint {
    pub omega: f64,
    pub omega_c: f64,
    pub k: Complex64,
    pub v_p: Option<f64>,
    pub v_g: Option<f64>,
}

pub fn dispersion_point(mode: &ModeSpec, omega: f64) -> DispersionPoint {
    let omega_c = cutoff_frequency(mode);
    let k = axial_wavenumber(mode, omega);
    let (v_p, v_g) = if omega > omega_c && k.re > 0.0 {
        let kr = k.re;
        let w = (kr * kr + omega_c * omega_c).sqrt();
        (Some(w / kr), Some(kr / w))
    } else {
        (None, None)
    };
    DispersionPoint {
        omega,
        omega_c,
        k,
        v_p,
        v_g,
    }
}

/// Amplitude ratio `exp(-|Im k| L)` over a length `L` of guide below cutoff.
pub fn below_cutoff_attenuation(mode: &ModeSpec, omega: f64, length: f64) -> Result<f64, WaveguideError> {
    let omega_c = cutoff_frequency(mode);
    if omega >= omega_c {
        return Err(WaveguideError::NotEvanescent { omega, omega_c });
    }
    if length.is_nan() || length < 0.0 {
        return Err(WaveguideError::InvalidParameter("length must be non-negative"));
    }
    Ok((-axial_wavenumber(mode, omega).im.abs() * length).exp())
}
