//! Plane-wave scattering by planar interfaces and finite stacks of lossless
//! layers, with the light travelling in the xz plane (c = 1).
//!
//! The transverse wavenumber `k_x = omega n_entry sin(theta0)` is shared by all
//! layers and each layer has `k_z = sqrt(omega^2 n^2 - k_x^2)` on the branch
//! `Re >= 0, Im >= 0`. Amplitudes are referenced to the entry and exit
//! interfaces. S polarisation tracks the transverse electric field; P tracks
//! the transverse magnetic field, so `r_p` at normal incidence has the
//! opposite sign to `r_s`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{branch_sqrt_diff_sq, unwrap_phase};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayeredError {
    #[error("refractive index must be positive and finite (got {0})")]
    InvalidIndex(f64),
    #[error("layer thickness must be positive and finite (got {0})")]
    InvalidThickness(f64),
    #[error("incidence needs omega > 0 and 0 <= theta0 < pi/2 (omega = {omega}, theta0 = {theta0})")]
    InvalidIncidence { omega: f64, theta0: f64 },
    #[error("k_z vanishes in medium {medium} (0 = entry); perturb the angle")]
    DegenerateMatrix { medium: usize },
    #[error("the entry medium does not propagate at omega = {0}")]
    EvanescentEntry(f64),
    #[error("angle is not beyond the critical angle; the transmitted wave propagates")]
    NotEvanescent,
    #[error("transmission phase jumps by at least pi between evaluation points")]
    PhaseJump,
    #[error("stack has zero total thickness")]
    ZeroThickness,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMedium", into = "RawMedium")]
pub struct Medium {
    n: f64,
}

#[derive(Serialize, Deserialize)]
struct RawMedium {
    n: f64,
}

impl TryFrom<RawMedium> for Medium {
    type Error = LayeredError;
    fn try_from(r: RawMedium) -> Result<Self, LayeredError> {
        Medium::new(r.n)
    }
}

impl From<Medium> for RawMedium {
    fn from(m: Medium) -> Self {
        RawMedium { n: m.n }
    }
}

impl Medium {
    pub fn new(n: f64) -> Result<Self, LayeredError> {
        if n > 0.0 && n.is_finite() {
            Ok(Medium { n })
        } else {
            Err(LayeredError::InvalidIndex(n))
        }
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLayer", into = "RawLayer")]
pub struct Layer {
    pub medium: Medium,
    thickness: f64,
}

#[derive(Serialize, Deserialize)]
struct RawLayer {
    n: f64,
    d: f64,
}

impl TryFrom<RawLayer> for Layer {
    type Error = LayeredError;
    fn try_from(r: RawLayer) -> Result<Self, LayeredError> {
        Layer::new(r.n, r.d)
    }
}

impl From<Layer> for RawLayer {
    fn from(l: Layer) -> Self {
        RawLayer {
            n: l.medium.n,
            d: l.thickness,
        }
    }
}

impl Layer {
    pub fn new(n: f64, thickness: f64) -> Result<Self, LayeredError> {
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(LayeredError::InvalidThickness(thickness));
        }
        Ok(Layer {
            medium: Medium::new(n)?,
            thickness,
        })
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn with_thickness(&self, thickness: f64) -> Result<Self, LayeredError> {
        Layer::new(self.medium.n, thickness)
    }
}

/// Entry half-space, ordered layers, exit half-space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumStack {
    pub entry: Medium,
    #[serde(default)]
    pub layers: Vec<Layer>,
    pub exit: Medium,
}

impl MediumStack {
    pub fn new(entry: Medium, layers: Vec<Layer>, exit: Medium) -> Self {
        MediumStack {
            entry,
            layers,
            exit,
        }
    }

    /// Two half-spaces with one finite gap between them.
    pub fn gap(n_outer: f64, n_gap: f64, d: f64, n_exit: f64) -> Result<Self, LayeredError> {
        Ok(MediumStack::new(
            Medium::new(n_outer)?,
            vec![Layer::new(n_gap, d)?],
            Medium::new(n_exit)?,
        ))
    }

    pub fn total_thickness(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness).sum()
    }

    pub fn reversed(&self) -> MediumStack {
        MediumStack {
            entry: self.exit,
            layers: self.layers.iter().rev().copied().collect(),
            exit: self.entry,
        }
    }

    /// Entry, layers and exit in order.
    pub fn media(&self) -> impl Iterator<Item = Medium> + '_ {
        std::iter::once(self.entry)
            .chain(self.layers.iter().map(|l| l.medium))
            .chain(std::iter::once(self.exit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    #[default]
    S,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Incidence {
    pub omega: f64,
    pub theta0: f64,
    #[serde(default)]
    pub polarization: Polarization,
}

impl Incidence {
    pub fn new(omega: f64, theta0: f64, polarization: Polarization) -> Result<Self, LayeredError> {
        if !(omega > 0.0 && omega.is_finite() && (0.0..FRAC_PI_2).contains(&theta0)) {
            return Err(LayeredError::InvalidIncidence { omega, theta0 });
        }
        Ok(Incidence {
            omega,
            theta0,
            polarization,
        })
    }

    pub fn s(omega: f64, theta0: f64) -> Result<Self, LayeredError> {
        Incidence::new(omega, theta0, Polarization::S)
    }
}

pub fn transverse_wavenumber(entry: &Medium, inc: &Incidence) -> f64 {
    inc.omega * entry.n * inc.theta0.sin()
}

/// Which square-root branch `kz_with_branch` uses.
///
/// `FoldedReal` is a deliberately wrong convention (`sqrt(|.|)`, real even
/// when the wave should be evanescent), kept as a fault-injection hook for the
/// verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KzBranch {
    #[default]
    Physical,
    FoldedReal,
}

pub fn kz(medium: &Medium, omega: f64, kx: f64) -> Complex64 {
    kz_with_branch(medium, omega, kx, KzBranch::Physical)
}

pub fn kz_with_branch(medium: &Medium, omega: f64, kx: f64, branch: KzBranch) -> Complex64 {
    let k = branch_sqrt_diff_sq(omega * medium.n, kx.abs());
    match branch {
        KzBranch::Physical => k,
        KzBranch::FoldedReal => Complex64::new(k.norm(), 0.0),
    }
}

/// `theta2 = asin(n1 sin(theta0) / n2)`, continued to `pi/2 - i acosh(s)` once
/// `s = n1 sin(theta0) / n2` exceeds 1, so `cos(theta2)` is `+i sinh(acosh s)`.
pub fn refraction_angle(n1: f64, n2: f64, theta0: f64) -> Complex64 {
    let s = n1 * theta0.sin() / n2;
    if s <= 1.0 {
        Complex64::new(s.asin(), 0.0)
    } else {
        Complex64::new(FRAC_PI_2, -s.acosh())
    }
}

/// `asin(n2/n1)` for `n1 >= n2`; `None` from a rarer into a denser medium.
pub fn critical_angle(n1: f64, n2: f64) -> Option<f64> {
    (n1 >= n2).then(|| (n2 / n1).asin())
}

fn admittance(kz: Complex64, n: f64, pol: Polarization) -> Complex64 {
    match pol {
        Polarization::S => kz,
        Polarization::P => kz / (n * n),
    }
}

/// Single-interface amplitudes from the two normal wavenumbers.
pub fn fresnel_from_kz(
    k1z: Complex64,
    k2z: Complex64,
    n1: f64,
    n2: f64,
    pol: Polarization,
) -> (Complex64, Complex64) {
    let q1 = admittance(k1z, n1, pol);
    let q2 = admittance(k2z, n2, pol);
    ((q1 - q2) / (q1 + q2), 2.0 * q1 / (q1 + q2))
}

pub fn interface_amplitudes(n1: f64, n2: f64, inc: &Incidence) -> (Complex64, Complex64) {
    let m1 = Medium { n: n1 };
    let m2 = Medium { n: n2 };
    let kx = transverse_wavenumber(&m1, inc);
    fresnel_from_kz(
        kz(&m1, inc.omega, kx),
        kz(&m2, inc.omega, kx),
        n1,
        n2,
        inc.polarization,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub r: Complex64,
    pub t: Complex64,
    pub reflectance: f64,
    pub transmittance: f64,
    /// `arg t`, continued along the accumulated propagation phase
    /// `sum Re(k_z) d` so that thick propagating stacks report the full phase.
    pub phase_t: f64,
}

type Mat2 = [[Complex64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Maps amplitudes just right of an interface onto those just left of it.
fn interface_matrix(q_left: Complex64, q_right: Complex64) -> Mat2 {
    let ratio = q_right / q_left;
    let p = 0.5 * (1.0 + ratio);
    let m = 0.5 * (1.0 - ratio);
    [[p, m], [m, p]]
}

/// Undoes propagation through a layer: right-boundary amplitudes to
/// left-boundary amplitudes.
fn inverse_propagation(kz: Complex64, d: f64) -> Mat2 {
    let phase = Complex64::i() * kz * d;
    let zero = Complex64::new(0.0, 0.0);
    [[(-phase).exp(), zero], [zero, phase.exp()]]
}

/// Scattering at an explicit `(omega, k_x)` pair. `stack_scattering` is this
/// evaluated at the incidence's own `k_x`.
pub fn stack_scattering_at(
    stack: &MediumStack,
    omega: f64,
    kx: f64,
    pol: Polarization,
) -> Result<ScatteringResult, LayeredError> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(LayeredError::InvalidParameter("omega must be positive"));
    }
    let media: Vec<Medium> = stack.media().collect();
    let kzs: Vec<Complex64> = media.iter().map(|m| kz(m, omega, kx)).collect();
    if kzs[0].re <= 0.0 {
        return Err(LayeredError::EvanescentEntry(omega));
    }
    for (i, k) in kzs[..kzs.len() - 1].iter().enumerate() {
        if k.norm() < 1e-14 * omega {
            return Err(LayeredError::DegenerateMatrix { medium: i });
        }
    }
    let qs: Vec<Complex64> = kzs
        .iter()
        .zip(&media)
        .map(|(k, m)| admittance(*k, m.n, pol))
        .collect();

    let mut total = interface_matrix(qs[0], qs[1]);
    for (j, layer) in stack.layers.iter().enumerate() {
        let step = mat_mul(
            &inverse_propagation(kzs[j + 1], layer.thickness),
            &interface_matrix(qs[j + 1], qs[j + 2]),
        );
        total = mat_mul(&total, &step);
    }
    let t = 1.0 / total[0][0];
    let r = total[1][0] / total[0][0];

    let last = qs.len() - 1;
    let transmittance = qs[last].re / qs[0].re * t.norm_sqr();
    let propagation: f64 = stack
        .layers
        .iter()
        .zip(&kzs[1..])
        .map(|(l, k)| k.re * l.thickness)
        .sum();
    let rotated = t * Complex64::from_polar(1.0, -propagation);
    Ok(ScatteringResult {
        r,
        t,
        reflectance: r.norm_sqr(),
        transmittance,
        phase_t: propagation + rotated.arg(),
    })
}

pub fn stack_scattering(stack: &MediumStack, inc: &Incidence) -> Result<ScatteringResult, LayeredError> {
    let kx = transverse_wavenumber(&stack.entry, inc);
    stack_scattering_at(stack, inc.omega, kx, inc.polarization)
}

/// `1 / Im k_2z` beyond the critical angle.
pub fn penetration_depth(n1: f64, n2: f64, inc: &Incidence) -> Result<f64, LayeredError> {
    let theta_c = critical_angle(n1, n2).ok_or(LayeredError::NotEvanescent)?;
    if inc.theta0 <= theta_c {
        return Err(LayeredError::NotEvanescent);
    }
    let entry = Medium::new(n1)?;
    let kx = transverse_wavenumber(&entry, inc);
    let kappa = kz(&Medium::new(n2)?, inc.omega, kx).im;
    if kappa <= 0.0 {
        return Err(LayeredError::NotEvanescent);
    }
    Ok(1.0 / kappa)
}

/// Relative frequency step used when the caller passes no `d_omega`.
pub const DEFAULT_RELATIVE_D_OMEGA: f64 = 1e-6;

/// Stationary-phase delay `d(phase_t)/d(omega)` of the stack.
///
/// The derivative is taken at fixed transverse wavenumber `k_x` (that of the
/// central frequency), which is the delay of the equivalent one-dimensional
/// wave problem `psi'' + (omega^2 n^2 - k_x^2) psi = 0`. Central differences at
/// `d_omega` and `d_omega / 2` are combined by Richardson extrapolation.
pub fn group_delay(stack: &MediumStack, inc: &Incidence, d_omega: Option<f64>) -> Result<f64, LayeredError> {
    let h = d_omega.unwrap_or(DEFAULT_RELATIVE_D_OMEGA * inc.omega);
    if !(h > 0.0 && h.is_finite()) {
        return Err(LayeredError::InvalidParameter("d_omega must be positive"));
    }
    if h >= inc.omega {
        return Err(LayeredError::InvalidParameter("d_omega must be smaller than omega"));
    }
    let kx = transverse_wavenumber(&stack.entry, inc);
    let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut t = Vec::with_capacity(offsets.len());
    for o in offsets {
        t.push(stack_scattering_at(stack, inc.omega + o * h, kx, inc.polarization)?.t);
    }
    let phase = unwrap_phase(&t, t[0].arg()).map_err(|_| LayeredError::PhaseJump)?;
    let coarse = (phase[4] - phase[0]) / (2.0 * h);
    let fine = (phase[3] - phase[1]) / h;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Total thickness over group delay. Exceeding 1 means an apparent
/// superluminal average, not a signal speed.
pub fn effective_traversal_speed(
    stack: &MediumStack,
    inc: &Incidence,
    d_omega: Option<f64>,
) -> Result<f64, LayeredError> {
    let thickness = stack.total_thickness();
    if thickness <= 0.0 {
        return Err(LayeredError::ZeroThickness);
    }
    Ok(thickness / group_delay(stack, inc, d_omega)?)
}

/// Normal group velocity `d(omega)/d(k_z) = k_z / (n^2 omega)` at fixed `k_x`
/// in a medium where the wave propagates; `None` where it is evanescent.
pub fn normal_group_velocity(medium: &Medium, omega: f64, kx: f64) -> Option<f64> {
    let k = kz(medium, omega, kx);
    (k.im == 0.0 && k.re > 0.0).then(|| k.re / (medium.n * medium.n * omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TirRow {
    pub theta0: f64,
    pub theta2: Complex64,
    pub abs_r: f64,
    pub depth: Option<f64>,
}

pub fn tir_scan(n1: f64, n2: f64, thetas: &[f64], omega: f64, pol: Polarization) -> Result<Vec<TirRow>, LayeredError> {
    Medium::new(n1)?;
    Medium::new(n2)?;
    thetas
        .iter()
        .map(|&theta0| {
            let inc = Incidence::new(omega, theta0, pol)?;
            let (r, _) = interface_amplitudes(n1, n2, &inc);
            Ok(TirRow {
                theta0,
                theta2: refraction_angle(n1, n2, theta0),
                abs_r: r.norm(),
                depth: penetration_depth(n1, n2, &inc).ok(),
            })
        })
        .collect()
}
