//! Brute-force validators: fixed-step RK4 integration of
//! `psi'' + q(z) psi = 0` for scattering amplitudes, decay-constant fits and
//! shooting for bound states.
//!
//! Profiles are piecewise linear in `q` between knots, with jumps allowed at
//! knots, so layer interfaces fall exactly on step boundaries and RK4 keeps
//! its fourth order. Scattering runs backward from the exit side, where the
//! solution is a pure outgoing (or decaying) wave.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Grid1D};
use crate::layered::{transverse_wavenumber, Incidence, LayeredError, MediumStack};
use crate::numerics::{branch_sqrt, fit_line};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Layered(#[from] LayeredError),
    #[error("coefficient is not constant over the first and last 5% of the grid")]
    TailsNotConstant,
    #[error("entry tail does not propagate (coefficient {0} <= 0)")]
    EvanescentEntry(f64),
    #[error("step halving did not settle below 1e-8 within 2^20 steps")]
    NoConvergence,
    #[error("discriminant has the same sign at both ends of [{0}, {1}]")]
    BracketEmpty(f64, f64),
    #[error("bracket [{0}, {1}] holds more than one eigenvalue")]
    BracketAmbiguous(f64, f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// One stretch of the profile where `q` varies linearly from `q0` to `q1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub length: f64,
    pub q0: f64,
    pub q1: f64,
}

/// Coefficient profile `q(z)` on `[0, L]` plus the constant tail values that
/// continue it to `-inf` and `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D {
    pub entry: f64,
    pub exit: f64,
    pub cells: Vec<Cell>,
}

#[derive(Deserialize)]
struct RawProfile {
    grid: Grid1D,
    #[serde(alias = "V")]
    coefficient: Vec<f64>,
}

impl<'de> Deserialize<'de> for Profile1D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawProfile::deserialize(d)?;
        Profile1D::from_samples(raw.grid, &raw.coefficient).map_err(serde::de::Error::custom)
    }
}

impl Profile1D {
    pub fn piecewise_constant(entry: f64, segments: &[(f64, f64)], exit: f64) -> Result<Self, OracleError> {
        let mut cells = Vec::with_capacity(segments.len());
        for &(length, q) in segments {
            if !(length > 0.0 && length.is_finite() && q.is_finite()) {
                return Err(OracleError::InvalidParameter("segments need positive length and finite q"));
            }
            cells.push(Cell { length, q0: q, q1: q });
        }
        if !(entry.is_finite() && exit.is_finite()) {
            return Err(OracleError::InvalidParameter("tail coefficients must be finite"));
        }
        Ok(Profile1D { entry, exit, cells })
    }

    /// Sampled coefficient, interpolated linearly between grid points. The
    /// first and last 5% of the samples must be constant; their values are
    /// the tails.
    pub fn from_samples(grid: Grid1D, coeff: &[f64]) -> Result<Self, OracleError> {
        if coeff.len() != grid.len() {
            return Err(FieldError::LengthMismatch {
                expected: grid.len(),
                got: coeff.len(),
            }
            .into());
        }
        if let Some(i) = coeff.iter().position(|c| !c.is_finite()) {
            return Err(FieldError::NonFinite(i).into());
        }
        let n = coeff.len();
        let tail = ((n as f64) * 0.05).ceil().max(1.0) as usize;
        let (entry, exit) = (coeff[0], coeff[n - 1]);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
        if !coeff[..tail].iter().all(|&c| close(c, entry)) || !coeff[n - tail..].iter().all(|&c| close(c, exit)) {
            return Err(OracleError::TailsNotConstant);
        }
        let h = grid.spacing();
        let cells = coeff
            .windows(2)
            .map(|w| Cell {
                length: h,
                q0: w[0],
                q1: w[1],
            })
            .collect();
        Ok(Profile1D { entry, exit, cells })
    }

    /// Helmholtz form `q = omega^2 n^2 - k_x^2` of an S-polarised stack.
    pub fn from_stack_at(stack: &MediumStack, omega: f64, kx: f64) -> Self {
        let q = |n: f64| (omega * n - kx) * (omega * n + kx);
        Profile1D {
            entry: q(stack.entry.n()),
            exit: q(stack.exit.n()),
            cells: stack
                .layers
                .iter()
                .map(|l| Cell {
                    length: l.thickness(),
                    q0: q(l.medium.n()),
                    q1: q(l.medium.n()),
                })
                .collect(),
        }
    }

    pub fn from_stack(stack: &MediumStack, inc: &Incidence) -> Self {
        Self::from_stack_at(stack, inc.omega, transverse_wavenumber(&stack.entry, inc))
    }

    pub fn length(&self) -> f64 {
        self.cells.iter().map(|c| c.length).sum()
    }

    /// Substeps per cell at refinement level 0: about 0.2 rad of local phase
    /// (or decay) per step, at least one step.
    fn base_substeps(&self) -> Vec<usize> {
        let kmax = self.entry.abs().max(self.exit.abs()).sqrt();
        self.cells
            .iter()
            .map(|c| {
                let k = c.q0.abs().max(c.q1.abs()).sqrt().max(kmax);
                ((c.length * k / 0.2).ceil() as usize).max(1)
            })
            .collect()
    }
}

type State = (Complex64, Complex64);

fn rk4_cell(cell: &Cell, steps: usize, start: State, backward: bool) -> State {
    let h = cell.length / steps as f64;
    let slope = (cell.q1 - cell.q0) / cell.length;
    let q = |s: f64| cell.q0 + slope * s;
    let f = |s: f64, (y, v): State| -> State { (v, -q(s) * y) };
    let (dir, mut s) = if backward { (-1.0, cell.length) } else { (1.0, 0.0) };
    let hh = dir * h;
    let (mut y, mut v) = start;
    for _ in 0..steps {
        let k1 = f(s, (y, v));
        let k2 = f(s + 0.5 * hh, (y + 0.5 * hh * k1.0, v + 0.5 * hh * k1.1));
        let k3 = f(s + 0.5 * hh, (y + 0.5 * hh * k2.0, v + 0.5 * hh * k2.1));
        let k4 = f(s + hh, (y + hh * k3.0, v + hh * k3.1));
        y += hh / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += hh / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        s += hh;
    }
    (y, v)
}

/// Complex reflection and transmission amplitudes referenced to `z = 0` and
/// `z = L`. Serialises as `{"r":[re,im],"t":[re,im]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub r: Complex64,
    pub t: Complex64,
}

impl Serialize for Amplitudes {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            r: [f64; 2],
            t: [f64; 2],
        }
        Raw {
            r: [self.r.re, self.r.im],
            t: [self.t.re, self.t.im],
        }
        .serialize(s)
    }
}

/// Largest total step count allowed during refinement.
pub const MAX_STEPS: usize = 1 << 20;

/// Scattering amplitudes with every cell's step count multiplied by `2^level`.
pub fn integrate_helmholtz_at_level(profile: &Profile1D, level: u32) -> Result<Amplitudes, OracleError> {
    if profile.entry <= 0.0 {
        return Err(OracleError::EvanescentEntry(profile.entry));
    }
    let k_entry = profile.entry.sqrt();
    let k_exit = branch_sqrt(Complex64::new(profile.exit, 0.0));
    let mut state: State = (Complex64::new(1.0, 0.0), Complex64::i() * k_exit);
    for (cell, base) in profile.cells.iter().zip(profile.base_substeps()).rev() {
        state = rk4_cell(cell, base << level, state, true);
    }
    let (psi, dpsi) = state;
    let ratio = dpsi / (Complex64::i() * k_entry);
    let a = 0.5 * (psi + ratio);
    let b = 0.5 * (psi - ratio);
    Ok(Amplitudes { r: b / a, t: 1.0 / a })
}

fn rel_change(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Step count of a profile at a given refinement level.
pub fn total_steps(profile: &Profile1D, level: u32) -> usize {
    profile.base_substeps().iter().map(|b| b << level).sum()
}

/// Halves the step until `r` and `t` each change by less than 1e-8 relative,
/// and returns the finer of the last two results.
pub fn integrate_helmholtz_1d(profile: &Profile1D) -> Result<Amplitudes, OracleError> {
    let mut prev = integrate_helmholtz_at_level(profile, 0)?;
    for level in 1..=20 {
        if total_steps(profile, level) > MAX_STEPS {
            break;
        }
        let cur = integrate_helmholtz_at_level(profile, level)?;
        let r_ok = rel_change(prev.r, cur.r) < 1e-8 || (prev.r - cur.r).norm() < 1e-14;
        if r_ok && rel_change(prev.t, cur.t) < 1e-8 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(OracleError::NoConvergence)
}

/// Fitted decay constant `kappa` with the standard error of the slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub kappa: f64,
    pub std_err: f64,
}

/// Least-squares slope of `ln|t|` against barrier width, negated.
pub fn transmission_slope<F>(family: F, widths: &[f64]) -> Result<SlopeFit, OracleError>
where
    F: Fn(f64) -> Result<Profile1D, OracleError>,
{
    if widths.len() < 4 {
        return Err(OracleError::InvalidParameter("need at least 4 widths"));
    }
    let mut ln_t = Vec::with_capacity(widths.len());
    for &w in widths {
        ln_t.push(integrate_helmholtz_1d(&family(w)?)?.t.norm().ln());
    }
    let fit = fit_line(widths, &ln_t);
    Ok(SlopeFit {
        kappa: -fit.slope,
        std_err: fit.slope_std_err,
    })
}

/// Hard-walled 1D problem `-hbar^2/(2m) psi'' + U psi = E psi` with
/// `psi = 0` at both grid ends. `U` is interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateProblem {
    pub grid: Grid1D,
    pub potential: Vec<f64>,
    pub mass: f64,
    pub hbar: f64,
}

impl BoundStateProblem {
    pub fn new(grid: Grid1D, potential: Vec<f64>, mass: f64, hbar: f64) -> Result<Self, OracleError> {
        if potential.len() != grid.len() {
            return Err(FieldError::LengthMismatch {
                expected: grid.len(),
                got: potential.len(),
            }
            .into());
        }
        if !(mass > 0.0 && hbar > 0.0) {
            return Err(OracleError::InvalidParameter("mass and hbar must be positive"));
        }
        Ok(BoundStateProblem {
            grid,
            potential,
            mass,
            hbar,
        })
    }

    /// Flat-bottomed infinite well of the given width.
    pub fn infinite_well(width: f64, mass: f64, hbar: f64) -> Result<Self, OracleError> {
        Self::new(Grid1D::new(0.0, width, 3)?, vec![0.0; 3], mass, hbar)
    }

    fn cells(&self, energy: f64) -> Vec<Cell> {
        let scale = 2.0 * self.mass / (self.hbar * self.hbar);
        let h = self.grid.spacing();
        self.potential
            .windows(2)
            .map(|w| Cell {
                length: h,
                q0: scale * (energy - w[0]),
                q1: scale * (energy - w[1]),
            })
            .collect()
    }

    fn base_substeps(&self, bracket_hi: f64) -> Vec<usize> {
        self.cells(bracket_hi)
            .iter()
            .map(|c| {
                let k = c.q0.abs().max(c.q1.abs()).sqrt();
                ((c.length * k / 0.05).ceil() as usize).max(16)
            })
            .collect()
    }

    /// `psi` at the right wall for a unit-slope start at the left wall.
    fn discriminant(&self, energy: f64, steps: &[usize]) -> f64 {
        let mut state: State = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        for (cell, &m) in self.cells(energy).iter().zip(steps) {
            state = rk4_cell(cell, m, state, false);
        }
        state.0.re
    }
}

/// Energy of the single eigenvalue inside `bracket` by shooting and
/// bisection, refined until halving the step moves it by less than 1e-11.
pub fn bound_state_energy(problem: &BoundStateProblem, bracket: (f64, f64)) -> Result<f64, OracleError> {
    let (lo, hi) = bracket;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(OracleError::InvalidParameter("bracket must satisfy lo < hi"));
    }
    let base = problem.base_substeps(hi);
    let mut prev: Option<f64> = None;
    for level in 0..=12u32 {
        let steps: Vec<usize> = base.iter().map(|b| b << level).collect();
        if steps.iter().sum::<usize>() > MAX_STEPS {
            break;
        }
        let e = bisect_eigenvalue(problem, lo, hi, &steps)?;
        if let Some(p) = prev {
            if (e - p).abs() < 1e-11 * e.abs().max(1.0) {
                return Ok(e);
            }
        }
        prev = Some(e);
    }
    Err(OracleError::NoConvergence)
}

fn bisect_eigenvalue(problem: &BoundStateProblem, lo: f64, hi: f64, steps: &[usize]) -> Result<f64, OracleError> {
    let d = |e: f64| problem.discriminant(e, steps);
    const PROBES: usize = 64;
    let mut changes = 0;
    let mut prev = d(lo);
    for i in 1..=PROBES {
        let e = lo + (hi - lo) * i as f64 / PROBES as f64;
        let cur = d(e);
        if prev.signum() != cur.signum() {
            changes += 1;
        }
        prev = cur;
    }
    let (d_lo, d_hi) = (d(lo), d(hi));
    if changes > 1 {
        return Err(OracleError::BracketAmbiguous(lo, hi));
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(OracleError::BracketEmpty(lo, hi));
    }
    let (mut a, mut b, mut da) = (lo, hi, d_lo);
    while b - a > 1e-14 * b.abs().max(1.0) {
        let mid = 0.5 * (a + b);
        let dm = d(mid);
        if dm == 0.0 {
            return Ok(mid);
        }
        if dm.signum() == da.signum() {
            a = mid;
            da = dm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
