//! Uniform 1D grids and the sampled fields that live on them.
//!
//! JSON layout:
//!
//! ```json
//! { "grid": {"x_min": -1.0, "x_max": 1.0, "n": 101}, "values": [[1.0, 0.0], ...] }
//! { "grid": {"x_min": -1.0, "x_max": 1.0, "n": 101}, "V": [0.5, ...] }
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("grid needs x_min < x_max (got {x_min} .. {x_max})")]
    EmptyInterval { x_min: f64, x_max: f64 },
    #[error("grid needs at least 3 points (got {0})")]
    TooFewPoints(usize),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
}

/// Uniform grid `x_i = x_min + i*h`, `h = (x_max - x_min)/(n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl TryFrom<RawGrid> for Grid1D {
    type Error = FieldError;
    fn try_from(raw: RawGrid) -> Result<Self, FieldError> {
        Grid1D::new(raw.x_min, raw.x_max, raw.n)
    }
}

impl From<Grid1D> for RawGrid {
    fn from(g: Grid1D) -> Self {
        RawGrid {
            x_min: g.x_min,
            x_max: g.x_max,
            n: g.n,
        }
    }
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, FieldError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(FieldError::EmptyInterval { x_min, x_max });
        }
        if n < 3 {
            return Err(FieldError::TooFewPoints(n));
        }
        Ok(Grid1D { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Samples `f` at every grid point.
    pub fn sample<T>(&self, f: impl Fn(f64) -> T) -> Vec<T> {
        self.points().map(f).collect()
    }
}

fn check_len(grid: &Grid1D, got: usize) -> Result<(), FieldError> {
    if got != grid.len() {
        return Err(FieldError::LengthMismatch {
            expected: grid.len(),
            got,
        });
    }
    Ok(())
}

/// Real samples on a grid (phases, residuals, wavefunction moduli).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealField1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl RealField1D {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self, FieldError> {
        check_len(&grid, values.len())?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FieldError::NonFinite(i));
        }
        Ok(RealField1D { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self, FieldError> {
        Self::new(grid, grid.sample(f))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Complex samples on a grid. Houses the wavefunction, the prefactor and the
/// complex phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawComplexField", into = "RawComplexField")]
pub struct ComplexField1D {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawComplexField {
    grid: Grid1D,
    values: Vec<[f64; 2]>,
}

impl TryFrom<RawComplexField> for ComplexField1D {
    type Error = FieldError;
    fn try_from(raw: RawComplexField) -> Result<Self, FieldError> {
        let values = raw
            .values
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexField1D::new(raw.grid, values)
    }
}

impl From<ComplexField1D> for RawComplexField {
    fn from(f: ComplexField1D) -> Self {
        RawComplexField {
            grid: f.grid,
            values: f.values.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexField1D {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self, FieldError> {
        check_len(&grid, values.len())?;
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(FieldError::NonFinite(i));
        }
        Ok(ComplexField1D { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self, FieldError> {
        Self::new(grid, grid.sample(f))
    }

    pub fn constant(grid: Grid1D, value: Complex64) -> Result<Self, FieldError> {
        Self::new(grid, vec![value; grid.len()])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }
}

/// Zero-energy-form potential: the stored values are `U(x) - E`, so allowed
/// regions have `V < 0` and forbidden regions `V > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPotential", into = "RawPotential")]
pub struct PotentialProfile {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPotential {
    grid: Grid1D,
    #[serde(rename = "V")]
    v: Vec<f64>,
}

impl TryFrom<RawPotential> for PotentialProfile {
    type Error = FieldError;
    fn try_from(raw: RawPotential) -> Result<Self, FieldError> {
        PotentialProfile::new(raw.grid, raw.v)
    }
}

impl From<PotentialProfile> for RawPotential {
    fn from(p: PotentialProfile) -> Self {
        RawPotential {
            grid: p.grid,
            v: p.values,
        }
    }
}

impl PotentialProfile {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self, FieldError> {
        RealField1D::new(grid, values).map(|f| PotentialProfile {
            grid: f.grid,
            values: f.values,
        })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self, FieldError> {
        Self::new(grid, grid.sample(f))
    }

    /// Builds the zero-energy form `U(x) - energy` from a bare potential.
    pub fn from_potential(grid: Grid1D, u: &[f64], energy: f64) -> Result<Self, FieldError> {
        Self::new(grid, u.iter().map(|u| u - energy).collect())
    }

    /// Same profile with every value moved by `delta`.
    pub fn shifted(&self, delta: f64) -> PotentialProfile {
        PotentialProfile {
            grid: self.grid,
            values: self.values.iter().map(|v| v + delta).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}
