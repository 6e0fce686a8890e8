//! Imaginary-time propagation made computable: complex-phase WKB analysis of
//! stationary states, waveguide cutoff dispersion, and total / frustrated total
//! internal reflection with group-delay analysis, all checked against a
//! brute-force ODE oracle.
//!
//! Natural units throughout: `hbar = m = c = 1` unless a function takes them
//! as parameters.

pub mod cli;
pub mod field;
pub mod layered;
pub mod numerics;
pub mod oracle;
pub mod scan;
pub mod verify;
pub mod waveguide;
pub mod wkb;

pub use field::{ComplexField1D, FieldError, Grid1D, PotentialProfile, RealField1D};
pub use layered::{Incidence, Layer, Medium, MediumStack, Polarization, ScatteringResult};
pub use waveguide::{DispersionPoint, ModeSpec};
