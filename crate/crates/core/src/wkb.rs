//! Complex-phase decomposition of stationary states.
//!
//! A state is written `psi = C * exp(-S / hbar)` with `S = S_r + i S_i`. The
//! real part `S_r` carries the Euclidean (decaying) dynamics and the
//! imaginary part `S_i` the Lorentzian (oscillating) dynamics. Potentials are
//! kept in zero-energy form, `V = U - E`, and units default to `hbar = m = 1`.
//!
//! Derivatives are second-order central differences with first-order
//! one-sided stencils at the two boundary points, so residuals converge as
//! `O(h^2)` on interior points only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{ComplexField1D, FieldError, Grid1D, PotentialProfile, RealField1D};
use crate::numerics::{
    cumulative_trapezoid, first_derivative, second_derivative, simpson, unwrap_phase,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WkbError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("amplitude underflows at grid index {0}")]
    ZeroAmplitude(usize),
    #[error("phase step after grid index {0} is ambiguous (grid too coarse)")]
    UnwrapAmbiguity(usize),
    #[error("fields are sampled on different grids")]
    GridMismatch,
    #[error("span {start}..={end} contains both allowed and forbidden points")]
    MixedRegion { start: usize, end: usize },
    #[error("energy shift changes the classification at grid index {0}")]
    RegionChanged(usize),
    #[error("span {start}..={end} does not fit a grid of {len} points")]
    SpanOutOfRange { start: usize, end: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Splits `psi / C = exp(-S / hbar)` into `(S_r, S_i)`.
///
/// `S_i` is unwrapped with the nearest-branch rule starting from the
/// principal value at the first grid point.
pub fn split_phase(
    psi: &ComplexField1D,
    prefactor: &ComplexField1D,
    hbar: f64,
) -> Result<(RealField1D, RealField1D), WkbError> {
    if psi.grid != prefactor.grid {
        return Err(WkbError::GridMismatch);
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(WkbError::InvalidParameter("hbar must be positive"));
    }
    let mut ratio = Vec::with_capacity(psi.values.len());
    for (i, (p, c)) in psi.values.iter().zip(&prefactor.values).enumerate() {
        if p.norm() < f64::MIN_POSITIVE || c.norm() < f64::MIN_POSITIVE {
            return Err(WkbError::ZeroAmplitude(i));
        }
        let w = p / c;
        if w.norm() < f64::MIN_POSITIVE || !w.norm().is_finite() {
            return Err(WkbError::ZeroAmplitude(i));
        }
        ratio.push(w);
    }
    let phase = unwrap_phase(&ratio, ratio[0].arg()).map_err(WkbError::UnwrapAmbiguity)?;
    let s_r = ratio.iter().map(|w| -hbar * w.norm().ln()).collect();
    let s_i = phase.iter().map(|a| -hbar * a).collect();
    Ok((
        RealField1D::new(psi.grid, s_r)?,
        RealField1D::new(psi.grid, s_i)?,
    ))
}

/// Reassembles `C * exp(-(S_r + i S_i) / hbar)`.
pub fn assemble(
    prefactor: &ComplexField1D,
    s_r: &RealField1D,
    s_i: &RealField1D,
    hbar: f64,
) -> Result<ComplexField1D, WkbError> {
    if prefactor.grid != s_r.grid || prefactor.grid != s_i.grid {
        return Err(WkbError::GridMismatch);
    }
    let values = prefactor
        .values
        .iter()
        .zip(s_r.values.iter().zip(&s_i.values))
        .map(|(c, (r, i))| c * (-Complex64::new(*r, *i) / hbar).exp())
        .collect();
    Ok(ComplexField1D::new(prefactor.grid, values)?)
}

/// Left-hand sides of the classical (`hbar -> 0`) equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalResidual {
    /// `-(S_r')^2/2 + (S_i')^2/2 + V`
    pub real: RealField1D,
    /// `S_r' * S_i'`
    pub imag: RealField1D,
}

pub fn hj_residual_classical(
    s_r: &RealField1D,
    s_i: &RealField1D,
    v: &PotentialProfile,
) -> Result<ClassicalResidual, WkbError> {
    let grid = s_r.grid;
    if s_i.grid != grid || v.grid != grid {
        return Err(WkbError::GridMismatch);
    }
    let h = grid.spacing();
    let dr = first_derivative(&s_r.values, h);
    let di = first_derivative(&s_i.values, h);
    let real = dr
        .iter()
        .zip(&di)
        .zip(&v.values)
        .map(|((a, b), v)| -0.5 * a * a + 0.5 * b * b + v)
        .collect();
    let imag = dr.iter().zip(&di).map(|(a, b)| a * b).collect();
    Ok(ClassicalResidual {
        real: RealField1D::new(grid, real)?,
        imag: RealField1D::new(grid, imag)?,
    })
}

/// Left-hand sides of the full equations including every `hbar` term acting
/// on the prefactor.
///
/// Both fields are complex: with a real prefactor the second one is real to
/// rounding, with a complex prefactor it is not.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumResidual {
    /// `(-(S_r')^2/2 + (S_i')^2/2 + V) C + hbar (S_r'' C / 2 + S_r' C') - hbar^2 C'' / 2`
    pub real_part_eq: ComplexField1D,
    /// `-C S_r' S_i' + hbar (C S_i'' / 2 + S_i' C')`
    pub imag_part_eq: ComplexField1D,
}

pub fn hj_residual_quantum(
    prefactor: &ComplexField1D,
    s_r: &RealField1D,
    s_i: &RealField1D,
    v: &PotentialProfile,
    hbar: f64,
) -> Result<QuantumResidual, WkbError> {
    let grid = prefactor.grid;
    if s_r.grid != grid || s_i.grid != grid || v.grid != grid {
        return Err(WkbError::GridMismatch);
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(WkbError::InvalidParameter("hbar must be positive"));
    }
    let h = grid.spacing();
    let c = &prefactor.values;
    let dc = first_derivative(c, h);
    let ddc = second_derivative(c, h);
    let dr = first_derivative(&s_r.values, h);
    let ddr = second_derivative(&s_r.values, h);
    let di = first_derivative(&s_i.values, h);
    let ddi = second_derivative(&s_i.values, h);

    let mut eq3 = Vec::with_capacity(grid.len());
    let mut eq4 = Vec::with_capacity(grid.len());
    for j in 0..grid.len() {
        let classical = -0.5 * dr[j] * dr[j] + 0.5 * di[j] * di[j] + v.values[j];
        eq3.push(
            c[j] * classical + hbar * (c[j] * (0.5 * ddr[j]) + dc[j] * dr[j])
                - ddc[j] * (0.5 * hbar * hbar),
        );
        eq4.push(-c[j] * (dr[j] * di[j]) + hbar * (c[j] * (0.5 * ddi[j]) + dc[j] * di[j]));
    }
    Ok(QuantumResidual {
        real_part_eq: ComplexField1D::new(grid, eq3)?,
        imag_part_eq: ComplexField1D::new(grid, eq4)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Allowed,
    Forbidden,
    TurningPoint,
}

/// Inclusive range of grid indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check(&self, grid: &Grid1D) -> Result<(), WkbError> {
        if self.start > self.end || self.end >= grid.len() {
            return Err(WkbError::SpanOutOfRange {
                start: self.start,
                end: self.end,
                len: grid.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub span: Span,
    pub x_a: f64,
    pub x_b: f64,
}

/// Maximal runs of one kind; together they cover every grid index in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionClassification {
    pub regions: Vec<Region>,
    pub tolerance: f64,
}

impl RegionClassification {
    pub fn of_kind(&self, kind: RegionKind) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(move |r| r.kind == kind)
    }
}

/// Default turning-point tolerance: `1e-12 * max|V|`.
pub fn default_tolerance(v: &PotentialProfile) -> f64 {
    1e-12 * v.max_abs()
}

fn kind_of(v: f64, tol: f64) -> RegionKind {
    if v < -tol {
        RegionKind::Allowed
    } else if v > tol {
        RegionKind::Forbidden
    } else {
        RegionKind::TurningPoint
    }
}

pub fn classify_regions(v: &PotentialProfile, tolerance: Option<f64>) -> RegionClassification {
    let tol = tolerance.unwrap_or_else(|| default_tolerance(v));
    let grid = v.grid;
    let mut regions: Vec<Region> = Vec::new();
    for (i, &vi) in v.values.iter().enumerate() {
        let kind = kind_of(vi, tol);
        match regions.last_mut() {
            Some(r) if r.kind == kind => {
                r.span.end = i;
                r.x_b = grid.x(i);
            }
            _ => regions.push(Region {
                kind,
                span: Span::new(i, i),
                x_a: grid.x(i),
                x_b: grid.x(i),
            }),
        }
    }
    RegionClassification {
        regions,
        tolerance: tol,
    }
}

/// Total Euclidean and Lorentzian action over a span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Action {
    /// `S_r` total, `∫ sqrt(2V) dx` over forbidden points.
    pub euclidean: f64,
    /// `S_i` total, `∫ sqrt(-2V) dx` over allowed points.
    pub lorentzian: f64,
}

/// Integrates the local momentum over `span` with composite Simpson.
/// The span must not contain both signs of `V` beyond the default tolerance.
pub fn wkb_action(v: &PotentialProfile, span: Span) -> Result<Action, WkbError> {
    span.check(&v.grid)?;
    let tol = default_tolerance(v);
    let slice = &v.values[span.start..=span.end];
    let any_allowed = slice.iter().any(|&x| x < -tol);
    let any_forbidden = slice.iter().any(|&x| x > tol);
    if any_allowed && any_forbidden {
        return Err(WkbError::MixedRegion {
            start: span.start,
            end: span.end,
        });
    }
    let h = v.grid.spacing();
    let euclid: Vec<f64> = slice.iter().map(|&x| (2.0 * x.max(0.0)).sqrt()).collect();
    let lorentz: Vec<f64> = slice.iter().map(|&x| (-2.0 * x.min(0.0)).sqrt()).collect();
    Ok(Action {
        euclidean: simpson(&euclid, h),
        lorentzian: simpson(&lorentz, h),
    })
}

/// Imaginary-time lapse `|dS_r/dE|` through a forbidden span, by a central
/// difference in the energy. Raising `E` by `de` lowers the zero-energy
/// profile by `de`.
pub fn imaginary_time_lapse(v: &PotentialProfile, span: Span, de: f64) -> Result<f64, WkbError> {
    span.check(&v.grid)?;
    if !(de > 0.0 && de.is_finite()) {
        return Err(WkbError::InvalidParameter("energy step must be positive"));
    }
    let tol = default_tolerance(v);
    for i in span.start..=span.end {
        let x = v.values[i];
        if kind_of(x - de, tol) != RegionKind::Forbidden
            || kind_of(x + de, tol) != RegionKind::Forbidden
        {
            return Err(WkbError::RegionChanged(i));
        }
    }
    let lower = wkb_action(&v.shifted(-de), span)?.euclidean;
    let upper = wkb_action(&v.shifted(de), span)?.euclidean;
    Ok(((lower - upper) / (2.0 * de)).abs())
}

/// Leading-order WKB phases accumulated from the left edge of the grid:
/// `S_r(x) = ∫ sqrt(2 max(V,0))`, `S_i(x) = ∫ sqrt(2 max(-V,0))`.
pub fn wkb_phases(v: &PotentialProfile) -> Result<(RealField1D, RealField1D), WkbError> {
    let h = v.grid.spacing();
    let pr: Vec<f64> = v.values.iter().map(|&x| (2.0 * x.max(0.0)).sqrt()).collect();
    let pi: Vec<f64> = v.values.iter().map(|&x| (-2.0 * x.min(0.0)).sqrt()).collect();
    Ok((
        RealField1D::new(v.grid, cumulative_trapezoid(&pr, h))?,
        RealField1D::new(v.grid, cumulative_trapezoid(&pi, h))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn grid(a: f64, b: f64, n: usize) -> Grid1D {
        Grid1D::new(a, b, n).unwrap()
    }

    fn ones(g: Grid1D) -> ComplexField1D {
        ComplexField1D::constant(g, Complex64::new(1.0, 0.0)).unwrap()
    }

    fn real(g: Grid1D, f: impl Fn(f64) -> f64) -> RealField1D {
        RealField1D::from_fn(g, f).unwrap()
    }

    fn pot(g: Grid1D, f: impl Fn(f64) -> f64) -> PotentialProfile {
        PotentialProfile::from_fn(g, f).unwrap()
    }

    /// Subtracts the value at the first point.
    fn relative_to_start(f: &RealField1D) -> Vec<f64> {
        f.values.iter().map(|v| v - f.values[0]).collect()
    }

    #[test]
    fn split_plane_wave() {
        let g = grid(0.0, 3.0, 301);
        let k = 2.0;
        let psi = ComplexField1D::from_fn(g, |x| Complex64::new(0.0, -k * x).exp()).unwrap();
        let (s_r, s_i) = split_phase(&psi, &ones(g), 1.0).unwrap();
        assert!(s_r.max_abs() < 1e-14);
        for (x, s) in g.points().zip(relative_to_start(&s_i)) {
            assert_relative_eq!(s, k * x, epsilon = 1e-12);
        }
    }

    #[test]
    fn split_evanescent_and_gaussian() {
        let g = grid(-2.0, 2.0, 201);
        let psi = ComplexField1D::from_fn(g, |x| Complex64::new((-x).exp(), 0.0)).unwrap();
        let (s_r, s_i) = split_phase(&psi, &ones(g), 1.0).unwrap();
        assert!(s_i.max_abs() < 1e-14);
        for (x, s) in g.points().zip(&s_r.values) {
            assert_relative_eq!(*s, x, epsilon = 1e-12);
        }
        let psi = ComplexField1D::from_fn(g, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
        let (s_r, _) = split_phase(&psi, &ones(g), 1.0).unwrap();
        for (x, s) in g.points().zip(&s_r.values) {
            assert_relative_eq!(*s, x * x / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn split_scales_with_hbar() {
        let g = grid(0.0, 1.0, 11);
        let psi = ComplexField1D::from_fn(g, |x| Complex64::new(-x, -x).exp()).unwrap();
        let (s_r, s_i) = split_phase(&psi, &ones(g), 0.5).unwrap();
        assert_relative_eq!(s_r.values[10], 0.5, epsilon = 1e-14);
        assert_relative_eq!(s_i.values[10] - s_i.values[0], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn split_errors() {
        let g = grid(0.0, 1.0, 3);
        let mut psi = ones(g);
        psi.values[1] = Complex64::new(0.0, 0.0);
        assert_eq!(split_phase(&psi, &ones(g), 1.0), Err(WkbError::ZeroAmplitude(1)));

        let alternating = ComplexField1D::new(
            g,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(
            split_phase(&alternating, &ones(g), 1.0),
            Err(WkbError::UnwrapAmbiguity(0))
        );
        let other = ones(grid(0.0, 2.0, 3));
        assert_eq!(split_phase(&other, &ones(g), 1.0), Err(WkbError::GridMismatch));
    }

    #[test]
    fn classical_residual_examples() {
        let g = grid(-1.0, 1.0, 101);
        let k = 2.0;
        let res = hj_residual_classical(
            &real(g, |_| 0.0),
            &real(g, |x| -k * x),
            &pot(g, |_| -k * k / 2.0),
        )
        .unwrap();
        assert!(res.real.max_abs() < 1e-12);
        assert_eq!(res.imag.max_abs(), 0.0);

        let res = hj_residual_classical(&real(g, |x| x), &real(g, |_| 0.0), &pot(g, |_| 0.5)).unwrap();
        assert!(res.real.max_abs() < 1e-12);
        assert_eq!(res.imag.max_abs(), 0.0);

        // Both branches at once break the orthogonality condition.
        let res = hj_residual_classical(&real(g, |x| x), &real(g, |x| x), &pot(g, |_| 0.0)).unwrap();
        assert!(res.real.max_abs() < 1e-12);
        assert!(res.imag.values.iter().all(|v| (v - 1.0).abs() < 1e-12));

        let other = pot(grid(0.0, 1.0, 101), |_| 0.0);
        assert_eq!(
            hj_residual_classical(&real(g, |x| x), &real(g, |x| x), &other),
            Err(WkbError::GridMismatch)
        );
    }

    #[test]
    fn quantum_residual_examples() {
        let g = grid(-3.0, 3.0, 241);
        let res = hj_residual_quantum(
            &ones(g),
            &real(g, |x| x * x / 2.0),
            &real(g, |_| 0.0),
            &pot(g, |x| x * x / 2.0 - 0.5),
            1.0,
        )
        .unwrap();
        assert!(res.real_part_eq.values[1..240].iter().all(|z| z.norm() < 1e-10));
        assert_eq!(res.imag_part_eq.max_abs(), 0.0);

        let k = 2.0;
        let res = hj_residual_quantum(
            &ones(g),
            &real(g, |_| 0.0),
            &real(g, |x| -k * x),
            &pot(g, |_| -k * k / 2.0),
            1.0,
        )
        .unwrap();
        assert!(res.real_part_eq.max_abs() < 1e-10);
        assert!(res.imag_part_eq.max_abs() < 1e-10);

        let res = hj_residual_quantum(
            &ones(g),
            &real(g, |_| 0.0),
            &real(g, |_| 0.0),
            &pot(g, |_| 1.0),
            1.0,
        )
        .unwrap();
        assert!(res
            .real_part_eq
            .values
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn quantum_residual_with_nontrivial_prefactor() {
        // psi = exp(-x^2/2) written as C = exp(-x^2/4), S_r = x^2/4.
        let g = grid(-2.0, 2.0, 401);
        let c = ComplexField1D::from_fn(g, |x| Complex64::new((-x * x / 4.0).exp(), 0.0)).unwrap();
        let res = hj_residual_quantum(
            &c,
            &real(g, |x| x * x / 4.0),
            &real(g, |_| 0.0),
            &pot(g, |x| x * x / 2.0 - 0.5),
            1.0,
        )
        .unwrap();
        let interior = res.real_part_eq.values[1..400].iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        assert!(interior < 1e-4, "{interior}");
    }

    #[test]
    fn classify_examples() {
        let g = grid(-1.0, 1.0, 21);
        let one = classify_regions(&pot(g, |_| -1.0), None);
        assert_eq!(one.regions.len(), 1);
        assert_eq!(one.regions[0].kind, RegionKind::Allowed);
        assert_eq!(one.regions[0].span, Span::new(0, 20));

        let one = classify_regions(&pot(g, |_| 1.0), None);
        assert_eq!(one.regions[0].kind, RegionKind::Forbidden);

        let ramp = classify_regions(&pot(g, |x| x), None);
        let kinds: Vec<_> = ramp.regions.iter().map(|r| r.kind).collect();
        assert_eq!(
            kinds,
            [RegionKind::Allowed, RegionKind::TurningPoint, RegionKind::Forbidden]
        );
        assert_eq!(ramp.regions[1].span, Span::new(10, 10));
        assert_eq!(ramp.regions[0].x_a, -1.0);
        assert_eq!(ramp.regions[2].x_b, 1.0);
    }

    #[test]
    fn action_examples() {
        let g = grid(0.0, 1.0, 101);
        let a = wkb_action(&pot(g, |_| 0.5), Span::new(0, 100)).unwrap();
        assert_relative_eq!(a.euclidean, 1.0, max_relative = 1e-14);
        assert_eq!(a.lorentzian, 0.0);
        let a = wkb_action(&pot(g, |_| -2.0), Span::new(0, 100)).unwrap();
        assert_relative_eq!(a.lorentzian, 2.0, max_relative = 1e-14);
        assert_eq!(a.euclidean, 0.0);
        let a = wkb_action(&pot(g, |_| 0.5), Span::new(7, 7)).unwrap();
        assert_eq!((a.euclidean, a.lorentzian), (0.0, 0.0));

        let ramp = pot(grid(-1.0, 1.0, 21), |x| x);
        assert_eq!(
            wkb_action(&ramp, Span::new(0, 20)),
            Err(WkbError::MixedRegion { start: 0, end: 20 })
        );
        assert!(matches!(
            wkb_action(&ramp, Span::new(3, 40)),
            Err(WkbError::SpanOutOfRange { .. })
        ));
    }

    #[test]
    fn action_is_additive() {
        let g = grid(0.0, 2.0, 2001);
        let v = pot(g, |x| 1.0 + 0.5 * (3.0 * x).sin());
        let whole = wkb_action(&v, Span::new(0, 2000)).unwrap().euclidean;
        for split in [500, 777, 1000, 1501] {
            let a = wkb_action(&v, Span::new(0, split)).unwrap().euclidean;
            let b = wkb_action(&v, Span::new(split, 2000)).unwrap().euclidean;
            assert_relative_eq!(a + b, whole, max_relative = 1e-10);
        }
    }

    #[test]
    fn lapse_examples() {
        for (width, want) in [(1.0, 1.0), (2.0, 2.0)] {
            let g = grid(0.0, width, 201);
            let t = imaginary_time_lapse(&pot(g, |_| 0.5), Span::new(0, 200), 1e-4).unwrap();
            assert_relative_eq!(t, want, max_relative = 1e-7);
        }
        let g = grid(0.0, 1.0, 201);
        let t = imaginary_time_lapse(&pot(g, |_| 1.0), Span::new(0, 200), 1e-5).unwrap();
        assert_relative_eq!(t, 1.0 / 2.0_f64.sqrt(), max_relative = 1e-8);

        assert_eq!(
            imaginary_time_lapse(&pot(g, |_| 0.5), Span::new(0, 200), 0.6),
            Err(WkbError::RegionChanged(0))
        );
        assert!(imaginary_time_lapse(&pot(g, |_| 0.5), Span::new(0, 200), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn split_then_assemble_round_trips(
            amp in proptest::collection::vec(0.1f64..10.0, 16),
            phase_rate in -3.0f64..3.0,
            hbar in 0.2f64..3.0,
        ) {
            let g = grid(0.0, 1.0, 16);
            let psi = ComplexField1D::new(
                g,
                amp.iter().enumerate()
                    .map(|(i, a)| Complex64::from_polar(*a, phase_rate * i as f64))
                    .collect(),
            ).unwrap();
            let c = ComplexField1D::from_fn(g, |x| Complex64::new(1.0 + x, 0.5 * x)).unwrap();
            let (s_r, s_i) = split_phase(&psi, &c, hbar).unwrap();
            let back = assemble(&c, &s_r, &s_i, hbar).unwrap();
            for (a, b) in psi.values.iter().zip(&back.values) {
                prop_assert!((a - b).norm() <= 1e-12 * a.norm());
            }
        }
    }
}
