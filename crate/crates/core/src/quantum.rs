//! Quantum sector of the pair-harmonic limit in the zero-charge sector of
//! the translational charge: the origin exponent, the series-termination
//! energy ladder, polynomial eigenfunctions with residual checks, a
//! finite-difference spectral oracle, phase classification, and the Stokes
//! wedges of the non-normalizable ground-state branch.
//!
//! After separating the center-of-mass phase, the relative wave function
//! obeys the reduced equation
//!
//! ```text
//! f''(z) - (W^2/4) z^2 f(z) + (g / (2 z^2)) f(z) = E f(z)
//! ```
//!
//! on the half-line (the singular origin splits space; the other half
//! follows by parity). The ansatz `f = z^lambda exp(-C z^2) phi(z)` with
//! `lambda (lambda - 1) = -g/2` and `C = +-W/4` turns the eigenproblem into
//! a two-step recursion for the even series coefficients of `phi`; bound
//! states occur exactly where the series terminates, giving the ladder
//! `E_n = -2C (2n + 1 + 2 lambda)` over even `n`.
//!
//! Branch conventions: the larger exponent root keeps `f(0) = 0`; `C =
//! -W/4` bounds the spectrum from below but leaves the state
//! non-normalizable on the real line (hence the wedges), while `C = +W/4`
//! is normalizable and is the branch the finite-difference oracle
//! discretizes, with `E(-C) = -E(+C)` linking the two.

use crate::calogero::{classify_phase, PtPhase};
use crate::model::{ModelError, ModelParams};
use crate::numerics::tridiag;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("exponent relation lambda(lambda - 1) = -g/2 has complex roots for g = {0} > 1/2")]
    ComplexExponents(f64),
    #[error("operation requires the unbroken phase (real effective frequency)")]
    BrokenPhase,
    #[error("operation is degenerate at the phase boundary (C = 0)")]
    BoundaryDegenerate,
    #[error("series recursion denominator vanishes at n = {0}")]
    VanishingDenominator(usize),
    #[error("finite-difference eigensolver did not converge: {0}")]
    Convergence(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Sign choice of the Gaussian scale `C = +-W/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `C = +W/4`: normalizable on the real line, spectrum unbounded below.
    Plus,
    /// `C = -W/4`: spectrum bounded below, normalizable only in wedges.
    Minus,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

/// Exponent roots of `lambda (lambda - 1) = -g/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRoots {
    pub plus: f64,
    pub minus: f64,
    /// The larger root, which keeps the wave function vanishing at the
    /// origin.
    pub selected: f64,
}

/// Solve the exponent relation; real roots require `g <= 1/2`.
pub fn lambda_from_g(g: f64) -> Result<LambdaRoots, QuantumError> {
    let disc = 1.0 - 2.0 * g;
    if disc < 0.0 {
        return Err(QuantumError::ComplexExponents(g));
    }
    let root = disc.sqrt();
    Ok(LambdaRoots {
        plus: 0.5 * (1.0 + root),
        minus: 0.5 * (1.0 - root),
        selected: 0.5 * (1.0 + root),
    })
}

/// Phase of the quantum problem. Shares the classifier with the classical
/// effective frequency, so the two transition points coincide identically.
pub fn quantum_phase(p: &ModelParams) -> PtPhase {
    classify_phase(p.omega, p.gamma).1
}

/// Derived quantum parameters for one branch choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumParams {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Selected exponent (the larger root).
    pub lambda: f64,
    /// Gaussian scale `C`; real in the unbroken phase, imaginary beyond it.
    pub gauss_scale: Complex64,
    /// Effective frequency `W`; positive real or positive imaginary.
    pub omega_eff: Complex64,
    pub phase: PtPhase,
    pub branch: Branch,
    /// Charge sector (only the zero sector admits normalizable solutions).
    pub k: f64,
    /// Inverse-square coupling, kept for the spectral oracle.
    pub g: f64,
    /// Set when `0 < g <= 1/2`: computable, but outside the attractive
    /// regime the classical analysis favors.
    pub outside_attractive_regime: bool,
}

/// Build the quantum parameters for the given couplings and branch.
pub fn quantum_params(p: &ModelParams, branch: Branch) -> Result<QuantumParams, QuantumError> {
    let roots = lambda_from_g(p.g)?;
    let (w2, phase) = classify_phase(p.omega, p.gamma);
    // At the boundary the classifier owns the call: pin W (and with it C)
    // to exactly zero rather than the rounding residue of w2.
    let omega_eff = match phase {
        PtPhase::Boundary => Complex64::new(0.0, 0.0),
        _ if w2 >= 0.0 => Complex64::new(w2.sqrt(), 0.0),
        _ => Complex64::new(0.0, (-w2).sqrt()),
    };
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    Ok(QuantumParams {
        lambda_plus: roots.plus,
        lambda_minus: roots.minus,
        lambda: roots.selected,
        gauss_scale: omega_eff * (sign / 4.0),
        omega_eff,
        phase,
        branch,
        k: 0.0,
        g: p.g,
        outside_attractive_regime: p.g > 0.0,
    })
}

impl QuantumParams {
    fn real_gauss_scale(&self) -> Result<f64, QuantumError> {
        if self.phase == PtPhase::Broken {
            return Err(QuantumError::BrokenPhase);
        }
        Ok(self.gauss_scale.re)
    }
}

/// Bound-state ladder `E_n = -2C (2n + 1 + 2 lambda)` over even `n = 2m`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSpectrum {
    /// Energies for `m = 0..levels`; real in the unbroken phase, complex
    /// conjugates across the two branches beyond it.
    pub energies: Vec<Complex64>,
    pub phase: PtPhase,
    pub branch: Branch,
}

pub fn energy_ladder(qp: &QuantumParams, levels: usize) -> QuantumSpectrum {
    let energies = (0..levels)
        .map(|m| {
            let n = 2.0 * m as f64;
            -2.0 * qp.gauss_scale * (2.0 * n + 1.0 + 2.0 * qp.lambda)
        })
        .collect();
    QuantumSpectrum {
        energies,
        phase: qp.phase,
        branch: qp.branch,
    }
}

/// Power-series solution of the reduced equation after the ansatz:
/// `phi(z) = sum a_n z^n` with `a_1 = 0` and
///
/// ```text
/// a_{n+2} = [(E + 2C + 4 lambda C) + 4 C n] / [(n + 2)(n + 1 + 2 lambda)] a_n.
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    /// Coefficients `a_0..a_N` with `a_0 = 1`; odd entries vanish.
    pub coefficients: Vec<f64>,
    pub terminated: bool,
    /// The even index whose numerator vanished (the polynomial degree).
    pub terminated_at: Option<usize>,
}

const TERMINATION_TOL: f64 = 1e-12;

pub fn series_coefficients(
    energy: f64,
    qp: &QuantumParams,
    n_max: usize,
) -> Result<SeriesSolution, QuantumError> {
    let c = qp.real_gauss_scale()?;
    let lambda = qp.lambda;
    let mut coeffs = vec![0.0; n_max + 1];
    coeffs[0] = 1.0;
    let mut terminated_at = None;
    for n in 0..n_max.saturating_sub(1) {
        let denom = (n as f64 + 2.0) * (n as f64 + 1.0 + 2.0 * lambda);
        if denom == 0.0 {
            return Err(QuantumError::VanishingDenominator(n));
        }
        let numer = energy + 2.0 * c + 4.0 * lambda * c + 4.0 * c * n as f64;
        let scale =
            energy.abs() + 2.0 * c.abs() + 4.0 * (lambda * c).abs() + 4.0 * (c * n as f64).abs();
        if n % 2 == 0 && terminated_at.is_none() && numer.abs() <= TERMINATION_TOL * scale {
            // Exact termination: the polynomial ends at degree n.
            terminated_at = Some(n);
        }
        coeffs[n + 2] = if terminated_at.is_some() && n % 2 == 0 {
            0.0
        } else {
            numer / denom * coeffs[n]
        };
    }
    Ok(SeriesSolution {
        coefficients: coeffs,
        terminated: terminated_at.is_some(),
        terminated_at,
    })
}

/// Locate the energies at which the series terminates: the zeros in `E` of
/// the recursion numerator over even `n`, restricted to `range`, capped at
/// `max_levels` levels. At the phase boundary (`C = 0`) there is no
/// discrete ladder and the scan is empty.
pub fn termination_scan(
    qp: &QuantumParams,
    range: (f64, f64),
    max_levels: usize,
) -> Result<Vec<f64>, QuantumError> {
    let c = qp.real_gauss_scale()?;
    if c == 0.0 {
        return Ok(Vec::new());
    }
    let (lo, hi) = (range.0.min(range.1), range.0.max(range.1));
    let mut found = Vec::new();
    for m in 0..max_levels {
        let n = 2.0 * m as f64;
        // (E + 2C + 4 lambda C) + 4Cn = 0
        let e = -(2.0 * c + 4.0 * qp.lambda * c + 4.0 * c * n);
        if e >= lo && e <= hi {
            found.push(e);
        }
    }
    Ok(found)
}

/// Whether the series for `energy` terminates within `n_max` coefficients.
pub fn series_terminates(energy: f64, qp: &QuantumParams, n_max: usize) -> bool {
    series_coefficients(energy, qp, n_max)
        .map(|s| s.terminated)
        .unwrap_or(false)
}

/// Evaluate the full eigenfunction `f(z) = z^lambda exp(-C z^2) phi_{2m}(z)`
/// (parity maps negative arguments back to the half-line).
pub fn eigenfunction(m: usize, qp: &QuantumParams, z: f64) -> Result<f64, QuantumError> {
    let c = qp.real_gauss_scale()?;
    let e = ladder_energy_real(m, qp)?;
    let series = series_coefficients(e, qp, 2 * m + 2)?;
    let z = z.abs();
    let mut poly = 0.0;
    for j in (0..=m).rev() {
        poly = poly * z * z + series.coefficients[2 * j];
    }
    Ok(z.powf(qp.lambda) * (-c * z * z).exp() * poly)
}

fn ladder_energy_real(m: usize, qp: &QuantumParams) -> Result<f64, QuantumError> {
    let c = qp.real_gauss_scale()?;
    Ok(-2.0 * c * (4.0 * m as f64 + 1.0 + 2.0 * qp.lambda))
}

/// Maximum normalized residual of the reduced equation over the samples,
/// with the second derivative from a fourth-order central stencil. Passing
/// `energy_override` probes a deliberately wrong energy (negative control).
pub fn eigenfunction_residual(
    m: usize,
    qp: &QuantumParams,
    z_samples: &[f64],
    energy_override: Option<f64>,
) -> Result<f64, QuantumError> {
    if qp.phase != PtPhase::Unbroken {
        return Err(QuantumError::BrokenPhase);
    }
    let w = qp.omega_eff.re;
    let e = match energy_override {
        Some(e) => e,
        None => ladder_energy_real(m, qp)?,
    };
    let h = 1e-3;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &z in z_samples {
        let z = z.abs();
        let f = |x: f64| eigenfunction(m, qp, x);
        let fm2 = f(z - 2.0 * h)?;
        let fm1 = f(z - h)?;
        let f0 = f(z)?;
        let fp1 = f(z + h)?;
        let fp2 = f(z + 2.0 * h)?;
        let second = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        let residual = second - 0.25 * w * w * z * z * f0 + qp.g / (2.0 * z * z) * f0 - e * f0;
        worst = worst.max(residual.abs());
        scale = scale.max(f0.abs());
    }
    Ok(worst / scale.max(f64::MIN_POSITIVE))
}

/// Grid for the finite-difference spectral oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    /// Number of interior points.
    pub points: usize,
    /// Half-line truncation length; `None` picks `12 / sqrt(W)`.
    pub length: Option<f64>,
    /// Accepted relative disagreement between the full and half grids.
    pub convergence_tol: f64,
}

impl Default for FdGrid {
    fn default() -> Self {
        Self {
            points: 4000,
            length: None,
            convergence_tol: 1e-3,
        }
    }
}

fn fd_eigenvalues(w: f64, g: f64, length: f64, points: usize, levels: usize) -> Vec<f64> {
    let h = length / (points + 1) as f64;
    let mut diag = Vec::with_capacity(points);
    for i in 1..=points {
        let z = i as f64 * h;
        diag.push(2.0 / (h * h) + 0.25 * w * w * z * z - g / (2.0 * z * z));
    }
    let off = vec![-1.0 / (h * h); points - 1];
    tridiag::lowest_eigenvalues(&diag, &off, levels)
}

/// Independent spectral oracle: discretize the half-line operator
/// `-d^2/dz^2 + (W^2/4) z^2 - g/(2 z^2)` with Dirichlet walls, solve the
/// symmetric tridiagonal eigenproblem, and return `E = -eps` for the lowest
/// `levels` states. These are the energies of the normalizable
/// (`C = +W/4`) branch; the other branch follows from `E(-C) = -E(+C)`.
/// A half-resolution solve guards convergence.
pub fn fd_spectrum_oracle(
    qp: &QuantumParams,
    levels: usize,
    grid: &FdGrid,
) -> Result<Vec<f64>, QuantumError> {
    if qp.phase != PtPhase::Unbroken {
        return Err(QuantumError::BrokenPhase);
    }
    if qp.g > 0.5 {
        return Err(QuantumError::ComplexExponents(qp.g));
    }
    let w = qp.omega_eff.re;
    let length = grid.length.unwrap_or(12.0 / w.sqrt());
    if grid.points < 16 || levels == 0 {
        return Err(QuantumError::Convergence(
            "grid too small for the requested levels".into(),
        ));
    }
    let fine = fd_eigenvalues(w, qp.g, length, grid.points, levels);
    let coarse = fd_eigenvalues(w, qp.g, length, grid.points / 2, levels);
    for (k, (a, b)) in fine.iter().zip(&coarse).enumerate() {
        let rel = (a - b).abs() / a.abs().max(1.0);
        if rel > grid.convergence_tol {
            return Err(QuantumError::Convergence(format!(
                "level {k}: step-halving disagreement {rel:.3e} exceeds {:.1e}",
                grid.convergence_tol
            )));
        }
    }
    Ok(fine.into_iter().map(|eps| -eps).collect())
}

/// An angular sector of the complex relative plane in which the
/// non-normalizable ground state decays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesWedge {
    /// Wedge bisector, radians.
    pub center_angle: f64,
    /// Full opening angle; pi/2 for this model.
    pub opening_angle: f64,
}

/// Admissible wedges for the `C = -W/4` ground state
/// `z^lambda exp[(W/4) z^2 - (i gamma/2) z1 z]`, selected by the sign of
/// the linear coefficient `(gamma/2) z1`.
#[derive(Debug, Clone, PartialEq)]
pub enum WedgeSelection {
    /// Nonzero coefficient: one wedge survives.
    Single(StokesWedge),
    /// Zero coefficient: both Gaussian wedges remain admissible.
    Pair(StokesWedge, StokesWedge),
}

impl WedgeSelection {
    pub fn wedges(&self) -> Vec<StokesWedge> {
        match self {
            WedgeSelection::Single(w) => vec![*w],
            WedgeSelection::Pair(a, b) => vec![*a, *b],
        }
    }
}

/// Wedge geometry from the sign of the linear coefficient `(gamma/2) z1`:
/// negative keeps the wedge on the positive imaginary axis, positive on
/// the negative imaginary axis, zero keeps the symmetric pair.
pub fn stokes_wedges(coefficient: f64) -> WedgeSelection {
    let up = StokesWedge {
        center_angle: FRAC_PI_2,
        opening_angle: FRAC_PI_2,
    };
    let down = StokesWedge {
        center_angle: -FRAC_PI_2,
        opening_angle: FRAC_PI_2,
    };
    if coefficient < 0.0 {
        WedgeSelection::Single(up)
    } else if coefficient > 0.0 {
        WedgeSelection::Single(down)
    } else {
        WedgeSelection::Pair(up, down)
    }
}
