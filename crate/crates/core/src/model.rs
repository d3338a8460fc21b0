//! Physical parameters, phase-space states in both coordinate frames,
//! energies, the translational charge of the pair-harmonic limit, and the
//! loss/gain swap transformation.
//!
//! The model couples a lossy oscillator `x` (damping rate `gamma`) to its
//! gaining partner `y`, with a common frequency `omega`, a linear coupling
//! `epsilon` and an inverse-square pair interaction of strength `g`:
//!
//! ```text
//! x'' + 2 gamma x' + omega^2 x + epsilon y + g/(x-y)^3 = 0
//! y'' - 2 gamma y' + omega^2 y + epsilon x - g/(x-y)^3 = 0
//! ```
//!
//! Two limits matter throughout the crate: `epsilon = -omega^2` (pair-wise
//! harmonic binding, extra conserved charge, exactly solvable) and
//! `epsilon = 0` (common harmonic trap).
//!
//! States carry velocities rather than canonical momenta: the loss/gain
//! terms make the momentum/velocity map frame-dependent, so momenta are
//! derived views (see [`CanonicalMomenta`]).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("angular frequency must be positive and finite, got {0}")]
    InvalidOmega(f64),
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("positions coincide (x = y = {0}): the inverse-square interaction is singular there")]
    CoincidentPositions(f64),
    #[error("relative coordinate z2 must be nonzero")]
    ZeroSeparation,
    #[error("operation is defined in the pair-harmonic limit epsilon = -omega^2 \
             (got epsilon = {epsilon}, omega = {omega})")]
    NotPairHarmonic { epsilon: f64, omega: f64 },
}

fn require_finite(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}

/// The four couplings of the model. `omega > 0`; the rest are real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Common oscillator frequency.
    pub omega: f64,
    /// Balanced loss/gain rate.
    pub gamma: f64,
    /// Inverse-square coupling strength (attractive core for `g < 0`).
    pub g: f64,
    /// Linear coupling between the two oscillators.
    pub epsilon: f64,
}

// Relative slack when testing epsilon against -omega^2, so that decimal
// command-line input ("0.81" for omega = 0.9) still selects the limit.
const PAIR_HARMONIC_TOL: f64 = 1e-12;

impl ModelParams {
    pub fn new(omega: f64, gamma: f64, g: f64, epsilon: f64) -> Result<Self, ModelError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(ModelError::InvalidOmega(omega));
        }
        require_finite("gamma", gamma)?;
        require_finite("g", g)?;
        require_finite("epsilon", epsilon)?;
        Ok(Self {
            omega,
            gamma,
            g,
            epsilon,
        })
    }

    /// Pair-harmonic limit `epsilon = -omega^2` (the exactly solvable case).
    pub fn calogero(omega: f64, gamma: f64, g: f64) -> Result<Self, ModelError> {
        Self::new(omega, gamma, g, -(omega * omega))
    }

    /// Common-trap limit `epsilon = 0`.
    pub fn sutherland(omega: f64, gamma: f64, g: f64) -> Result<Self, ModelError> {
        Self::new(omega, gamma, g, 0.0)
    }

    pub fn is_calogero(&self) -> bool {
        let omega_sq = self.omega * self.omega;
        (self.epsilon + omega_sq).abs() <= PAIR_HARMONIC_TOL * (1.0 + omega_sq)
    }

    pub fn is_sutherland(&self) -> bool {
        self.epsilon == 0.0
    }

    pub(crate) fn require_calogero(&self) -> Result<(), ModelError> {
        if self.is_calogero() {
            Ok(())
        } else {
            Err(ModelError::NotPairHarmonic {
                epsilon: self.epsilon,
                omega: self.omega,
            })
        }
    }
}

/// Instantaneous state in lab coordinates. Invariant: `x != y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStateXY {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub t: f64,
}

impl PhaseStateXY {
    pub fn new(x: f64, y: f64, vx: f64, vy: f64, t: f64) -> Result<Self, ModelError> {
        require_finite("x", x)?;
        require_finite("y", y)?;
        require_finite("vx", vx)?;
        require_finite("vy", vy)?;
        require_finite("t", t)?;
        if x == y {
            return Err(ModelError::CoincidentPositions(x));
        }
        Ok(Self { x, y, vx, vy, t })
    }
}

/// Instantaneous state in normal coordinates `z1 = x+y`, `z2 = x-y`.
/// Invariant: `z2 != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStateZ {
    pub z1: f64,
    pub z2: f64,
    pub v1: f64,
    pub v2: f64,
    pub t: f64,
}

impl PhaseStateZ {
    pub fn new(z1: f64, z2: f64, v1: f64, v2: f64, t: f64) -> Result<Self, ModelError> {
        require_finite("z1", z1)?;
        require_finite("z2", z2)?;
        require_finite("v1", v1)?;
        require_finite("v2", v2)?;
        require_finite("t", t)?;
        if z2 == 0.0 {
            return Err(ModelError::ZeroSeparation);
        }
        Ok(Self { z1, z2, v1, v2, t })
    }
}

/// Momenta conjugate to the coordinates in each frame, derived from
/// velocities:
///
/// ```text
/// P_x  = vy - gamma*y          P_y  = vx + gamma*x
/// P_z1 = (v1 + gamma*z2)/2     P_z2 = -(v2 + gamma*z1)/2
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalMomenta {
    pub px: f64,
    pub py: f64,
    pub pz1: f64,
    pub pz2: f64,
}

impl CanonicalMomenta {
    pub fn from_xy(state: &PhaseStateXY, p: &ModelParams) -> Self {
        let z = to_normal(state);
        Self {
            px: state.vy - p.gamma * state.y,
            py: state.vx + p.gamma * state.x,
            pz1: 0.5 * (z.v1 + p.gamma * z.z2),
            pz2: -0.5 * (z.v2 + p.gamma * z.z1),
        }
    }

    pub fn from_z(state: &PhaseStateZ, p: &ModelParams) -> Self {
        Self::from_xy(&from_normal(state), p)
    }
}

/// Lab frame -> normal coordinates. The `x != y` invariant of the source
/// state guarantees `z2 != 0`, so the map cannot fail.
pub fn to_normal(state: &PhaseStateXY) -> PhaseStateZ {
    PhaseStateZ {
        z1: state.x + state.y,
        z2: state.x - state.y,
        v1: state.vx + state.vy,
        v2: state.vx - state.vy,
        t: state.t,
    }
}

/// Normal coordinates -> lab frame (exact inverse of [`to_normal`]).
pub fn from_normal(state: &PhaseStateZ) -> PhaseStateXY {
    PhaseStateXY {
        x: 0.5 * (state.z1 + state.z2),
        y: 0.5 * (state.z1 - state.z2),
        vx: 0.5 * (state.v1 + state.v2),
        vy: 0.5 * (state.v1 - state.v2),
        t: state.t,
    }
}

/// Total conserved energy in lab coordinates,
///
/// ```text
/// H = P_x P_y + gamma (y P_y - x P_x) + (omega^2 - gamma^2) x y
///     + g / (2 (x-y)^2) + (epsilon/2)(x^2 + y^2)
/// ```
///
/// with the momenta built from velocities. Algebraically this equals the
/// velocity form `vx vy + omega^2 x y + g/(2(x-y)^2) + (epsilon/2)(x^2+y^2)`
/// and is constant along solutions for every `epsilon`.
pub fn energy_xy(state: &PhaseStateXY, p: &ModelParams) -> f64 {
    let m = CanonicalMomenta::from_xy(state, p);
    let d = state.x - state.y;
    m.px * m.py
        + p.gamma * (state.y * m.py - state.x * m.px)
        + (p.omega * p.omega - p.gamma * p.gamma) * state.x * state.y
        + p.g / (2.0 * d * d)
        + 0.5 * p.epsilon * (state.x * state.x + state.y * state.y)
}

/// Energy in normal coordinates, valid in the pair-harmonic limit
/// `epsilon = -omega^2`:
///
/// ```text
/// H = P_z1^2 - P_z2^2 - gamma (z1 P_z2 + z2 P_z1)
///     - (omega^2/2) z2^2 - (gamma^2/4)(z1^2 - z2^2) + g/(2 z2^2)
/// ```
///
/// With `P_z1 = (v1 + gamma z2)/2` and `P_z2 = -(v2 + gamma z1)/2` this
/// collapses to `(v1^2 - v2^2)/4 - (omega^2/2) z2^2 + g/(2 z2^2)` and equals
/// [`energy_xy`] of the same state exactly (no normalization factor between
/// the two frames).
pub fn energy_z(state: &PhaseStateZ, p: &ModelParams) -> Result<f64, ModelError> {
    p.require_calogero()?;
    let m = CanonicalMomenta::from_z(state, p);
    let z2_sq = state.z2 * state.z2;
    Ok(m.pz1 * m.pz1 - m.pz2 * m.pz2
        - p.gamma * (state.z1 * m.pz2 + state.z2 * m.pz1)
        - 0.5 * p.omega * p.omega * z2_sq
        - 0.25 * p.gamma * p.gamma * (state.z1 * state.z1 - z2_sq)
        + p.g / (2.0 * z2_sq))
}

/// Translational charge `Pi = v1 + 2 gamma z2 = 2 P_z1 + gamma z2`.
///
/// Conserved only in the pair-harmonic limit (elsewhere
/// `dPi/dt = -(omega^2 + epsilon) z1`), so other parameter values are
/// rejected as misuse.
pub fn pi_invariant(state: &PhaseStateZ, p: &ModelParams) -> Result<f64, ModelError> {
    p.require_calogero()?;
    Ok(state.v1 + 2.0 * p.gamma * state.z2)
}

/// Combined loss/gain swap and time reversal on an instantaneous state:
/// positions swap and flip sign, velocities swap, time flips sign. Applied
/// to a solution `(x(t), y(t))` it produces the solution
/// `(-y(-t), -x(-t))`; the transformation is an involution.
pub fn pt_transform(state: &PhaseStateXY) -> PhaseStateXY {
    PhaseStateXY {
        x: -state.y,
        y: -state.x,
        vx: state.vy,
        vy: state.vx,
        t: -state.t,
    }
}
