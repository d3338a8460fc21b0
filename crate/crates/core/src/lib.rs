//! Two coupled oscillators with balanced loss and gain interacting through an
//! inverse-square pair potential.
//!
//! The library implements the classical model in both lab (`x`, `y`) and
//! normal (`z1 = x+y`, `z2 = x-y`) coordinates, numerical integration with
//! conservation diagnostics, the closed-form solution of the pair-harmonic
//! limit together with its elliptic-integral center-of-mass motion, the
//! linear stability analysis and first-order perturbative solution of the
//! common-trap limit, and the quantum bound-state spectrum of the relative
//! problem with Stokes-wedge geometry for the non-normalizable branch.
//!
//! Modules:
//! - [`model`]: parameters, states, energies, the conserved charge and the
//!   loss/gain swap transformation.
//! - [`dynamics`]: adaptive Runge-Kutta integration with singularity and
//!   blow-up detection.
//! - [`calogero`]: exact solution of the pair-harmonic limit (`epsilon =
//!   -omega^2`) in the zero-charge sector.
//! - [`sutherland`]: equilibrium, eigenvalue analysis and perturbation
//!   theory of the common-trap limit (`epsilon = 0`).
//! - [`quantum`]: series-termination spectrum, eigenfunctions, a
//!   finite-difference spectral oracle and Stokes wedges.
//! - [`numerics`]: the supporting solvers (embedded Runge-Kutta pair,
//!   Carlson elliptic integrals, adaptive quadrature, tridiagonal
//!   eigenvalues).

pub mod calogero;
pub mod dynamics;
pub mod model;
pub mod numerics;
pub mod quantum;
pub mod sutherland;

pub use calogero::PtPhase;
pub use model::{ModelParams, PhaseStateXY, PhaseStateZ};
