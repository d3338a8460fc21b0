//! Closed-form solution of the pair-harmonic limit (`epsilon = -omega^2`)
//! in the zero-charge sector.
//!
//! With initial data `z2(0) = b > 0`, `v2(0) = a` and `v1(0) = -2 gamma b`
//! (so that the translational charge vanishes), the relative coordinate
//! solves the amplitude equation
//!
//! ```text
//! z2'' + W^2 z2 + 2 g / z2^3 = 0,       W^2 = 2 (omega^2 - 2 gamma^2),
//! ```
//!
//! whose square is a shifted sinusoid:
//!
//! ```text
//! z2(t)^2 = A sin^2(Wt) + 2B sin(Wt) cos(Wt) + C cos^2(Wt),
//! A = (a^2 b^2 - 2g) / (b^2 W^2),   B = a b / W,   C = b^2.
//! ```
//!
//! The center of mass then follows by quadrature, `z1 = I - 2 gamma
//! Int z2 dt`, which evaluates to an incomplete elliptic integral of the
//! second kind along a linearly advancing angle. The quadrature form is the
//! authoritative evaluator here; the elliptic form is a validated view of it
//! (see [`z1_exact`] for the constants it uses).
//!
//! Realness of `W` marks the unbroken phase; the transition sits at
//! `|gamma| = omega / sqrt(2)` independently of `g`.

use crate::model::{ModelError, ModelParams};
use crate::numerics::elliptic::{elliptic_e_inc, EllipticError};
use crate::numerics::quadrature;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalogeroError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("initial separation b must be positive, got {0}")]
    NonPositiveSeparation(f64),
    #[error("closed form requires the unbroken phase; effective frequency squared = {0}")]
    NotUnbroken(f64),
    #[error("radicand {value} < 0 at t = {t}: parameters leave the solution's validity domain")]
    NegativeRadicand { t: f64, value: f64 },
    #[error("degenerate constants (envelope D = 0): z2 is constant and the phase angle is undefined")]
    DegenerateEnvelope,
    #[error("center-of-mass closed form needs z2 bounded away from zero (attractive core, g < 0)")]
    UnboundedModulus,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Phase of the loss/gain-symmetric system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtPhase {
    Unbroken,
    Boundary,
    Broken,
}

impl std::fmt::Display for PtPhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PtPhase::Unbroken => "unbroken",
            PtPhase::Boundary => "boundary",
            PtPhase::Broken => "broken",
        })
    }
}

/// Effective frequency of the relative motion, `W^2 = 2(omega^2 - 2 gamma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveFrequency {
    pub omega_sq_eff: f64,
    pub phase: PtPhase,
}

impl EffectiveFrequency {
    /// `W` itself, available in the unbroken phase.
    pub fn omega(&self) -> Option<f64> {
        (self.phase == PtPhase::Unbroken).then(|| self.omega_sq_eff.sqrt())
    }
}

// Classification slack: gamma = omega/sqrt(2) entered in floating point must
// land on the boundary, while offsets of physical size stay off it.
const BOUNDARY_TOL: f64 = 1e-12;

/// Shared phase classifier; the quantum side calls the same function so the
/// classical and quantum transition points coincide identically.
pub(crate) fn classify_phase(omega: f64, gamma: f64) -> (f64, PtPhase) {
    let omega_sq_eff = 2.0 * (omega * omega - 2.0 * gamma * gamma);
    let phase = if omega_sq_eff.abs() <= BOUNDARY_TOL * omega * omega {
        PtPhase::Boundary
    } else if omega_sq_eff > 0.0 {
        PtPhase::Unbroken
    } else {
        PtPhase::Broken
    };
    (omega_sq_eff, phase)
}

/// Effective frequency and phase for pair-harmonic parameters.
pub fn effective_frequency(p: &ModelParams) -> Result<EffectiveFrequency, CalogeroError> {
    p.require_calogero()?;
    let (omega_sq_eff, phase) = classify_phase(p.omega, p.gamma);
    Ok(EffectiveFrequency {
        omega_sq_eff,
        phase,
    })
}

/// Constants of the zero-charge closed form. The coefficient fields map to
/// the amplitude solution as
///
/// ```text
/// z2^2 = sin2_coeff sin^2(Wt) + 2 cross_coeff sin(Wt)cos(Wt) + cos2_coeff cos^2(Wt)
/// ```
///
/// `envelope = sqrt((cos2_coeff - sin2_coeff)^2 + cross_coeff^2)` and
/// `modulus_sq = 2 envelope / (sin2_coeff + cos2_coeff + envelope)` are the
/// conventional constants of the elliptic representation of `z1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpConstants {
    /// Initial relative velocity `v2(0)`.
    pub a: f64,
    /// Initial separation `z2(0) > 0`.
    pub b: f64,
    /// Coefficient of `sin^2` ("A").
    pub sin2_coeff: f64,
    /// Coefficient of `sin cos` divided by two ("B").
    pub cross_coeff: f64,
    /// Coefficient of `cos^2` ("C" = b^2).
    pub cos2_coeff: f64,
    /// Envelope constant ("D").
    pub envelope: f64,
    /// Elliptic modulus `k^2` of the conventional representation.
    pub modulus_sq: f64,
    /// Integration constant `I` fixing `z1(0)`.
    pub z1_init: f64,
    /// Whether `g < 0` (the regime with a guaranteed positive radicand).
    pub attractive_core: bool,
}

impl EpConstants {
    pub fn with_z1_init(self, z1_init: f64) -> Self {
        Self { z1_init, ..self }
    }
}

/// Build the closed-form constants for initial data `(a, b)` under
/// pair-harmonic parameters in the unbroken phase.
pub fn ep_constants(a: f64, b: f64, p: &ModelParams) -> Result<EpConstants, CalogeroError> {
    let freq = effective_frequency(p)?;
    if freq.phase != PtPhase::Unbroken {
        return Err(CalogeroError::NotUnbroken(freq.omega_sq_eff));
    }
    if !(b > 0.0) {
        return Err(CalogeroError::NonPositiveSeparation(b));
    }
    let omega_eff_sq = freq.omega_sq_eff;
    let omega_eff = omega_eff_sq.sqrt();
    let sin2_coeff = (a * a * b * b - 2.0 * p.g) / (b * b * omega_eff_sq);
    let cross_coeff = a * b / omega_eff;
    let cos2_coeff = b * b;
    let envelope = (cos2_coeff - sin2_coeff).hypot(cross_coeff);
    let modulus_sq = 2.0 * envelope / (cos2_coeff + sin2_coeff + envelope);
    Ok(EpConstants {
        a,
        b,
        sin2_coeff,
        cross_coeff,
        cos2_coeff,
        envelope,
        modulus_sq,
        z1_init: 0.0,
        attractive_core: p.g < 0.0,
    })
}

pub(crate) fn radicand(t: f64, c: &EpConstants, omega_eff: f64) -> f64 {
    let s = (omega_eff * t).sin();
    let co = (omega_eff * t).cos();
    c.sin2_coeff * s * s + 2.0 * c.cross_coeff * s * co + c.cos2_coeff * co * co
}

/// Exact relative separation `z2(t)` (positive root).
pub fn z2_exact(t: f64, c: &EpConstants, omega_eff: f64) -> Result<f64, CalogeroError> {
    let r = radicand(t, c, omega_eff);
    if r < -1e-12 {
        return Err(CalogeroError::NegativeRadicand { t, value: r });
    }
    Ok(r.max(0.0).sqrt())
}

/// Unwrapped substitution angle of the elliptic representation, defined by
///
/// ```text
/// sin^2(phi) = (D + (A - C) cos(2Wt) - B sin(2Wt)) / (2D)
/// ```
///
/// The angle advances linearly, `phi(t) = W t + phi0`, with `phi0` on the
/// principal branch: `phi0 = arcsin(sqrt((D + A - C)/(2D)))` whenever
/// `B <= 0`, and the supplement `pi - arcsin(...)` for `B > 0` (continuity
/// of a non-decreasing angle forces the supplement there).
pub fn phi_of_t(t: f64, c: &EpConstants, omega_eff: f64) -> Result<f64, CalogeroError> {
    if c.envelope == 0.0 {
        return Err(CalogeroError::DegenerateEnvelope);
    }
    let delta = c.cross_coeff.atan2(c.cos2_coeff - c.sin2_coeff);
    let phi0 = if delta > 0.0 {
        PI - 0.5 * delta
    } else {
        -0.5 * delta
    };
    Ok(omega_eff * t + phi0)
}

/// Incomplete elliptic integral of the second kind (parameter `m = k^2`).
pub fn incomplete_elliptic_e(phi: f64, m: f64) -> Result<f64, CalogeroError> {
    Ok(elliptic_e_inc(phi, m)?)
}

// Constants of the reduced form z2^2 = (p + R)(1 - m sin^2 chi) with a
// linear angle chi = W t - delta/2. Note R = sqrt(q^2 + r^2) with
// q = (C - A)/2 and r = B: the cross coefficient enters the envelope at
// full weight here, unlike the conventional "D" of `EpConstants`, which is
// what the quadrature oracle singles out as the representation that
// actually reproduces Int z2 dt.
struct ReducedForm {
    offset: f64,    // p = (A + C)/2
    amplitude: f64, // R
    delta: f64,
    modulus: f64, // m = 2R / (p + R)
}

fn reduced_form(c: &EpConstants) -> Result<ReducedForm, CalogeroError> {
    let q = 0.5 * (c.cos2_coeff - c.sin2_coeff);
    let r = c.cross_coeff;
    let offset = 0.5 * (c.cos2_coeff + c.sin2_coeff);
    let amplitude = q.hypot(r);
    if amplitude >= offset {
        // z2 reaches zero; the elliptic representation degenerates (m >= 1).
        return Err(CalogeroError::UnboundedModulus);
    }
    Ok(ReducedForm {
        offset,
        amplitude,
        delta: r.atan2(q),
        modulus: 2.0 * amplitude / (offset + amplitude),
    })
}

/// Center-of-mass motion in elliptic closed form:
///
/// ```text
/// z1(t) = I - 2 gamma sqrt(p + R)/W * (E(chi(t) | m) - E(chi(0) | m)),
/// chi(t) = W t - delta/2
/// ```
///
/// The overall sign follows `z1' = -2 gamma z2` (fixed against the
/// quadrature oracle) and the constants are those of [`reduced form`]
/// documented above; this form agrees with [`z1_quadrature`] to solver
/// precision for every admissible initial condition.
pub fn z1_exact(
    t: f64,
    c: &EpConstants,
    omega_eff: f64,
    gamma: f64,
) -> Result<f64, CalogeroError> {
    let rf = reduced_form(c)?;
    let chi0 = -0.5 * rf.delta;
    let chi = omega_eff * t + chi0;
    let amp = (rf.offset + rf.amplitude).sqrt() / omega_eff;
    let swept = elliptic_e_inc(chi, rf.modulus)? - elliptic_e_inc(chi0, rf.modulus)?;
    Ok(c.z1_init - 2.0 * gamma * amp * swept)
}

/// Center-of-mass motion by adaptive quadrature of the separation,
/// `z1(t) = I - 2 gamma Int_0^t z2(s) ds` (absolute error < 1e-10).
/// This is the authoritative evaluator; [`z1_exact`] is checked against it.
pub fn z1_quadrature(
    t: f64,
    c: &EpConstants,
    omega_eff: f64,
    gamma: f64,
) -> Result<f64, CalogeroError> {
    // Reject parameter sets where the radicand crosses zero, mirroring the
    // domain of the elliptic form.
    reduced_form(c)?;
    let integral = quadrature::integrate(
        |s| radicand(s, c, omega_eff).max(0.0).sqrt(),
        0.0,
        t,
        1e-11,
    );
    Ok(c.z1_init - 2.0 * gamma * integral)
}

/// The validity inequality of the elliptic substitution, evaluated with the
/// conventional constants exactly as stated:
/// `D + (A - C) cos(2Wt) >= B sin(2Wt)`. It holds for all `t`.
pub fn validity_inequality(t: f64, c: &EpConstants, omega_eff: f64) -> bool {
    let lhs = c.envelope + (c.sin2_coeff - c.cos2_coeff) * (2.0 * omega_eff * t).cos();
    let rhs = c.cross_coeff * (2.0 * omega_eff * t).sin();
    lhs >= rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn calogero(omega: f64, gamma: f64, g: f64) -> ModelParams {
        ModelParams::calogero(omega, gamma, g).unwrap()
    }

    #[test]
    fn effective_frequency_examples() {
        let f = effective_frequency(&calogero(1.0, 0.0, -0.5)).unwrap();
        assert_eq!(f.omega_sq_eff, 2.0);
        assert_eq!(f.phase, PtPhase::Unbroken);

        let f = effective_frequency(&calogero(1.0, 1.0 / 2f64.sqrt(), -0.5)).unwrap();
        assert_eq!(f.phase, PtPhase::Boundary);

        let f = effective_frequency(&calogero(1.0, 1.0, -0.5)).unwrap();
        assert_eq!(f.omega_sq_eff, -2.0);
        assert_eq!(f.phase, PtPhase::Broken);
    }

    #[test]
    fn effective_frequency_rejects_other_epsilon() {
        let p = ModelParams::sutherland(1.0, 0.1, -0.5).unwrap();
        assert!(matches!(
            effective_frequency(&p),
            Err(CalogeroError::Model(ModelError::NotPairHarmonic { .. }))
        ));
    }

    #[test]
    fn constants_hand_substitution() {
        // a = 0, b = 1, g = -0.5, omega = 1, gamma = 0: W^2 = 2.
        let c = ep_constants(0.0, 1.0, &calogero(1.0, 0.0, -0.5)).unwrap();
        assert!((c.sin2_coeff - 0.5).abs() < 1e-15);
        assert_eq!(c.cross_coeff, 0.0);
        assert_eq!(c.cos2_coeff, 1.0);
        assert!((c.envelope - 0.5).abs() < 1e-15);
        assert!((c.modulus_sq - 0.5).abs() < 1e-15);
        assert!(c.attractive_core);
    }

    #[test]
    fn stationary_core_when_a_zero_and_g_tuned() {
        // g = -W^2 b^4 / 2 makes A = C, D = 0: z2 stays at b.
        let omega = 1.0;
        let gamma = 0.2;
        let (w2, _) = classify_phase(omega, gamma);
        let b = 1.3f64;
        let g = -w2 * b.powi(4) / 2.0;
        let c = ep_constants(0.0, b, &calogero(omega, gamma, g)).unwrap();
        assert!((c.sin2_coeff - c.cos2_coeff).abs() < 1e-13);
        assert!(c.envelope < 1e-13);
        for t in [0.0, 0.7, 3.1, 12.0] {
            let z2 = z2_exact(t, &c, w2.sqrt()).unwrap();
            assert!((z2 - b).abs() < 1e-12, "z2({t}) = {z2}");
        }
    }

    #[test]
    fn general_constants_finite_modulus_in_unit_interval() {
        let c = ep_constants(1.0, 1.0, &calogero(1.0, 0.3, -0.5)).unwrap();
        assert!(c.sin2_coeff.is_finite() && c.envelope.is_finite());
        assert!(c.modulus_sq > 0.0 && c.modulus_sq < 1.0);
    }

    #[test]
    fn constructor_rejections() {
        assert!(matches!(
            ep_constants(0.0, 0.0, &calogero(1.0, 0.0, -0.5)),
            Err(CalogeroError::NonPositiveSeparation(_))
        ));
        assert!(matches!(
            ep_constants(0.0, 1.0, &calogero(1.0, 1.0, -0.5)),
            Err(CalogeroError::NotUnbroken(_))
        ));
    }

    #[test]
    fn z2_initial_condition_and_quarter_period() {
        let p = calogero(1.0, 0.0, -0.5);
        let c = ep_constants(0.0, 1.0, &p).unwrap();
        let w = 2f64.sqrt();
        assert_eq!(z2_exact(0.0, &c, w).unwrap(), 1.0);
        // At Wt = pi/2 only the sin^2 term survives: z2 = sqrt(A).
        let t = 0.5 * PI / w;
        let z2 = z2_exact(t, &c, w).unwrap();
        assert!((z2 - 0.5f64.sqrt()).abs() < 1e-12, "z2 = {z2}");
    }

    #[test]
    fn z2_satisfies_amplitude_equation() {
        // Finite-difference residual of z2'' + W^2 z2 + 2g/z2^3 on a grid.
        let p = calogero(1.0, 0.3, -0.5);
        let c = ep_constants(1.0, 1.0, &p).unwrap();
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        let h = 1e-4;
        let mut worst: f64 = 0.0;
        for i in 0..500 {
            let t = 0.01 + i as f64 * 0.02;
            let zm = z2_exact(t - h, &c, w).unwrap();
            let z0 = z2_exact(t, &c, w).unwrap();
            let zp = z2_exact(t + h, &c, w).unwrap();
            let second = (zp - 2.0 * z0 + zm) / (h * h);
            let residual = second + w * w * z0 + 2.0 * p.g / (z0 * z0 * z0);
            worst = worst.max(residual.abs());
        }
        assert!(worst < 1e-6, "amplitude-equation residual {worst}");
    }

    #[test]
    fn z2_strictly_positive_for_attractive_core() {
        let p = calogero(1.0, 0.3, -0.5);
        let c = ep_constants(1.0, 1.0, &p).unwrap();
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        let mut min = f64::INFINITY;
        for i in 0..=5000 {
            let t = i as f64 * 0.01;
            min = min.min(z2_exact(t, &c, w).unwrap());
        }
        assert!(min > 0.1, "min z2 = {min}");
    }

    #[test]
    fn phi_principal_branch_and_slope() {
        let p = calogero(1.0, 0.0, -0.5);
        // a = 0, A < C: phi(0) = 0.
        let c = ep_constants(0.0, 1.0, &p).unwrap();
        let w = 2f64.sqrt();
        assert!(phi_of_t(0.0, &c, w).unwrap().abs() < 1e-15);
        // Unwrapped angle advances by pi per half-period pi/W.
        let half_period = PI / w;
        let d = phi_of_t(half_period, &c, w).unwrap() - phi_of_t(0.0, &c, w).unwrap();
        assert!((d - PI).abs() < 1e-12);
    }

    #[test]
    fn phi_matches_defining_relation() {
        // sin^2(phi(t)) must reproduce (D + (A-C)cos2Wt - B sin2Wt)/(2D).
        let p = calogero(1.0, 0.3, -0.5);
        let c = ep_constants(1.0, 1.0, &p).unwrap();
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        for i in 0..200 {
            let t = i as f64 * 0.05;
            let phi = phi_of_t(t, &c, w).unwrap();
            let arg = (c.envelope + (c.sin2_coeff - c.cos2_coeff) * (2.0 * w * t).cos()
                - c.cross_coeff * (2.0 * w * t).sin())
                / (2.0 * c.envelope);
            assert!((0.0..=1.0 + 1e-12).contains(&arg), "arg = {arg}");
            assert!(
                (phi.sin().powi(2) - arg).abs() < 1e-10,
                "t = {t}: sin^2 phi = {}, arg = {arg}",
                phi.sin().powi(2)
            );
        }
    }

    #[test]
    fn phi_degenerate_envelope_rejected() {
        let omega = 1.0;
        let (w2, _) = classify_phase(omega, 0.0);
        let g = -w2 / 2.0;
        let c = ep_constants(0.0, 1.0, &calogero(omega, 0.0, g)).unwrap();
        assert!(matches!(
            phi_of_t(1.0, &c, w2.sqrt()),
            Err(CalogeroError::DegenerateEnvelope)
        ));
    }

    #[test]
    fn z1_constant_without_loss_gain() {
        let p = calogero(1.0, 0.0, -0.5);
        let c = ep_constants(1.0, 1.0, &p).unwrap().with_z1_init(0.7);
        let w = 2f64.sqrt();
        for t in [0.0, 1.0, 10.0, 33.3] {
            assert_eq!(z1_exact(t, &c, w, 0.0).unwrap(), 0.7);
            let q = z1_quadrature(t, &c, w, 0.0).unwrap();
            assert!((q - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn elliptic_form_tracks_quadrature() {
        let p = calogero(1.0, 0.3, -0.5);
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        for (a, b) in [(1.0, 1.0), (0.0, 1.0), (-0.7, 1.4), (0.5, 0.6)] {
            let c = ep_constants(a, b, &p).unwrap();
            for i in 0..=100 {
                let t = 0.5 * i as f64;
                let exact = z1_exact(t, &c, w, p.gamma).unwrap();
                let quad = z1_quadrature(t, &c, w, p.gamma).unwrap();
                assert!(
                    (exact - quad).abs() < 1e-8,
                    "a={a}, b={b}, t={t}: {exact} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn zero_velocity_start_secular_growth() {
        // a = 0, b = 1: z1 drifts linearly; the average slope over many
        // periods is -2 gamma <z2>, which is bounded away from zero.
        let p = calogero(1.0, 0.3, -0.5);
        let c = ep_constants(0.0, 1.0, &p).unwrap();
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        let t_end = 40.0 * PI / w;
        let z1_end = z1_quadrature(t_end, &c, w, p.gamma).unwrap();
        let slope = (z1_end - c.z1_init) / t_end;
        assert!(slope < -0.4, "average slope {slope}");
    }

    #[test]
    fn a_zero_matches_direct_modulus_form() {
        // For a = 0, b = 1 the swept integral collapses to
        // (1/W) E(Wt | 1 + 2g/W^2) with no phase offset.
        let p = calogero(1.0, 0.25, -0.5);
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        let c = ep_constants(0.0, 1.0, &p).unwrap();
        let m = 1.0 + 2.0 * p.g / (w * w);
        for i in 1..=60 {
            let t = 0.25 * i as f64;
            let direct = -2.0 * p.gamma * elliptic_e_inc(w * t, m).unwrap() / w;
            let general = z1_exact(t, &c, w, p.gamma).unwrap();
            assert!(
                (direct - general).abs() < 1e-10,
                "t = {t}: {direct} vs {general}"
            );
        }
    }

    #[test]
    fn validity_inequality_special_points() {
        let p = calogero(1.0, 0.3, -0.5);
        let c = ep_constants(1.0, 1.0, &p).unwrap();
        let w = effective_frequency(&p).unwrap().omega().unwrap();
        // sin(2Wt) = 1: LHS = D >= B = RHS.
        let t1 = 0.25 * PI / w;
        assert!(validity_inequality(t1, &c, w));
        // cos(2Wt) = +-1: RHS = 0, LHS = D +- (A - C) >= 0.
        assert!(validity_inequality(0.0, &c, w));
        assert!(validity_inequality(0.5 * PI / w, &c, w));
    }

    proptest! {
        #[test]
        fn validity_inequality_holds_everywhere(
            a in -2.0f64..2.0,
            b in 0.2f64..2.0,
            gamma in -0.6f64..0.6,
            g in -2.0f64..-0.05,
            t in 0.0f64..50.0,
        ) {
            let p = calogero(1.0, gamma, g);
            let c = ep_constants(a, b, &p).unwrap();
            let w = effective_frequency(&p).unwrap().omega().unwrap();
            prop_assert!(validity_inequality(t, &c, w));
        }

        #[test]
        fn radicand_never_negative_for_attractive_core(
            a in -2.0f64..2.0,
            b in 0.2f64..2.0,
            gamma in -0.6f64..0.6,
            g in -2.0f64..-0.05,
            t in 0.0f64..50.0,
        ) {
            let p = calogero(1.0, gamma, g);
            let c = ep_constants(a, b, &p).unwrap();
            let w = effective_frequency(&p).unwrap().omega().unwrap();
            prop_assert!(radicand(t, &c, w) > 0.0);
        }
    }
}
