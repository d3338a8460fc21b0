//! Numerical integration of the equations of motion in either coordinate
//! frame, with adaptive stepping, singularity detection near the collision
//! manifold, and conservation diagnostics.

use crate::model::{
    energy_xy, from_normal, pi_invariant, to_normal, ModelError, ModelParams, PhaseStateXY,
    PhaseStateZ,
};
use crate::numerics::dopri5::{self, IntegrationError, Settings, State4};
use thiserror::Error;

/// Any state component beyond this magnitude classifies the run as a
/// blow-up (broken-phase exponential growth) rather than a collision.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid integrator options: {0}")]
    InvalidOptions(String),
    #[error("initial state already violates the singular floor (|z2| < {floor})")]
    InitialStateSingular { floor: f64 },
    #[error("time span must be finite with t1 > t0")]
    InvalidTimeSpan,
    #[error("step size underflow at t = {t}; the last accepted state is attached")]
    StepSizeUnderflow { t: f64, state: [f64; 4] },
    #[error("step budget exhausted at t = {t}")]
    MaxStepsExceeded { t: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the adaptive step (infinite by default).
    pub max_step: f64,
    /// Minimum allowed |z2| (lab frame: |x - y|); crossing it ends the run
    /// with a reported singularity instead of silent stiffness.
    pub singular_floor: f64,
    /// Number of equally spaced output samples (>= 2).
    pub max_samples: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            singular_floor: 1e-8,
            max_samples: 2000,
        }
    }
}

impl IntegratorOptions {
    pub fn tight() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(DynamicsError::InvalidOptions(
                "tolerances must be positive".into(),
            ));
        }
        if !(self.singular_floor > 0.0) {
            return Err(DynamicsError::InvalidOptions(
                "singular_floor must be positive".into(),
            ));
        }
        if self.max_samples < 2 {
            return Err(DynamicsError::InvalidOptions(
                "max_samples must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Why an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Reached the end of the requested time span.
    Completed,
    /// |z2| dropped below the singular floor (collision with the core).
    Singularity { t: f64 },
    /// A component exceeded [`BLOWUP_THRESHOLD`] (broken-phase growth).
    Blowup { t: f64 },
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::Completed => f.write_str("completed"),
            Termination::Singularity { t } => write!(f, "singularity at t = {t}"),
            Termination::Blowup { t } => write!(f, "blowup at t = {t}"),
        }
    }
}

/// Conservation diagnostics over the sampled trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// max |H(t) - H(0)| / (1 + |H(0)|) over the samples.
    pub energy_drift: f64,
    /// max |Pi(t) - Pi(0)| over the samples; `None` unless the parameters
    /// sit in the pair-harmonic limit where Pi is conserved.
    pub pi_drift: Option<f64>,
    pub termination: Termination,
}

/// Sampled time evolution in normal coordinates.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<PhaseStateZ>,
    pub params: ModelParams,
    pub diagnostics: Diagnostics,
}

/// Sampled time evolution in lab coordinates.
#[derive(Debug, Clone)]
pub struct TrajectoryXY {
    pub samples: Vec<PhaseStateXY>,
    pub params: ModelParams,
    pub diagnostics: Diagnostics,
}

impl TrajectoryXY {
    /// View the same run in normal coordinates.
    pub fn to_normal(&self) -> Trajectory {
        Trajectory {
            samples: self.samples.iter().map(to_normal).collect(),
            params: self.params,
            diagnostics: self.diagnostics,
        }
    }
}

/// Right-hand side in normal coordinates: returns
/// `[v1, v2, a1, a2]` with
///
/// ```text
/// a1 = -(omega^2 + epsilon) z1 - 2 gamma v2
/// a2 = -(omega^2 - epsilon) z2 - 2 gamma v1 - 2 g / z2^3
/// ```
pub fn eom_rhs(state: &PhaseStateZ, p: &ModelParams) -> [f64; 4] {
    let omega_sq = p.omega * p.omega;
    [
        state.v1,
        state.v2,
        -(omega_sq + p.epsilon) * state.z1 - 2.0 * p.gamma * state.v2,
        -(omega_sq - p.epsilon) * state.z2
            - 2.0 * p.gamma * state.v1
            - 2.0 * p.g / (state.z2 * state.z2 * state.z2),
    ]
}

/// Right-hand side in lab coordinates: returns `[vx, vy, ax, ay]` with the
/// loss term `-2 gamma vx` on `x` and the gain term `+2 gamma vy` on `y`.
pub fn eom_rhs_xy(state: &PhaseStateXY, p: &ModelParams) -> [f64; 4] {
    let omega_sq = p.omega * p.omega;
    let d = state.x - state.y;
    let core = p.g / (d * d * d);
    [
        state.vx,
        state.vy,
        -2.0 * p.gamma * state.vx - (omega_sq * state.x + p.epsilon * state.y) - core,
        2.0 * p.gamma * state.vy - (omega_sq * state.y + p.epsilon * state.x) + core,
    ]
}

fn max_abs(y: &State4) -> f64 {
    y.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

struct RawRun {
    times: Vec<f64>,
    states: Vec<State4>,
    termination: Termination,
}

/// Shared driver: march with dense output onto an equally spaced grid,
/// halting on singularity or blow-up. `sep` extracts the coordinate whose
/// magnitude is floored.
fn drive<F, S>(
    rhs: F,
    sep: S,
    y0: State4,
    t_span: (f64, f64),
    opts: &IntegratorOptions,
) -> Result<RawRun, DynamicsError>
where
    F: Fn(f64, &State4) -> State4,
    S: Fn(&State4) -> f64,
{
    opts.validate()?;
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(DynamicsError::InvalidTimeSpan);
    }
    if sep(&y0).abs() < opts.singular_floor {
        return Err(DynamicsError::InitialStateSingular {
            floor: opts.singular_floor,
        });
    }

    let n = opts.max_samples;
    let dt = (t1 - t0) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { t1 } else { t0 + dt * i as f64 })
        .collect();

    let settings = Settings {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_step: opts.max_step,
        ..Settings::default()
    };

    let mut times = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    times.push(t0);
    states.push(y0);
    let mut next = 1usize;
    let mut termination = Termination::Completed;
    let tail_slack = 1e-12 * (t1 - t0);

    let result = dopri5::propagate(rhs, t0, y0, t1, &settings, |step| {
        while next < n && grid[next] <= step.t_end() + tail_slack {
            let t = grid[next];
            let y = step.interpolate(t);
            if sep(&y).abs() < opts.singular_floor {
                termination = Termination::Singularity { t };
                return false;
            }
            if max_abs(&y) > BLOWUP_THRESHOLD {
                termination = Termination::Blowup { t };
                return false;
            }
            times.push(t);
            states.push(y);
            next += 1;
        }
        // Guard the raw step endpoint as well, so events between grid
        // points still end the run.
        if sep(&step.y_end).abs() < opts.singular_floor {
            termination = Termination::Singularity { t: step.t_end() };
            return false;
        }
        if max_abs(&step.y_end) > BLOWUP_THRESHOLD {
            termination = Termination::Blowup { t: step.t_end() };
            return false;
        }
        true
    });

    match result {
        Ok(_) => Ok(RawRun {
            times,
            states,
            termination,
        }),
        Err(IntegrationError::StepSizeUnderflow { t, state }) => {
            // Near the collision manifold the velocity scales like 1/|z2|,
            // so the step control stalls before any accepted state crosses
            // the floor literally. A stall in the floor's proximity is the
            // collision; elsewhere it is a genuine failure.
            if sep(&state).abs() < 1e3 * opts.singular_floor {
                Ok(RawRun {
                    times,
                    states,
                    termination: Termination::Singularity { t },
                })
            } else {
                Err(DynamicsError::StepSizeUnderflow { t, state })
            }
        }
        Err(IntegrationError::MaxStepsExceeded { t, .. }) => {
            Err(DynamicsError::MaxStepsExceeded { t })
        }
        Err(IntegrationError::InvalidSpan) => Err(DynamicsError::InvalidTimeSpan),
    }
}

fn diagnostics_z(samples: &[PhaseStateZ], p: &ModelParams, termination: Termination) -> Diagnostics {
    let h0 = energy_xy(&from_normal(&samples[0]), p);
    let mut energy_drift = 0.0f64;
    for s in samples {
        let h = energy_xy(&from_normal(s), p);
        energy_drift = energy_drift.max((h - h0).abs() / (1.0 + h0.abs()));
    }
    let pi_drift = if p.is_calogero() {
        let pi0 = pi_invariant(&samples[0], p).expect("pair-harmonic limit checked");
        let mut drift = 0.0f64;
        for s in samples {
            let pi = pi_invariant(s, p).expect("pair-harmonic limit checked");
            drift = drift.max((pi - pi0).abs());
        }
        Some(drift)
    } else {
        None
    };
    Diagnostics {
        energy_drift,
        pi_drift,
        termination,
    }
}

/// Integrate in normal coordinates from `initial` over `t_span`. The clock
/// runs over `t_span` itself; the `t` field of `initial` is not consulted.
pub fn integrate(
    initial: &PhaseStateZ,
    p: &ModelParams,
    t_span: (f64, f64),
    opts: &IntegratorOptions,
) -> Result<Trajectory, DynamicsError> {
    let y0 = [initial.z1, initial.z2, initial.v1, initial.v2];
    // Raw-array mirror of `eom_rhs` (stage states skip validation); the
    // closed-form solution oracle pins it.
    let run = drive(
        |_t, y| {
            let omega_sq = p.omega * p.omega;
            [
                y[2],
                y[3],
                -(omega_sq + p.epsilon) * y[0] - 2.0 * p.gamma * y[3],
                -(omega_sq - p.epsilon) * y[1] - 2.0 * p.gamma * y[2] - 2.0 * p.g / (y[1] * y[1] * y[1]),
            ]
        },
        |y| y[1],
        y0,
        t_span,
        opts,
    )?;
    let samples: Result<Vec<_>, _> = run
        .times
        .iter()
        .zip(&run.states)
        .map(|(&t, y)| PhaseStateZ::new(y[0], y[1], y[2], y[3], t))
        .collect();
    let samples = samples?;
    let diagnostics = diagnostics_z(&samples, p, run.termination);
    Ok(Trajectory {
        samples,
        params: *p,
        diagnostics,
    })
}

/// Integrate in lab coordinates from `initial` over `t_span`.
pub fn integrate_xy(
    initial: &PhaseStateXY,
    p: &ModelParams,
    t_span: (f64, f64),
    opts: &IntegratorOptions,
) -> Result<TrajectoryXY, DynamicsError> {
    let y0 = [initial.x, initial.y, initial.vx, initial.vy];
    // Raw-array mirror of `eom_rhs_xy`; pinned against the normal-frame
    // integration by the frame-equivalence test.
    let run = drive(
        |_t, y| {
            let omega_sq = p.omega * p.omega;
            let d = y[0] - y[1];
            let core = p.g / (d * d * d);
            [
                y[2],
                y[3],
                -2.0 * p.gamma * y[2] - (omega_sq * y[0] + p.epsilon * y[1]) - core,
                2.0 * p.gamma * y[3] - (omega_sq * y[1] + p.epsilon * y[0]) + core,
            ]
        },
        |y| y[0] - y[1],
        y0,
        t_span,
        opts,
    )?;
    let samples: Result<Vec<_>, _> = run
        .times
        .iter()
        .zip(&run.states)
        .map(|(&t, y)| PhaseStateXY::new(y[0], y[1], y[2], y[3], t))
        .collect();
    let samples = samples?;
    let diagnostics = diagnostics_z(
        &samples.iter().map(to_normal).collect::<Vec<_>>(),
        p,
        run.termination,
    );
    Ok(TrajectoryXY {
        samples,
        params: *p,
        diagnostics,
    })
}

/// Recompute conservation diagnostics for a trajectory.
pub fn conservation_report(traj: &Trajectory) -> Diagnostics {
    assert!(!traj.samples.is_empty(), "trajectory has no samples");
    diagnostics_z(&traj.samples, &traj.params, traj.diagnostics.termination)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z_state(z1: f64, z2: f64, v1: f64, v2: f64) -> PhaseStateZ {
        PhaseStateZ::new(z1, z2, v1, v2, 0.0).unwrap()
    }

    #[test]
    fn rhs_pair_harmonic_limit_decouples_z1_acceleration() {
        // epsilon = -omega^2: a1 reduces to -2 gamma v2.
        let p = ModelParams::calogero(1.0, 0.4, -0.5).unwrap();
        let s = z_state(3.0, 1.2, 0.5, -0.7);
        let rhs = eom_rhs(&s, &p);
        assert!((rhs[2] - (-2.0 * p.gamma * s.v2)).abs() < 1e-15);
    }

    #[test]
    fn rhs_decoupled_oscillators() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let s = z_state(2.0, 1.0, 0.0, 0.0);
        let rhs = eom_rhs(&s, &p);
        assert_eq!(rhs[2], -2.0);
        assert_eq!(rhs[3], -1.0);
    }

    #[test]
    fn rhs_xy_gain_loss_signs() {
        let p = ModelParams::new(1.0, 0.25, 0.0, 0.0).unwrap();
        let s = PhaseStateXY::new(0.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let rhs = eom_rhs_xy(&s, &p);
        // Loss enters x as -2 gamma vx, gain enters y as +2 gamma vy.
        assert!((rhs[2] - (-0.5 - 0.0)).abs() < 1e-15);
        assert!((rhs[3] - (0.5 - 1.0)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn rhs_frames_are_equivalent(
            x in -3.0f64..3.0,
            dy in 0.05f64..4.0,
            vx in -3.0f64..3.0,
            vy in -3.0f64..3.0,
            gamma in -1.0f64..1.0,
            g in -2.0f64..2.0,
            epsilon in -2.0f64..2.0,
        ) {
            let p = ModelParams::new(1.1, gamma, g, epsilon).unwrap();
            let s = PhaseStateXY::new(x, x - dy, vx, vy, 0.0).unwrap();
            let rxy = eom_rhs_xy(&s, &p);
            let rz = eom_rhs(&to_normal(&s), &p);
            // (a1, a2) = (ax + ay, ax - ay)
            let scale = 1.0 + rz[2].abs().max(rz[3].abs());
            prop_assert!((rz[2] - (rxy[2] + rxy[3])).abs() < 1e-13 * scale);
            prop_assert!((rz[3] - (rxy[2] - rxy[3])).abs() < 1e-13 * scale);
        }
    }

    #[test]
    fn energy_conserved_on_short_run() {
        let p = ModelParams::new(1.0, 0.2, -0.5, 0.3).unwrap();
        let s = z_state(0.4, 1.0, -0.1, 0.2);
        let traj = integrate(&s, &p, (0.0, 20.0), &IntegratorOptions::default()).unwrap();
        assert_eq!(traj.diagnostics.termination, Termination::Completed);
        assert!(traj.diagnostics.energy_drift < 1e-9);
        assert!(traj.diagnostics.pi_drift.is_none());
    }

    #[test]
    fn pi_conserved_in_pair_harmonic_limit() {
        let p = ModelParams::calogero(1.0, 0.3, -0.5).unwrap();
        let s = z_state(0.0, 1.0, 0.4, 1.0); // generic charge, not zero
        let traj = integrate(&s, &p, (0.0, 20.0), &IntegratorOptions::default()).unwrap();
        assert!(traj.diagnostics.pi_drift.unwrap() < 1e-11);
    }

    #[test]
    fn attractive_core_collision_reports_singularity() {
        // g > 0 removes the repulsive barrier; an inbound relative velocity
        // reaches z2 = 0.
        let p = ModelParams::sutherland(1.0, 0.0, 0.5).unwrap();
        let s = z_state(0.0, 1.0, 0.0, -2.0);
        let traj = integrate(&s, &p, (0.0, 10.0), &IntegratorOptions::default()).unwrap();
        assert!(matches!(
            traj.diagnostics.termination,
            Termination::Singularity { .. }
        ));
        for smp in &traj.samples {
            assert!(smp.z2.abs() >= IntegratorOptions::default().singular_floor);
        }
    }

    #[test]
    fn sample_times_strictly_increasing() {
        let p = ModelParams::sutherland(1.0, 0.1, -0.5).unwrap();
        let s = z_state(0.5, 1.0, 0.0, 0.0);
        let traj = integrate(&s, &p, (0.0, 5.0), &IntegratorOptions::default()).unwrap();
        assert_eq!(traj.samples.len(), 2000);
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
        assert_eq!(traj.samples.last().unwrap().t, 5.0);
    }

    #[test]
    fn step_underflow_carries_last_state() {
        // Disable the floor so the collision manifests as a stalled step.
        let p = ModelParams::sutherland(1.0, 0.0, 0.5).unwrap();
        let s = z_state(0.0, 1.0, 0.0, -2.0);
        let opts = IntegratorOptions {
            singular_floor: 1e-300,
            ..IntegratorOptions::default()
        };
        match integrate(&s, &p, (0.0, 10.0), &opts) {
            Err(DynamicsError::StepSizeUnderflow { t, state }) => {
                assert!(t > 0.0 && t < 10.0);
                assert!(state.iter().all(|v| v.is_finite()));
            }
            other => panic!("expected step underflow, got {other:?}"),
        }
    }

    #[test]
    fn invalid_options_rejected() {
        let p = ModelParams::sutherland(1.0, 0.0, -0.5).unwrap();
        let s = z_state(0.0, 1.0, 0.0, 0.0);
        let opts = IntegratorOptions {
            rel_tol: -1.0,
            ..IntegratorOptions::default()
        };
        assert!(matches!(
            integrate(&s, &p, (0.0, 1.0), &opts),
            Err(DynamicsError::InvalidOptions(_))
        ));
        let opts = IntegratorOptions {
            max_samples: 1,
            ..IntegratorOptions::default()
        };
        assert!(matches!(
            integrate(&s, &p, (0.0, 1.0), &opts),
            Err(DynamicsError::InvalidOptions(_))
        ));
    }

    #[test]
    fn report_recomputes_stored_diagnostics() {
        let p = ModelParams::calogero(1.0, 0.3, -0.5).unwrap();
        let s = z_state(0.0, 1.0, -0.6, 1.0);
        let traj = integrate(&s, &p, (0.0, 10.0), &IntegratorOptions::default()).unwrap();
        let report = conservation_report(&traj);
        assert_eq!(report, traj.diagnostics);
    }

    #[test]
    fn decoupled_limit_sector_energies_conserved() {
        // gamma = 0, epsilon = 0: the center and relative sectors carry
        // separately conserved energies.
        let p = ModelParams::sutherland(1.0, 0.0, -0.5).unwrap();
        let s = z_state(0.5, 1.3, 0.2, -0.1);
        let traj = integrate(&s, &p, (0.0, 30.0), &IntegratorOptions::default()).unwrap();
        let e1 = |s: &PhaseStateZ| s.v1 * s.v1 + p.omega * p.omega * s.z1 * s.z1;
        let e2 = |s: &PhaseStateZ| {
            0.5 * s.v2 * s.v2 + 0.5 * p.omega * p.omega * s.z2 * s.z2 - p.g / (s.z2 * s.z2)
        };
        let (e10, e20) = (e1(&traj.samples[0]), e2(&traj.samples[0]));
        for smp in &traj.samples {
            assert!((e1(smp) - e10).abs() < 1e-9);
            assert!((e2(smp) - e20).abs() < 1e-9);
        }
    }
}
