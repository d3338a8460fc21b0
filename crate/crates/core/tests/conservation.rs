//! Cross-module conservation and symmetry checks for the integrator.

use ptcalogero::dynamics::{integrate, integrate_xy, IntegratorOptions, Termination};
use ptcalogero::model::{pt_transform, to_normal, ModelParams, PhaseStateXY, PhaseStateZ};

fn max_state_diff(a: &PhaseStateZ, b: &PhaseStateZ) -> f64 {
    (a.z1 - b.z1)
        .abs()
        .max((a.z2 - b.z2).abs())
        .max((a.v1 - b.v1).abs())
        .max((a.v2 - b.v2).abs())
}

#[test]
fn energy_drift_stays_within_budget_for_all_couplings() {
    // The energy is conserved for every linear coupling, not only in the
    // two named limits.
    for epsilon in [-1.0, 0.0, 0.3] {
        let p = ModelParams::new(1.0, 0.2, -0.5, epsilon).unwrap();
        let init = PhaseStateZ::new(0.4, 1.1, -0.3, 0.2, 0.0).unwrap();
        let opts = IntegratorOptions {
            max_samples: 1001,
            ..IntegratorOptions::tight()
        };
        let traj = integrate(&init, &p, (0.0, 100.0), &opts).unwrap();
        assert_eq!(traj.diagnostics.termination, Termination::Completed);
        assert!(
            traj.diagnostics.energy_drift < 1e-8,
            "epsilon = {epsilon}: drift {}",
            traj.diagnostics.energy_drift
        );
    }
}

#[test]
fn charge_drifts_when_coupling_leaves_the_pair_harmonic_limit() {
    // Negative control: with epsilon = 0 and gamma != 0 the combination
    // v1 + 2 gamma z2 is manifestly not conserved.
    let p = ModelParams::sutherland(1.0, 0.3, -0.5).unwrap();
    let init = PhaseStateZ::new(0.5, 1.0, 0.0, 0.0, 0.0).unwrap();
    let traj = integrate(&init, &p, (0.0, 20.0), &IntegratorOptions::tight()).unwrap();
    assert!(traj.diagnostics.pi_drift.is_none());
    let raw = |s: &PhaseStateZ| s.v1 + 2.0 * p.gamma * s.z2;
    let pi0 = raw(&traj.samples[0]);
    let drift = traj
        .samples
        .iter()
        .fold(0.0f64, |m, s| m.max((raw(s) - pi0).abs()));
    assert!(drift > 1e-3, "charge drift {drift} unexpectedly small");
}

#[test]
fn frames_agree_after_long_integration() {
    let p = ModelParams::new(1.0, 0.2, -0.5, 0.3).unwrap();
    let xy0 = PhaseStateXY::new(0.7, -0.3, 0.1, 0.4, 0.0).unwrap();
    let opts = IntegratorOptions {
        max_samples: 501,
        ..IntegratorOptions::tight()
    };
    let lab = integrate_xy(&xy0, &p, (0.0, 50.0), &opts).unwrap();
    let normal = integrate(&to_normal(&xy0), &p, (0.0, 50.0), &opts).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in lab.to_normal().samples.iter().zip(&normal.samples) {
        worst = worst.max(max_state_diff(a, b));
    }
    assert!(worst < 1e-6, "frame disagreement {worst}");
}

#[test]
fn halving_tolerances_converges_final_state() {
    let p = ModelParams::new(1.0, 0.2, -0.5, 0.3).unwrap();
    let init = PhaseStateZ::new(0.4, 1.0, -0.1, 0.2, 0.0).unwrap();
    let coarse = IntegratorOptions {
        rel_tol: 1e-9,
        abs_tol: 1e-11,
        max_samples: 2,
        ..IntegratorOptions::default()
    };
    let fine = IntegratorOptions {
        rel_tol: 5e-10,
        abs_tol: 5e-12,
        ..coarse
    };
    let a = integrate(&init, &p, (0.0, 10.0), &coarse).unwrap();
    let b = integrate(&init, &p, (0.0, 10.0), &fine).unwrap();
    let d = max_state_diff(a.samples.last().unwrap(), b.samples.last().unwrap());
    assert!(d < 10.0 * fine.rel_tol, "self-convergence gap {d}");
}

#[test]
fn swap_and_reverse_maps_solutions_to_solutions() {
    // Evolving the transformed final state forward for the same duration
    // must land on the transformed initial state; equivalently, the image
    // trajectory satisfies the equations of motion to solver precision.
    let p = ModelParams::new(1.0, 0.25, -0.5, 0.2).unwrap();
    let xy0 = PhaseStateXY::new(0.8, -0.4, 0.1, -0.2, 0.0).unwrap();
    let opts = IntegratorOptions {
        max_samples: 301,
        ..IntegratorOptions::tight()
    };
    let t_end = 30.0;
    let forward = integrate_xy(&xy0, &p, (0.0, t_end), &opts).unwrap();
    let image_start = pt_transform(forward.samples.last().unwrap());
    let restart =
        PhaseStateXY::new(image_start.x, image_start.y, image_start.vx, image_start.vy, 0.0)
            .unwrap();
    let back = integrate_xy(&restart, &p, (0.0, t_end), &opts).unwrap();
    let end = back.samples.last().unwrap();
    let expected = pt_transform(&xy0);
    let dev = (end.x - expected.x)
        .abs()
        .max((end.y - expected.y).abs())
        .max((end.vx - expected.vx).abs())
        .max((end.vy - expected.vy).abs());
    assert!(dev < 1e-8, "round-trip deviation {dev}");
}
