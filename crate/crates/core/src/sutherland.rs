//! The common-trap limit (`epsilon = 0`): equilibrium point, linearization,
//! eigenvalue analysis along three routes, stability classification, the
//! first-order perturbative solution in the loss/gain rate, and its
//! comparison against direct integration.
//!
//! The three eigenvalue routes are kept side by side deliberately. The
//! published closed-form expression `lambda = +-[(P +- sqrt(P^2 -
//! 16 omega^4))/2]^(1/2)` with `P = 5 omega^2 - 4 gamma^2` disagrees with
//! the characteristic polynomial of the very matrix it is attributed to
//! (its inner sign is flipped: at `gamma = 0` it yields real `+-1, +-2`
//! where the decoupled conservative system plainly has `+-i, +-2i`). The
//! report therefore carries the verbatim formula, the quartic roots and a
//! general eigensolver, flags their disagreement, and classifies stability
//! from the numerical spectrum; a nonlinear integration probe arbitrates.

use crate::dynamics::{self, IntegratorOptions, Termination};
use crate::model::{from_normal, ModelError, ModelParams, PhaseStateZ};
use nalgebra::Matrix4;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SutherlandError {
    #[error("operation is defined in the common-trap limit epsilon = 0, got epsilon = {0}")]
    NotCommonTrap(f64),
    #[error("no real equilibrium: the inverse-square coupling must be negative, got g = {0}")]
    NoRealEquilibrium(f64),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn require_common_trap(p: &ModelParams) -> Result<(), SutherlandError> {
    if p.is_sutherland() {
        Ok(())
    } else {
        Err(SutherlandError::NotCommonTrap(p.epsilon))
    }
}

/// Stationary point of the flow: `(p, q, z1, z2) = (0, 0, 0, (-2g/omega^2)^(1/4))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub p_eq: f64,
    pub q_eq: f64,
    pub z1_eq: f64,
    pub z2_eq: f64,
}

pub fn equilibrium(p: &ModelParams) -> Result<Equilibrium, SutherlandError> {
    require_common_trap(p)?;
    if p.g >= 0.0 {
        return Err(SutherlandError::NoRealEquilibrium(p.g));
    }
    Ok(Equilibrium {
        p_eq: 0.0,
        q_eq: 0.0,
        z1_eq: 0.0,
        z2_eq: (-2.0 * p.g / (p.omega * p.omega)).powf(0.25),
    })
}

/// Linearization about the equilibrium in the variables
/// `(dp, dq, dz1, dz2)` (velocity deviations first):
///
/// ```text
/// [ 0      -2g   -w^2    0    ]
/// [ -2g     0     0    -4w^2  ]
/// [ 1       0     0      0    ]
/// [ 0       1     0      0    ]
/// ```
///
/// The `-4 omega^2` entry is `-d/dz2 [omega^2 z2 + 2g/z2^3]` at the
/// equilibrium separation, which is independent of `g` after evaluation.
pub fn jacobian(p: &ModelParams) -> Result<Matrix4<f64>, SutherlandError> {
    equilibrium(p)?;
    let w2 = p.omega * p.omega;
    let tg = 2.0 * p.gamma;
    Ok(Matrix4::new(
        0.0, -tg, -w2, 0.0, //
        -tg, 0.0, 0.0, -4.0 * w2, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0,
    ))
}

fn sorted4(mut v: [Complex64; 4]) -> [Complex64; 4] {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    v
}

/// The published eigenvalue expression evaluated verbatim (complex
/// arithmetic throughout): `lambda = +-[(P +- sqrt(P^2 - 16 w^4))/2]^(1/2)`,
/// `P = 5 w^2 - 4 gamma^2`. See the module notes: this disagrees with the
/// matrix it describes.
pub fn eigenvalues_published(p: &ModelParams) -> [Complex64; 4] {
    let w2 = p.omega * p.omega;
    let big_p = 5.0 * w2 - 4.0 * p.gamma * p.gamma;
    let disc = Complex64::new(big_p * big_p - 16.0 * w2 * w2, 0.0).sqrt();
    let s1 = (Complex64::new(big_p, 0.0) + disc) * 0.5;
    let s2 = (Complex64::new(big_p, 0.0) - disc) * 0.5;
    sorted4([s1.sqrt(), -s1.sqrt(), s2.sqrt(), -s2.sqrt()])
}

/// Roots of the characteristic polynomial of the linearization,
/// `(lambda^2 + w^2)(lambda^2 + 4 w^2) = 4 gamma^2 lambda^2`, i.e.
/// `s^2 + P s + 4 w^4 = 0` with `s = lambda^2`.
pub fn eigenvalues_characteristic(p: &ModelParams) -> [Complex64; 4] {
    let w2 = p.omega * p.omega;
    let big_p = 5.0 * w2 - 4.0 * p.gamma * p.gamma;
    let disc = Complex64::new(big_p * big_p - 16.0 * w2 * w2, 0.0).sqrt();
    let s1 = (Complex64::new(-big_p, 0.0) + disc) * 0.5;
    let s2 = (Complex64::new(-big_p, 0.0) - disc) * 0.5;
    sorted4([s1.sqrt(), -s1.sqrt(), s2.sqrt(), -s2.sqrt()])
}

/// Spectrum of the linearization from a general (Schur-based) eigensolver.
pub fn eigenvalues_numeric(m: &Matrix4<f64>) -> [Complex64; 4] {
    let eigs = m.complex_eigenvalues();
    sorted4([eigs[0], eigs[1], eigs[2], eigs[3]])
}

/// Smallest possible maximum pairwise distance over all matchings of the
/// two spectra (exact over the 24 permutations of four elements.)
pub fn spectrum_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    const PERMS: [[usize; 4]; 24] = [
        [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
        [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
        [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
        [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
    ];
    let mut best = f64::INFINITY;
    for perm in PERMS {
        let mut worst = 0.0f64;
        for (i, &j) in perm.iter().enumerate() {
            worst = worst.max((a[i] - b[j]).norm());
        }
        best = best.min(worst);
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
        })
    }
}

const STABILITY_RE_TOL: f64 = 1e-10;
const DISCREPANCY_TOL: f64 = 1e-8;

/// Classify from a spectrum: stable iff every real part is below the
/// tolerance in magnitude. The paired `marginal` flag records that a stable
/// verdict rests on a purely imaginary spectrum, for which the linearization
/// alone is inconclusive about the nonlinear flow.
pub fn classify_stability(eigs: &[Complex64; 4]) -> (Stability, bool) {
    let max_re = eigs.iter().fold(0.0f64, |m, e| m.max(e.re.abs()));
    if max_re < STABILITY_RE_TOL {
        (Stability::Stable, true)
    } else {
        (Stability::Unstable, false)
    }
}

/// Equilibrium, linearization and all three eigenvalue routes side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub equilibrium: Equilibrium,
    pub jacobian: Matrix4<f64>,
    pub eigs_published: [Complex64; 4],
    pub eigs_char: [Complex64; 4],
    pub eigs_numeric: [Complex64; 4],
    /// `P = 5 omega^2 - 4 gamma^2`.
    pub p_coefficient: f64,
    /// Classification from the numerical spectrum (the authoritative route).
    pub classification: Stability,
    /// Stable verdicts from purely imaginary spectra are marginal.
    pub marginal: bool,
    /// Set when the published formula and the numerical spectrum disagree
    /// beyond tolerance as multisets.
    pub discrepancy_flag: bool,
}

pub fn stability_report(p: &ModelParams) -> Result<StabilityReport, SutherlandError> {
    let equilibrium = equilibrium(p)?;
    let jac = jacobian(p)?;
    let eigs_published = eigenvalues_published(p);
    let eigs_char = eigenvalues_characteristic(p);
    let eigs_numeric = eigenvalues_numeric(&jac);
    let (classification, marginal) = classify_stability(&eigs_numeric);
    let discrepancy_flag = spectrum_distance(&eigs_published, &eigs_numeric) > DISCREPANCY_TOL;
    Ok(StabilityReport {
        equilibrium,
        jacobian: jac,
        eigs_published,
        eigs_char,
        eigs_numeric,
        p_coefficient: 5.0 * p.omega * p.omega - 4.0 * p.gamma * p.gamma,
        classification,
        marginal,
        discrepancy_flag,
    })
}

/// First-order solution in the loss/gain rate for the fixed initial data
/// `z1(0) = 0.5, z2(0) = 1, v1(0) = v2(0) = 0`:
///
/// ```text
/// z1(t) = 0.5 cos(wt)
/// z2(t) = -2g/w^2 + gamma [ -(0.5/3w) cos(2wt)
///         + (0.5/3w) { 2 sin^3(wt) sin(2wt) + (1 + sin(2wt)) cos(wt) cos(2wt) } ]
/// ```
///
/// Both expressions are kept verbatim. The leading `z2` term `-2g/w^2`
/// coincides with the initial datum `z2(0) = 1` only when `-2g = w^2`
/// (true at the reference parameters `g = -0.5, w = 1`); elsewhere the
/// comparison harness is the arbiter of its usefulness.
#[derive(Debug, Clone, Copy)]
pub struct PerturbativeSolution {
    omega: f64,
    gamma: f64,
    g: f64,
}

/// The initial data the perturbative solution is built on.
pub const PERTURBATIVE_INITIAL: (f64, f64, f64, f64) = (0.5, 1.0, 0.0, 0.0);

impl PerturbativeSolution {
    pub fn z1(&self, t: f64) -> f64 {
        0.5 * (self.omega * t).cos()
    }

    pub fn z2(&self, t: f64) -> f64 {
        let w = self.omega;
        let (s, c) = (w * t).sin_cos();
        let (s2, c2) = (2.0 * w * t).sin_cos();
        let amp = 0.5 / (3.0 * w);
        -2.0 * self.g / (w * w)
            + self.gamma * (-amp * c2 + amp * (2.0 * s * s * s * s2 + (1.0 + s2) * c * c2))
    }

    pub fn x(&self, t: f64) -> f64 {
        0.5 * (self.z1(t) + self.z2(t))
    }

    pub fn y(&self, t: f64) -> f64 {
        0.5 * (self.z1(t) - self.z2(t))
    }
}

pub fn perturbative_solution(p: &ModelParams) -> Result<PerturbativeSolution, SutherlandError> {
    require_common_trap(p)?;
    Ok(PerturbativeSolution {
        omega: p.omega,
        gamma: p.gamma,
        g: p.g,
    })
}

/// One row of the perturbative-vs-numeric comparison table (lab frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub t: f64,
    pub x_num: f64,
    pub y_num: f64,
    pub x_pert: f64,
    pub y_pert: f64,
    pub dev_x: f64,
    pub dev_y: f64,
}

/// Integrate the common-trap system from the perturbative initial data and
/// tabulate both solutions in lab coordinates.
pub fn compare_perturbative_numeric(
    p: &ModelParams,
    t_max: f64,
    samples: usize,
) -> Result<Vec<ComparisonRow>, SutherlandError> {
    let pert = perturbative_solution(p)?;
    let (z1_0, z2_0, v1_0, v2_0) = PERTURBATIVE_INITIAL;
    let initial = PhaseStateZ::new(z1_0, z2_0, v1_0, v2_0, 0.0)?;
    let opts = IntegratorOptions {
        max_samples: samples,
        ..IntegratorOptions::tight()
    };
    let traj = dynamics::integrate(&initial, p, (0.0, t_max), &opts)?;
    Ok(traj
        .samples
        .iter()
        .map(|s| {
            let lab = from_normal(s);
            let x_pert = pert.x(s.t);
            let y_pert = pert.y(s.t);
            ComparisonRow {
                t: s.t,
                x_num: lab.x,
                y_num: lab.y,
                x_pert,
                y_pert,
                dev_x: lab.x - x_pert,
                dev_y: lab.y - y_pert,
            }
        })
        .collect())
}

/// Outcome of the nonlinear arbiter run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeOutcome {
    /// The deviation from equilibrium stayed below the escape threshold.
    Bounded { max_deviation: f64 },
    /// The deviation crossed the threshold (or the run blew up) at `t`.
    Escaped { t: f64 },
}

/// Integrate from a small displacement off the equilibrium and watch the
/// deviation: the ground-truth check that arbitrates between the published
/// stability range and the one implied by the linearization.
pub fn nonlinear_stability_probe(
    p: &ModelParams,
    perturbation: f64,
    escape_threshold: f64,
    t_max: f64,
) -> Result<ProbeOutcome, SutherlandError> {
    let eq = equilibrium(p)?;
    let d = perturbation / 2.0;
    let initial = PhaseStateZ::new(eq.z1_eq + d, eq.z2_eq + d, d, d, 0.0)?;
    let opts = IntegratorOptions {
        max_samples: 4000,
        ..IntegratorOptions::default()
    };
    let traj = dynamics::integrate(&initial, p, (0.0, t_max), &opts)?;
    let mut max_dev = 0.0f64;
    for s in &traj.samples {
        let dev = (s.z1 - eq.z1_eq)
            .abs()
            .max((s.z2 - eq.z2_eq).abs())
            .max(s.v1.abs())
            .max(s.v2.abs());
        max_dev = max_dev.max(dev);
        if dev > escape_threshold {
            return Ok(ProbeOutcome::Escaped { t: s.t });
        }
    }
    match traj.diagnostics.termination {
        Termination::Completed => Ok(ProbeOutcome::Bounded {
            max_deviation: max_dev,
        }),
        Termination::Singularity { t } | Termination::Blowup { t } => {
            Ok(ProbeOutcome::Escaped { t })
        }
    }
}
