//! One function per subcommand, each producing a [`Document`].

use crate::config::RunConfig;
use crate::output::{Cell, Document};
use anyhow::{Context, Result};
use ptcalogero::calogero::{
    effective_frequency, ep_constants, z1_exact, z1_quadrature, z2_exact,
};
use ptcalogero::dynamics::{integrate, IntegratorOptions};
use ptcalogero::model::{energy_xy, from_normal, pi_invariant, ModelParams, PhaseStateZ};
use ptcalogero::quantum::{
    energy_ladder, fd_spectrum_oracle, quantum_params, stokes_wedges, Branch, FdGrid,
    QuantumError,
};
use ptcalogero::sutherland::{compare_perturbative_numeric, stability_report};
use serde_json::json;

fn integrator_options(config: &RunConfig) -> IntegratorOptions {
    IntegratorOptions {
        rel_tol: config.rel_tol,
        abs_tol: config.abs_tol,
        max_samples: config.samples.max(2),
        ..IntegratorOptions::default()
    }
}

fn params_meta(doc: &mut Document, p: &ModelParams) {
    doc.meta_f64("omega", p.omega);
    doc.meta_f64("gamma", p.gamma);
    doc.meta_f64("g", p.g);
    doc.meta_f64("epsilon", p.epsilon);
}

pub fn simulate(config: &RunConfig) -> Result<Document> {
    let p = ModelParams::new(config.omega, config.gamma, config.g, config.epsilon)?;
    let initial = PhaseStateZ::new(config.z1_0, config.b, config.v1_0, config.a, 0.0)?;
    let traj = integrate(&initial, &p, (0.0, config.t_max), &integrator_options(config))?;

    let mut doc = Document::new(vec!["t", "x", "y", "z1", "z2", "H", "Pi"]);
    doc.meta("command", "simulate");
    params_meta(&mut doc, &p);
    doc.meta_f64("z1_0", config.z1_0);
    doc.meta_f64("z2_0", config.b);
    doc.meta_f64("v1_0", config.v1_0);
    doc.meta_f64("v2_0", config.a);
    doc.meta_f64("t_max", config.t_max);
    doc.meta("termination", traj.diagnostics.termination);
    doc.meta_f64("energy_drift", traj.diagnostics.energy_drift);
    match traj.diagnostics.pi_drift {
        Some(d) => doc.meta_f64("pi_drift", d),
        None => doc.meta("pi_drift", "n/a"),
    }

    let charge_conserved = p.is_calogero();
    for s in &traj.samples {
        let lab = from_normal(s);
        let pi = if charge_conserved {
            Cell::Num(pi_invariant(s, &p).expect("limit checked"))
        } else {
            Cell::Blank
        };
        doc.push_row(vec![
            Cell::Num(s.t),
            Cell::Num(lab.x),
            Cell::Num(lab.y),
            Cell::Num(s.z1),
            Cell::Num(s.z2),
            Cell::Num(energy_xy(&lab, &p)),
            pi,
        ]);
    }
    Ok(doc)
}

pub fn exact(config: &RunConfig) -> Result<Document> {
    let p = ModelParams::calogero(config.omega, config.gamma, config.g)?;
    let freq = effective_frequency(&p)?;
    let constants = ep_constants(config.a, config.b, &p)
        .context("closed form unavailable for these parameters")?
        .with_z1_init(config.z1_0);
    let w = freq.omega().expect("unbroken checked by ep_constants");

    let initial = PhaseStateZ::new(config.z1_0, config.b, config.v1_0, config.a, 0.0)?;
    let traj = integrate(&initial, &p, (0.0, config.t_max), &integrator_options(config))?;

    let mut doc = Document::new(vec![
        "t",
        "z1_exact",
        "z2_exact",
        "z1_quadrature",
        "z1_numeric",
        "z2_numeric",
    ]);
    doc.meta("command", "exact");
    params_meta(&mut doc, &p);
    doc.meta_f64("a", config.a);
    doc.meta_f64("b", config.b);
    doc.meta_f64("z1_0", config.z1_0);
    doc.meta_f64("omega_eff_sq", freq.omega_sq_eff);
    doc.meta("phase", freq.phase);
    doc.meta_f64("coeff_sin2", constants.sin2_coeff);
    doc.meta_f64("coeff_cross", constants.cross_coeff);
    doc.meta_f64("coeff_cos2", constants.cos2_coeff);
    doc.meta_f64("envelope", constants.envelope);
    doc.meta_f64("modulus_sq", constants.modulus_sq);
    doc.meta("attractive_core", constants.attractive_core);
    doc.meta("termination", traj.diagnostics.termination);

    let mut max_dev_z1 = 0.0f64;
    let mut max_dev_z2 = 0.0f64;
    let mut rows = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        let z2e = z2_exact(s.t, &constants, w)?;
        let z1e = z1_exact(s.t, &constants, w, p.gamma)?;
        let z1q = z1_quadrature(s.t, &constants, w, p.gamma)?;
        max_dev_z1 = max_dev_z1.max((z1e - s.z1).abs());
        max_dev_z2 = max_dev_z2.max((z2e - s.z2).abs());
        rows.push(vec![
            Cell::Num(s.t),
            Cell::Num(z1e),
            Cell::Num(z2e),
            Cell::Num(z1q),
            Cell::Num(s.z1),
            Cell::Num(s.z2),
        ]);
    }
    doc.meta_f64("max_dev_z1", max_dev_z1);
    doc.meta_f64("max_dev_z2", max_dev_z2);
    for row in rows {
        doc.push_row(row);
    }
    Ok(doc)
}

pub fn stability(config: &RunConfig) -> Result<Document> {
    let p = ModelParams::sutherland(config.omega, config.gamma, config.g)?;
    let report = stability_report(&p)?;

    let mut doc = Document::new(vec![
        "index",
        "re_published",
        "im_published",
        "re_characteristic",
        "im_characteristic",
        "re_numeric",
        "im_numeric",
    ]);
    doc.meta("command", "stability");
    params_meta(&mut doc, &p);
    doc.meta_f64("z2_eq", report.equilibrium.z2_eq);
    doc.meta_f64("p_coefficient", report.p_coefficient);
    doc.meta("classification", report.classification);
    doc.meta("marginal", report.marginal);
    doc.meta("discrepancy_flag", report.discrepancy_flag);
    // Reported for reference, not asserted: the stability range claimed
    // alongside the published formula, and the one the characteristic
    // polynomial implies.
    doc.meta_f64(
        "published_range_bound",
        (5.0f64 / 4.0).sqrt() * config.omega,
    );
    doc.meta_f64("characteristic_range_bound", 0.5 * config.omega);

    for i in 0..4 {
        doc.push_row(vec![
            Cell::Int(i as i64),
            Cell::Num(report.eigs_published[i].re),
            Cell::Num(report.eigs_published[i].im),
            Cell::Num(report.eigs_char[i].re),
            Cell::Num(report.eigs_char[i].im),
            Cell::Num(report.eigs_numeric[i].re),
            Cell::Num(report.eigs_numeric[i].im),
        ]);
    }
    Ok(doc)
}

pub fn perturb(config: &RunConfig) -> Result<Document> {
    let p = ModelParams::sutherland(config.omega, config.gamma, config.g)?;
    let rows = compare_perturbative_numeric(&p, config.t_max, config.samples.max(2))?;

    let mut doc = Document::new(vec!["t", "x_num", "y_num", "x_pert", "y_pert"]);
    doc.meta("command", "perturb");
    params_meta(&mut doc, &p);
    doc.meta_f64("t_max", config.t_max);
    let max_dev = rows
        .iter()
        .fold(0.0f64, |m, r| m.max(r.dev_x.abs()).max(r.dev_y.abs()));
    doc.meta_f64("max_deviation", max_dev);

    for r in &rows {
        doc.push_row(vec![
            Cell::Num(r.t),
            Cell::Num(r.x_num),
            Cell::Num(r.y_num),
            Cell::Num(r.x_pert),
            Cell::Num(r.y_pert),
        ]);
    }
    Ok(doc)
}

pub fn spectrum(config: &RunConfig) -> Result<Document> {
    let p = ModelParams::calogero(config.omega, config.gamma, config.g)?;
    let minus = quantum_params(&p, Branch::Minus)?;
    let plus = quantum_params(&p, Branch::Plus)?;
    let ladder_minus = energy_ladder(&minus, config.levels);
    let ladder_plus = energy_ladder(&plus, config.levels);
    let oracle = match fd_spectrum_oracle(&plus, config.levels, &FdGrid::default()) {
        Ok(values) => Some(values),
        // Outside the unbroken phase (or at its boundary) there is no
        // real spectrum for the oracle to discretize; the column is blank.
        Err(QuantumError::BrokenPhase | QuantumError::BoundaryDegenerate) => None,
        Err(e) => return Err(e.into()),
    };

    let mut doc = Document::new(vec![
        "m",
        "n",
        "e_minus_re",
        "e_minus_im",
        "e_plus_re",
        "e_plus_im",
        "e_fd_oracle",
    ]);
    doc.meta("command", "spectrum");
    params_meta(&mut doc, &p);
    doc.meta("phase", minus.phase);
    doc.meta("branch", config.branch);
    doc.meta_f64("lambda", minus.lambda);
    doc.meta_f64("lambda_plus", minus.lambda_plus);
    doc.meta_f64("lambda_minus", minus.lambda_minus);
    doc.meta_f64("omega_eff_re", minus.omega_eff.re);
    doc.meta_f64("omega_eff_im", minus.omega_eff.im);
    let selected = match config.branch {
        Branch::Minus => &ladder_minus,
        Branch::Plus => &ladder_plus,
    };
    if let Some(e0) = selected.energies.first() {
        doc.meta_f64("e0_selected_re", e0.re);
        doc.meta_f64("e0_selected_im", e0.im);
    }

    for m in 0..config.levels {
        let fd = oracle
            .as_ref()
            .and_then(|v| v.get(m))
            .map_or(Cell::Blank, |v| Cell::Num(*v));
        doc.push_row(vec![
            Cell::Int(m as i64),
            Cell::Int(2 * m as i64),
            Cell::Num(ladder_minus.energies[m].re),
            Cell::Num(ladder_minus.energies[m].im),
            Cell::Num(ladder_plus.energies[m].re),
            Cell::Num(ladder_plus.energies[m].im),
            fd,
        ]);
    }
    Ok(doc)
}

/// Wedge geometry as a JSON string (this subcommand has no tabular form).
pub fn wedges(config: &RunConfig) -> Result<String> {
    let coefficient = 0.5 * config.gamma * config.z1_0;
    let selection = stokes_wedges(coefficient);
    let wedges: Vec<_> = selection
        .wedges()
        .iter()
        .map(|w| {
            json!({
                "center_angle": w.center_angle,
                "opening_angle": w.opening_angle,
            })
        })
        .collect();
    let doc = json!({
        "metadata": {
            "command": "wedges",
            "gamma": crate::output::fmt_f64(config.gamma),
            "z1_0": crate::output::fmt_f64(config.z1_0),
            "coefficient": crate::output::fmt_f64(coefficient),
        },
        "wedges": wedges,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("static schema");
    text.push('\n');
    Ok(text)
}
