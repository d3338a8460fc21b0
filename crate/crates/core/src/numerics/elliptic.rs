//! Incomplete elliptic integral of the second kind,
//! E(phi | m) = integral of sqrt(1 - m sin^2 t) dt from 0 to phi,
//! evaluated through the Carlson symmetric forms RF and RD.
//!
//! The parameter convention is m = k^2, matching `scipy.special.ellipeinc`.
//! Any real amplitude is accepted; the quasi-periodic relation
//! E(phi + n*pi | m) = E(phi | m) + 2n E(m) reduces the argument to a
//! principal interval. Any m <= 1 is accepted (negative m needs no
//! transformation in the Carlson representation).

use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("elliptic modulus m = {0} out of range: E(phi | m) requires m <= 1")]
    ModulusOutOfRange(f64),
    #[error("elliptic integral arguments must be finite")]
    NonFinite,
}

// Duplication-theorem tolerances; the truncation error of the fifth-order
// series tail scales as errtol^6, so these keep both forms at f64 precision.
const RF_ERRTOL: f64 = 0.0025;
const RD_ERRTOL: f64 = 0.0015;

/// Carlson symmetric integral RF(x, y, z), x, y, z >= 0 with at most one zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = (x + y + z) / 3.0;
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RF_ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

/// Carlson symmetric integral RD(x, y, z), x, y >= 0 (at most one zero), z > 0.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z > 0.0);
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = 0.2 * (x + y + 3.0 * z);
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RD_ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let tail = 1.0
                + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea));
            return 3.0 * sum + fac * tail / (ave * ave.sqrt());
        }
    }
}

// E on the principal interval [0, pi/2].
fn e_principal(phi: f64, m: f64) -> f64 {
    debug_assert!((0.0..=FRAC_PI_2 + 1e-12).contains(&phi));
    if m == 1.0 {
        return phi.sin();
    }
    let s = phi.sin();
    if s == 0.0 {
        return 0.0;
    }
    let c = phi.cos();
    let c2 = c * c;
    let q = 1.0 - m * s * s;
    s * carlson_rf(c2, q, 1.0) - (m / 3.0) * s * s * s * carlson_rd(c2, q, 1.0)
}

/// E(phi | m) for arbitrary real amplitude and m <= 1.
pub fn elliptic_e_inc(phi: f64, m: f64) -> Result<f64, EllipticError> {
    if !phi.is_finite() || !m.is_finite() {
        return Err(EllipticError::NonFinite);
    }
    if m > 1.0 {
        return Err(EllipticError::ModulusOutOfRange(m));
    }
    // phi = n*pi + r with r in [-pi/2, pi/2]; E is odd and quasi-periodic.
    let n = (phi / PI).round();
    let r = phi - n * PI;
    let mut value = r.signum() * e_principal(r.abs(), m);
    if n != 0.0 {
        value += 2.0 * n * e_principal(FRAC_PI_2, m);
    }
    Ok(value)
}

/// Complete integral E(m) = E(pi/2 | m).
pub fn elliptic_e_comp(m: f64) -> Result<f64, EllipticError> {
    elliptic_e_inc(FRAC_PI_2, m)
}
