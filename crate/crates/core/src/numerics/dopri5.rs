//! Dormand-Prince 5(4) embedded Runge-Kutta pair for four-component systems,
//! with the standard fourth-order continuous extension for dense output.

use thiserror::Error;

pub type State4 = [f64; 4];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64, state: State4 },
    #[error("exceeded {max_steps} steps at t = {t}")]
    MaxStepsExceeded { t: f64, max_steps: usize },
    #[error("integration span must be finite with t_end > t_start")]
    InvalidSpan,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 100_000_000,
        }
    }
}

/// One accepted step together with its dense-output coefficients.
#[derive(Debug, Clone)]
pub struct AcceptedStep {
    pub t_start: f64,
    pub h: f64,
    pub y_start: State4,
    pub y_end: State4,
    cont: [State4; 5],
}

impl AcceptedStep {
    pub fn t_end(&self) -> f64 {
        self.t_start + self.h
    }

    /// Evaluate the continuous extension at `t` within [t_start, t_end].
    pub fn interpolate(&self, t: f64) -> State4 {
        let theta = (t - self.t_start) / self.h;
        let theta1 = 1.0 - theta;
        let mut y = [0.0; 4];
        for i in 0..4 {
            y[i] = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + theta1
                            * (self.cont[2][i]
                                + theta * (self.cont[3][i] + theta1 * self.cont[4][i])));
        }
        y
    }
}

// Butcher tableau (Dormand & Prince 1980).
const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;
// Embedded error coefficients (5th minus 4th order weights).
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output coefficients.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn axpy(y: &State4, h: f64, terms: &[(f64, &State4)]) -> State4 {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn initial_step<F: Fn(f64, &State4) -> State4>(
    rhs: &F,
    t0: f64,
    y0: &State4,
    f0: &State4,
    s: &Settings,
    span: f64,
) -> f64 {
    let sc: Vec<f64> = (0..4)
        .map(|i| s.abs_tol + s.rel_tol * y0[i].abs())
        .collect();
    let d0 = (0..4).map(|i| (y0[i] / sc[i]).powi(2)).sum::<f64>().sqrt() / 2.0;
    let d1 = (0..4).map(|i| (f0[i] / sc[i]).powi(2)).sum::<f64>().sqrt() / 2.0;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + h0, &y1);
    let d2 = (0..4)
        .map(|i| ((f1[i] - f0[i]) / sc[i]).powi(2))
        .sum::<f64>()
        .sqrt()
        / (2.0 * h0);
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span).min(s.max_step)
}

/// March the system from `t0` to `t_end`, invoking `on_step` after every
/// accepted step. Returning `false` from the callback halts the integration
/// early (the halt is not an error).
pub fn propagate<F, C>(
    rhs: F,
    t0: f64,
    y0: State4,
    t_end: f64,
    settings: &Settings,
    mut on_step: C,
) -> Result<(f64, State4), IntegrationError>
where
    F: Fn(f64, &State4) -> State4,
    C: FnMut(&AcceptedStep) -> bool,
{
    if !(t_end.is_finite() && t0.is_finite()) || t_end <= t0 {
        return Err(IntegrationError::InvalidSpan);
    }
    let span = t_end - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(&rhs, t0, &y, &k1, settings, span);
    let mut n_steps = 0usize;

    while t < t_end {
        if n_steps >= settings.max_steps {
            return Err(IntegrationError::MaxStepsExceeded {
                t,
                max_steps: settings.max_steps,
            });
        }
        n_steps += 1;
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_min {
            return Err(IntegrationError::StepSizeUnderflow { t, state: y });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(t + h, &y_new);

        let mut err_sq = 0.0;
        for i in 0..4 {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = settings.abs_tol + settings.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / 4.0).sqrt();

        if err.is_finite() && err <= 1.0 {
            // Accepted: assemble the continuous extension.
            let mut cont = [[0.0; 4]; 5];
            for i in 0..4 {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h
                    * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i]);
            }
            let step = AcceptedStep {
                t_start: t,
                h,
                y_start: y,
                y_end: y_new,
                cont,
            };
            t += h;
            y = y_new;
            k1 = k7; // FSAL
            if !on_step(&step) {
                return Ok((t, y));
            }
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };
            h = (h * fac).min(settings.max_step);
        } else {
            // Rejected (including non-finite error estimates from stiff or
            // singular stages): shrink and retry.
            let fac = if err.is_finite() {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0)
            } else {
                0.1
            };
            h *= fac;
        }
    }
    Ok((t, y))
}
