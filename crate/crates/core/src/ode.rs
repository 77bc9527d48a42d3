//! Explicit Runge–Kutta integrators for real first-order systems.
//!
//! The workhorse is the Dormand–Prince 5(4) pair with the classical quartic
//! dense interpolant, which drives event location and trajectory
//! interpolation elsewhere in the crate. A fixed-step classical RK4 is kept
//! as the plain alternative.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Why an integration gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureKind {
    StepSizeUnderflow,
    NonFinite,
    MaxStepsExceeded,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::StepSizeUnderflow => write!(f, "step size underflow"),
            FailureKind::NonFinite => write!(f, "state left the finite range"),
            FailureKind::MaxStepsExceeded => write!(f, "step budget exhausted"),
        }
    }
}

/// Failed integration, carrying the last accepted state.
#[derive(Debug, Clone)]
pub struct OdeFailure {
    pub kind: FailureKind,
    pub t: f64,
    pub y: Vec<f64>,
}

/// Integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Method {
    /// Adaptive Dormand–Prince 5(4).
    Dopri5,
    /// Classical fixed-step RK4 with the given step.
    Rk4 { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size (0 or +inf disables the cap).
    pub max_step: f64,
    /// Retain dense-output segments for later interpolation.
    pub dense: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Dopri5,
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            dense: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validated(self) -> Result<Self, String> {
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(format!(
                "tolerances must be positive (rtol = {}, atol = {})",
                self.rtol, self.atol
            ));
        }
        if let Method::Rk4 { dt } = self.method {
            if !(dt > 0.0) {
                return Err(format!("rk4 step must be positive, got {dt}"));
            }
        }
        Ok(self)
    }
}

/// One accepted step of the 5(4) pair with its interpolation coefficients.
#[derive(Debug, Clone)]
struct DenseSegment {
    t0: f64,
    h: f64,
    cont: [Vec<f64>; 5],
}

impl DenseSegment {
    /// Evaluate at θ ∈ [0, 1] into `out`.
    fn eval(&self, theta: f64, out: &mut [f64]) {
        let t1 = 1.0 - theta;
        for i in 0..out.len() {
            out[i] = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + t1 * (self.cont[2][i]
                            + theta * (self.cont[3][i] + t1 * self.cont[4][i])));
        }
    }
}

/// Piecewise-quartic interpolant over the accepted steps.
#[derive(Debug, Clone, Default)]
pub struct DenseOutput {
    segments: Vec<DenseSegment>,
}

impl DenseOutput {
    pub fn t_start(&self) -> Option<f64> {
        self.segments.first().map(|s| s.t0)
    }

    pub fn t_end(&self) -> Option<f64> {
        self.segments.last().map(|s| s.t0 + s.h)
    }

    pub fn covers(&self, t: f64) -> bool {
        match (self.t_start(), self.t_end()) {
            (Some(a), Some(b)) => {
                let tol = 1e-12 * (1.0 + b.abs());
                t >= a - tol && t <= b + tol
            }
            _ => false,
        }
    }

    /// Interpolated state at `t`; `None` outside the covered range.
    pub fn eval(&self, t: f64, out: &mut [f64]) -> Option<()> {
        if !self.covers(t) {
            return None;
        }
        // binary search for the segment containing t
        let idx = match self
            .segments
            .binary_search_by(|s| s.t0.partial_cmp(&t).expect("non-finite segment time"))
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let seg = &self.segments[idx];
        let theta = ((t - seg.t0) / seg.h).clamp(0.0, 1.0);
        seg.eval(theta, out);
        Some(())
    }
}

/// Result of a successful integration.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t: f64,
    pub y: Vec<f64>,
    pub dense: Option<DenseOutput>,
    pub n_accepted: usize,
    pub n_rejected: usize,
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
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
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense-output coefficients
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 50_000_000;

fn rms_scaled(err: &[f64], y0: &[f64], y1: &[f64], atol: f64, rtol: f64) -> f64 {
    let n = err.len().max(1);
    let mut acc = 0.0;
    for i in 0..err.len() {
        let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
        let e = err[i] / sc;
        acc += e * e;
    }
    (acc / n as f64).sqrt()
}

/// Initial step-size guess from the local derivative scale.
fn initial_step<F: FnMut(f64, &[f64], &mut [f64])>(
    f: &mut F,
    t0: f64,
    y0: &[f64],
    f0: &[f64],
    span: f64,
    atol: f64,
    rtol: f64,
) -> f64 {
    let n = y0.len().max(1) as f64;
    let d0 = (y0
        .iter()
        .map(|&v| (v / (atol + rtol * v.abs())).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let d1 = (f0
        .iter()
        .zip(y0)
        .map(|(&fv, &yv)| (fv / (atol + rtol * yv.abs())).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span.abs());
    // one explicit Euler probe to estimate the second derivative
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(&y, &d)| y + h0 * d).collect();
    let mut f1 = vec![0.0; y0.len()];
    f(t0 + h0, &y1, &mut f1);
    let d2 = (f1
        .iter()
        .zip(f0)
        .zip(y0)
        .map(|((&a, &b), &yv)| (((a - b) / h0) / (atol + rtol * yv.abs())).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let max_d = d1.max(d2);
    let h1 = if max_d <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / max_d).powf(0.2)
    };
    h1.min(100.0 * h0).min(span.abs())
}

/// Integrate `y' = f(t, y)` from `t0` to `t1 >= t0` with Dormand–Prince 5(4).
///
/// `observer` is called once at the initial state and after every accepted
/// step with `(t, y)`.
pub fn dopri5<F, O>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    cfg: &IntegratorConfig,
    mut observer: O,
) -> Result<OdeSolution, OdeFailure>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut dense = cfg.dense.then(DenseOutput::default);
    observer(t, &y);

    if t1 <= t0 {
        return Ok(OdeSolution {
            t,
            y,
            dense,
            n_accepted: 0,
            n_rejected: 0,
        });
    }

    let mut k1 = vec![0.0; n];
    f(t, &y, &mut k1);

    // trivial equilibrium: nothing will ever move
    if y.iter().all(|&v| v == 0.0) && k1.iter().all(|&v| v == 0.0) {
        if let Some(d) = dense.as_mut() {
            d.segments.push(DenseSegment {
                t0,
                h: t1 - t0,
                cont: std::array::from_fn(|i| if i == 0 { y.clone() } else { vec![0.0; n] }),
            });
        }
        observer(t1, &y);
        return Ok(OdeSolution {
            t: t1,
            y,
            dense,
            n_accepted: 1,
            n_rejected: 0,
        });
    }

    let max_step = if cfg.max_step > 0.0 {
        cfg.max_step
    } else {
        f64::INFINITY
    };
    let mut h = initial_step(&mut f, t, &y, &k1, t1 - t0, cfg.atol, cfg.rtol)
        .min(max_step)
        .max(f64::MIN_POSITIVE);

    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err = vec![0.0; n];

    let mut n_accepted = 0usize;
    let mut n_rejected = 0usize;
    let mut facmax = 5.0;

    for _ in 0..MAX_STEPS {
        if t >= t1 {
            return Ok(OdeSolution {
                t,
                y,
                dense,
                n_accepted,
                n_rejected,
            });
        }
        h = h.min(max_step);
        let mut last = false;
        if t + h >= t1 {
            h = t1 - t;
            last = true;
        }
        if h < f64::EPSILON * 16.0 * t.abs().max(1.0) {
            return Err(OdeFailure {
                kind: FailureKind::StepSizeUnderflow,
                t,
                y,
            });
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + h, &ynew, &mut k7);
        for i in 0..n {
            err[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }

        if !ynew.iter().all(|v| v.is_finite()) {
            return Err(OdeFailure {
                kind: FailureKind::NonFinite,
                t,
                y,
            });
        }

        let err_norm = rms_scaled(&err, &y, &ynew, cfg.atol, cfg.rtol);
        if err_norm <= 1.0 {
            if let Some(d) = dense.as_mut() {
                let mut cont: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
                for i in 0..n {
                    let ydiff = ynew[i] - y[i];
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
                d.segments.push(DenseSegment { t0: t, h, cont });
            }
            t = if last { t1 } else { t + h };
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7); // FSAL
            n_accepted += 1;
            observer(t, &y);
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, facmax);
            h *= fac;
            facmax = 5.0;
        } else {
            n_rejected += 1;
            h *= (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
            facmax = 1.0;
        }
    }

    Err(OdeFailure {
        kind: FailureKind::MaxStepsExceeded,
        t,
        y,
    })
}

/// Fixed-step classical RK4 from `t0` to `t1`.
pub fn rk4<F, O>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    dt: f64,
    mut observer: O,
) -> Result<OdeSolution, OdeFailure>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    observer(t, &y);
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(OdeSolution {
            t,
            y,
            dense: None,
            n_accepted: 0,
            n_rejected: 0,
        });
    }
    let steps = (span / dt).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    for step in 0..steps {
        f(t, &y, &mut k1);
        for i in 0..n {
            ytmp[i] = y[i] + 0.5 * h * k1[i];
        }
        f(t + 0.5 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + 0.5 * h * k2[i];
        }
        f(t + 0.5 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * k3[i];
        }
        f(t + h, &ytmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(OdeFailure {
                kind: FailureKind::NonFinite,
                t,
                y,
            });
        }
        t = t0 + (step + 1) as f64 * h;
        observer(t, &y);
    }
    Ok(OdeSolution {
        t: t1,
        y,
        dense: None,
        n_accepted: steps,
        n_rejected: 0,
    })
}

/// Dispatch on the configured method.
pub fn integrate<F, O>(
    f: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    cfg: &IntegratorConfig,
    observer: O,
) -> Result<OdeSolution, OdeFailure>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    match cfg.method {
        Method::Dopri5 => dopri5(f, t0, y0, t1, cfg, observer),
        Method::Rk4 { dt } => rk4(f, t0, y0, t1, dt, observer),
    }
}
