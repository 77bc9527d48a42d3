//! Time integration of the reduced two-component mode system
//!
//! `i a' = R(b, b, a)`, `i b' = R(a, a, b)`
//!
//! with conserved-quantity monitoring. The flow conserves every weighted sum
//! `Σ_p h(p) (|a_p|² + |b_p|²)` (hence all per-mode sums and Sobolev sums),
//! the masses `I = Σ|a_p|²`, `J = Σ|b_p|²`, and the Hamiltonian
//! `H = IJ + |S|² − Σ |a_p|²|b_p|²` with `S = Σ a_p conj(b_p)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::grid::TorusGrid;
use crate::ode::{self, DenseOutput, IntegratorConfig, Method};
use crate::resonant::r_closed;
use crate::sequence::TorusSequence;
use crate::{Error, Result};

/// State of the coupled mode system.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub a: TorusSequence,
    pub b: TorusSequence,
    pub t: f64,
}

impl CoupledState {
    pub fn new(a: TorusSequence, b: TorusSequence, t: f64) -> Result<Self> {
        a.check_grid(&b)?;
        Ok(Self { a, b, t })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            a: TorusSequence::zeros(grid),
            b: TorusSequence::zeros(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.a.grid()
    }

    /// Interleaved real packing [Re a, Im a, ..., Re b, Im b, ...] used by
    /// the integrator.
    pub fn pack(&self) -> Vec<f64> {
        let n = self.a.coeffs().len();
        let mut y = Vec::with_capacity(4 * n);
        for c in self.a.coeffs().iter().chain(self.b.coeffs()) {
            y.push(c.re);
            y.push(c.im);
        }
        y
    }

    pub fn unpack(grid: TorusGrid, y: &[f64], t: f64) -> Self {
        let n = grid.n_y();
        debug_assert_eq!(y.len(), 4 * n);
        let to_seq = |chunk: &[f64]| {
            let coeffs = chunk
                .chunks_exact(2)
                .map(|re_im| Complex64::new(re_im[0], re_im[1]))
                .collect();
            TorusSequence::from_coeffs(grid, coeffs).expect("packed length matches grid")
        };
        Self {
            a: to_seq(&y[..2 * n]),
            b: to_seq(&y[2 * n..]),
            t,
        }
    }
}

/// Right-hand side `(a', b') = (−i R(b,b,a), −i R(a,a,b))`.
pub fn rhs(state: &CoupledState) -> Result<(TorusSequence, TorusSequence)> {
    let minus_i = Complex64::new(0.0, -1.0);
    let da = r_closed(&state.b, &state.b, &state.a)?.scale(minus_i);
    let db = r_closed(&state.a, &state.a, &state.b)?.scale(minus_i);
    Ok((da, db))
}

fn rhs_packed(grid: TorusGrid, y: &[f64], dy: &mut [f64]) {
    let state = CoupledState::unpack(grid, y, 0.0);
    let (da, db) = rhs(&state).expect("grids match by construction");
    let n = grid.n_y();
    for (i, c) in da.coeffs().iter().enumerate() {
        dy[2 * i] = c.re;
        dy[2 * i + 1] = c.im;
    }
    for (i, c) in db.coeffs().iter().enumerate() {
        dy[2 * n + 2 * i] = c.re;
        dy[2 * n + 2 * i + 1] = c.im;
    }
}

/// Snapshot of the monitored quantities at one time.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantSnapshot {
    pub t: f64,
    /// `I = Σ |a_p|²`.
    pub mass_a: f64,
    /// `J = Σ |b_p|²`.
    pub mass_b: f64,
    /// `S = Σ a_p conj(b_p)` (reported, not conserved).
    pub overlap: Complex64,
    /// `H = IJ + |S|² − Σ |a_p|² |b_p|²`.
    pub hamiltonian: f64,
    /// Per-mode sums `|a_p|² + |b_p|²` in mode order.
    pub per_mode: Vec<f64>,
    /// Weighted sums `Σ (1+p²)^s (|a_p|²+|b_p|²)` for the configured s-list.
    pub h_sums: Vec<f64>,
}

/// Compute all monitored quantities from their defining sums.
pub fn invariants(state: &CoupledState, s_list: &[f64]) -> InvariantSnapshot {
    let a = state.a.coeffs();
    let b = state.b.coeffs();
    let mass_a: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let mass_b: f64 = b.iter().map(|c| c.norm_sqr()).sum();
    let overlap: Complex64 = a.iter().zip(b).map(|(u, v)| u * v.conj()).sum();
    let cross: f64 = a
        .iter()
        .zip(b)
        .map(|(u, v)| u.norm_sqr() * v.norm_sqr())
        .sum();
    let hamiltonian = mass_a * mass_b + overlap.norm_sqr() - cross;
    let per_mode: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(u, v)| u.norm_sqr() + v.norm_sqr())
        .collect();
    let grid = state.grid();
    let h_sums = s_list
        .iter()
        .map(|&s| {
            per_mode
                .iter()
                .enumerate()
                .map(|(i, &m)| (1.0 + (grid.mode(i) as f64).powi(2)).powf(s) * m)
                .sum()
        })
        .collect();
    let momentum_sum = per_mode
        .iter()
        .enumerate()
        .map(|(i, &m)| (grid.mode(i) as f64).powi(2) * m)
        .sum();
    InvariantSnapshot {
        t: state.t,
        mass_a,
        mass_b,
        overlap,
        hamiltonian,
        momentum_sum,
        per_mode,
        h_sums,
    }
}

/// Drift summary of a trajectory's monitored quantities.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub s_list: Vec<f64>,
    pub samples: Vec<InvariantSnapshot>,
    /// Max over samples of |I(t) − I(0)| / |I(0)|.
    pub mass_a_drift: f64,
    pub mass_b_drift: f64,
    pub hamiltonian_drift: f64,
    /// Max over samples and modes of |m_p(t) − m_p(0)| relative to the
    /// initial total Σ_p m_p(0).
    pub per_mode_drift: f64,
    /// Per s in `s_list`: max relative drift of the weighted sum.
    pub h_sum_drifts: Vec<f64>,
}

fn rel_drift(current: f64, initial: f64) -> f64 {
    (current - initial).abs() / initial.abs().max(1e-300)
}

impl InvariantReport {
    fn from_samples(s_list: Vec<f64>, samples: Vec<InvariantSnapshot>) -> Self {
        let first = &samples[0];
        let total0: f64 = first.per_mode.iter().sum::<f64>().max(1e-300);
        let mut mass_a_drift = 0.0_f64;
        let mut mass_b_drift = 0.0_f64;
        let mut hamiltonian_drift = 0.0_f64;
        let mut per_mode_drift = 0.0_f64;
        let mut h_sum_drifts = vec![0.0_f64; s_list.len()];
        for snap in &samples[1..] {
            mass_a_drift = mass_a_drift.max(rel_drift(snap.mass_a, first.mass_a));
            mass_b_drift = mass_b_drift.max(rel_drift(snap.mass_b, first.mass_b));
            hamiltonian_drift =
                hamiltonian_drift.max(rel_drift(snap.hamiltonian, first.hamiltonian));
            for (m, m0) in snap.per_mode.iter().zip(&first.per_mode) {
                per_mode_drift = per_mode_drift.max((m - m0).abs() / total0);
            }
            for (d, (h, h0)) in h_sum_drifts
                .iter_mut()
                .zip(snap.h_sums.iter().zip(&first.h_sums))
            {
                *d = (*d).max(rel_drift(*h, *h0));
            }
        }
        Self {
            s_list,
            samples,
            mass_a_drift,
            mass_b_drift,
            hamiltonian_drift,
            per_mode_drift,
            h_sum_drifts,
        }
    }
}

/// Sampling and monitoring options for [`evolve`].
#[derive(Debug, Clone)]
pub struct MonitorConfig {
    /// Number of uniformly spaced invariant samples (min 2).
    pub samples: usize,
    /// Exponents of the monitored weighted sums.
    pub s_list: Vec<f64>,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self {
            samples: 33,
            s_list: vec![-1.0, 0.0, 1.0, 2.0, 12.0],
        }
    }
}

/// Trajectory with its dense output retained.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TorusGrid,
    t0: f64,
    t1: f64,
    dense: DenseOutput,
    end: CoupledState,
}

impl Trajectory {
    pub fn end(&self) -> &CoupledState {
        &self.end
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    /// Interpolated state at `t` inside the integrated span.
    pub fn at(&self, t: f64) -> Result<CoupledState> {
        let mut buf = vec![0.0; 4 * self.grid.n_y()];
        self.dense
            .eval(t, &mut buf)
            .ok_or(Error::DenseRange { t })?;
        Ok(CoupledState::unpack(self.grid, &buf, t))
    }
}

fn ode_error(failure: ode::OdeFailure) -> Error {
    Error::Integration {
        t: failure.t,
        kind: failure.kind,
    }
}

/// Dense trajectories require the adaptive 5(4) method.
fn require_dopri5(cfg: &IntegratorConfig) -> Result<IntegratorConfig> {
    if let Method::Rk4 { .. } = cfg.method {
        return Err(Error::InvalidParameter(
            "dense trajectories require the adaptive 5(4) method".into(),
        ));
    }
    let mut cfg = *cfg;
    cfg.dense = true;
    Ok(cfg)
}

/// Evolve to `t_end`, sampling invariants along the way.
///
/// The adaptive method samples at exactly uniform times through its dense
/// output; the fixed-step method samples at the step boundaries nearest the
/// requested cadence. A step-size underflow or non-finite state aborts with
/// [`Error::Integration`]; [`evolve_verbose`] additionally hands back the
/// last accepted state.
pub fn evolve(
    state: &CoupledState,
    t_end: f64,
    cfg: &IntegratorConfig,
    monitor: &MonitorConfig,
) -> Result<(CoupledState, InvariantReport)> {
    if let Method::Rk4 { dt } = cfg.method {
        return evolve_rk4(state, t_end, dt, monitor);
    }
    evolve_verbose(state, t_end, cfg, monitor)
        .map(|(traj, report)| (traj.end().clone(), report))
        .map_err(|failure| failure.error)
}

fn evolve_rk4(
    state: &CoupledState,
    t_end: f64,
    dt: f64,
    monitor: &MonitorConfig,
) -> Result<(CoupledState, InvariantReport)> {
    if t_end < state.t {
        return Err(Error::InvalidParameter(format!(
            "t_end = {t_end} precedes state time {}",
            state.t
        )));
    }
    let grid = state.grid();
    let span = t_end - state.t;
    let cadence = span / (monitor.samples.max(2) - 1) as f64;
    let mut snaps = Vec::new();
    let mut next_sample = state.t;
    let sol = ode::rk4(
        |_, y, dy| rhs_packed(grid, y, dy),
        state.t,
        &state.pack(),
        t_end,
        dt,
        |t, y| {
            if t + 1e-12 * span.max(1.0) >= next_sample {
                let s = CoupledState::unpack(grid, y, t);
                snaps.push(invariants(&s, &monitor.s_list));
                next_sample += cadence.max(dt);
            }
        },
    )
    .map_err(ode_error)?;
    let end = CoupledState::unpack(grid, &sol.y, sol.t);
    if snaps.last().map(|s| s.t) != Some(sol.t) {
        snaps.push(invariants(&end, &monitor.s_list));
    }
    let report = InvariantReport::from_samples(monitor.s_list.clone(), snaps);
    Ok((end, report))
}

/// Integration failure carrying the last good state.
#[derive(Debug)]
pub struct EvolveFailure {
    pub error: Error,
    pub last_good: CoupledState,
}

/// Like [`evolve`] but retains the dense trajectory, and reports the last
/// accepted state on failure.
pub fn evolve_verbose(
    state: &CoupledState,
    t_end: f64,
    cfg: &IntegratorConfig,
    monitor: &MonitorConfig,
) -> std::result::Result<(Trajectory, InvariantReport), Box<EvolveFailure>> {
    let grid = state.grid();
    if t_end < state.t {
        return Err(Box::new(EvolveFailure {
            error: Error::InvalidParameter(format!(
                "t_end = {t_end} precedes state time {}",
                state.t
            )),
            last_good: state.clone(),
        }));
    }
    let cfg = require_dopri5(cfg).map_err(|error| {
        Box::new(EvolveFailure {
            error,
            last_good: state.clone(),
        })
    })?;
    let y0 = state.pack();
    let sol = ode::dopri5(
        |_, y, dy| rhs_packed(grid, y, dy),
        state.t,
        &y0,
        t_end,
        &cfg,
        |_, _| {},
    )
    .map_err(|failure| {
        let last_good = CoupledState::unpack(grid, &failure.y, failure.t);
        Box::new(EvolveFailure {
            error: ode_error(failure),
            last_good,
        })
    })?;

    let dense = sol.dense.expect("dense output was requested");
    let end = CoupledState::unpack(grid, &sol.y, sol.t);
    let traj = Trajectory {
        grid,
        t0: state.t,
        t1: sol.t,
        dense,
        end,
    };

    let samples = monitor.samples.max(2);
    let mut snaps = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = state.t + (t_end - state.t) * k as f64 / (samples - 1) as f64;
        let s = traj.at(t).map_err(|error| {
            Box::new(EvolveFailure {
                error,
                last_good: traj.end().clone(),
            })
        })?;
        snaps.push(invariants(&s, &monitor.s_list));
    }
    let report = InvariantReport::from_samples(monitor.s_list.clone(), snaps);
    Ok((traj, report))
}
