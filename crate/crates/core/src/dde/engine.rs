use std::sync::Arc;

use super::history::INTERPOLANT_TERMS;
use super::tableau::*;
use super::{DdeError, Discontinuity, DiscontinuityKind, DiscontinuityLedger, PastFunction, Trajectory};

/// Right-hand side of a retarded system `y'(t) = f(t, y(t), history)`.
///
/// `eval` may read `history` at any time up to `history.t_current()`; the
/// integrator only calls it with stage times inside the step that starts at
/// `history.t_current()`.
pub trait RetardedSystem {
    type Error: From<DdeError>;

    fn dim(&self) -> usize;

    fn eval(
        &mut self,
        t: f64,
        y: &[f64],
        history: &Trajectory,
        dydt: &mut [f64],
    ) -> Result<(), Self::Error>;

    /// Smallest delay used by the most recent `eval`, or `None` for systems
    /// without a delay.
    fn min_delay(&self) -> Option<f64>;

    /// Neutral systems read retarded derivatives, so their discontinuities
    /// propagate without moving to higher derivatives.
    fn is_neutral(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub fn new(rtol: f64, atol: f64) -> Result<Self, DdeError> {
        if rtol > 0.0 && atol > 0.0 && rtol.is_finite() && atol.is_finite() {
            Ok(Self { rtol, atol })
        } else {
            Err(DdeError::InvalidTolerance { rtol, atol })
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub h_min: f64,
    pub h_max: f64,
    pub h_init: Option<f64>,
    /// Disables error control and uses this step wherever breakpoints allow.
    pub fixed_step: Option<f64>,
    pub max_steps: usize,
    /// Known discontinuities; entries at or after `t0` become step endpoints.
    pub discontinuities: DiscontinuityLedger,
    /// How many delay images of each known discontinuity to chase.
    pub propagated_images: u32,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            h_min: 1e-12,
            h_max: f64::INFINITY,
            h_init: None,
            fixed_step: None,
            max_steps: 50_000_000,
            discontinuities: DiscontinuityLedger::new(),
            propagated_images: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Outcome of a single Dormand–Prince step.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub t_new: f64,
    pub state_new: Vec<f64>,
    /// Absolute local error estimate per component.
    pub error_estimate: Vec<f64>,
    /// Monomial coefficients in θ, `INTERPOLANT_TERMS` per component.
    pub interpolant: Vec<f64>,
    /// `f(t_new, state_new)`, reused as the first stage of the next step.
    pub derivative_new: Vec<f64>,
}

/// Largest step allowed while the shortest delay is `current_min_delay`.
pub fn step_cap_for_delay(current_min_delay: f64) -> Result<f64, DdeError> {
    if current_min_delay > 0.0 && current_min_delay.is_finite() {
        Ok(0.9 * current_min_delay)
    } else {
        Err(DdeError::NonpositiveDelay(current_min_delay))
    }
}

struct Stepper {
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
}

impl Stepper {
    fn new(dim: usize) -> Self {
        Self {
            k: std::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
        }
    }

    /// Expects `k[0] = f(t, y)`. Leaves the new state in `y_new`, the error
    /// estimate in `err` and `f(t + h, y_new)` in `k[6]`.
    #[allow(clippy::too_many_arguments)]
    #[allow(clippy::needless_range_loop)]
    fn step<S: RetardedSystem>(
        &mut self,
        system: &mut S,
        history: &Trajectory,
        t: f64,
        t_new: f64,
        y: &[f64],
        y_new: &mut [f64],
        err: &mut [f64],
    ) -> Result<(), S::Error> {
        let h = t_new - t;
        let n = y.len();
        let stages: [(f64, &[f64]); 5] = [
            (C2, &[A21]),
            (C3, &[A31, A32]),
            (C4, &[A41, A42, A43]),
            (C5, &[A51, A52, A53, A54]),
            (1.0, &[A61, A62, A63, A64, A65]),
        ];
        for (s, (c, row)) in stages.iter().enumerate() {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, a) in row.iter().enumerate() {
                    acc += a * self.k[j][i];
                }
                self.stage[i] = y[i] + h * acc;
            }
            let (_, rest) = self.k.split_at_mut(s + 1);
            system.eval(t + c * h, &self.stage, history, &mut rest[0])?;
        }
        for i in 0..n {
            y_new[i] = y[i]
                + h * (A71 * self.k[0][i]
                    + A73 * self.k[2][i]
                    + A74 * self.k[3][i]
                    + A75 * self.k[4][i]
                    + A76 * self.k[5][i]);
        }
        system.eval(t_new, y_new, history, &mut self.k[6])?;
        for i in 0..n {
            err[i] = (h
                * (E1 * self.k[0][i]
                    + E3 * self.k[2][i]
                    + E4 * self.k[3][i]
                    + E5 * self.k[4][i]
                    + E6 * self.k[5][i]
                    + E7 * self.k[6][i]))
                .abs();
        }
        Ok(())
    }

    fn interpolant(&self, h: f64, y: &[f64], y_new: &[f64], out: &mut [f64]) {
        let k = &self.k;
        for i in 0..y.len() {
            let r1 = y[i];
            let r2 = y_new[i] - y[i];
            let r3 = h * k[0][i] - r2;
            let r4 = r2 - h * k[6][i] - r3;
            let r5 = h
                * (D1 * k[0][i]
                    + D3 * k[2][i]
                    + D4 * k[3][i]
                    + D5 * k[4][i]
                    + D6 * k[5][i]
                    + D7 * k[6][i]);
            let c = &mut out[i * INTERPOLANT_TERMS..(i + 1) * INTERPOLANT_TERMS];
            c[0] = r1;
            c[1] = r2 + r3;
            c[2] = r4 + r5 - r3;
            c[3] = -(r4 + 2.0 * r5);
            c[4] = r5;
        }
    }
}

/// Takes one step of size `h` from `(t, y)` with `k1 = f(t, y)`, reading
/// retarded values from `history`.
pub fn dopri_step<S: RetardedSystem>(
    system: &mut S,
    history: &Trajectory,
    t: f64,
    y: &[f64],
    k1: &[f64],
    h: f64,
) -> Result<StepResult, S::Error> {
    let n = y.len();
    let mut stepper = Stepper::new(n);
    stepper.k[0].copy_from_slice(k1);
    let t_new = t + h;
    let mut state_new = vec![0.0; n];
    let mut error_estimate = vec![0.0; n];
    stepper.step(system, history, t, t_new, y, &mut state_new, &mut error_estimate)?;
    let mut interpolant = vec![0.0; n * INTERPOLANT_TERMS];
    stepper.interpolant(h, y, &state_new, &mut interpolant);
    Ok(StepResult {
        t_new,
        state_new,
        error_estimate,
        interpolant,
        derivative_new: stepper.k[6].clone(),
    })
}

fn error_norm(err: &[f64], y: &[f64], y_new: &[f64], tol: Tolerance) -> f64 {
    let sum: f64 = err
        .iter()
        .zip(y.iter().zip(y_new))
        .map(|(e, (a, b))| {
            let sc = tol.atol + tol.rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / err.len() as f64).sqrt()
}

/// Integrates a retarded system forward from `t0` to `t_end` by the method
/// of steps with a Dormand–Prince 5(4) pair and its continuous extension.
///
/// Retarded arguments are answered from the trajectory under construction.
/// Steps are capped at `0.9 ×` the system's current minimum delay so that no
/// stage reads the step being computed. Entries of the discontinuity ledger
/// and up to `propagated_images` of their delay images become step endpoints.
pub fn integrate<S: RetardedSystem>(
    system: &mut S,
    past: Arc<dyn PastFunction>,
    t0: f64,
    t_end: f64,
    tol: Tolerance,
    options: &IntegrateOptions,
) -> Result<Trajectory, S::Error> {
    if !(t0.is_finite() && t_end.is_finite()) || t_end == t0 {
        return Err(DdeError::EmptyInterval(t0).into());
    }
    if t_end < t0 {
        return Err(DdeError::BackwardIntegration { t0, t_end }.into());
    }
    let tol = Tolerance::new(tol.rtol, tol.atol)?;
    let n = system.dim();
    if past.dim() != n {
        return Err(DdeError::DimensionMismatch {
            expected: n,
            actual: past.dim(),
        }
        .into());
    }
    if past.t_start() > t0 {
        return Err(DdeError::HistoryTooShort {
            t: t0,
            t_hist_start: past.t_start(),
        }
        .into());
    }

    let mut traj = Trajectory::new(past.clone(), t0);
    let mut ledger = options.discontinuities.clone();
    // (time, generation) of ledger entries whose images are still to be placed
    let mut sources: Vec<(f64, u32)> = ledger
        .points()
        .iter()
        .filter(|d| d.t >= t0 && d.t <= t_end)
        .map(|d| (d.t, 0))
        .collect();
    let neutral = system.is_neutral();

    let mut y = vec![0.0; n];
    past.eval(t0, &mut y);
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut coeffs = vec![0.0; n * INTERPOLANT_TERMS];
    let mut stepper = Stepper::new(n);
    let mut stats = StepStats::default();

    let mut t = t0;
    system.eval(t, &y, &traj, &mut stepper.k[0])?;
    stats.evaluations += 1;
    let mut delay = system.min_delay();
    schedule_images(&mut ledger, &mut sources, t, delay, t_end, neutral, options);

    let mut h = match (options.fixed_step, options.h_init) {
        (Some(h), _) => h,
        (None, Some(h)) => h,
        (None, None) => initial_step(&y, &stepper.k[0], tol, t_end - t0),
    };
    let mut last_rejected = false;

    while t < t_end {
        if stats.accepted + stats.rejected >= options.max_steps {
            return Err(DdeError::StepSizeUnderflow { t, h, h_min: options.h_min }.into());
        }
        let mut cap = options.h_max.min(t_end - t);
        if let Some(d) = delay {
            cap = cap.min(step_cap_for_delay(d)?);
        }
        h = h.min(cap);

        let next_bp = ledger
            .points()
            .iter()
            .map(|d| d.t)
            .find(|&bt| bt > t + options.h_min)
            .unwrap_or(t_end)
            .min(t_end);
        let (t_new, h_step) = if t + h >= next_bp || next_bp - (t + h) < 0.01 * h {
            (next_bp, next_bp - t)
        } else {
            (t + h, h)
        };
        if h_step < options.h_min {
            return Err(DdeError::StepSizeUnderflow { t, h: h_step, h_min: options.h_min }.into());
        }

        stepper.step(system, &traj, t, t_new, &y, &mut y_new, &mut err)?;
        stats.evaluations += 6;

        let finite = y_new.iter().all(|v| v.is_finite());
        let en = if finite { error_norm(&err, &y, &y_new, tol) } else { f64::INFINITY };

        if options.fixed_step.is_some() {
            if !finite {
                return Err(DdeError::NonFiniteState(t_new).into());
            }
        } else if en.is_nan() || en > 1.0 {
            stats.rejected += 1;
            let factor = if en.is_finite() { (0.9 * en.powf(-0.2)).max(0.2) } else { 0.25 };
            h = h_step * factor;
            last_rejected = true;
            if h < options.h_min {
                return Err(DdeError::StepSizeUnderflow { t, h, h_min: options.h_min }.into());
            }
            continue;
        }

        stepper.interpolant(h_step, &y, &y_new, &mut coeffs);
        traj.push_segment(t, h_step, &coeffs);
        stats.accepted += 1;
        t = t_new;
        traj.set_end(t);
        std::mem::swap(&mut y, &mut y_new);
        let (first, rest) = stepper.k.split_at_mut(6);
        first[0].copy_from_slice(&rest[0]);
        delay = system.min_delay();

        if sources.iter().any(|&(st, _)| st == t) {
            schedule_images(&mut ledger, &mut sources, t, delay, t_end, neutral, options);
        }

        h = match options.fixed_step {
            Some(fixed) => fixed,
            None => {
                let grow = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).min(5.0) };
                let grow = if last_rejected { grow.min(1.0) } else { grow };
                h_step * grow.max(0.2)
            }
        };
        last_rejected = false;
    }

    traj.set_end(t_end);
    traj.set_ledger(ledger);
    traj.set_stats(stats);
    Ok(traj)
}

fn schedule_images(
    ledger: &mut DiscontinuityLedger,
    sources: &mut Vec<(f64, u32)>,
    t: f64,
    delay: Option<f64>,
    t_end: f64,
    neutral: bool,
    options: &IntegrateOptions,
) {
    let Some(delay) = delay else { return };
    let Some(pos) = sources.iter().position(|&(st, _)| st == t) else { return };
    let (_, generation) = sources.swap_remove(pos);
    if generation >= options.propagated_images || delay.is_nan() || delay <= 0.0 {
        return;
    }
    let Some(origin) = ledger.find(t).copied() else { return };
    let image = t + delay;
    if image > t_end {
        return;
    }
    let order = if neutral { origin.order } else { origin.order + 1 };
    ledger.insert_sorted(Discontinuity {
        t: image,
        order,
        kind: DiscontinuityKind::Soft,
    });
    sources.push((image, generation + 1));
}

fn initial_step(y: &[f64], f: &[f64], tol: Tolerance, span: f64) -> f64 {
    let n = y.len() as f64;
    let (mut d0, mut d1) = (0.0, 0.0);
    for (yi, fi) in y.iter().zip(f) {
        let sc = tol.atol + tol.rtol * yi.abs();
        d0 += (yi / sc).powi(2);
        d1 += (fi / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    // a first guess sized for a 5th order method at this tolerance
    let h_tol = tol.rtol.powf(0.2) * 0.1 * span;
    h.min(h_tol).min(span)
}
