use std::fmt;
use std::sync::Arc;

use super::{DdeError, DiscontinuityLedger, StepStats};

/// Prescribed data for `t <= t0`. Implementations must supply the exact time
/// derivative as well, since neutral right-hand sides read it.
pub trait PastFunction: Send + Sync {
    fn dim(&self) -> usize;

    /// Earliest time at which the function is defined.
    fn t_start(&self) -> f64;

    fn eval(&self, t: f64, out: &mut [f64]);

    fn eval_derivative(&self, t: f64, out: &mut [f64]);
}

type PastFn = dyn Fn(f64, &mut [f64]) + Send + Sync;

/// Past function built from a pair of closures.
pub struct AnalyticPast {
    dim: usize,
    t_start: f64,
    value: Box<PastFn>,
    derivative: Box<PastFn>,
}

impl AnalyticPast {
    pub fn new<F, D>(dim: usize, t_start: f64, value: F, derivative: D) -> Self
    where
        F: Fn(f64, &mut [f64]) + Send + Sync + 'static,
        D: Fn(f64, &mut [f64]) + Send + Sync + 'static,
    {
        Self {
            dim,
            t_start,
            value: Box::new(value),
            derivative: Box::new(derivative),
        }
    }

    pub fn constant(values: Vec<f64>, t_start: f64) -> Self {
        let dim = values.len();
        Self::new(
            dim,
            t_start,
            move |_, out| out.copy_from_slice(&values),
            |_, out| out.fill(0.0),
        )
    }
}

impl PastFunction for AnalyticPast {
    fn dim(&self) -> usize {
        self.dim
    }

    fn t_start(&self) -> f64 {
        self.t_start
    }

    fn eval(&self, t: f64, out: &mut [f64]) {
        (self.value)(t, out)
    }

    fn eval_derivative(&self, t: f64, out: &mut [f64]) {
        (self.derivative)(t, out)
    }
}

/// Number of monomial coefficients stored per component and step.
pub const INTERPOLANT_TERMS: usize = 5;

/// One accepted step: `y(t_start + θ h) = Σ_j c_j θ^j`, `θ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Segment<'a> {
    pub t_start: f64,
    pub h: f64,
    dim: usize,
    coeffs: &'a [f64],
}

impl<'a> Segment<'a> {
    pub fn t_end(&self) -> f64 {
        self.t_start + self.h
    }

    /// Coefficients of component `i`, lowest power first.
    pub fn coefficients(&self, i: usize) -> &'a [f64] {
        &self.coeffs[i * INTERPOLANT_TERMS..(i + 1) * INTERPOLANT_TERMS]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn eval_range(&self, t: f64, order: u8, first: usize, out: &mut [f64]) {
        let theta = (t - self.t_start) / self.h;
        for (k, slot) in out.iter_mut().enumerate() {
            let c = self.coefficients(first + k);
            *slot = match order {
                0 => c[0] + theta * (c[1] + theta * (c[2] + theta * (c[3] + theta * c[4]))),
                _ => {
                    (c[1] + theta * (2.0 * c[2] + theta * (3.0 * c[3] + theta * 4.0 * c[4])))
                        / self.h
                }
            };
        }
    }
}

/// Dense solution history: the prescribed past followed by the accepted
/// integration steps. Immutable once `integrate` returns.
#[derive(Clone)]
pub struct Trajectory {
    dim: usize,
    past: Arc<dyn PastFunction>,
    t0: f64,
    t_current: f64,
    starts: Vec<f64>,
    widths: Vec<f64>,
    coeffs: Vec<f64>,
    ledger: DiscontinuityLedger,
    stats: StepStats,
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trajectory")
            .field("dim", &self.dim)
            .field("t_hist_start", &self.t_hist_start())
            .field("t0", &self.t0)
            .field("t_current", &self.t_current)
            .field("segments", &self.starts.len())
            .finish()
    }
}

impl Trajectory {
    pub(crate) fn new(past: Arc<dyn PastFunction>, t0: f64) -> Self {
        Self {
            dim: past.dim(),
            past,
            t0,
            t_current: t0,
            starts: Vec::new(),
            widths: Vec::new(),
            coeffs: Vec::new(),
            ledger: DiscontinuityLedger::new(),
            stats: StepStats::default(),
        }
    }

    pub(crate) fn push_segment(&mut self, t_start: f64, h: f64, coeffs: &[f64]) {
        debug_assert_eq!(coeffs.len(), self.dim * INTERPOLANT_TERMS);
        debug_assert_eq!(t_start, self.t_current);
        self.starts.push(t_start);
        self.widths.push(h);
        self.coeffs.extend_from_slice(coeffs);
        // land exactly on forced endpoints instead of accumulating round-off
        self.t_current = t_start + h;
    }

    pub(crate) fn set_end(&mut self, t: f64) {
        self.t_current = t;
    }

    pub(crate) fn set_ledger(&mut self, ledger: DiscontinuityLedger) {
        self.ledger = ledger;
    }

    pub(crate) fn set_stats(&mut self, stats: StepStats) {
        self.stats = stats;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_hist_start(&self) -> f64 {
        self.past.t_start()
    }

    /// End of the accepted history.
    pub fn t_current(&self) -> f64 {
        self.t_current
    }

    pub fn past(&self) -> &Arc<dyn PastFunction> {
        &self.past
    }

    pub fn discontinuities(&self) -> &DiscontinuityLedger {
        &self.ledger
    }

    pub fn segment_count(&self) -> usize {
        self.starts.len()
    }

    pub fn segment(&self, idx: usize) -> Segment<'_> {
        let width = self.dim * INTERPOLANT_TERMS;
        Segment {
            t_start: self.starts[idx],
            h: self.widths[idx],
            dim: self.dim,
            coeffs: &self.coeffs[idx * width..(idx + 1) * width],
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_>> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    /// Step endpoints including `t0`.
    pub fn mesh(&self) -> Vec<f64> {
        let mut mesh = Vec::with_capacity(self.starts.len() + 1);
        mesh.push(self.t0);
        mesh.extend(self.segments().map(|s| s.t_end()));
        if let Some(last) = mesh.last_mut() {
            *last = self.t_current;
        }
        mesh
    }

    pub fn query(&self, t: f64, derivative_order: u8) -> Result<Vec<f64>, DdeError> {
        let mut out = vec![0.0; self.dim];
        self.query_into(t, derivative_order, &mut out)?;
        Ok(out)
    }

    pub fn query_into(&self, t: f64, derivative_order: u8, out: &mut [f64]) -> Result<(), DdeError> {
        self.query_components(t, derivative_order, 0, out)
    }

    /// Evaluates components `first..first + out.len()`. Order 1 differentiates
    /// the interpolant exactly, or uses the past function's derivative for
    /// `t <= t0`.
    pub fn query_components(
        &self,
        t: f64,
        derivative_order: u8,
        first: usize,
        out: &mut [f64],
    ) -> Result<(), DdeError> {
        if derivative_order > 1 {
            return Err(DdeError::UnsupportedDerivative(derivative_order));
        }
        if first + out.len() > self.dim {
            return Err(DdeError::DimensionMismatch {
                expected: self.dim,
                actual: first + out.len(),
            });
        }
        let start = self.t_hist_start();
        if !(t >= start && t <= self.t_current) {
            return Err(DdeError::OutOfRange {
                t,
                start,
                end: self.t_current,
            });
        }
        if t <= self.t0 {
            let mut full = [0.0; 16];
            let mut heap;
            let buf: &mut [f64] = if self.dim <= full.len() {
                &mut full[..self.dim]
            } else {
                heap = vec![0.0; self.dim];
                &mut heap
            };
            if derivative_order == 0 {
                self.past.eval(t, buf);
            } else {
                self.past.eval_derivative(t, buf);
            }
            out.copy_from_slice(&buf[first..first + out.len()]);
            return Ok(());
        }
        let idx = self.locate(t);
        self.segment(idx).eval_range(t, derivative_order, first, out);
        Ok(())
    }

    // Segment i covers (starts[i], starts[i] + widths[i]].
    fn locate(&self, t: f64) -> usize {
        let idx = self.starts.partition_point(|&s| s < t);
        idx.saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_one() -> Trajectory {
        let past = Arc::new(AnalyticPast::constant(vec![1.0], -1.0));
        let mut traj = Trajectory::new(past, 0.0);
        traj.push_segment(0.0, 0.5, &[1.0, 0.0, 0.0, 0.0, 0.0]);
        traj.push_segment(0.5, 0.5, &[1.0, 0.0, 0.0, 0.0, 0.0]);
        traj
    }

    #[test]
    fn constant_trajectory_queries() {
        let traj = constant_one();
        for t in [-1.0, -0.3, 0.0, 0.2, 0.5, 0.99, 1.0] {
            assert_eq!(traj.query(t, 0).unwrap(), vec![1.0]);
            assert_eq!(traj.query(t, 1).unwrap(), vec![0.0]);
        }
    }

    #[test]
    fn out_of_range_both_sides() {
        let traj = constant_one();
        assert_eq!(traj.query(-1.5, 0).unwrap_err().name(), "OutOfRange");
        assert_eq!(traj.query(1.0001, 0).unwrap_err().name(), "OutOfRange");
        assert_eq!(traj.query(f64::NAN, 0).unwrap_err().name(), "OutOfRange");
    }

    #[test]
    fn derivative_order_two_rejected() {
        let traj = constant_one();
        assert_eq!(
            traj.query(0.1, 2).unwrap_err(),
            DdeError::UnsupportedDerivative(2)
        );
    }

    #[test]
    fn interpolant_derivative_is_exact() {
        let past = Arc::new(AnalyticPast::constant(vec![0.0], -1.0));
        let mut traj = Trajectory::new(past, 0.0);
        // y = θ² on a step of width 2, so y(t) = t²/4 and y'(t) = t/2
        traj.push_segment(0.0, 2.0, &[0.0, 0.0, 1.0, 0.0, 0.0]);
        let d = traj.query(1.0, 1).unwrap()[0];
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn locate_picks_left_segment_at_boundary() {
        let past = Arc::new(AnalyticPast::constant(vec![0.0], -1.0));
        let mut traj = Trajectory::new(past, 0.0);
        traj.push_segment(0.0, 1.0, &[0.0, 1.0, 0.0, 0.0, 0.0]);
        traj.push_segment(1.0, 1.0, &[5.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(traj.query(1.0, 0).unwrap()[0], 1.0);
        assert_eq!(traj.query(1.5, 0).unwrap()[0], 5.0);
    }
}
