//! Method-of-steps integration of retarded functional differential equations.
//!
//! A Dormand–Prince 5(4) pair advances the solution; every accepted step
//! stores its order-4 continuous extension so later stages can read the
//! solution (and its exact derivative) at retarded arguments. The prescribed
//! past function answers queries at or before `t0`.

mod engine;
mod error;
mod history;
mod ledger;
mod tableau;

pub use engine::{
    dopri_step, integrate, step_cap_for_delay, IntegrateOptions, RetardedSystem, StepResult,
    StepStats, Tolerance,
};
pub use error::DdeError;
pub use history::{AnalyticPast, PastFunction, Segment, Trajectory, INTERPOLANT_TERMS};
pub use ledger::{Discontinuity, DiscontinuityKind, DiscontinuityLedger};
pub use tableau::ORDER;

/// Convenience system with one constant delay:
/// `y'(t) = f(t, y(t), y(t - delay))`.
pub struct ConstantDelay<F> {
    dim: usize,
    delay: f64,
    rhs: F,
    delayed: Vec<f64>,
}

impl<F> ConstantDelay<F>
where
    F: FnMut(f64, &[f64], &[f64], &mut [f64]),
{
    pub fn new(dim: usize, delay: f64, rhs: F) -> Result<Self, DdeError> {
        step_cap_for_delay(delay)?;
        Ok(Self {
            dim,
            delay,
            rhs,
            delayed: vec![0.0; dim],
        })
    }
}

impl<F> RetardedSystem for ConstantDelay<F>
where
    F: FnMut(f64, &[f64], &[f64], &mut [f64]),
{
    type Error = DdeError;

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(
        &mut self,
        t: f64,
        y: &[f64],
        history: &Trajectory,
        dydt: &mut [f64],
    ) -> Result<(), DdeError> {
        let tr = t - self.delay;
        if tr > history.t_current() {
            return Err(DdeError::CausalityViolation {
                query: tr,
                t_current: history.t_current(),
            });
        }
        if tr < history.t_hist_start() {
            return Err(DdeError::HistoryTooShort {
                t: tr,
                t_hist_start: history.t_hist_start(),
            });
        }
        history.query_into(tr, 0, &mut self.delayed)?;
        (self.rhs)(t, y, &self.delayed, dydt);
        Ok(())
    }

    fn min_delay(&self) -> Option<f64> {
        Some(self.delay)
    }
}
