use thiserror::Error;

/// Failures of the method-of-steps integrator and its history store.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DdeError {
    #[error("step size {h:e} fell below the minimum {h_min:e} at t = {t}")]
    StepSizeUnderflow { t: f64, h: f64, h_min: f64 },

    #[error("retarded argument {t} precedes the start of history {t_hist_start}")]
    HistoryTooShort { t: f64, t_hist_start: f64 },

    #[error("retarded argument {query} lies beyond the accepted history ending at {t_current}")]
    CausalityViolation { query: f64, t_current: f64 },

    #[error("time {t} outside the covered interval [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("delay {0} is not positive")]
    NonpositiveDelay(f64),

    #[error("discontinuity at {t} does not follow the last recorded time {last}")]
    NonMonotoneTime { t: f64, last: f64 },

    #[error("backward integration requested (t0 = {t0}, t_end = {t_end})")]
    BackwardIntegration { t0: f64, t_end: f64 },

    #[error("empty integration interval at t0 = {0}")]
    EmptyInterval(f64),

    #[error("tolerances must be positive and finite (rtol = {rtol}, atol = {atol})")]
    InvalidTolerance { rtol: f64, atol: f64 },

    #[error("state dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("derivative order {0} is not supported (0 or 1)")]
    UnsupportedDerivative(u8),

    #[error("non-finite state at t = {0}")]
    NonFiniteState(f64),
}

impl DdeError {
    /// Stable identifier used in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            DdeError::StepSizeUnderflow { .. } => "StepSizeUnderflow",
            DdeError::HistoryTooShort { .. } => "HistoryTooShort",
            DdeError::CausalityViolation { .. } => "CausalityViolation",
            DdeError::OutOfRange { .. } => "OutOfRange",
            DdeError::NonpositiveDelay(_) => "NonpositiveDelay",
            DdeError::NonMonotoneTime { .. } => "NonMonotoneTime",
            DdeError::BackwardIntegration { .. } => "BackwardIntegration",
            DdeError::EmptyInterval(_) => "EmptyInterval",
            DdeError::InvalidTolerance { .. } => "InvalidTolerance",
            DdeError::DimensionMismatch { .. } => "DimensionMismatch",
            DdeError::UnsupportedDerivative(_) => "UnsupportedDerivative",
            DdeError::NonFiniteState(_) => "NonFiniteState",
        }
    }
}
