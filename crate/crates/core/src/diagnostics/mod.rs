//! Post-processing of two-body runs: delay torque, orbit differences,
//! angular-momentum bookkeeping and the torque-balance estimate.
//!
//! Torques are taken about the origin, the fixed centre of mass of the
//! prescribed past. All quantities are per unit electron mass, so the
//! proton contributes with weight `1 / mu`.

mod balance;
mod series;

pub use balance::{delay_torque_estimate, radiation_torque_estimate, torque_balance, BalanceReport};
pub use series::{
    angular_momentum, angular_momentum_rate, angular_momentum_rate_check, delay_torque_series, energy, evaluate_force, ForceSample,
    orbit_difference, sample_times, tangential_component, DifferenceSample, ForceModel, RateCheck,
    TorqueSample, TorqueSeries,
};

use thiserror::Error;

use crate::electrodynamics::ElectroError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("runs cover different windows: [{a_start}, {a_end}] vs [{b_start}, {b_end}]")]
    MismatchedWindows { a_start: f64, a_end: f64, b_start: f64, b_end: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Electro(#[from] ElectroError),
}

impl DiagnosticsError {
    pub fn name(&self) -> &'static str {
        match self {
            DiagnosticsError::MismatchedWindows { .. } => "MismatchedWindows",
            DiagnosticsError::InvalidInput(_) => "InvalidInput",
            DiagnosticsError::Electro(e) => e.name(),
        }
    }
}

impl From<crate::dde::DdeError> for DiagnosticsError {
    fn from(e: crate::dde::DdeError) -> Self {
        DiagnosticsError::Electro(e.into())
    }
}
