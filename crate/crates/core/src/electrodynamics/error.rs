use thiserror::Error;

use crate::dde::DdeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElectroError {
    #[error("retarded-time iteration did not converge within {iterations} iterations at t = {t}")]
    NoConvergence { t: f64, iterations: usize },

    #[error("particles collided at t = {t} (separation {distance:e})")]
    Collision { t: f64, distance: f64 },

    #[error("retarded denominator R·u = {0:e} is not positive")]
    DegenerateDenominator(f64),

    #[error("particle speed {speed} reached the speed of light {c}")]
    Superluminal { speed: f64, c: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Dde(#[from] DdeError),
}

impl ElectroError {
    pub fn name(&self) -> &'static str {
        match self {
            ElectroError::NoConvergence { .. } => "NoConvergence",
            ElectroError::Collision { .. } => "Collision",
            ElectroError::DegenerateDenominator(_) => "DegenerateDenominator",
            ElectroError::Superluminal { .. } => "Superluminal",
            ElectroError::InvalidParams(_) => "InvalidParams",
            ElectroError::Dde(e) => e.name(),
        }
    }
}
