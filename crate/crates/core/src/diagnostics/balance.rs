use crate::electrodynamics::PhysicalParams;

use super::DiagnosticsError;

/// Circular orbit at which the delay torque and the radiation-reaction
/// torque cancel, under the retarded inverse-square estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub epsilon: f64,
    pub r_e: f64,
    pub omega_balance: f64,
    pub omega_classical: f64,
    pub r_simultaneous: f64,
}

/// `T_delay ≈ |kappa|/c · epsilon/(1+epsilon)² · omega`.
pub fn delay_torque_estimate(epsilon: f64, omega: f64, params: &PhysicalParams) -> f64 {
    params.kappa.abs() / params.c * epsilon / (1.0 + epsilon).powi(2) * omega
}

/// `T_rad = -(2/3) |kappa|/c³ · omega³ r_e²`.
pub fn radiation_torque_estimate(omega: f64, r_e: f64, params: &PhysicalParams) -> f64 {
    -2.0 / 3.0 * params.kappa.abs() / params.c.powi(3) * omega.powi(3) * r_e * r_e
}

pub fn torque_balance(
    epsilon: f64,
    r_e: f64,
    params: &PhysicalParams,
) -> Result<BalanceReport, DiagnosticsError> {
    if !(epsilon > 0.0 && epsilon.is_finite() && r_e > 0.0 && r_e.is_finite()) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "epsilon = {epsilon} and r_e = {r_e} must be positive"
        )));
    }
    let k = params.kappa.abs();
    let c = params.c;
    Ok(BalanceReport {
        epsilon,
        r_e,
        omega_balance: c / r_e * (1.5 * epsilon).sqrt() / (1.0 + epsilon),
        omega_classical: (k / r_e.powi(3)).sqrt(),
        r_simultaneous: k * (1.0 + epsilon).powi(2) / (1.5 * epsilon * c * c),
    })
}
