use super::{ElectroError, Vec3};

/// Scenario constants in computational units (dnm, cfs, per unit electron
/// mass). Particle 1 is the electron; `mu = m1 / m2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub kappa: f64,
    pub mu: f64,
    pub c: f64,
    pub r0: f64,
    pub omega0: f64,
}

/// Hydrogen in dnm/cfs with the circular-orbit angular velocity.
pub fn default_params() -> PhysicalParams {
    let (kappa, mu, r0) = (-0.02528, 5.436e-4, 0.53);
    PhysicalParams {
        kappa,
        mu,
        c: 29.979_245_8,
        r0,
        omega0: PhysicalParams::circular_omega(kappa, mu, r0),
    }
}

impl PhysicalParams {
    /// Angular velocity of the circular two-body orbit with the electron at
    /// radius `r0` about the centre of mass. The separation is `(1 + mu) r0`.
    pub fn circular_omega(kappa: f64, mu: f64, r0: f64) -> f64 {
        (kappa.abs() / (r0.powi(3) * (1.0 + mu).powi(2))).sqrt()
    }

    /// Infinite-proton-mass value `sqrt(|kappa| / r0³)`.
    pub fn fixed_nucleus_omega(kappa: f64, r0: f64) -> f64 {
        (kappa.abs() / r0.powi(3)).sqrt()
    }

    /// Electron speed on the fixed-nucleus circular orbit, `sqrt(|kappa| / r0)`.
    pub fn v0(&self) -> f64 {
        (self.kappa.abs() / self.r0).sqrt()
    }

    /// Balance residual `omega0² r0³ (1 + mu)² / |kappa| - 1`.
    pub fn balance_residual(&self) -> f64 {
        self.omega0.powi(2) * self.r0.powi(3) * (1.0 + self.mu).powi(2) / self.kappa.abs() - 1.0
    }

    pub fn validate(&self) -> Result<(), ElectroError> {
        let all = [self.kappa, self.mu, self.c, self.r0, self.omega0];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(ElectroError::InvalidParams("non-finite value".into()));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(ElectroError::InvalidParams(format!("mu = {} outside (0, 1]", self.mu)));
        }
        if self.kappa == 0.0 {
            return Err(ElectroError::InvalidParams("kappa = 0".into()));
        }
        if self.c <= 0.0 || self.r0 <= 0.0 || self.omega0 <= 0.0 {
            return Err(ElectroError::InvalidParams("c, r0 and omega0 must be positive".into()));
        }
        if self.balance_residual().abs() > 1e-6 {
            return Err(ElectroError::InvalidParams(format!(
                "omega0 = {} does not balance kappa at r0 (relative residual {:e})",
                self.omega0,
                self.balance_residual()
            )));
        }
        if self.omega0 * self.r0 >= self.c {
            return Err(ElectroError::InvalidParams("prescribed orbit is superluminal".into()));
        }
        Ok(())
    }
}

/// Positions and velocities of both particles. The flat layout is
/// `r1, r2, v1, v2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemState {
    pub r1: Vec3,
    pub r2: Vec3,
    pub v1: Vec3,
    pub v2: Vec3,
}

impl SystemState {
    pub fn from_slice(y: &[f64]) -> Self {
        let v = |i: usize| Vec3::new(y[i], y[i + 1], y[i + 2]);
        Self { r1: v(0), r2: v(3), v1: v(6), v2: v(9) }
    }

    pub fn to_array(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (k, v) in [self.r1, self.r2, self.v1, self.v2].iter().enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(v.as_slice());
        }
        out
    }

    pub fn check(&self, t: f64, c: f64) -> Result<(), ElectroError> {
        let flat = self.to_array();
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(ElectroError::Dde(crate::dde::DdeError::NonFiniteState(t)));
        }
        for v in [self.v1, self.v2] {
            if v.norm() >= c {
                return Err(ElectroError::Superluminal { speed: v.norm(), c });
            }
        }
        Ok(())
    }
}
