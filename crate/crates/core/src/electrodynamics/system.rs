use std::sync::Arc;

use crate::dde::{
    integrate, AnalyticPast, DiscontinuityKind, DiscontinuityLedger, IntegrateOptions,
    PastFunction, RetardedSystem, Tolerance, Trajectory,
};

use super::{
    coulomb_rhs, full_rhs, ElectroError, Particle, ParticleView, PhysicalParams, SystemState,
};

/// Rigid rotation about the origin at `omega0`, defined on `[t_start, 0]`
/// (and analytically beyond). The electron starts at `(r0, 0, 0)`; the
/// proton sits at `-mu r1` so the centre of mass stays at the origin.
pub fn rigid_rotation_past(params: &PhysicalParams, t_start: f64) -> AnalyticPast {
    let (r0, w, mu) = (params.r0, params.omega0, params.mu);
    let value = move |t: f64, out: &mut [f64]| {
        let (s, c) = phase(w, t);
        let r1 = [r0 * c, r0 * s, 0.0];
        let v1 = [-w * r0 * s, w * r0 * c, 0.0];
        for i in 0..3 {
            out[i] = r1[i];
            out[3 + i] = -mu * r1[i];
            out[6 + i] = v1[i];
            out[9 + i] = -mu * v1[i];
        }
    };
    let derivative = move |t: f64, out: &mut [f64]| {
        let (s, c) = phase(w, t);
        let v1 = [-w * r0 * s, w * r0 * c, 0.0];
        let a1 = [-w * w * r0 * c, -w * w * r0 * s, 0.0];
        for i in 0..3 {
            out[i] = v1[i];
            out[3 + i] = -mu * v1[i];
            out[6 + i] = a1[i];
            out[9 + i] = -mu * a1[i];
        }
    };
    AnalyticPast::new(12, t_start, value, derivative)
}

/// `sin(w t)`, `cos(w t)` with the rounding error of the product `w t`
/// folded back in to first order.
fn phase(w: f64, t: f64) -> (f64, f64) {
    let p = w * t;
    let e = w.mul_add(t, -p);
    let (s, c) = p.sin_cos();
    (s + e * c, c - e * s)
}

/// Retarded two-body system integrated on a single 12-component trajectory.
/// It is neutral because the field reads the retarded acceleration.
#[derive(Debug, Clone)]
pub struct HydrogenSystem {
    params: PhysicalParams,
    tau_electron: f64,
    tau_proton: f64,
    max_null_cone_residual: f64,
}

impl HydrogenSystem {
    pub fn new(params: PhysicalParams) -> Self {
        let tau = params.r0 * (1.0 + params.mu) / params.c;
        Self {
            params,
            tau_electron: tau,
            tau_proton: tau,
            max_null_cone_residual: 0.0,
        }
    }

    /// Latest `(tau_bar, tau)`: delays seen by the electron and the proton.
    pub fn delays(&self) -> (f64, f64) {
        (self.tau_electron, self.tau_proton)
    }

    pub fn max_null_cone_residual(&self) -> f64 {
        self.max_null_cone_residual
    }
}

impl RetardedSystem for HydrogenSystem {
    type Error = ElectroError;

    fn dim(&self) -> usize {
        12
    }

    fn eval(&mut self, t: f64, y: &[f64], history: &Trajectory, dydt: &mut [f64]) -> Result<(), ElectroError> {
        let state = SystemState::from_slice(y);
        state.check(t, self.params.c)?;
        let electron = ParticleView::new(history, Particle::Electron);
        let proton = ParticleView::new(history, Particle::Proton);
        let f = full_rhs(
            t,
            &state,
            &electron,
            &proton,
            &self.params,
            (self.tau_electron, self.tau_proton),
        )?;
        self.tau_electron = f.at_electron.tau;
        self.tau_proton = f.at_proton.tau;
        let c = self.params.c;
        self.max_null_cone_residual = self
            .max_null_cone_residual
            .max(f.at_electron.null_cone_residual(c))
            .max(f.at_proton.null_cone_residual(c));
        dydt.copy_from_slice(&f.derivative);
        Ok(())
    }

    fn min_delay(&self) -> Option<f64> {
        Some(self.tau_electron.min(self.tau_proton))
    }

    fn is_neutral(&self) -> bool {
        true
    }
}

/// Instantaneous-force baseline as a (delay-free) retarded system.
#[derive(Debug, Clone)]
pub struct CoulombSystem {
    pub params: PhysicalParams,
}

impl RetardedSystem for CoulombSystem {
    type Error = ElectroError;

    fn dim(&self) -> usize {
        12
    }

    fn eval(&mut self, t: f64, y: &[f64], _history: &Trajectory, dydt: &mut [f64]) -> Result<(), ElectroError> {
        dydt.copy_from_slice(&coulomb_rhs(t, &SystemState::from_slice(y), &self.params)?);
        Ok(())
    }

    fn min_delay(&self) -> Option<f64> {
        None
    }
}

/// Options for the hydrogen scenario: the acceleration jump at `t = 0` is
/// recorded so that its delay images become step endpoints. Its order counts
/// derivatives of the positions, so an acceleration jump is order 2.
pub fn hydrogen_options() -> IntegrateOptions {
    IntegrateOptions {
        discontinuities: DiscontinuityLedger::new()
            .record(0.0, 2, DiscontinuityKind::Soft)
            .expect("single entry"),
        ..IntegrateOptions::default()
    }
}

/// Integrates the retarded system from the rigid-rotation past on
/// `[-t_past, 0]` to `t_end`. Also returns the largest null-cone residual.
pub fn simulate_hydrogen(
    params: &PhysicalParams,
    t_past: f64,
    t_end: f64,
    tol: Tolerance,
) -> Result<(Trajectory, f64), ElectroError> {
    params.validate()?;
    let past: Arc<dyn PastFunction> = Arc::new(rigid_rotation_past(params, -t_past));
    let mut sys = HydrogenSystem::new(*params);
    let traj = integrate(&mut sys, past, 0.0, t_end, tol, &hydrogen_options())?;
    Ok((traj, sys.max_null_cone_residual()))
}

/// Integrates the Coulomb baseline from the same initial data.
pub fn simulate_coulomb(
    params: &PhysicalParams,
    t_past: f64,
    t_end: f64,
    tol: Tolerance,
) -> Result<Trajectory, ElectroError> {
    params.validate()?;
    let past: Arc<dyn PastFunction> = Arc::new(rigid_rotation_past(params, -t_past));
    let mut sys = CoulombSystem { params: *params };
    integrate(&mut sys, past, 0.0, t_end, tol, &IntegrateOptions::default())
}
