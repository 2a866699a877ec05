use super::{
    lw_field, solve_retarded_time, ElectroError, PhysicalParams, RetardedSample, SystemState, Vec3,
    WorldLine, COLLISION_DISTANCE,
};

/// Right-hand side together with the retarded data it was built from.
#[derive(Debug, Clone, Copy)]
pub struct ForceEvaluation {
    pub derivative: [f64; 12],
    /// Proton data seen from the electron (delay `tau_bar`).
    pub at_electron: RetardedSample,
    /// Electron data seen from the proton (delay `tau`).
    pub at_proton: RetardedSample,
}

impl ForceEvaluation {
    pub fn electron_acceleration(&self) -> Vec3 {
        Vec3::new(self.derivative[6], self.derivative[7], self.derivative[8])
    }

    pub fn proton_acceleration(&self) -> Vec3 {
        Vec3::new(self.derivative[9], self.derivative[10], self.derivative[11])
    }
}

fn lorentz(field: Vec3, unit: Vec3, v: Vec3, c: f64) -> Vec3 {
    field + (v / c).cross(&unit.cross(&field))
}

/// Retarded two-body equations of motion (radiation reaction omitted).
///
/// `tau_guesses` warm-start the two retarded-time solves as
/// `(electron observer, proton observer)`.
pub fn full_rhs(
    t: f64,
    state: &SystemState,
    electron: &dyn WorldLine,
    proton: &dyn WorldLine,
    params: &PhysicalParams,
    tau_guesses: (f64, f64),
) -> Result<ForceEvaluation, ElectroError> {
    let c = params.c;
    let at_electron = solve_retarded_time(proton, state.r1, t, tau_guesses.0, c)?;
    let at_proton = solve_retarded_time(electron, state.r2, t, tau_guesses.1, c)?;
    let e2 = lw_field(&at_electron, c)?;
    let e1 = lw_field(&at_proton, c)?;
    let a1 = params.kappa * lorentz(e2, at_electron.unit(), state.v1, c);
    let a2 = params.mu * params.kappa * lorentz(e1, at_proton.unit(), state.v2, c);
    Ok(ForceEvaluation {
        derivative: pack(state, a1, a2),
        at_electron,
        at_proton,
    })
}

/// Torque `r × a` about the origin on an observer at `r_obs` moving with
/// `v_obs`, where `a = coupling [E + (v/c) × (R̂ × E)]` is the retarded
/// acceleration built from `sample`.
///
/// Equal to `r_obs.cross(&a)` algebraically. The large radial part of `a`
/// is removed analytically (`r × R = -r × w`), so the result keeps its
/// relative accuracy when the torque is many orders below `|r||a|`.
pub fn retarded_torque(
    r_obs: Vec3,
    v_obs: Vec3,
    sample: &RetardedSample,
    coupling: f64,
    c: f64,
) -> Result<Vec3, ElectroError> {
    let s = sample;
    let ru = s.r.dot(&s.u);
    if ru.is_nan() || ru <= 0.0 {
        return Err(ElectroError::DegenerateDenominator(ru));
    }
    let k = s.r_norm / ru.powi(3);
    let field = lw_field(s, c)?;
    let r_cross_rhat = -r_obs.cross(&s.source) / s.r_norm;
    let r_cross_u = c * r_cross_rhat - r_obs.cross(&s.v_ret);
    let x = s.u.cross(&s.a_ret);
    let r_cross_rrx = s.r * r_obs.dot(&x) - x * r_obs.dot(&s.r);
    let r_cross_e = k * ((c * c - s.v_ret.norm_squared()) * r_cross_u + r_cross_rrx);
    let rhat = s.unit();
    let magnetic = (v_obs.dot(&field) * r_cross_rhat - v_obs.dot(&rhat) * r_cross_e) / c;
    Ok(coupling * (r_cross_e + magnetic))
}

/// Instantaneous inverse-square baseline.
pub fn coulomb_rhs(t: f64, state: &SystemState, params: &PhysicalParams) -> Result<[f64; 12], ElectroError> {
    let (a1, a2) = coulomb_accelerations(t, state, params)?;
    Ok(pack(state, a1, a2))
}

pub fn coulomb_accelerations(
    t: f64,
    state: &SystemState,
    params: &PhysicalParams,
) -> Result<(Vec3, Vec3), ElectroError> {
    let r = state.r1 - state.r2;
    let d = r.norm();
    if d < COLLISION_DISTANCE {
        return Err(ElectroError::Collision { t, distance: d });
    }
    let f = r * (params.kappa / d.powi(3));
    Ok((f, -params.mu * f))
}

fn pack(state: &SystemState, a1: Vec3, a2: Vec3) -> [f64; 12] {
    SystemState { r1: state.v1, r2: state.v2, v1: a1, v2: a2 }.to_array()
}
