use crate::dde::Trajectory;
use crate::electrodynamics::{
    coulomb_accelerations, full_rhs, retarded_torque, Particle, ParticleView, PhysicalParams,
    SystemState, Vec3,
};

use super::DiagnosticsError;

/// Which force law to evaluate along a stored trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceModel {
    Retarded,
    Coulomb,
}

/// Forces and torques about the origin at one instant.
#[derive(Debug, Clone, Copy)]
pub struct ForceSample {
    pub t: f64,
    pub state: SystemState,
    pub a1: Vec3,
    pub a2: Vec3,
    /// `r1 × a1`.
    pub torque_electron: Vec3,
    /// `r2 × a2`, per unit proton mass.
    pub torque_proton: Vec3,
}

impl ForceSample {
    /// Net torque on the pair, per unit electron mass.
    pub fn net_torque(&self, params: &PhysicalParams) -> Vec3 {
        self.torque_electron + self.torque_proton / params.mu
    }
}

/// Evaluates the force law on the stored state at `t`. `tau_guesses` is
/// updated with the delays found, for warm starts along a series.
pub fn evaluate_force(
    traj: &Trajectory,
    params: &PhysicalParams,
    model: ForceModel,
    t: f64,
    tau_guesses: &mut (f64, f64),
) -> Result<ForceSample, DiagnosticsError> {
    let state = SystemState::from_slice(&traj.query(t, 0)?);
    match model {
        ForceModel::Retarded => {
            let e = ParticleView::new(traj, Particle::Electron);
            let p = ParticleView::new(traj, Particle::Proton);
            let f = full_rhs(t, &state, &e, &p, params, *tau_guesses)?;
            *tau_guesses = (f.at_electron.tau, f.at_proton.tau);
            let c = params.c;
            Ok(ForceSample {
                t,
                state,
                a1: f.electron_acceleration(),
                a2: f.proton_acceleration(),
                torque_electron: retarded_torque(state.r1, state.v1, &f.at_electron, params.kappa, c)?,
                torque_proton: retarded_torque(
                    state.r2,
                    state.v2,
                    &f.at_proton,
                    params.mu * params.kappa,
                    c,
                )?,
            })
        }
        ForceModel::Coulomb => {
            let (a1, a2) = coulomb_accelerations(t, &state, params)?;
            Ok(ForceSample {
                t,
                state,
                a1,
                a2,
                torque_electron: state.r1.cross(&a1),
                torque_proton: state.r2.cross(&a2),
            })
        }
    }
}

/// Component of a force along the direction of motion transverse to `r`,
/// given its torque `r × a`. Zero for any force along `r`.
pub fn tangential_component(r: Vec3, v: Vec3, torque: Vec3) -> f64 {
    let l = r.cross(&v);
    let ln = l.norm();
    if ln == 0.0 {
        return 0.0;
    }
    torque.dot(&l) / (r.norm() * ln)
}

/// `t_from + k dt` for `k = 0, 1, ...` while not past `t_to`.
pub fn sample_times(t_from: f64, t_to: f64, dt: f64) -> Result<Vec<f64>, DiagnosticsError> {
    if !(dt > 0.0 && dt.is_finite() && t_from.is_finite() && t_to.is_finite() && t_to >= t_from) {
        return Err(DiagnosticsError::InvalidInput(format!(
            "bad sampling window [{t_from}, {t_to}] with step {dt}"
        )));
    }
    let n = ((t_to - t_from) / dt * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=n).map(|k| t_from + k as f64 * dt).filter(|&t| t <= t_to).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueSample {
    pub t: f64,
    pub tangential_force: f64,
    pub torque_z: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TorqueSeries {
    pub samples: Vec<TorqueSample>,
}

impl TorqueSeries {
    /// `(max - min) / |mean|` of the tangential force over samples before
    /// `t0`.
    pub fn past_relative_spread(&self, t0: f64) -> Option<f64> {
        let past: Vec<f64> = self.samples.iter().filter(|s| s.t < t0).map(|s| s.tangential_force).collect();
        if past.is_empty() {
            return None;
        }
        let mean = past.iter().sum::<f64>() / past.len() as f64;
        let (lo, hi) = past.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        Some((hi - lo) / mean.abs())
    }

    /// Sign changes of the tangential force among samples after `t0`.
    pub fn sign_changes_after(&self, t0: f64) -> usize {
        let after: Vec<f64> = self
            .samples
            .iter()
            .filter(|s| s.t > t0 && s.tangential_force != 0.0)
            .map(|s| s.tangential_force)
            .collect();
        after.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
    }

    /// Largest `|torque_z|` after `t0`.
    pub fn peak_after(&self, t0: f64) -> f64 {
        self.samples.iter().filter(|s| s.t > t0).fold(0.0, |m, s| m.max(s.torque_z.abs()))
    }

    /// Trapezoidal mean of `torque_z` over the first full oscillation after
    /// `t0`, delimited by two successive upward zero crossings. `None` if
    /// the series does not contain one.
    pub fn first_period_mean(&self, t0: f64) -> Option<f64> {
        let s: Vec<&TorqueSample> = self.samples.iter().filter(|s| s.t > t0).collect();
        let ups: Vec<usize> = (1..s.len())
            .filter(|&i| s[i - 1].torque_z < 0.0 && s[i].torque_z >= 0.0)
            .collect();
        let (&a, &b) = (ups.first()?, ups.get(1)?);
        let integral: f64 = (a..b)
            .map(|i| 0.5 * (s[i].torque_z + s[i + 1].torque_z) * (s[i + 1].t - s[i].t))
            .sum();
        Some(integral / (s[b].t - s[a].t))
    }
}

/// Tangential force on the electron and its torque about the origin,
/// sampled every `sample_dt` over `[t_from, t_to]`.
pub fn delay_torque_series(
    traj: &Trajectory,
    params: &PhysicalParams,
    model: ForceModel,
    t_from: f64,
    t_to: f64,
    sample_dt: f64,
) -> Result<TorqueSeries, DiagnosticsError> {
    let mut guesses = initial_guesses(params);
    let samples = sample_times(t_from, t_to, sample_dt)?
        .into_iter()
        .map(|t| {
            let f = evaluate_force(traj, params, model, t, &mut guesses)?;
            Ok(TorqueSample {
                t,
                tangential_force: tangential_component(f.state.r1, f.state.v1, f.torque_electron),
                torque_z: f.torque_electron.z,
            })
        })
        .collect::<Result<_, DiagnosticsError>>()?;
    Ok(TorqueSeries { samples })
}

fn initial_guesses(params: &PhysicalParams) -> (f64, f64) {
    let tau = params.r0 * (1.0 + params.mu) / params.c;
    (tau, tau)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceSample {
    pub t: f64,
    pub dr: Vec3,
    pub norm: f64,
}

/// Electron position of `a` minus that of `b`, sampled every `sample_dt`
/// from the start of the shared history to the shared end time.
pub fn orbit_difference(
    a: &Trajectory,
    b: &Trajectory,
    sample_dt: f64,
) -> Result<Vec<DifferenceSample>, DiagnosticsError> {
    let (sa, ea, sb, eb) = (a.t_hist_start(), a.t_current(), b.t_hist_start(), b.t_current());
    if sa != sb || ea != eb || a.t0() != b.t0() || a.dim() != b.dim() {
        return Err(DiagnosticsError::MismatchedWindows { a_start: sa, a_end: ea, b_start: sb, b_end: eb });
    }
    let (mut pa, mut pb) = ([0.0; 3], [0.0; 3]);
    sample_times(sa, ea, sample_dt)?
        .into_iter()
        .map(|t| {
            a.query_components(t, 0, 0, &mut pa)?;
            b.query_components(t, 0, 0, &mut pb)?;
            let dr = Vec3::from(pa) - Vec3::from(pb);
            Ok(DifferenceSample { t, dr, norm: dr.norm() })
        })
        .collect()
}

/// Mass-weighted z angular momentum about the origin.
pub fn angular_momentum(params: &PhysicalParams, s: &SystemState) -> f64 {
    s.r1.cross(&s.v1).z + s.r2.cross(&s.v2).z / params.mu
}

/// Kinetic plus Coulomb energy per unit electron mass.
pub fn energy(params: &PhysicalParams, s: &SystemState) -> f64 {
    0.5 * s.v1.norm_squared() + s.v2.norm_squared() / (2.0 * params.mu) + params.kappa / (s.r1 - s.r2).norm()
}

/// `dL_z/dt` from the derivative of the stored trajectory.
pub fn angular_momentum_rate(traj: &Trajectory, params: &PhysicalParams, t: f64) -> Result<f64, DiagnosticsError> {
    let y = SystemState::from_slice(&traj.query(t, 0)?);
    let d = SystemState::from_slice(&traj.query(t, 1)?);
    let e = d.r1.cross(&y.v1) + y.r1.cross(&d.v1);
    let p = d.r2.cross(&y.v2) + y.r2.cross(&d.v2);
    Ok(e.z + p.z / params.mu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCheck {
    /// Largest `|dL_z/dt - net torque_z|`.
    pub max_residual: f64,
    /// Largest `|net torque_z|` over the same samples.
    pub peak_torque: f64,
    pub samples: usize,
}

impl RateCheck {
    pub fn relative(&self) -> f64 {
        self.max_residual / self.peak_torque
    }
}

/// Compares the rate of change of the stored angular momentum with the net
/// torque of the force law. Samples at or before `t0` are skipped: there the
/// motion is prescribed and need not follow the forces.
pub fn angular_momentum_rate_check(
    traj: &Trajectory,
    params: &PhysicalParams,
    model: ForceModel,
    t_from: f64,
    t_to: f64,
    sample_dt: f64,
) -> Result<RateCheck, DiagnosticsError> {
    let mut guesses = initial_guesses(params);
    let mut check = RateCheck { max_residual: 0.0, peak_torque: 0.0, samples: 0 };
    for t in sample_times(t_from, t_to, sample_dt)? {
        if t <= traj.t0() {
            continue;
        }
        let f = evaluate_force(traj, params, model, t, &mut guesses)?;
        let torque = f.net_torque(params).z;
        let rate = angular_momentum_rate(traj, params, t)?;
        check.max_residual = check.max_residual.max((rate - torque).abs());
        check.peak_torque = check.peak_torque.max(torque.abs());
        check.samples += 1;
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_multiplicative() {
        let g = sample_times(-1.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], -1.0);
        assert!((g[20] - 1.0).abs() < 1e-15);
        assert!(sample_times(0.0, 1.0, 0.0).is_err());
        assert!(sample_times(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn central_force_has_no_tangential_part() {
        let r = Vec3::new(0.3, -0.2, 0.1);
        let v = Vec3::new(0.05, 0.2, -0.1);
        // r x (k r) vanishes up to the rounding of k r
        for k in [-3.0, 0.5, 1e-9] {
            assert!(tangential_component(r, v, r.cross(&(k * r))).abs() <= 1e-15 * f64::abs(k) * r.norm());
        }
        // a force along the motion is fully tangential for circular motion
        let r = Vec3::new(1.0, 0.0, 0.0);
        let v = Vec3::new(0.0, 2.0, 0.0);
        let a = Vec3::new(0.0, 0.7, 0.0);
        assert!((tangential_component(r, v, r.cross(&a)) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn series_statistics() {
        let samples = (0..400)
            .map(|i| {
                let t = -1.0 + i as f64 * 0.05;
                let v = if t < 0.0 { 2.0 } else { (t * 3.0).sin() + 0.1 };
                TorqueSample { t, tangential_force: v, torque_z: v }
            })
            .collect();
        let s = TorqueSeries { samples };
        assert_eq!(s.past_relative_spread(0.0), Some(0.0));
        assert!(s.sign_changes_after(0.0) >= 4);
        let mean = s.first_period_mean(0.0).unwrap();
        assert!((mean - 0.1).abs() < 5e-3);
        assert!((s.peak_after(0.0) - 1.1).abs() < 1e-2);
    }
}
