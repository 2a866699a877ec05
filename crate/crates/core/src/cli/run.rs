use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

use crate::dde::{Tolerance, Trajectory};
use crate::diagnostics::{
    delay_torque_series, orbit_difference, sample_times, torque_balance, ForceModel,
};
use crate::electrodynamics::{simulate_coulomb, simulate_hydrogen};
use crate::spectrum::{chain_roots, principal_root, synthesize_solution, verify_fixed_step};

use super::{ConfigError, Scenario, ScenarioConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{message}")]
    Numerical { name: &'static str, message: String },

    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn name(&self) -> &'static str {
        match self {
            RunError::Config(e) => e.name(),
            RunError::Numerical { name, .. } => name,
            RunError::Io { .. } => "Io",
        }
    }

    /// 2 for configuration and output-location problems, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 2,
            RunError::Numerical { .. } => 3,
        }
    }
}

macro_rules! numerical {
    ($($ty:ty),*) => {$(
        impl From<$ty> for RunError {
            fn from(e: $ty) -> Self {
                RunError::Numerical { name: e.name(), message: e.to_string() }
            }
        }
    )*};
}

numerical!(
    crate::dde::DdeError,
    crate::electrodynamics::ElectroError,
    crate::diagnostics::DiagnosticsError,
    crate::spectrum::SpectrumError
);

/// Files written and one-line findings for the terminal.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

const STATE_HEADER: &str = "t,x1,y1,z1,x2,y2,z2,vx1,vy1,vz1,vx2,vy2,vz2";
const MECHANICS_UNITS: &str = "# units: t in cfs, positions in dnm, velocities in dnm/cfs";

/// 17 significant digits, enough to round-trip any double.
fn num(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("writing to a String");
}

fn row(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, *v);
    }
    out.push('\n');
}

fn write(cfg: &ScenarioConfig, summary: &mut RunSummary, name: &str, body: &str) -> Result<(), RunError> {
    let path = cfg.out.join(name);
    fs::write(&path, body).map_err(|source| RunError::Io { path: path.clone(), source })?;
    summary.files.push(path);
    Ok(())
}

fn tolerance(cfg: &ScenarioConfig) -> Result<Tolerance, RunError> {
    Ok(Tolerance::new(cfg.rtol, cfg.atol)?)
}

fn trajectory_csv(cfg: &ScenarioConfig, traj: &Trajectory, model: &str) -> Result<String, RunError> {
    let mut s = format!("{MECHANICS_UNITS}; model {model}\n{STATE_HEADER}\n");
    let mut y = vec![0.0; 13];
    for t in sample_times(-cfg.t_past, cfg.t_end, cfg.sample_dt)? {
        y[0] = t;
        traj.query_into(t, 0, &mut y[1..])?;
        row(&mut s, &y);
    }
    Ok(s)
}

fn fde(cfg: &ScenarioConfig) -> Result<Trajectory, RunError> {
    Ok(simulate_hydrogen(&cfg.params, cfg.t_past, cfg.t_end, tolerance(cfg)?)?.0)
}

fn ode(cfg: &ScenarioConfig) -> Result<Trajectory, RunError> {
    Ok(simulate_coulomb(&cfg.params, cfg.t_past, cfg.t_end, tolerance(cfg)?)?)
}

/// Runs one scenario and writes its CSV files under `cfg.out`.
pub fn run(cfg: &ScenarioConfig) -> Result<RunSummary, RunError> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out).map_err(|source| RunError::Io { path: cfg.out.clone(), source })?;
    let mut summary = RunSummary::default();
    match cfg.scenario {
        Scenario::HydrogenFde => {
            let traj = fde(cfg)?;
            write(cfg, &mut summary, "trajectory_fde.csv", &trajectory_csv(cfg, &traj, "retarded")?)?;
            summary.notes.push(format!("accepted steps: {}", traj.stats().accepted));
        }
        Scenario::HydrogenCoulomb => {
            let traj = ode(cfg)?;
            write(cfg, &mut summary, "trajectory_coulomb.csv", &trajectory_csv(cfg, &traj, "coulomb")?)?;
            summary.notes.push(format!("accepted steps: {}", traj.stats().accepted));
        }
        Scenario::Compare => compare(cfg, &mut summary)?,
        Scenario::Torque => torque(cfg, &mut summary)?,
        Scenario::Balance => balance(cfg, &mut summary)?,
        Scenario::Spectrum => spectrum(cfg, &mut summary)?,
        Scenario::Convergence => convergence(cfg, &mut summary)?,
    }
    Ok(summary)
}

fn compare(cfg: &ScenarioConfig, summary: &mut RunSummary) -> Result<(), RunError> {
    // the two integrations share only the configuration
    let (a, b) = std::thread::scope(|s| {
        let h = s.spawn(|| fde(cfg));
        let b = ode(cfg);
        (h.join().expect("integration thread panicked"), b)
    });
    let (a, b) = (a?, b?);
    write(cfg, summary, "trajectory_fde.csv", &trajectory_csv(cfg, &a, "retarded")?)?;
    write(cfg, summary, "trajectory_coulomb.csv", &trajectory_csv(cfg, &b, "coulomb")?)?;
    let diff = orbit_difference(&a, &b, cfg.sample_dt)?;
    let mut s = String::from(
        "# units: t in cfs, differences in dnm; electron position, retarded minus coulomb\nt,dx,dy,dz,dnorm\n",
    );
    let mut peak: f64 = 0.0;
    for d in &diff {
        row(&mut s, &[d.t, d.dr.x, d.dr.y, d.dr.z, d.norm]);
        peak = peak.max(d.norm);
    }
    write(cfg, summary, "difference.csv", &s)?;
    summary.notes.push(format!("max |dr_electron| = {peak:.6e} dnm"));
    Ok(())
}

fn torque(cfg: &ScenarioConfig, summary: &mut RunSummary) -> Result<(), RunError> {
    let traj = fde(cfg)?;
    // keep the first retarded lookups well inside the prescribed past
    let margin = 10.0 * cfg.params.r0 * (1.0 + cfg.params.mu) / cfg.params.c;
    let earliest = -cfg.t_past + margin.min(0.5 * cfg.t_past);
    let t_from = (earliest / cfg.sample_dt).ceil() * cfg.sample_dt;
    let series = delay_torque_series(&traj, &cfg.params, ForceModel::Retarded, t_from, cfg.t_end, cfg.sample_dt)?;
    let mut s = String::from(
        "# units: t in cfs, force per unit electron mass in dnm/cfs^2, torque per unit electron mass in dnm^2/cfs^2\nt,f_tangential,torque_z\n",
    );
    for x in &series.samples {
        row(&mut s, &[x.t, x.tangential_force, x.torque_z]);
    }
    write(cfg, summary, "torque.csv", &s)?;
    if let Some(spread) = series.past_relative_spread(0.0) {
        summary.notes.push(format!("relative spread over the past: {spread:.3e}"));
    }
    summary.notes.push(format!("sign changes after t = 0: {}", series.sign_changes_after(0.0)));
    Ok(())
}

fn balance(cfg: &ScenarioConfig, summary: &mut RunSummary) -> Result<(), RunError> {
    let b = torque_balance(cfg.epsilon, cfg.r_e, &cfg.params)?;
    let mut s = String::from(
        "# units: r in dnm, omega in 1/cfs\nepsilon,r_e,omega_balance,omega_classical,r_simultaneous\n",
    );
    row(&mut s, &[b.epsilon, b.r_e, b.omega_balance, b.omega_classical, b.r_simultaneous]);
    write(cfg, summary, "balance.csv", &s)?;
    summary.notes.push(format!("omega_balance = {:.6} 1/cfs", b.omega_balance));
    summary.notes.push(format!("omega_classical = {:.6} 1/cfs", b.omega_classical));
    summary.notes.push(format!("r_simultaneous = {:.6} dnm", b.r_simultaneous));
    Ok(())
}

fn spectrum(cfg: &ScenarioConfig, summary: &mut RunSummary) -> Result<(), RunError> {
    let z0 = principal_root()?;
    let mut s = String::from("# units: 1/cfs for a unit delay; roots of z^2 e^z + 1 with y > 0\n");
    writeln!(
        s,
        "# principal root (growing mode): x = {:.16e}, y = {:.16e}",
        z0.z.re, z0.z.im
    )
    .expect("writing to a String");
    s.push_str("k,x_k,y_k,residual\n");
    for r in chain_roots(cfg.k_max)? {
        write!(s, "{},", r.k).expect("writing to a String");
        row(&mut s, &[r.z.re, r.z.im, r.residual]);
    }
    write(cfg, summary, "spectrum.csv", &s)?;
    summary.notes.push(format!("{} roots written", cfg.k_max));
    Ok(())
}

/// Fixed-step errors on `x'' = -x(t - 1)` against the exact solution
/// `Re e^{z_1 t}`.
fn convergence(cfg: &ScenarioConfig, summary: &mut RunSummary) -> Result<(), RunError> {
    let r1 = chain_roots(1)?[0];
    let exact = synthesize_solution(&[(Complex64::new(1.0, 0.0), r1)]);
    let t_end = cfg.t_end.min(10.0);
    let mut s = String::from("# units: h in cfs; max error of x on [0, t_end]\nh,max_error,ratio\n");
    let mut prev: Option<f64> = None;
    for n in [2usize, 4, 8, 16, 32] {
        let h = 1.0 / n as f64;
        let err = verify_fixed_step(&exact, h, t_end)?;
        num(&mut s, h);
        s.push(',');
        num(&mut s, err);
        s.push(',');
        // the coarsest step has no predecessor to compare with
        if let Some(p) = prev {
            num(&mut s, p / err);
        }
        s.push('\n');
        prev = Some(err);
    }
    write(cfg, summary, "convergence.csv", &s)?;
    Ok(())
}
