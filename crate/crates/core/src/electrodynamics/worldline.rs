use crate::dde::{DdeError, Trajectory};

use super::{ElectroError, Vec3};

/// Position, velocity and acceleration of one particle as functions of time.
pub trait WorldLine {
    /// Earliest covered time.
    fn t_start(&self) -> f64;

    /// Latest covered time.
    fn t_end(&self) -> f64;

    fn position_velocity(&self, t: f64) -> Result<(Vec3, Vec3), ElectroError>;

    fn acceleration(&self, t: f64) -> Result<Vec3, ElectroError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Particle {
    Electron,
    Proton,
}

impl Particle {
    fn position_offset(self) -> usize {
        match self {
            Particle::Electron => 0,
            Particle::Proton => 3,
        }
    }

    fn velocity_offset(self) -> usize {
        self.position_offset() + 6
    }
}

/// One particle's view of a 12-component two-body trajectory.
#[derive(Clone, Copy)]
pub struct ParticleView<'a> {
    traj: &'a Trajectory,
    particle: Particle,
}

impl<'a> ParticleView<'a> {
    pub fn new(traj: &'a Trajectory, particle: Particle) -> Self {
        debug_assert_eq!(traj.dim(), 12);
        Self { traj, particle }
    }

    fn read(&self, t: f64, order: u8, first: usize) -> Result<Vec3, DdeError> {
        let mut out = [0.0; 3];
        self.traj.query_components(t, order, first, &mut out)?;
        Ok(Vec3::from(out))
    }
}

impl WorldLine for ParticleView<'_> {
    fn t_start(&self) -> f64 {
        self.traj.t_hist_start()
    }

    fn t_end(&self) -> f64 {
        self.traj.t_current()
    }

    fn position_velocity(&self, t: f64) -> Result<(Vec3, Vec3), ElectroError> {
        Ok((
            self.read(t, 0, self.particle.position_offset())?,
            self.read(t, 0, self.particle.velocity_offset())?,
        ))
    }

    fn acceleration(&self, t: f64) -> Result<Vec3, ElectroError> {
        Ok(self.read(t, 1, self.particle.velocity_offset())?)
    }
}

/// A particle at rest at a fixed point for all times from `t_start` on.
#[derive(Debug, Clone, Copy)]
pub struct StaticWorldLine {
    pub position: Vec3,
    pub t_start: f64,
}

impl StaticWorldLine {
    /// At rest since the infinite past.
    pub fn eternal(position: Vec3) -> Self {
        Self { position, t_start: f64::NEG_INFINITY }
    }
}

impl WorldLine for StaticWorldLine {
    fn t_start(&self) -> f64 {
        self.t_start
    }

    fn t_end(&self) -> f64 {
        f64::INFINITY
    }

    fn position_velocity(&self, t: f64) -> Result<(Vec3, Vec3), ElectroError> {
        if t < self.t_start {
            return Err(DdeError::OutOfRange { t, start: self.t_start, end: f64::INFINITY }.into());
        }
        Ok((self.position, Vec3::zeros()))
    }

    fn acceleration(&self, _t: f64) -> Result<Vec3, ElectroError> {
        Ok(Vec3::zeros())
    }
}
