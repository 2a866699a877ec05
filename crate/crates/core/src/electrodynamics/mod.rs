//! Retarded electromagnetic two-body problem in computational units.
//!
//! Particle 1 (electron) and particle 2 (proton) are advanced on one
//! 12-component trajectory `r1, r2, v1, v2`. Accelerations are per unit
//! electron mass; `kappa` is the signed coupling and `mu = m1 / m2`.

mod error;
mod force;
mod params;
mod retarded;
mod system;
mod worldline;

pub use error::ElectroError;
pub use force::{coulomb_accelerations, coulomb_rhs, full_rhs, retarded_torque, ForceEvaluation};
pub use params::{default_params, PhysicalParams, SystemState};
pub use retarded::{
    lw_field, solve_retarded_time, RetardedSample, COLLISION_DISTANCE, MAX_ITERATIONS,
    NULL_CONE_TOL,
};
pub use system::{
    hydrogen_options, rigid_rotation_past, simulate_coulomb, simulate_hydrogen, CoulombSystem,
    HydrogenSystem,
};
pub use worldline::{Particle, ParticleView, StaticWorldLine, WorldLine};

pub type Vec3 = nalgebra::Vector3<f64>;
