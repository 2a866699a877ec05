//! Numerical laboratory for the retarded electrodynamic two-body problem.
//!
//! * [`dde`] integrates retarded functional differential equations by the
//!   method of steps with dense output.
//! * [`electrodynamics`] assembles the Liénard–Wiechert two-body system, its
//!   rigid-rotation past and the instantaneous Coulomb baseline.
//! * [`diagnostics`] post-processes runs: delay torque, orbit differences,
//!   angular-momentum bookkeeping and the torque-balance heuristic.
//! * [`spectrum`] locates characteristic roots of quasi-polynomials.
//! * [`cli`] parses scenario configs and writes the CSV outputs.

pub mod dde;
pub mod electrodynamics;
pub mod diagnostics;
pub mod spectrum;
pub mod cli;
