// reference values are kept at the precision they were computed to
#![allow(clippy::excessive_precision)]

use std::sync::OnceLock;

use fdelab::dde::{Tolerance, Trajectory};
use fdelab::diagnostics::*;
use fdelab::electrodynamics::*;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::new(1e-10, 1e-12).unwrap()
}

/// 40 cfs of the retarded run and its Coulomb counterpart.
fn runs() -> &'static (PhysicalParams, Trajectory, Trajectory) {
    static RUNS: OnceLock<(PhysicalParams, Trajectory, Trajectory)> = OnceLock::new();
    RUNS.get_or_init(|| {
        let p = default_params();
        let (fde, _) = simulate_hydrogen(&p, 5.0, 40.0, tol()).unwrap();
        let ode = simulate_coulomb(&p, 5.0, 40.0, tol()).unwrap();
        (p, fde, ode)
    })
}

/// Zero of `T_delay + T_rad` by bisection, written out from the two torque
/// expressions.
fn balance_oracle(eps: f64, r_e: f64, k: f64, c: f64) -> f64 {
    let sum = |w: f64| k / c * eps / (1.0 + eps).powi(2) * w - 2.0 / 3.0 * k / c.powi(3) * w.powi(3) * r_e * r_e;
    let (mut lo, mut hi) = (1e-6, 1e6);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if sum(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn balance_matches_bisection_on_grid() {
    let p = default_params();
    for eps in [1e-4, 5.436e-4, 1e-2] {
        for r_e in [0.1, 0.53, 1.0] {
            let b = torque_balance(eps, r_e, &p).unwrap();
            let w = balance_oracle(eps, r_e, p.kappa.abs(), p.c);
            assert!((b.omega_balance / w - 1.0).abs() < 1e-9, "eps {eps} r_e {r_e}");
        }
    }
    let b = torque_balance(p.mu, 0.53, &p).unwrap();
    assert!((b.omega_balance - 1.614).abs() < 1e-3);
    assert!((b.omega_classical - 0.41209).abs() < 5e-5);
    assert!(b.r_simultaneous < p.r0 && (b.r_simultaneous - 0.0345).abs() < 1e-4);
}

#[test]
fn coulomb_run_has_no_tangential_force() {
    let (p, _, ode) = runs();
    let s = delay_torque_series(ode, p, ForceModel::Coulomb, -4.0, 40.0, 0.05).unwrap();
    let scale = p.r0 * p.kappa.abs() / p.r0.powi(2);
    for x in &s.samples {
        assert!(x.tangential_force.abs() <= 1e-15 * scale && x.torque_z.abs() <= 1e-15 * scale, "t = {}", x.t);
    }
}

#[test]
fn past_tangential_force_is_the_reference_constant() {
    let (p, fde, _) = runs();
    let s = delay_torque_series(fde, p, ForceModel::Retarded, -4.0, 0.0, 0.05).unwrap();
    // 40-digit reference for the electron torque on the rigid past
    let reference = -6.672_159_051_133_751_331_1e-12;
    for x in &s.samples {
        assert!((x.torque_z / reference - 1.0).abs() < 1e-8, "t = {} {}", x.t, x.torque_z);
        assert!((x.tangential_force - x.torque_z / p.r0).abs() < 1e-8 * x.torque_z.abs());
    }
    assert!(s.past_relative_spread(0.0 + 1e-9).unwrap() < 1e-8);
}

#[test]
fn full_field_opposes_motion_while_lagging_image_pulls_forward() {
    // the retarded inverse-square force points at the lagging proton image
    // and so has a forward component; the full field nearly cancels it and
    // leaves a small backward residual
    let (p, fde, _) = runs();
    let mut g = (0.0177, 0.0177);
    let f = evaluate_force(fde, p, ForceModel::Retarded, -1.0, &mut g).unwrap();
    let proton = ParticleView::new(fde, Particle::Proton);
    let sample = solve_retarded_time(&proton, f.state.r1, -1.0, 0.0177, p.c).unwrap();
    let heuristic = p.kappa * sample.unit() / sample.r_norm.powi(2);
    let vhat = f.state.v1.normalize();
    assert!(heuristic.dot(&vhat) > 0.0);
    assert!(tangential_component(f.state.r1, f.state.v1, f.torque_electron) < 0.0);
    assert!(heuristic.dot(&vhat) > 1e3 * f.a1.dot(&vhat).abs());
}

#[test]
fn torque_oscillates_after_start() {
    let (p, fde, _) = runs();
    let s = delay_torque_series(fde, p, ForceModel::Retarded, -4.0, 40.0, 0.05).unwrap();
    assert!(s.sign_changes_after(0.0) >= 1);
    let mean = s.first_period_mean(0.0).expect("a full oscillation");
    assert!(5.0 * mean.abs() < s.peak_after(0.0), "mean {mean:e} peak {:e}", s.peak_after(0.0));
}

#[test]
fn orbit_difference_properties() {
    let (_, fde, ode) = runs();
    let d = orbit_difference(fde, ode, 0.05).unwrap();
    assert!(d.iter().filter(|x| x.t <= 0.0).all(|x| x.norm == 0.0 && x.dr == Vec3::zeros()));
    assert!(d.iter().any(|x| x.norm > 0.0));
    let back = orbit_difference(ode, fde, 0.05).unwrap();
    for (a, b) in d.iter().zip(&back) {
        assert_eq!(a.t, b.t);
        assert_eq!(a.dr, -b.dr);
    }
    assert!(orbit_difference(fde, fde, 0.05).unwrap().iter().all(|x| x.norm == 0.0));
}

#[test]
fn mismatched_windows_rejected() {
    let (p, fde, _) = runs();
    let short = simulate_coulomb(p, 5.0, 10.0, tol()).unwrap();
    assert_eq!(orbit_difference(fde, &short, 0.05).unwrap_err().name(), "MismatchedWindows");
    let other_past = simulate_coulomb(p, 4.0, 40.0, tol()).unwrap();
    assert_eq!(orbit_difference(fde, &other_past, 0.05).unwrap_err().name(), "MismatchedWindows");
}

#[test]
fn coulomb_angular_momentum_rate_vanishes() {
    let (p, _, ode) = runs();
    let c = angular_momentum_rate_check(ode, p, ForceModel::Coulomb, -4.0, 40.0, 0.05).unwrap();
    assert!(c.max_residual <= 1e-9);
    assert!(c.peak_torque <= 1e-15);
    assert_eq!(c.samples, 800);
}

#[test]
fn prescribed_past_keeps_angular_momentum() {
    let (p, fde, _) = runs();
    for t in [-4.5, -2.0, -0.01, 0.0] {
        let rate = angular_momentum_rate(fde, p, t).unwrap();
        // zero up to round-off on the scale of |r1 × a1|
        assert!(rate.abs() < 1e-15 * (p.r0 * p.omega0).powi(2), "t = {t}: {rate:e}");
    }
}

#[test]
fn retarded_angular_momentum_rate_tracks_net_torque() {
    // the two sides agree to the accuracy of the interpolant's derivative
    let (p, fde, _) = runs();
    let c = angular_momentum_rate_check(fde, p, ForceModel::Retarded, -4.0, 40.0, 0.05).unwrap();
    assert!(c.peak_torque > 1e-12);
    assert!(c.relative() < 1e-2, "{c:?}");
}

#[test]
fn energy_and_momentum_of_circular_state() {
    let p = default_params();
    let s = SystemState {
        r1: Vec3::new(p.r0, 0.0, 0.0),
        r2: Vec3::new(-p.mu * p.r0, 0.0, 0.0),
        v1: Vec3::new(0.0, p.omega0 * p.r0, 0.0),
        v2: Vec3::new(0.0, -p.mu * p.omega0 * p.r0, 0.0),
    };
    let l = angular_momentum(&p, &s);
    assert!((l - p.omega0 * p.r0 * p.r0 * (1.0 + p.mu)).abs() < 1e-15);
    // virial: E = -½ |kappa| / d on a circular orbit
    let d = p.r0 * (1.0 + p.mu);
    assert!((energy(&p, &s) + 0.5 * p.kappa.abs() / d).abs() < 1e-14);
}

proptest! {
    #[test]
    fn projector_kills_central_forces(
        r in prop::array::uniform3(-2.0f64..2.0),
        v in prop::array::uniform3(-2.0f64..2.0),
        k in -10.0f64..10.0,
    ) {
        let (r, v) = (Vec3::from(r), Vec3::from(v));
        let f = tangential_component(r, v, r.cross(&(k * r)));
        prop_assert!(f.abs() <= 1e-15 * k.abs() * r.norm());
    }

    #[test]
    fn closed_form_balance_identity(eps in 1e-5f64..0.5, r_e in 0.01f64..5.0) {
        let p = default_params();
        let b = torque_balance(eps, r_e, &p).unwrap();
        let lhs = b.omega_balance.powi(2) * r_e * r_e;
        let rhs = 1.5 * eps * p.c * p.c / (1.0 + eps).powi(2);
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }
}
