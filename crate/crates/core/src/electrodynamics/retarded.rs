use crate::dde::DdeError;

use super::{ElectroError, Vec3, WorldLine};

/// Null-cone tolerance on `|R| - c tau` in dnm.
pub const NULL_CONE_TOL: f64 = 1e-12;
/// Separations below this abort the run.
pub const COLLISION_DISTANCE: f64 = 1e-6;
pub const MAX_ITERATIONS: usize = 50;

/// Source data on the backward light cone of an observation event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedSample {
    pub tau: f64,
    /// Source position at `t - tau`.
    pub source: Vec3,
    /// Observer position minus retarded source position.
    pub r: Vec3,
    pub r_norm: f64,
    pub v_ret: Vec3,
    pub a_ret: Vec3,
    /// `c R̂ - v_ret`.
    pub u: Vec3,
}

impl RetardedSample {
    pub fn unit(&self) -> Vec3 {
        self.r / self.r_norm
    }

    /// `| |R| - c tau |`.
    pub fn null_cone_residual(&self, c: f64) -> f64 {
        (self.r_norm - c * self.tau).abs()
    }
}

/// Solves `|observer - w(t - tau)| = c tau` for the delay `tau > 0`.
///
/// The unknown is the retarded time `s = t - tau`, so that the reported
/// delay `t - s` is the one the source was actually sampled at. Newton steps
/// on `z(s) = |R| - c (t - s)` are kept inside a shrinking bracket; any step
/// that leaves it is replaced by bisection. `z` is strictly increasing in `s`
/// for a subluminal source, so the root is unique.
pub fn solve_retarded_time(
    source: &dyn WorldLine,
    observer: Vec3,
    t: f64,
    tau_guess: f64,
    c: f64,
) -> Result<RetardedSample, ElectroError> {
    let z_at = |s: f64| -> Result<(f64, f64, Vec3, Vec3, Vec3), ElectroError> {
        let (p, v) = source.position_velocity(s)?;
        let r = observer - p;
        let n = r.norm();
        if n < COLLISION_DISTANCE {
            return Err(ElectroError::Collision { t, distance: n });
        }
        Ok((n - c * (t - s), c - r.dot(&v) / n, r, v, p))
    };

    let mut hi = t.min(source.t_end());
    let (z_hi, ..) = z_at(hi)?;
    if z_hi < -NULL_CONE_TOL {
        return Err(DdeError::CausalityViolation { query: hi, t_current: source.t_end() }.into());
    }
    let mut lo = source.t_start();
    if lo.is_finite() {
        let (z_lo, ..) = z_at(lo)?;
        if z_lo > NULL_CONE_TOL {
            return Err(DdeError::HistoryTooShort { t: lo, t_hist_start: lo }.into());
        }
    } else {
        // unbounded past: grow a lower bracket from the guess
        let mut back = tau_guess.max(z_hi / c).max(f64::MIN_POSITIVE) * 2.0;
        while z_at(t - back)?.0 > 0.0 {
            back *= 2.0;
            if !back.is_finite() {
                return Err(ElectroError::NoConvergence { t, iterations: 0 });
            }
        }
        lo = t - back;
    }

    let guess = t - tau_guess;
    let mut s = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..MAX_ITERATIONS {
        let (z, dz, r, v_ret, w) = z_at(s)?;
        if z.abs() <= NULL_CONE_TOL {
            // one more Newton step costs a single query and takes the root
            // to round-off, which downstream cancellations benefit from
            let (mut s, mut r, mut v_ret, mut w) = (s, r, v_ret, w);
            let polished = s - z / dz;
            if z != 0.0 && polished >= lo && polished <= hi {
                let (zp, _, rp, vp, wp) = z_at(polished)?;
                if zp.abs() <= z.abs() {
                    (s, r, v_ret, w) = (polished, rp, vp, wp);
                }
            }
            let a_ret = source.acceleration(s)?;
            let r_norm = r.norm();
            return Ok(RetardedSample {
                tau: t - s,
                source: w,
                r,
                r_norm,
                v_ret,
                a_ret,
                u: c * (r / r_norm) - v_ret,
            });
        }
        if z < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - z / dz;
        s = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Err(ElectroError::NoConvergence { t, iterations: MAX_ITERATIONS })
}

/// Liénard–Wiechert field per unit source charge,
/// `R / (R·u)³ [u (c² - v²) + R × (u × a)]`.
pub fn lw_field(sample: &RetardedSample, c: f64) -> Result<Vec3, ElectroError> {
    let ru = sample.r.dot(&sample.u);
    if ru.is_nan() || ru <= 0.0 {
        return Err(ElectroError::DegenerateDenominator(ru));
    }
    let s = sample;
    let bracket = s.u * (c * c - s.v_ret.norm_squared()) + s.r.cross(&s.u.cross(&s.a_ret));
    Ok(bracket * (s.r_norm / ru.powi(3)))
}
