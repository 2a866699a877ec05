//! Characteristic roots of linear retarded equations.
//!
//! A quasi-polynomial `g(z) = Σ_j p_j(z) e^{-tau_j z}` is the characteristic
//! function of a linear constant-coefficient delay equation. The retarded
//! harmonic oscillator `x''(t) = -x(t - 1)` has `g(z) = z² e^z + 1`, with one
//! root `z_0` near `i` and a chain `z_k ≈ -ln(2kπ) + 2kπ i` for `k ≥ 1`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::dde::{integrate, AnalyticPast, ConstantDelay, DdeError, IntegrateOptions, Tolerance};

/// Newton stops once `|g|` is at most this.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 50;
/// Trapezoid samples per rectangle side in the argument-principle count.
pub const CONTOUR_SAMPLES: usize = 4000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("Newton iteration from {seed} did not converge in {iterations} iterations")]
    NoConvergence { seed: Complex64, iterations: usize },

    #[error("iteration from {seed} converged to {found}, outside the seed's basin")]
    WrongBasin { seed: Complex64, found: Complex64 },

    #[error("root index must be at least 1, got {0}")]
    InvalidIndex(usize),

    #[error("argument-principle count is inconclusive ({0})")]
    Inconclusive(String),

    #[error(transparent)]
    Dde(#[from] DdeError),
}

impl SpectrumError {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumError::NoConvergence { .. } => "NoConvergence",
            SpectrumError::WrongBasin { .. } => "WrongBasin",
            SpectrumError::InvalidIndex(_) => "InvalidIndex",
            SpectrumError::Inconclusive(_) => "Inconclusive",
            SpectrumError::Dde(e) => e.name(),
        }
    }
}

/// `Σ_j p_j(z) e^{-tau_j z}`; each `p_j` is stored lowest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPolynomial {
    terms: Vec<(Vec<Complex64>, f64)>,
}

impl QuasiPolynomial {
    pub fn new(terms: Vec<(Vec<Complex64>, f64)>) -> Self {
        Self { terms }
    }

    /// `z² e^z + 1`, the characteristic function of `x''(t) = -x(t - 1)`.
    pub fn retarded_oscillator() -> Self {
        let c = |v: f64| Complex64::new(v, 0.0);
        Self::new(vec![(vec![c(0.0), c(0.0), c(1.0)], -1.0), (vec![c(1.0)], 0.0)])
    }

    /// `(g(z), g'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut g = Complex64::new(0.0, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        for (p, tau) in &self.terms {
            let (mut pv, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for c in p.iter().rev() {
                dp = dp * z + pv;
                pv = pv * z + c;
            }
            let e = (-*tau * z).exp();
            g += pv * e;
            dg += (dp - *tau * pv) * e;
        }
        (g, dg)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }
}

/// A refined root with `y = Im z > 0`; its conjugate is a root as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRoot {
    /// 0 for the root near `i`, `k ≥ 1` for the root near `2kπ i`.
    pub k: usize,
    pub z: Complex64,
    pub residual: f64,
}

/// `-ln(2kπ) + 2kπ i`.
pub fn asymptotic_seed(k: usize) -> Result<Complex64, SpectrumError> {
    if k == 0 {
        return Err(SpectrumError::InvalidIndex(k));
    }
    let y = 2.0 * k as f64 * PI;
    Ok(Complex64::new(-y.ln(), y))
}

/// Damped Newton on `q` from `seed`: each step is halved until `|g|`
/// decreases. One further step is taken once the residual is met, when it
/// helps.
pub fn refine(q: &QuasiPolynomial, seed: Complex64) -> Result<Complex64, SpectrumError> {
    let mut z = seed;
    let (mut g, mut dg) = q.eval_with_derivative(z);
    for _ in 0..MAX_ITERATIONS {
        if g.norm() <= RESIDUAL_TOL {
            let polished = z - g / dg;
            let gp = q.eval(polished);
            return Ok(if gp.norm() < g.norm() { polished } else { z });
        }
        if dg.norm() == 0.0 || !dg.is_finite() {
            break;
        }
        let mut step = g / dg;
        let mut next = z - step;
        let mut g_next = q.eval(next);
        let mut halvings = 0;
        while (g_next.norm().is_nan() || g_next.norm() >= g.norm()) && halvings < 40 {
            step *= 0.5;
            next = z - step;
            g_next = q.eval(next);
            halvings += 1;
        }
        z = next;
        (g, dg) = q.eval_with_derivative(z);
    }
    Err(SpectrumError::NoConvergence { seed, iterations: MAX_ITERATIONS })
}

fn checked_root(k: usize, seed: Complex64) -> Result<SpectrumRoot, SpectrumError> {
    let q = QuasiPolynomial::retarded_oscillator();
    let z = refine(&q, seed)?;
    if (z.im - seed.im).abs() > PI {
        return Err(SpectrumError::WrongBasin { seed, found: z });
    }
    Ok(SpectrumRoot { k, z, residual: q.eval(z).norm() })
}

/// Root of `z² e^z + 1` in the basin of `seed`, labelled with the nearest
/// chain index.
pub fn refine_root(seed: Complex64) -> Result<SpectrumRoot, SpectrumError> {
    let k = (seed.im / (2.0 * PI)).round().max(0.0) as usize;
    checked_root(k, seed)
}

/// The root continued from `i`, the root of the delay-free `z² + 1`. It has
/// positive real part, so `x'' = -x(t - 1)` has a growing mode.
pub fn principal_root() -> Result<SpectrumRoot, SpectrumError> {
    checked_root(0, Complex64::new(0.0, 1.0))
}

/// Roots `k = 1..=k_max` from their asymptotic seeds.
pub fn chain_roots(k_max: usize) -> Result<Vec<SpectrumRoot>, SpectrumError> {
    (1..=k_max).map(|k| checked_root(k, asymptotic_seed(k)?)).collect()
}

/// Number of zeros of `q` inside `[x0, x1] × [y0, y1]`, from the winding of
/// `q` along the boundary.
pub fn argument_principle_count(
    q: &QuasiPolynomial,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    samples_per_side: usize,
) -> Result<usize, SpectrumError> {
    let corners = [
        Complex64::new(x0, y0),
        Complex64::new(x1, y0),
        Complex64::new(x1, y1),
        Complex64::new(x0, y1),
    ];
    let mut winding = 0.0;
    let mut prev = q.eval(corners[0]);
    for side in 0..4 {
        let (a, b) = (corners[side], corners[(side + 1) % 4]);
        for i in 1..=samples_per_side {
            let z = a + (b - a) * (i as f64 / samples_per_side as f64);
            let g = q.eval(z);
            if g.norm() == 0.0 {
                return Err(SpectrumError::Inconclusive(format!("zero on the contour at {z}")));
            }
            let d = (g / prev).arg();
            if d.abs() > 0.5 * PI {
                return Err(SpectrumError::Inconclusive(format!("phase jump {d} near {z}")));
            }
            winding += d;
            prev = g;
        }
    }
    let turns = winding / (2.0 * PI);
    let n = turns.round();
    if (turns - n).abs() > 0.05 || n < 0.0 {
        return Err(SpectrumError::Inconclusive(format!("winding {turns}")));
    }
    Ok(n as usize)
}

/// `x(t) = Re Σ a_k e^{z_k t}`: the conjugate roots enter implicitly, as
/// `Re(a e^{zt}) = (a e^{zt} + conj(a) e^{conj(z) t}) / 2`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Synthesis {
    pub terms: Vec<(Complex64, Complex64)>,
}

pub fn synthesize_solution(coeffs: &[(Complex64, SpectrumRoot)]) -> Synthesis {
    Synthesis { terms: coeffs.iter().map(|(a, r)| (*a, r.z)).collect() }
}

impl Synthesis {
    pub fn eval(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    /// `d^m x / dt^m`.
    pub fn derivative(&self, t: f64, m: i32) -> f64 {
        self.terms.iter().map(|(a, z)| (a * z.powi(m) * (z * t).exp()).re).sum()
    }

    pub fn plus(&self, other: &Synthesis) -> Synthesis {
        Synthesis { terms: self.terms.iter().chain(&other.terms).copied().collect() }
    }
}

/// Integrates `x'' = -x(t - 1)` on `[0, t_end]` from the past `x = s` on
/// `[-1, 0]` and returns `max |x - s|` over a grid of step `1/100`.
pub fn verify_against_integrator(
    solution: &Synthesis,
    tol: Tolerance,
    t_end: f64,
) -> Result<f64, SpectrumError> {
    oscillator_deviation(solution, tol, t_end, &IntegrateOptions::default())
}

/// As [`verify_against_integrator`] with a fixed step `h` and no error
/// control.
pub fn verify_fixed_step(solution: &Synthesis, h: f64, t_end: f64) -> Result<f64, SpectrumError> {
    let options = IntegrateOptions { fixed_step: Some(h), ..IntegrateOptions::default() };
    // tolerances are unused without error control
    oscillator_deviation(solution, Tolerance::new(1.0, 1.0)?, t_end, &options)
}

fn oscillator_deviation(
    solution: &Synthesis,
    tol: Tolerance,
    t_end: f64,
    options: &IntegrateOptions,
) -> Result<f64, SpectrumError> {
    let (v, d) = (solution.clone(), solution.clone());
    let past = AnalyticPast::new(
        2,
        -1.0,
        move |t, out| {
            out[0] = v.derivative(t, 0);
            out[1] = v.derivative(t, 1);
        },
        move |t, out| {
            out[0] = d.derivative(t, 1);
            out[1] = d.derivative(t, 2);
        },
    );
    let mut sys = ConstantDelay::new(2, 1.0, |_, y, yd, dy| {
        dy[0] = y[1];
        dy[1] = -yd[0];
    })?;
    let traj = integrate(&mut sys, Arc::new(past), 0.0, t_end, tol, options)?;
    let n = (t_end * 100.0).ceil() as usize;
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        let t = (i as f64 / 100.0).min(t_end);
        worst = worst.max((traj.query(t, 0)?[0] - solution.eval(t)).abs());
    }
    Ok(worst)
}
