//! Test-only oracles, independent of the library's numerical paths.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Polynomial in the local variable `s`, lowest power first.
#[derive(Clone, Debug, Default)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, s: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    fn antideriv(&self) -> Poly {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Poly(out)
    }

    fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0.0) + other.0.get(i).copied().unwrap_or(0.0))
            .collect())
    }

    fn scale(&self, k: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * k).collect())
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

/// `x(t) = P(s) cos t + Q(s) sin t + R(s)` with `s = t - t_start`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub t_start: f64,
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
}

impl Piece {
    pub fn eval(&self, t: f64) -> f64 {
        let s = t - self.t_start;
        self.p.eval(s) * t.cos() + self.q.eval(s) * t.sin() + self.r.eval(s)
    }
}

/// Exact solution of `x'(t) = a x(t - π/2)` by the method of steps, carried
/// out symbolically on polynomial-times-trig pieces of width π/2.
pub struct HalfPiOracle {
    pieces: Vec<Piece>,
}

impl HalfPiOracle {
    /// `past` must start at `-π/2` and describe the initial function there.
    pub fn new(a: f64, past: Piece, t_end: f64) -> Self {
        let mut pieces = vec![past];
        while pieces.last().unwrap().t_start + FRAC_PI_2 < t_end {
            let prev = pieces.last().unwrap().clone();
            let t_k = prev.t_start + FRAC_PI_2;
            // previous piece at t - π/2 rewritten in the trig basis of t:
            // cos(t - π/2) = sin t, sin(t - π/2) = -cos t
            let ip = prev.q.scale(-1.0);
            let iq = prev.p.clone();
            let ir = prev.r.clone();
            // antiderivative of ip cos + iq sin is A cos + B sin with
            // B = Σ (-1)^k D^{2k}(ip + iq'), A = B' - iq
            let mut b = Poly::default();
            let mut term = ip.add(&iq.deriv());
            let mut sign = 1.0;
            while !term.is_zero() && !term.0.is_empty() {
                b = b.add(&term.scale(sign));
                term = term.deriv().deriv();
                sign = -sign;
            }
            let a_poly = b.deriv().add(&iq.scale(-1.0));
            let rr = ir.antideriv();
            let x_k0 = prev.eval(t_k);
            let g0 = a_poly.eval(0.0) * t_k.cos() + b.eval(0.0) * t_k.sin() + rr.eval(0.0);
            let mut r = rr.scale(a);
            r.0[0] += x_k0 - a * g0;
            pieces.push(Piece {
                t_start: t_k,
                p: a_poly.scale(a),
                q: b.scale(a),
                r,
            });
        }
        Self { pieces }
    }

    pub fn sin_past(a: f64, t_end: f64) -> Self {
        Self::new(
            a,
            Piece { t_start: -FRAC_PI_2, p: Poly(vec![0.0]), q: Poly(vec![1.0]), r: Poly(vec![0.0]) },
            t_end,
        )
    }

    pub fn cos_past(a: f64, t_end: f64) -> Self {
        Self::new(
            a,
            Piece { t_start: -FRAC_PI_2, p: Poly(vec![1.0]), q: Poly(vec![0.0]), r: Poly(vec![0.0]) },
            t_end,
        )
    }

    pub fn eval(&self, t: f64) -> f64 {
        let idx = self
            .pieces
            .iter()
            .rposition(|p| p.t_start < t)
            .unwrap_or(0);
        self.pieces[idx].eval(t)
    }
}

/// Sample grid `t0, t0 + dt, ...` up to and including `t1`.
pub fn grid(t0: f64, t1: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| t0 + (t1 - t0) * i as f64 / n as f64)
}
