//! Taylor coefficients `c_k` of `Φ(z) = Σ c_k z^k`.
//!
//! Blaschke factors are applied by the two-term recurrence of
//! `(1 - ā z) y = (|a|/a)(a - z) v`. A singular atom at `ζ` with mass `μ` has
//! the series `e^{-μ} Σ L_n^{(-1)}(2μ) (ζ̄ z)^n`, from the Laguerre generating
//! function with `α = -1`; it is convolved in.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{Atom, BlaschkeFactor, InnerSymbol};

/// The sampled route uses at least this many samples per requested coefficient.
pub const SAMPLED_MIN_OVERSAMPLE: usize = 8;
/// Rational symbols also sample enough points that `r^m` falls below this.
const ALIAS_FLOOR: f64 = 1e-17;

/// `L_n^{(-1)}(x)` for `n = 0..=count-1` by the three-term recurrence.
pub fn laguerre_minus_one(x: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(1.0);
    if count == 1 {
        return out;
    }
    out.push(-x);
    for n in 1..count - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf - x) * out[n] - (nf - 1.0) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

impl BlaschkeFactor {
    /// Multiplies the series `v` by this factor in place (truncated).
    fn apply_to_series(&self, v: &mut [Complex64]) {
        let a = self.zero();
        let phase = self.phase();
        let abar = a.conj();
        let mut prev_v = Complex64::new(0.0, 0.0);
        let mut prev_y = Complex64::new(0.0, 0.0);
        for slot in v.iter_mut() {
            let vk = *slot;
            let yk = abar * prev_y + phase * (a * vk - prev_v);
            prev_v = vk;
            prev_y = yk;
            *slot = yk;
        }
    }

    /// `c_0..=c_d` of `b_a` alone.
    pub fn coefficients(&self, d: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d + 1];
        v[0] = Complex64::new(1.0, 0.0);
        self.apply_to_series(&mut v);
        v
    }
}

impl Atom {
    /// `c_0..=c_d` of the singular factor alone.
    pub fn coefficients(&self, d: usize) -> Vec<Complex64> {
        let lag = laguerre_minus_one(2.0 * self.mass, d + 1);
        let scale = (-self.mass).exp();
        let step = self.point().conj();
        let mut rot = Complex64::new(1.0, 0.0);
        lag.iter()
            .map(|&l| {
                let c = rot * (scale * l);
                rot *= step;
                c
            })
            .collect()
    }
}

fn convolve_truncated(v: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &vi) in v.iter().enumerate() {
        if vi == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &wj) in w.iter().take(n - i).enumerate() {
            out[i + j] += vi * wj;
        }
    }
    out
}

impl InnerSymbol {
    /// `c_0..=c_d` (length `d + 1`).
    pub fn fourier_coeffs(&self, d: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d + 1];
        let n = self.monomial_power() as usize;
        if n <= d {
            v[n] = self.constant();
        }
        for factor in self.factors() {
            factor.apply_to_series(&mut v);
        }
        for atom in self.singular().atoms() {
            let series = atom.coefficients(d);
            v = convolve_truncated(&v, &series);
        }
        v
    }

    /// Coefficients through sampling `samples >= 8 (d + 1)` boundary values on
    /// a grid offset by half a step from `θ = 0`, followed by an FFT. For
    /// rational symbols the grid also grows until aliasing of the geometric
    /// tail is negligible.
    pub fn fourier_coeffs_sampled(&self, d: usize, samples: usize) -> Vec<Complex64> {
        let alias = match self.tail_ratio() {
            Some(r) if r > 0.0 => (ALIAS_FLOOR.ln() / r.ln()).ceil() as usize,
            _ => 0,
        };
        let m = samples
            .max(SAMPLED_MIN_OVERSAMPLE * (d + 1))
            .max(alias)
            .next_power_of_two();
        let offset = PI / m as f64;
        let mut buf: Vec<Complex64> = (0..m)
            .map(|k| {
                let theta = offset + TAU * k as f64 / m as f64;
                self.boundary_value(theta)
            })
            .collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(m).process(&mut buf);
        (0..=d)
            .map(|k| buf[k] * Complex64::from_polar(1.0 / m as f64, -(k as f64) * offset))
            .collect()
    }

    /// Upper bound on `(Σ_{k>d} |c_k|²)^{1/2}`.
    ///
    /// Rational symbols take the smaller of a Cauchy estimate on a circle
    /// `|z| = ρ`, `1 < ρ < 1/max|a|`, and the Parseval remainder
    /// `1 - Σ_{k<=d} |c_k|²` (with a rounding guard). Singular parts only
    /// admit the Parseval remainder.
    pub fn tail_l2(&self, d: usize) -> f64 {
        let parseval = {
            let coeffs = self.fourier_coeffs(d);
            let head: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
            let guard = 4.0 * (d as f64 + 1.0) * f64::EPSILON;
            (1.0 - head + guard).max(0.0).sqrt()
        };
        match self.tail_ratio() {
            Some(r) => parseval.min(self.cauchy_tail_l2(d, r)),
            None => parseval,
        }
    }

    /// `tail_l2(d)` for every `d < n`, from a single coefficient pass.
    pub fn tail_l2_profile(&self, n: usize) -> Vec<f64> {
        if n == 0 {
            return Vec::new();
        }
        let coeffs = self.fourier_coeffs(n - 1);
        let ratio = self.tail_ratio();
        let mut head = 0.0;
        coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| {
                head += c.norm_sqr();
                let guard = 4.0 * (d as f64 + 1.0) * f64::EPSILON;
                let parseval = (1.0 - head + guard).max(0.0).sqrt();
                match ratio {
                    Some(r) => parseval.min(self.cauchy_tail_l2(d, r)),
                    None => parseval,
                }
            })
            .collect()
    }

    /// Upper bound on `Σ_{k>d} |c_k|` for rational symbols; infinite otherwise.
    pub fn tail_l1(&self, d: usize) -> f64 {
        match self.tail_ratio() {
            Some(r) => self.cauchy_bound(d, r, false),
            None => f64::INFINITY,
        }
    }

    fn cauchy_tail_l2(&self, d: usize, r: f64) -> f64 {
        self.cauchy_bound(d, r, true)
    }

    fn cauchy_bound(&self, d: usize, r: f64, squared: bool) -> f64 {
        let n = self.monomial_power() as usize;
        if r == 0.0 {
            // c·z^n exactly.
            return if d >= n { 0.0 } else { 1.0 };
        }
        let mut best = f64::INFINITY;
        for t in [0.25, 0.5, 0.75, 0.9] {
            let rho = r.powf(-t);
            let mut sup = rho.powi(n as i32);
            for f in self.factors() {
                let a = f.zero().norm();
                sup *= (rho + a) / (1.0 - a * rho);
            }
            let q = if squared { rho.powi(-2) } else { 1.0 / rho };
            let first = if squared {
                sup * sup * q.powi(d as i32 + 1)
            } else {
                sup * q.powi(d as i32 + 1)
            };
            let total = first / (1.0 - q);
            let bound = if squared { total.sqrt() } else { total };
            if bound < best {
                best = bound;
            }
        }
        best
    }
}
