//! Applying a truncated operator to a block of probe vectors while tracking,
//! for every column, a bound on the distance to the true (untruncated)
//! image.
//!
//! If `x` is the true vector and `v` the stored one with `‖x - v‖ <= δ`,
//! applying an exact section `M = P A P` gives
//! `‖A x - M v‖ <= ‖A‖ δ + ‖(1 - P) A v‖ + rounding`, and the middle term is
//! bounded by `Σ_k |v_k| loss_k`, by `‖A‖ ‖v‖`, and for an isometry by
//! `(‖v‖² - ‖M v‖²)^{1/2}`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{sparse_columns, Structure, TruncatedOperator};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `cols` vectors of the ambient dimension `n`, stored on their first `rows`
/// coordinates (the rest are exactly zero), with per-column error bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeBlock {
    n: usize,
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    delta: Vec<f64>,
}

impl ProbeBlock {
    /// `e_0, …, e_{k-1}` in dimension `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let k = k.min(n);
        let mut data = vec![ZERO; k * k];
        for j in 0..k {
            data[j * k + j] = Complex64::new(1.0, 0.0);
        }
        Self {
            n,
            rows: k,
            cols: k,
            data,
            delta: vec![0.0; k],
        }
    }

    /// A single stored vector with zero error.
    pub fn from_vector(n: usize, v: &[Complex64]) -> Self {
        let mut out = Self {
            n,
            rows: v.len().min(n),
            cols: 1,
            data: v[..v.len().min(n)].to_vec(),
            delta: vec![0.0],
        };
        out.trim();
        out
    }

    fn from_parts(n: usize, rows: usize, cols: usize, data: Vec<Complex64>, delta: Vec<f64>) -> Self {
        let mut out = Self {
            n,
            rows,
            cols,
            data,
            delta,
        };
        out.trim();
        out
    }

    fn trim(&mut self) {
        let mut last = 0;
        for j in 0..self.cols {
            let col = &self.data[j * self.rows..(j + 1) * self.rows];
            if let Some(p) = col.iter().rposition(|&x| x != ZERO) {
                last = last.max(p + 1);
            }
        }
        if last < self.rows {
            let mut data = Vec::with_capacity(last * self.cols);
            for j in 0..self.cols {
                data.extend_from_slice(&self.data[j * self.rows..j * self.rows + last]);
            }
            self.data = data;
            self.rows = last;
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of leading coordinates that may be nonzero.
    pub fn support(&self) -> usize {
        self.rows
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn max_delta(&self) -> f64 {
        self.delta.iter().copied().fold(0.0, f64::max)
    }

    /// The column as a dense vector of length `n`.
    pub fn dense_column(&self, j: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.n];
        v[..self.rows].copy_from_slice(self.column(j));
        v
    }

    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.cols).map(|j| norm(self.column(j))).collect()
    }

    /// `‖(self - other) e_j‖` for column `j`.
    pub fn column_distance(&self, other: &Self, j: usize) -> f64 {
        let a = self.column(j);
        let b = other.column(j);
        let common = a.len().min(b.len());
        let mut s = 0.0;
        for i in 0..common {
            s += (a[i] - b[i]).norm_sqr();
        }
        for x in &a[common..] {
            s += x.norm_sqr();
        }
        for x in &b[common..] {
            s += x.norm_sqr();
        }
        s.sqrt()
    }

    /// Column distances to `other` over the first `min(cols)` columns.
    pub fn distances(&self, other: &Self) -> Vec<f64> {
        (0..self.cols.min(other.cols))
            .map(|j| self.column_distance(other, j))
            .collect()
    }

    /// Whether every column matches `other` within `tol` plus both error
    /// bounds. Stops at the first column that does not.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        if self.cols != other.cols {
            return false;
        }
        (0..self.cols).all(|j| self.column_distance(other, j) <= tol + self.delta[j] + other.delta[j])
    }

    /// The raw matrix of stored values, `n x cols`.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.cols, |i, j| {
            if i < self.rows {
                self.data[j * self.rows + i]
            } else {
                ZERO
            }
        })
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone)]
struct FftPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    spectrum: Vec<Complex64>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FftPlan({})", self.len)
    }
}

impl FftPlan {
    fn new(c: &[Complex64], n: usize) -> Self {
        let len = (2 * n - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut spectrum = vec![ZERO; len];
        spectrum[..c.len()].copy_from_slice(c);
        forward.process(&mut spectrum);
        let scale = 1.0 / len as f64;
        for x in spectrum.iter_mut() {
            *x *= scale;
        }
        Self {
            len,
            forward,
            inverse,
            spectrum,
        }
    }

    /// First `n` entries of the linear convolution of `v` with the planned
    /// coefficients.
    fn convolve(&self, v: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.len];
        buf[..v.len()].copy_from_slice(v);
        self.forward.process(&mut buf);
        for (x, s) in buf.iter_mut().zip(&self.spectrum) {
            *x *= s;
        }
        self.inverse.process(&mut buf);
        buf.truncate(n);
        buf
    }
}

#[derive(Debug, Clone)]
enum Apply {
    /// Lower Toeplitz: `y_i = Σ_d c_d v_{i-d}`.
    Conv {
        nonzero: Vec<(usize, Complex64)>,
        fft: Option<FftPlan>,
    },
    /// Upper Toeplitz: `y_j = Σ_d conj(c_d) v_{j+d}`.
    Corr {
        nonzero: Vec<(usize, Complex64)>,
        fft: Option<FftPlan>,
    },
    Sparse(Vec<Vec<(usize, Complex64)>>),
    Dense(DMatrix<Complex64>),
}

/// A generator letter prepared for repeated application to probe blocks.
#[derive(Debug, Clone)]
pub struct LetterKernel {
    n: usize,
    apply: Apply,
    /// Per-column bound on `‖(A - M) e_k‖` (or `‖(1 - P) A e_k‖` for exact sections).
    deviation: Vec<f64>,
    norm_bound: f64,
    isometric: bool,
    rounding: f64,
}

const FFT_MIN_SIZE: usize = 128;

impl LetterKernel {
    pub fn new(op: &TruncatedOperator) -> Self {
        let n = op.n();
        let m = op.matrix();
        let eps = f64::EPSILON;
        let (apply, rounding) = match op.structure() {
            Structure::LowerToeplitz(c) | Structure::UpperToeplitz(c) => {
                let nonzero: Vec<(usize, Complex64)> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != ZERO)
                    .map(|(d, &x)| (d, x))
                    .collect();
                let mass: f64 = c.iter().map(|x| x.norm()).sum();
                let use_fft = n >= FFT_MIN_SIZE && nonzero.len() > 48;
                let lower = matches!(op.structure(), Structure::LowerToeplitz(_));
                let fft = use_fft.then(|| {
                    if lower {
                        FftPlan::new(c, n)
                    } else {
                        let conj: Vec<Complex64> = c.iter().map(|x| x.conj()).collect();
                        FftPlan::new(&conj, n)
                    }
                });
                let terms = match &fft {
                    Some(plan) => 8.0 * (plan.len as f64).log2(),
                    None => 2.0 * nonzero.len() as f64,
                };
                let apply = if lower {
                    Apply::Conv { nonzero, fft }
                } else {
                    Apply::Corr { nonzero, fft }
                };
                (apply, eps * terms * mass.max(1.0))
            }
            Structure::General => match sparse_columns(m) {
                Some(cols) => {
                    let mut row_count = vec![0usize; n];
                    let mut mass: f64 = 0.0;
                    for col in &cols {
                        mass = mass.max(col.iter().map(|(_, x)| x.norm()).sum());
                        for &(i, _) in col {
                            row_count[i] += 1;
                        }
                    }
                    let terms = row_count.iter().copied().max().unwrap_or(0) as f64;
                    (Apply::Sparse(cols), 2.0 * eps * terms.max(1.0) * mass.max(1.0))
                }
                None => {
                    let mass = (0..n)
                        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
                        .fold(0.0, f64::max);
                    (Apply::Dense(m.clone()), 2.0 * eps * n as f64 * mass.max(1.0))
                }
            },
        };
        let deviation = match op.losses() {
            Some(l) => l.forward.clone(),
            None => (0..n)
                .map(|k| {
                    if k < op.probe_dim() {
                        op.tail_bound()
                    } else {
                        m.column(k).norm() + op.norm_bound()
                    }
                })
                .collect(),
        };
        Self {
            n,
            apply,
            deviation,
            norm_bound: op.norm_bound(),
            isometric: op.is_isometric() && op.is_exact(),
            rounding,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn apply_column(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let r = v.len();
        match &self.apply {
            Apply::Conv { nonzero, fft } => {
                let direct_cost = nonzero.len() * r;
                match fft {
                    Some(plan) if direct_cost > 4 * plan.len * (plan.len.ilog2() as usize) => plan.convolve(v, n),
                    _ => {
                        let maxd = nonzero.last().map(|x| x.0).unwrap_or(0);
                        let out_len = (r + maxd).min(n);
                        let mut y = vec![ZERO; out_len];
                        for &(d, cd) in nonzero {
                            if d >= out_len {
                                break;
                            }
                            for (k, &vk) in v.iter().enumerate().take(out_len - d) {
                                if vk != ZERO {
                                    y[k + d] += cd * vk;
                                }
                            }
                        }
                        y
                    }
                }
            }
            Apply::Corr { nonzero, fft } => {
                let direct_cost = nonzero.len() * r;
                match fft {
                    Some(plan) if direct_cost > 4 * plan.len * (plan.len.ilog2() as usize) => {
                        let mut w = vec![ZERO; n];
                        for (k, &vk) in v.iter().enumerate() {
                            w[n - 1 - k] = vk;
                        }
                        let u = plan.convolve(&w, n);
                        (0..r).map(|j| u[n - 1 - j]).collect()
                    }
                    _ => {
                        let mut y = vec![ZERO; r];
                        for &(d, cd) in nonzero {
                            if d >= r {
                                break;
                            }
                            let cc = cd.conj();
                            for j in 0..r - d {
                                let vk = v[j + d];
                                if vk != ZERO {
                                    y[j] += cc * vk;
                                }
                            }
                        }
                        y
                    }
                }
            }
            Apply::Sparse(cols) => {
                let mut y = vec![ZERO; n];
                for (k, &vk) in v.iter().enumerate() {
                    if vk == ZERO {
                        continue;
                    }
                    for &(i, x) in &cols[k] {
                        y[i] += x * vk;
                    }
                }
                y
            }
            Apply::Dense(m) => {
                let mut y = vec![ZERO; n];
                for (k, &vk) in v.iter().enumerate() {
                    if vk == ZERO {
                        continue;
                    }
                    for (i, slot) in y.iter_mut().enumerate() {
                        *slot += m[(i, k)] * vk;
                    }
                }
                y
            }
        }
    }

    /// Applies the letter to every column, propagating error bounds.
    pub fn apply(&self, block: &ProbeBlock) -> ProbeBlock {
        assert_eq!(block.n, self.n, "probe block dimension mismatch");
        let cols: Vec<Vec<Complex64>> = (0..block.cols).map(|j| self.apply_column(block.column(j))).collect();
        let rows = cols.iter().map(|c| c.len()).max().unwrap_or(0);
        let mut data = vec![ZERO; rows * block.cols];
        let mut delta = Vec::with_capacity(block.cols);
        let eps = f64::EPSILON;
        for (j, y) in cols.iter().enumerate() {
            data[j * rows..j * rows + y.len()].copy_from_slice(y);
            let v = block.column(j);
            let vn = norm(v);
            let yn = norm(y);
            let round = self.rounding * vn;
            let mut lost: f64 = v
                .iter()
                .zip(&self.deviation)
                .map(|(x, d)| if *d == 0.0 { 0.0 } else { x.norm() * d })
                .sum();
            lost = lost.min(self.norm_bound * vn + yn);
            if self.isometric {
                let guard = 2.0 * yn * round + 2.0 * (v.len().max(y.len()) as f64) * eps * (vn * vn + yn * yn);
                let gap = (vn * vn - yn * yn).max(0.0) + guard;
                lost = lost.min(gap.sqrt());
            }
            delta.push(self.norm_bound * block.delta[j] + lost + round);
        }
        ProbeBlock::from_parts(self.n, rows, block.cols, data, delta)
    }
}
