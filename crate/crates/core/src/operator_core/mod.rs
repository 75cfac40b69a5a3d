//! Finite sections `P_N A P_N` of operators on H² (and H² ⊕ H², l²(S)).
//!
//! Every operator remembers how far its matrix can be trusted. Exact
//! sections of a known operator `A` keep, per column `j`, bounds on the mass
//! `‖(1 - P_N) A e_j‖` and `‖(1 - P_N) A* e_j‖` that falls outside the window.
//! The probe dimension `K` and tail bound `ε` are read off these profiles:
//! for `j < K`, `‖M e_j - A e_j‖ <= ε`.
//!
//! Products that are no longer exact sections (for instance `S* S`, whose
//! last column is wrong) fall back to banded bookkeeping of `(K, ε)` only.

mod action;
mod dump;
mod regular;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inner_function::InnerSymbol;

pub use action::{LetterKernel, ProbeBlock};
pub use dump::{read_dump, write_dump, DumpHeader};
pub use regular::{regular_rep, SemigroupSpec};

/// Relative singular value threshold of the numerical kernel.
pub const KERNEL_REL_TOL: f64 = 1e-8;
/// Smallest nonzero tail bound assigned to a symbol section.
pub const MIN_TAIL_BOUND: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// How the matrix was produced, used to pick fast application kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    General,
    /// `M[j][k] = c[j - k]` for `j >= k`.
    LowerToeplitz(Vec<Complex64>),
    /// Adjoint of a lower Toeplitz section: `M[j][k] = conj(c[k - j])`.
    UpperToeplitz(Vec<Complex64>),
}

/// Per-column mass lost by the section, forward and adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Losses {
    pub forward: Vec<f64>,
    pub adjoint: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    matrix: DMatrix<Complex64>,
    probe_dim: usize,
    tail_bound: f64,
    norm_bound: f64,
    band: (isize, isize),
    losses: Option<Losses>,
    isometric: bool,
    coisometric: bool,
    structure: Structure,
}

/// Numerical kernel: dimension and an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub dimension: usize,
    pub basis: Vec<DVector<Complex64>>,
    pub singular_values: Vec<f64>,
}

fn observed_band(m: &DMatrix<Complex64>) -> (isize, isize) {
    let mut lo = isize::MAX;
    let mut hi = isize::MIN;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != ZERO {
                let d = i as isize - j as isize;
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
    }
    if lo > hi {
        (0, 0)
    } else {
        (lo, hi)
    }
}

/// `(K, ε)` from a forward loss profile.
fn derive_probe(loss: &[f64]) -> (usize, f64) {
    let n = loss.len();
    if loss.iter().all(|&l| l == 0.0) {
        return (n, 0.0);
    }
    let mid = loss[(n - 1) / 2];
    let eps = if mid == 0.0 { 0.0 } else { mid.max(MIN_TAIL_BOUND) };
    let k = loss.iter().take_while(|&&l| l <= eps).count();
    (k, eps)
}

fn lower_toeplitz_matrix(c: &[Complex64]) -> DMatrix<Complex64> {
    let n = c.len();
    DMatrix::from_fn(n, n, |j, k| if j >= k { c[j - k] } else { ZERO })
}

fn convolve_truncated(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![ZERO; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().take(n - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Column lists of the nonzero entries, if the matrix is sparse enough to pay off.
pub(crate) fn sparse_columns(m: &DMatrix<Complex64>) -> Option<Vec<Vec<(usize, Complex64)>>> {
    let limit = (m.nrows() * m.ncols()) / 8;
    let mut count = 0usize;
    let mut cols = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let mut col = Vec::new();
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != ZERO {
                col.push((i, v));
                count += 1;
                if count > limit {
                    return None;
                }
            }
        }
        cols.push(col);
    }
    Some(cols)
}

fn multiply(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    if let Some(bs) = sparse_columns(b) {
        let mut out = DMatrix::from_element(n, b.ncols(), ZERO);
        for (j, col) in bs.iter().enumerate() {
            for &(i, bij) in col {
                for r in 0..n {
                    out[(r, j)] += a[(r, i)] * bij;
                }
            }
        }
        return out;
    }
    if let Some(as_) = sparse_columns(a) {
        let mut out = DMatrix::from_element(n, b.ncols(), ZERO);
        for j in 0..b.ncols() {
            for (i, col) in as_.iter().enumerate() {
                let bij = b[(i, j)];
                if bij == ZERO {
                    continue;
                }
                for &(r, air) in col {
                    out[(r, j)] += air * bij;
                }
            }
        }
        return out;
    }
    a * b
}

/// Squared column norms of `G - I`, `G` the Gram matrix of the first `k`
/// columns of the lower Toeplitz section with first column `c`. Uses
/// `G[i+1][j+1] = G[i][j] - conj(c[N-1-i]) c[N-1-j]` along each diagonal.
fn toeplitz_gram_defect(c: &[Complex64], k: usize) -> Vec<f64> {
    let n = c.len();
    let mut sums = vec![0.0; k];
    for d in 0..k {
        let mut g: Complex64 = (d..n).map(|m| c[m - d].conj() * c[m]).sum::<Complex64>().conj();
        for i in 0..k - d {
            let j = i + d;
            if i > 0 {
                g -= c[n - i].conj() * c[n - j];
            }
            let e = if d == 0 { (g - ONE).norm_sqr() } else { g.norm_sqr() };
            sums[j] += e;
            if d > 0 {
                sums[i] += e;
            }
        }
    }
    sums
}

/// Same as [`toeplitz_gram_defect`] for a sparse matrix given by columns.
fn sparse_gram_defect(cols: &[Vec<(usize, Complex64)>], n: usize, k: usize) -> Vec<f64> {
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for (j, col) in cols.iter().take(k).enumerate() {
        for &(r, v) in col {
            rows[r].push((j, v));
        }
    }
    let mut acc = vec![ZERO; k];
    let mut sums = vec![0.0; k];
    for (j, col) in cols.iter().take(k).enumerate() {
        acc.iter_mut().for_each(|a| *a = ZERO);
        for &(r, v) in col {
            for &(i, u) in &rows[r] {
                acc[i] += u.conj() * v;
            }
        }
        acc[j] -= ONE;
        sums[j] = acc.iter().map(|a| a.norm_sqr()).sum();
    }
    sums
}

/// `|M|^T v`, i.e. `out[j] = Σ_i |M[i][j]| v[i]`.
fn abs_transpose_times(m: &DMatrix<Complex64>, v: &[f64]) -> Vec<f64> {
    (0..m.ncols())
        .map(|j| {
            let mut s = 0.0;
            for (i, &vi) in v.iter().enumerate() {
                if vi != 0.0 {
                    s += m[(i, j)].norm() * vi;
                }
            }
            s
        })
        .collect()
}

/// `|M| v`, i.e. `out[i] = Σ_j |M[i][j]| v[j]`.
fn abs_times(m: &DMatrix<Complex64>, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.nrows()];
    for (j, &vj) in v.iter().enumerate() {
        if vj == 0.0 {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += m[(i, j)].norm() * vj;
        }
    }
    out
}

impl TruncatedOperator {
    fn exact(
        matrix: DMatrix<Complex64>,
        losses: Losses,
        norm_bound: f64,
        isometric: bool,
        coisometric: bool,
        structure: Structure,
    ) -> Self {
        let (probe_dim, tail_bound) = derive_probe(&losses.forward);
        let band = observed_band(&matrix);
        Self {
            matrix,
            probe_dim,
            tail_bound,
            norm_bound,
            band,
            losses: Some(losses),
            isometric,
            coisometric,
            structure,
        }
    }

    /// An operator on `C^N` taken at face value: nothing lies outside the window.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::SizeMismatch(format!(
                "expected a nonempty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        let norm_bound = matrix.norm();
        Ok(Self::exact(
            matrix,
            Losses {
                forward: vec![0.0; n],
                adjoint: vec![0.0; n],
            },
            norm_bound,
            false,
            false,
            Structure::General,
        ))
    }

    /// Matrix with explicit metadata and no exactness claims.
    pub fn with_probe(matrix: DMatrix<Complex64>, probe_dim: usize, tail_bound: f64) -> Result<Self> {
        let mut op = Self::from_matrix(matrix)?;
        op.losses = None;
        op.probe_dim = probe_dim.min(op.n());
        op.tail_bound = tail_bound;
        Ok(op)
    }

    /// Section of the unilateral shift `e_k -> e_{k+1}`.
    ///
    /// # Panics
    /// If `n < 2`.
    pub fn shift_matrix(n: usize) -> Self {
        assert!(n >= 2, "shift_matrix needs N >= 2");
        let mut c = vec![ZERO; n];
        c[1] = ONE;
        let mut forward = vec![0.0; n];
        forward[n - 1] = 1.0;
        Self::exact(
            lower_toeplitz_matrix(&c),
            Losses {
                forward,
                adjoint: vec![0.0; n],
            },
            1.0,
            true,
            false,
            Structure::LowerToeplitz(c),
        )
    }

    /// Section of the multiplication operator `T_Φ f = Φ f`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn mult_operator(sym: &InnerSymbol, n: usize) -> Self {
        assert!(n >= 1, "mult_operator needs N >= 1");
        let c = sym.fourier_coeffs(n - 1);
        let tails = sym.tail_l2_profile(n);
        let forward: Vec<f64> = (0..n).map(|j| tails[n - 1 - j]).collect();
        Self::exact(
            lower_toeplitz_matrix(&c),
            Losses {
                forward,
                adjoint: vec![0.0; n],
            },
            1.0,
            true,
            false,
            Structure::LowerToeplitz(c),
        )
    }

    /// Lower Toeplitz section with first column `c` (zero-padded or cut to
    /// `n`), trusted on `probe_dim` columns up to `tail_bound`.
    pub fn from_symbol_coefficients(c: &[Complex64], n: usize, probe_dim: usize, tail_bound: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::SizeMismatch("empty section".into()));
        }
        let mut col = vec![ZERO; n];
        for (dst, &src) in col.iter_mut().zip(c) {
            *dst = src;
        }
        let matrix = lower_toeplitz_matrix(&col);
        let band = observed_band(&matrix);
        Ok(Self {
            matrix,
            probe_dim: probe_dim.min(n),
            tail_bound,
            norm_bound: col.iter().map(|z| z.norm()).sum::<f64>().max(1.0),
            band,
            losses: None,
            isometric: false,
            coisometric: false,
            structure: Structure::LowerToeplitz(col),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut c = vec![ZERO; n];
        c[0] = ONE;
        Self::exact(
            DMatrix::identity(n, n),
            Losses {
                forward: vec![0.0; n],
                adjoint: vec![0.0; n],
            },
            1.0,
            true,
            true,
            Structure::LowerToeplitz(c),
        )
    }

    /// The unitary exchanging the two summands of an interleaved direct sum,
    /// `h¹_k <-> h²_k`.
    pub fn swap_unitary(n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::SizeMismatch(format!("swap unitary needs an even size, got {n}")));
        }
        let mut m = DMatrix::from_element(n, n, ZERO);
        for k in 0..n / 2 {
            m[(2 * k, 2 * k + 1)] = ONE;
            m[(2 * k + 1, 2 * k)] = ONE;
        }
        Ok(Self::exact(
            m,
            Losses {
                forward: vec![0.0; n],
                adjoint: vec![0.0; n],
            },
            1.0,
            true,
            true,
            Structure::General,
        ))
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// Observed band `(lo, hi)`: entry `(i, j)` is zero unless `lo <= i - j <= hi`.
    pub fn band(&self) -> (isize, isize) {
        self.band
    }

    pub fn is_exact(&self) -> bool {
        self.losses.is_some()
    }

    pub fn losses(&self) -> Option<&Losses> {
        self.losses.as_ref()
    }

    pub fn is_isometric(&self) -> bool {
        self.isometric
    }

    pub fn is_coisometric(&self) -> bool {
        self.coisometric
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// How many rows a single application can push the support down by,
    /// counting coefficients above `eps`. `None` when no finite reach exists
    /// inside the window.
    pub fn reach(&self, eps: f64) -> Option<usize> {
        match (&self.structure, &self.losses) {
            (Structure::LowerToeplitz(_), Some(losses)) => {
                let n = self.n();
                // tail(d) = forward[n - 1 - d]
                (0..n).find(|&d| losses.forward[n - 1 - d] <= eps)
            }
            (Structure::UpperToeplitz(_), _) => Some(0),
            _ => Some(self.band.1.max(0) as usize),
        }
    }

    pub fn adjoint(&self) -> Self {
        let matrix = self.matrix.adjoint();
        let structure = match &self.structure {
            Structure::General => Structure::General,
            Structure::LowerToeplitz(c) => Structure::UpperToeplitz(c.clone()),
            Structure::UpperToeplitz(c) => Structure::LowerToeplitz(c.clone()),
        };
        match &self.losses {
            Some(l) => Self::exact(
                matrix,
                Losses {
                    forward: l.adjoint.clone(),
                    adjoint: l.forward.clone(),
                },
                self.norm_bound,
                self.coisometric,
                self.isometric,
                structure,
            ),
            None => {
                let n = self.n() as isize;
                let k = (self.probe_dim as isize + self.band.0).clamp(0, n) as usize;
                Self {
                    matrix,
                    probe_dim: k,
                    tail_bound: self.tail_bound * (self.probe_dim as f64).sqrt(),
                    norm_bound: self.norm_bound,
                    band: (-self.band.1, -self.band.0),
                    losses: None,
                    isometric: self.coisometric,
                    coisometric: self.isometric,
                    structure,
                }
            }
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.n(),
                self.n(),
                other.n(),
                other.n()
            )));
        }
        let (matrix, structure) = match (&self.structure, &other.structure) {
            (Structure::LowerToeplitz(a), Structure::LowerToeplitz(b)) => {
                let c = convolve_truncated(a, b);
                (lower_toeplitz_matrix(&c), Structure::LowerToeplitz(c))
            }
            (Structure::UpperToeplitz(a), Structure::UpperToeplitz(b)) => {
                let c = convolve_truncated(a, b);
                (lower_toeplitz_matrix(&c).adjoint(), Structure::UpperToeplitz(c))
            }
            _ => (multiply(&self.matrix, &other.matrix), Structure::General),
        };
        let norm_bound = self.norm_bound * other.norm_bound;
        let isometric = self.isometric && other.isometric;
        let coisometric = self.coisometric && other.coisometric;
        if let (Some(la), Some(lb)) = (&self.losses, &other.losses) {
            let a_keeps_tail = la.adjoint.iter().all(|&l| l == 0.0);
            let b_keeps_window = lb.forward.iter().all(|&l| l == 0.0);
            // P A P B P = P A B P iff P A (1 - P) B P = 0.
            if a_keeps_tail || b_keeps_window {
                let mut forward = abs_transpose_times(&other.matrix, &la.forward);
                for (f, &lbj) in forward.iter_mut().zip(&lb.forward) {
                    *f += self.norm_bound * lbj;
                }
                // (AB)* e_j = B* A* e_j; |A*|^T = |A| as a row sum.
                let mut adjoint = abs_times(&self.matrix, &lb.adjoint);
                for (a, &laj) in adjoint.iter_mut().zip(&la.adjoint) {
                    *a += other.norm_bound * laj;
                }
                return Ok(Self::exact(
                    matrix,
                    Losses { forward, adjoint },
                    norm_bound,
                    isometric,
                    coisometric,
                    structure,
                ));
            }
        }
        let reach = other.band.1.max(0) as usize;
        let probe_dim = other.probe_dim.min(self.probe_dim.saturating_sub(reach));
        let tail_bound = self.tail_bound * other.norm_bound + (self.norm_bound + self.tail_bound) * other.tail_bound;
        let band = observed_band(&matrix);
        Ok(Self {
            matrix,
            probe_dim,
            tail_bound,
            norm_bound,
            band,
            losses: None,
            isometric,
            coisometric,
            structure,
        })
    }

    /// `A ⊕ B` on the interleaved basis `(h¹_0, h²_0, h¹_1, h²_1, …)`.
    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::SizeMismatch(format!(
                "direct sum of sizes {} and {}",
                a.n(),
                b.n()
            )));
        }
        let n = a.n();
        let mut m = DMatrix::from_element(2 * n, 2 * n, ZERO);
        for j in 0..n {
            for i in 0..n {
                m[(2 * i, 2 * j)] = a.matrix[(i, j)];
                m[(2 * i + 1, 2 * j + 1)] = b.matrix[(i, j)];
            }
        }
        let norm_bound = a.norm_bound.max(b.norm_bound);
        let isometric = a.isometric && b.isometric;
        let coisometric = a.coisometric && b.coisometric;
        if let (Some(la), Some(lb)) = (&a.losses, &b.losses) {
            let interleave =
                |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).flat_map(|(&p, &q)| [p, q]).collect() };
            return Ok(Self::exact(
                m,
                Losses {
                    forward: interleave(&la.forward, &lb.forward),
                    adjoint: interleave(&la.adjoint, &lb.adjoint),
                },
                norm_bound,
                isometric,
                coisometric,
                Structure::General,
            ));
        }
        let band = observed_band(&m);
        Ok(Self {
            matrix: m,
            probe_dim: 2 * a.probe_dim.min(b.probe_dim),
            tail_bound: a.tail_bound.max(b.tail_bound),
            norm_bound,
            band,
            losses: None,
            isometric,
            coisometric,
            structure: Structure::General,
        })
    }

    /// `max_{j < K} ‖(M_A - M_B) e_j‖` over the shared probe columns.
    pub fn probe_distance(&self, other: &Self) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(format!(
                "cannot compare sizes {} and {}",
                self.n(),
                other.n()
            )));
        }
        let k = self.probe_dim.min(other.probe_dim);
        if k == 0 {
            return Err(Error::ProbeExhausted("no certified probe column is shared".into()));
        }
        let mut worst: f64 = 0.0;
        for j in 0..k {
            let d = (self.matrix.column(j) - other.matrix.column(j)).norm();
            worst = worst.max(d);
        }
        Ok(worst)
    }

    pub fn approx_equal(&self, other: &Self, tol: f64) -> Result<bool> {
        let d = self.probe_distance(other)?;
        Ok(d < tol + self.tail_bound + other.tail_bound)
    }

    /// `max_{j < K}` column norm of `M_K* M_K - I`.
    pub fn isometry_defect(&self) -> Result<f64> {
        let k = self.probe_dim;
        if k == 0 {
            return Err(Error::ProbeExhausted("probe dimension is 0".into()));
        }
        let sums = match &self.structure {
            Structure::LowerToeplitz(c) => toeplitz_gram_defect(c, k),
            _ => match sparse_columns(&self.matrix) {
                Some(cols) => sparse_gram_defect(&cols, self.n(), k),
                None => {
                    let mk = self.matrix.columns(0, k);
                    let mut gram = mk.adjoint() * mk;
                    for i in 0..k {
                        gram[(i, i)] -= ONE;
                    }
                    (0..k).map(|j| gram.column(j).norm_squared()).collect()
                }
            },
        };
        Ok(sums.into_iter().fold(0.0, f64::max).sqrt())
    }

    pub fn is_isometry_on_probe(&self, tol: f64) -> Result<bool> {
        let eps = self.tail_bound;
        Ok(self.isometry_defect()? < tol + 2.0 * eps + eps * eps)
    }

    /// Numerical kernel of `A*` restricted to the adjoint's certified columns.
    pub fn kernel_of_adjoint(&self, rel_tol: f64) -> Result<Kernel> {
        let adj = self.adjoint();
        let k = adj.probe_dim;
        if k == 0 {
            return Err(Error::ProbeExhausted("adjoint has no certified column".into()));
        }
        let block = adj.matrix.columns(0, k).into_owned();
        let svd = block.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
        let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
        let smax = sigma.iter().copied().fold(0.0, f64::max);
        let mut basis = Vec::new();
        for (r, &s) in sigma.iter().enumerate() {
            if s < rel_tol * smax || smax == 0.0 {
                let mut v = DVector::from_element(self.n(), ZERO);
                for c in 0..k {
                    v[c] = v_t[(r, c)].conj();
                }
                basis.push(v);
            }
        }
        let mut sorted = sigma;
        sorted.sort_by(|a, b| b.total_cmp(a));
        Ok(Kernel {
            dimension: basis.len(),
            basis,
            singular_values: sorted,
        })
    }

    /// Column `j` of the matrix.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.matrix.column(j).iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_function::InnerSymbol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_pattern() {
        let s = TruncatedOperator::shift_matrix(3);
        let m = s.matrix();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if (i, j) == (1, 0) || (i, j) == (2, 1) {
                    ONE
                } else {
                    ZERO
                };
                assert_eq!(m[(i, j)], expect);
            }
        }
        assert_eq!(s.probe_dim(), 2);
        assert_eq!(s.tail_bound(), 0.0);
        let s = TruncatedOperator::shift_matrix(16);
        assert_eq!(s.column(0)[1], ONE);
    }

    #[test]
    fn shift_star_shift_is_identity_off_the_corner() {
        let n = 12;
        let s = TruncatedOperator::shift_matrix(n);
        let p = s.adjoint().compose(&s).unwrap();
        assert!(!p.is_exact());
        assert_eq!(p.probe_dim(), n - 1);
        assert!(p.approx_equal(&TruncatedOperator::identity(n), 1e-14).unwrap());
        assert_eq!(p.matrix()[(n - 1, n - 1)], ZERO);
    }

    #[test]
    fn monomial_section_is_the_shift() {
        let n = 20;
        let s = TruncatedOperator::shift_matrix(n);
        let t = TruncatedOperator::mult_operator(&InnerSymbol::monomial(1), n);
        assert_eq!(s.matrix(), t.matrix());
        assert!(s.approx_equal(&t, 1e-14).unwrap());
    }

    #[test]
    fn blaschke_section_first_column() {
        let sym = InnerSymbol::blaschke_real(&[0.5]).unwrap();
        let t = TruncatedOperator::mult_operator(&sym, 3);
        let col = t.column(0);
        for (got, want) in col.iter().zip([0.5, -0.75, -0.375]) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn section_columns_are_contractive() {
        let sym = InnerSymbol::blaschke(&[c(0.6, 0.2), c(-0.3, 0.5)]).unwrap();
        let mut prev = 0.0;
        for n in [8, 32, 128] {
            let t = TruncatedOperator::mult_operator(&sym, n);
            let norm0 = t.matrix().column(0).norm_squared();
            for j in 0..n {
                assert!(t.matrix().column(j).norm_squared() <= 1.0 + 1e-12);
            }
            assert!(norm0 >= prev);
            prev = norm0;
        }
        assert!((prev - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_is_an_involution() {
        let sym = InnerSymbol::blaschke_real(&[0.5, -0.2]).unwrap();
        let t = TruncatedOperator::mult_operator(&sym, 24);
        assert_eq!(t.adjoint().adjoint(), t);
        let s = TruncatedOperator::shift_matrix(9);
        let p = s.adjoint().compose(&s).unwrap();
        assert_eq!(p.adjoint().adjoint().matrix(), p.matrix());
    }

    #[test]
    fn analytic_products_are_exact() {
        let u = InnerSymbol::blaschke_real(&[0.5]).unwrap();
        let v = InnerSymbol::blaschke(&[c(0.0, -0.3)]).unwrap();
        let n = 64;
        let tu = TruncatedOperator::mult_operator(&u, n);
        let tv = TruncatedOperator::mult_operator(&v, n);
        let prod = tu.compose(&tv).unwrap();
        let direct = TruncatedOperator::mult_operator(&u.multiply(&v), n);
        assert!(prod.is_exact());
        let diff = (prod.matrix() - direct.matrix()).camax();
        assert!(diff < 1e-14, "{diff}");
    }

    #[test]
    fn kernels_of_adjoints() {
        let s = TruncatedOperator::shift_matrix(16);
        let k = s.kernel_of_adjoint(KERNEL_REL_TOL).unwrap();
        assert_eq!(k.dimension, 1);
        assert!((k.basis[0][0].norm() - 1.0).abs() < 1e-12);
        let ss = TruncatedOperator::direct_sum(&s, &s).unwrap();
        assert_eq!(ss.kernel_of_adjoint(KERNEL_REL_TOL).unwrap().dimension, 2);
    }

    #[test]
    fn direct_sum_commutes_with_swap() {
        let sym = InnerSymbol::blaschke_real(&[0.4]).unwrap();
        let t = TruncatedOperator::mult_operator(&sym, 16);
        let d = TruncatedOperator::direct_sum(&t, &t).unwrap();
        let u = TruncatedOperator::swap_unitary(32).unwrap();
        let du = d.compose(&u).unwrap();
        let ud = u.compose(&d).unwrap();
        assert!((du.matrix() - ud.matrix()).camax() < 1e-12);
        assert!(TruncatedOperator::swap_unitary(7).is_err());
        let other = TruncatedOperator::shift_matrix(8);
        assert!(matches!(
            TruncatedOperator::direct_sum(&t, &other),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn isometry_checks() {
        let s = TruncatedOperator::shift_matrix(10);
        assert!(s.is_isometry_on_probe(1e-12).unwrap());
        assert!(!s.adjoint().is_isometry_on_probe(1e-12).unwrap());
    }

    #[test]
    fn reach_of_sections() {
        let s = TruncatedOperator::shift_matrix(64);
        assert_eq!(s.reach(1e-9), Some(1));
        let t = TruncatedOperator::mult_operator(&InnerSymbol::monomial(3), 64);
        assert_eq!(t.reach(1e-9), Some(3));
        let b = TruncatedOperator::mult_operator(&InnerSymbol::blaschke_real(&[0.5]).unwrap(), 256);
        let r = b.reach(1e-9).unwrap();
        assert!((28..=40).contains(&r), "{r}");
        assert_eq!(b.adjoint().reach(1e-9), Some(0));
    }

    #[test]
    fn structured_isometry_defect_matches_dense_gram() {
        let dense = |op: &TruncatedOperator| {
            let k = op.probe_dim();
            let mk = op.matrix().columns(0, k);
            let mut g = mk.adjoint() * mk;
            for i in 0..k {
                g[(i, i)] -= ONE;
            }
            (0..k).map(|j| g.column(j).norm()).fold(0.0, f64::max)
        };
        let sym = InnerSymbol::blaschke(&[c(0.6, 0.2), c(-0.3, 0.5)]).unwrap();
        let t = TruncatedOperator::mult_operator(&sym, 40);
        let perturbed = TruncatedOperator::with_probe(t.matrix() * c(1.1, 0.0), 30, 0.0).unwrap();
        let u = TruncatedOperator::swap_unitary(40).unwrap();
        let p = TruncatedOperator::shift_matrix(40).compose(&u).unwrap();
        let half = TruncatedOperator::shift_matrix(20);
        let sum = TruncatedOperator::direct_sum(&half, &half).unwrap();
        for op in [t.clone(), t.adjoint(), perturbed, p, sum.adjoint()] {
            assert!((op.isometry_defect().unwrap() - dense(&op)).abs() < 1e-13);
        }
    }
}
