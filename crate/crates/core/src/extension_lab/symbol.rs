use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_core::TruncatedOperator;

/// Default grid for the unimodularity test.
pub const UNIMODULAR_GRID: usize = 1024;
/// Base tolerance of the unimodularity test, widened by the observed tail.
pub const UNIMODULAR_TOL: f64 = 1e-8;
/// Commutation with the shift required before extraction.
pub const COMMUTE_TOL: f64 = 1e-10;
/// Default relative threshold of the Hankel rank.
pub const HANKEL_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedSymbol {
    /// `c_0, …, c_D`, read off `T e_0`.
    pub coefficients: Vec<Complex64>,
    /// Probe distance between `T` and the section rebuilt from the coefficients.
    pub round_trip_error: f64,
    pub shift_commutator: f64,
    pub grid: usize,
    pub max_modulus_deviation: f64,
    pub unimodular_tolerance: f64,
    pub inner: bool,
}

/// `‖(T S - S T) e_j‖` over the shared probe columns.
pub fn shift_commutator(t: &TruncatedOperator) -> Result<f64> {
    let s = TruncatedOperator::shift_matrix(t.n());
    let ts = t.compose(&s)?;
    let st = s.compose(t)?;
    let d = ts.probe_distance(&st)?;
    Ok((d - ts.tail_bound() - st.tail_bound()).max(0.0))
}

/// Values of `Σ_{k <= D} c_k e^{ikθ}` at `θ_m = 2πm / grid`.
pub fn boundary_values(coeffs: &[Complex64], grid: usize) -> Vec<Complex64> {
    let mut bins = vec![Complex64::new(0.0, 0.0); grid];
    for (k, &c) in coeffs.iter().enumerate() {
        bins[k % grid] += c;
    }
    FftPlanner::new().plan_fft_inverse(grid).process(&mut bins);
    bins
}

/// l1 mass beyond the last coefficient, extrapolated geometrically from the
/// ratio of the last two quarter-length blocks; infinite when they do not
/// decay.
pub fn tail_l1_estimate(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len();
    let len = n / 4;
    if len == 0 {
        return f64::INFINITY;
    }
    let a: f64 = coeffs[n - 2 * len..n - len].iter().map(|c| c.norm()).sum();
    let b: f64 = coeffs[n - len..].iter().map(|c| c.norm()).sum();
    if b == 0.0 {
        return 0.0;
    }
    let q = b / a;
    if q >= 1.0 {
        f64::INFINITY
    } else {
        b * q / (1.0 - q)
    }
}

/// Recovers the symbol of an operator commuting with the shift.
///
/// `d` is the number of coefficients minus one and is capped at `N - 1`.
pub fn extract_symbol(t: &TruncatedOperator, d: usize, grid: usize) -> Result<ExtractedSymbol> {
    let commutator = shift_commutator(t)?;
    if commutator > COMMUTE_TOL {
        return Err(Error::NotCommuting { residual: commutator });
    }
    let n = t.n();
    let d = d.min(n - 1);
    let coefficients: Vec<Complex64> = t.column(0).into_iter().take(d + 1).collect();
    let rebuilt = TruncatedOperator::from_symbol_coefficients(&coefficients, n, t.probe_dim(), 0.0)?;
    let round_trip_error = t.probe_distance(&rebuilt)?;
    let values = boundary_values(&coefficients, grid);
    let max_modulus_deviation = values.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
    let unimodular_tolerance = UNIMODULAR_TOL + 2.0 * tail_l1_estimate(&coefficients);
    Ok(ExtractedSymbol {
        coefficients,
        round_trip_error,
        shift_commutator: commutator,
        grid,
        max_modulus_deviation,
        unimodular_tolerance,
        inner: max_modulus_deviation <= unimodular_tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankProfile {
    /// Non-increasing.
    pub singular_values: Vec<f64>,
    /// `None` means not finite-rank within the window.
    pub rank: Option<usize>,
    pub window: usize,
    pub rel_tol: f64,
}

impl RankProfile {
    /// `σ_{k+1} / σ_1` (1-based `σ`), zero past the matrix size.
    pub fn ratio(&self, k: usize) -> f64 {
        let s1 = self.singular_values.first().copied().unwrap_or(0.0);
        match self.singular_values.get(k) {
            Some(&s) if s1 > 0.0 => s / s1,
            _ => 0.0,
        }
    }
}

/// Hankel matrix `H[j][k] = c_{j+k+1}`, `j, k < ⌊D/2⌋`, of `c_0..c_D`.
pub fn hankel_matrix(coeffs: &[Complex64], d: usize) -> DMatrix<Complex64> {
    let m = d / 2;
    DMatrix::from_fn(m, m, |j, k| coeffs.get(j + k + 1).copied().unwrap_or_default())
}

/// Numerical rank of the Hankel matrix of `c_0..c_D`, `D = coeffs.len() - 1`.
pub fn hankel_rank(coeffs: &[Complex64], rel_tol: f64) -> Result<RankProfile> {
    let d = coeffs.len().saturating_sub(1);
    if d < 8 {
        return Err(Error::WindowTooSmall(d));
    }
    let h = hankel_matrix(coeffs, d);
    let mut singular_values: Vec<f64> = h.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let s1 = singular_values[0];
    let detected = if s1 == 0.0 {
        0
    } else {
        singular_values
            .iter()
            .position(|&s| s < rel_tol * s1)
            .unwrap_or(singular_values.len())
    };
    Ok(RankProfile {
        singular_values,
        rank: (detected <= d / 4).then_some(detected),
        window: d,
        rel_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_function::InnerSymbol;

    #[test]
    fn shift_symbol_is_z() {
        let s = TruncatedOperator::shift_matrix(64);
        let e = extract_symbol(&s, 63, 256).unwrap();
        assert_eq!(e.coefficients[1], Complex64::new(1.0, 0.0));
        assert!(e
            .coefficients
            .iter()
            .enumerate()
            .all(|(k, c)| k == 1 || c.norm() == 0.0));
        assert!(e.inner);
        assert_eq!(e.round_trip_error, 0.0);
    }

    #[test]
    fn non_commuting_operator_is_rejected() {
        let u = TruncatedOperator::swap_unitary(64).unwrap();
        assert!(matches!(extract_symbol(&u, 32, 128), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn boundary_values_match_direct_sum() {
        let c: Vec<Complex64> = (0..40)
            .map(|k| Complex64::new(0.7f64.powi(k), 0.1 * k as f64))
            .collect();
        let v = boundary_values(&c, 16);
        for (m, got) in v.iter().enumerate() {
            let th = 2.0 * std::f64::consts::PI * m as f64 / 16.0;
            let want: Complex64 = c
                .iter()
                .enumerate()
                .map(|(k, &ck)| ck * Complex64::from_polar(1.0, k as f64 * th))
                .sum();
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn tail_estimate_follows_geometric_decay() {
        let c: Vec<Complex64> = (0..64).map(|k| Complex64::new(0.5f64.powi(k), 0.0)).collect();
        let want: f64 = (64..200).map(|k| 0.5f64.powi(k)).sum();
        let got = tail_l1_estimate(&c);
        assert!((got - want).abs() < 1e-3 * want);
        let flat = vec![Complex64::new(0.1, 0.0); 16];
        assert!(tail_l1_estimate(&flat).is_infinite());
        assert_eq!(
            tail_l1_estimate(&[
                Complex64::new(1.0, 0.0),
                Complex64::default(),
                Complex64::default(),
                Complex64::default()
            ]),
            0.0
        );
    }

    #[test]
    fn monomial_hankel_rank() {
        for n in 1..=3u32 {
            let c = InnerSymbol::monomial(n).fourier_coeffs(32);
            let p = hankel_rank(&c, 1e-8).unwrap();
            assert_eq!(p.rank, Some(n as usize));
        }
        let c = InnerSymbol::identity().fourier_coeffs(32);
        assert_eq!(hankel_rank(&c, 1e-8).unwrap().rank, Some(0));
        assert!(matches!(hankel_rank(&c[..8], 1e-8), Err(Error::WindowTooSmall(7))));
    }

    #[test]
    fn singular_values_are_sorted() {
        let sym = InnerSymbol::blaschke_real(&[0.5, -0.2]).unwrap();
        let p = hankel_rank(&sym.fourier_coeffs(40), 1e-8).unwrap();
        assert!(p.singular_values.windows(2).all(|w| w[0] >= w[1]));
        assert!(p.singular_values.iter().all(|&s| s >= 0.0));
        assert_eq!(p.rank, Some(2));
    }
}
