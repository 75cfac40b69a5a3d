use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner_function::InnerSymbol;
use crate::operator_core::{TruncatedOperator, KERNEL_REL_TOL};
use crate::star_semigroup::{check_inverse, Generator, GeneratorSystem, InverseCheckReport, Verdict};

/// Powers `m, n <= 4` of `s^m s*^n` compared against the added isometry.
pub const PROPERNESS_GRID: usize = 4;
pub const PROPERNESS_THRESHOLD: f64 = 0.1;

/// `{s, t}` with `s` the shift and `t = T_Φ`, declared commuting.
pub fn shift_extension(sym: &InnerSymbol, n: usize) -> Result<GeneratorSystem> {
    if n < 2 {
        return Err(Error::SizeMismatch(format!("truncation N = {n} is below 2")));
    }
    GeneratorSystem::new(
        vec![
            Generator::new("s", TruncatedOperator::shift_matrix(n), true),
            Generator::new("t", TruncatedOperator::mult_operator(sym, n), true),
        ],
        &[("s", "t")],
    )
}

/// The representation `(n, m) ↦ z^n Φ^m` of `Z₊ × Z₊`; non-monomial `Φ`
/// should give a non-inverse semigroup.
pub fn thm32_experiment(sym: &InnerSymbol, l: usize, n: usize, k: usize, tol: f64) -> Result<InverseCheckReport> {
    if sym.is_monomial().is_some() {
        return Err(Error::MonomialSymbol(sym.to_string()));
    }
    check_inverse(&shift_extension(sym, n)?, l, k, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm51Report {
    pub symbol: String,
    pub trivial_extension: bool,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub consistent: bool,
    pub check: InverseCheckReport,
}

/// Inverse exactly when the extension stays inside `Z₊^π`, i.e. `Φ` is a
/// monomial.
pub fn thm51_experiment(sym: &InnerSymbol, l: usize, n: usize, k: usize, tol: f64) -> Result<Thm51Report> {
    let check = check_inverse(&shift_extension(sym, n)?, l, k, tol)?;
    let trivial_extension = sym.is_monomial().is_some();
    let expected = if trivial_extension {
        Verdict::Inverse
    } else {
        Verdict::NotInverse
    };
    Ok(Thm51Report {
        symbol: sym.to_string(),
        trivial_extension,
        verdict: check.verdict,
        expected,
        consistent: check.verdict == expected,
        check,
    })
}

#[derive(Debug, Clone)]
pub struct Thm52Construction {
    /// Generators `s = S ⊕ S` and `t = (S ⊕ S) U`.
    pub system: GeneratorSystem,
    pub kernel_dimension: usize,
    pub commutator_residual: f64,
    /// Probe distance between `t²` and `s²`.
    pub t_squared_distance: f64,
    /// Smallest probe distance from `t` to `s^m s*^n`, `m, n <= 4`.
    pub properness_distance: f64,
    pub properness_grid: usize,
    pub proper: bool,
}

/// A proper inverse extension on `H² ⊕ H²` with `N/2` basis vectors per
/// summand, built from the summand swap `U`.
pub fn thm52_construct(n: usize) -> Result<Thm52Construction> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::SizeMismatch(format!("need an even N >= 8, got {n}")));
    }
    let half = TruncatedOperator::shift_matrix(n / 2);
    let s = TruncatedOperator::direct_sum(&half, &half)?;
    let u = TruncatedOperator::swap_unitary(n)?;
    let t = s.compose(&u)?;

    let kernel_dimension = s.kernel_of_adjoint(KERNEL_REL_TOL)?.dimension;
    let commutator_residual = s.compose(&t)?.probe_distance(&t.compose(&s)?)?;
    let t_squared_distance = t.compose(&t)?.probe_distance(&s.compose(&s)?)?;

    let s_star = s.adjoint();
    let mut left = TruncatedOperator::identity(n);
    let mut properness_distance = f64::INFINITY;
    for _ in 0..=PROPERNESS_GRID {
        let mut word = left.clone();
        for _ in 0..=PROPERNESS_GRID {
            properness_distance = properness_distance.min(t.probe_distance(&word)?);
            word = word.compose(&s_star)?;
        }
        left = left.compose(&s)?;
    }

    let system = GeneratorSystem::new(
        vec![Generator::new("s", s, true), Generator::new("t", t, true)],
        &[("s", "t")],
    )?;
    Ok(Thm52Construction {
        system,
        kernel_dimension,
        commutator_residual,
        t_squared_distance,
        properness_distance,
        properness_grid: PROPERNESS_GRID,
        proper: properness_distance > PROPERNESS_THRESHOLD,
    })
}
