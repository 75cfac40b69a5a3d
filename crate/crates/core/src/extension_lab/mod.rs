//! Extensions of the shift representation by commuting isometries, and the
//! experiments built on them.

mod experiments;
mod report;
mod symbol;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_core::TruncatedOperator;

pub use experiments::{
    shift_extension, thm32_experiment, thm51_experiment, thm52_construct, Thm51Report, Thm52Construction,
    PROPERNESS_GRID, PROPERNESS_THRESHOLD,
};
pub use report::ExperimentReport;
pub use symbol::{
    boundary_values, extract_symbol, hankel_matrix, hankel_rank, shift_commutator, tail_l1_estimate, ExtractedSymbol,
    RankProfile, COMMUTE_TOL, HANKEL_REL_TOL, UNIMODULAR_GRID, UNIMODULAR_TOL,
};

/// The shift realization `π` together with the added operators.
#[derive(Debug, Clone)]
pub struct ExtensionCandidate {
    pub base: TruncatedOperator,
    pub added: Vec<TruncatedOperator>,
}

impl ExtensionCandidate {
    pub fn new(base: TruncatedOperator, added: Vec<TruncatedOperator>) -> Result<Self> {
        if let Some(t) = added.iter().find(|t| t.n() != base.n()) {
            return Err(Error::SizeMismatch(format!(
                "added operator has size {}, base has {}",
                t.n(),
                base.n()
            )));
        }
        Ok(Self { base, added })
    }

    /// `π(1)` is the `N`-section of the shift.
    pub fn over_shift(n: usize, added: Vec<TruncatedOperator>) -> Result<Self> {
        Self::new(TruncatedOperator::shift_matrix(n), added)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResidual {
    pub operator: usize,
    /// `isometry` or `commutes_pi{i}`.
    pub condition: String,
    pub residual: f64,
    pub allowance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionValidation {
    pub pass: bool,
    pub conditions: Vec<ConditionResidual>,
}

/// Each added `T` must be an isometry on its probe columns and commute with
/// `π(i)` for `i = 1, 2, 3`.
pub fn validate_extension(cand: &ExtensionCandidate, tol: f64) -> Result<ExtensionValidation> {
    let mut powers = vec![cand.base.clone()];
    for _ in 1..3 {
        let next = powers.last().expect("nonempty").compose(&cand.base)?;
        powers.push(next);
    }
    let mut conditions = Vec::new();
    for (idx, t) in cand.added.iter().enumerate() {
        let eps = t.tail_bound();
        let allowance = tol + 2.0 * eps + eps * eps;
        let residual = t.isometry_defect()?;
        conditions.push(ConditionResidual {
            operator: idx,
            condition: "isometry".into(),
            residual,
            allowance,
            pass: residual < allowance,
        });
        for (i, p) in powers.iter().enumerate() {
            let pt = p.compose(t)?;
            let tp = t.compose(p)?;
            let residual = pt.probe_distance(&tp)?;
            let allowance = tol + pt.tail_bound() + tp.tail_bound();
            conditions.push(ConditionResidual {
                operator: idx,
                condition: format!("commutes_pi{}", i + 1),
                residual,
                allowance,
                pass: residual < allowance,
            });
        }
    }
    Ok(ExtensionValidation {
        pass: conditions.iter().all(|c| c.pass),
        conditions,
    })
}
