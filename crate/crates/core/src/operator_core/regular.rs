//! Regular isometric representation of a numerical semigroup `S ⊂ Z₊` on
//! `l²(S)`: `(π(i) f)(j) = f(k)` when `j = i + k` with `k ∈ S`, else 0.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Losses, Structure, TruncatedOperator};
use crate::error::{Error, Result};

/// The additive semigroup generated by `generators` (with 0), with membership
/// of every `j <= bound` precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupSpec {
    generators: Vec<u64>,
    bound: u64,
    members: Vec<u64>,
}

impl SemigroupSpec {
    pub fn new(generators: &[u64], bound: u64) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidSemigroup("no generators".into()));
        }
        if let Some(&g) = generators.iter().find(|&&g| g == 0) {
            return Err(Error::InvalidSemigroup(format!(
                "generator {g} must be a positive integer"
            )));
        }
        let mut gens = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let len = usize::try_from(bound)
            .ok()
            .and_then(|b| b.checked_add(1))
            .ok_or_else(|| Error::InvalidSemigroup(format!("bound {bound} is too large")))?;
        let mut table = vec![false; len];
        table[0] = true;
        for j in 1..len {
            table[j] = gens.iter().any(|&g| (g as usize) <= j && table[j - g as usize]);
        }
        let members = (0..len as u64).filter(|&j| table[j as usize]).collect();
        Ok(Self {
            generators: gens,
            bound,
            members,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Members `<= bound`, ascending.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn contains(&self, j: u64) -> bool {
        self.members.binary_search(&j).is_ok()
    }
}

/// `π(i)` on the first `n` basis vectors `δ_j`, `j ∈ S` ascending.
pub fn regular_rep(spec: &SemigroupSpec, i: u64, n: usize) -> Result<TruncatedOperator> {
    if i > spec.bound || !spec.contains(i) {
        return Err(Error::NotAMember(i));
    }
    if n == 0 || n > spec.members.len() {
        return Err(Error::BoundTooSmall {
            bound: spec.bound,
            needed: n,
        });
    }
    let basis = &spec.members[..n];
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut forward = vec![0.0; n];
    for (col, &k) in basis.iter().enumerate() {
        match basis.binary_search(&(k + i)) {
            Ok(row) => {
                m[(row, col)] = Complex64::new(1.0, 0.0);
            }
            Err(_) => forward[col] = 1.0,
        }
    }
    // π(i)* only moves toward smaller members, so the adjoint stays inside.
    Ok(TruncatedOperator::exact(
        m,
        Losses {
            forward,
            adjoint: vec![0.0; n],
        },
        1.0,
        true,
        false,
        Structure::General,
    ))
}
