//! Deciding whether the involutive semigroup generated by a system is
//! inverse, within a finite ball.
//!
//! A `*`-closed semigroup of operators is inverse exactly when every element
//! is a partial isometry (`x x* x = x`) and all idempotents `x x*` commute.
//! Both conditions are tested on the probe columns, element by element in
//! shortlex order; the first certified failure is the witness. Every
//! residual `r` is compared together with its truncation bound `δ`: a
//! failure needs `r - δ > 100 tol`, a pass needs `r + δ < tol`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ball::{enumerate_ball, BallBuilder};
use super::system::GeneratorSystem;
use super::word::StarWord;
use crate::error::{Error, Result};
use crate::operator_core::ProbeBlock;

/// Failures need residuals this many times above the tolerance.
pub const DECISION_MARGIN: f64 = 100.0;
/// Largest ball accepted by the exhaustive unique-inverse count.
pub const EXHAUSTIVE_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inverse,
    NotInverse,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Inverse => "inverse",
            Verdict::NotInverse => "not_inverse",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `x x* x != x`.
    PartialIsometry,
    /// `x x*` does not commute with the partner's idempotent.
    IdempotentsCommute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub ball_size: usize,
    /// Pairs whose comparison could not be decided.
    pub undecided_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseCheckReport {
    pub verdict: Verdict,
    /// Backed by the bicyclic normal form rather than the window alone.
    pub structural: bool,
    pub witness: Option<String>,
    pub witness_length: Option<usize>,
    pub witness_kind: Option<WitnessKind>,
    pub partner: Option<String>,
    pub residual: f64,
    pub error_bound: f64,
    pub ball_size: usize,
    pub idempotents: usize,
    pub max_length: usize,
    pub requested_length: usize,
    pub truncation: usize,
    pub probe_dim: usize,
    pub tol: f64,
    pub max_partial_isometry_residual: f64,
    pub max_commutator_residual: f64,
    pub closed_under_products: bool,
    pub exhaustive: Option<ExhaustiveReport>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Pass,
    Fail,
    Undecided,
}

#[derive(Debug, Clone, Copy)]
struct Measured {
    outcome: Outcome,
    residual: f64,
    bound: f64,
}

fn measure(a: &ProbeBlock, b: &ProbeBlock, tol: f64) -> Measured {
    let r = a.distances(b);
    let mut outcome = Outcome::Pass;
    let mut residual: f64 = 0.0;
    let mut bound: f64 = 0.0;
    let mut failed = false;
    for (j, &rj) in r.iter().enumerate() {
        let dj = a.delta()[j] + b.delta()[j];
        residual = residual.max(rj);
        bound = bound.max(dj);
        if rj - dj > DECISION_MARGIN * tol {
            failed = true;
        } else if rj + dj >= tol {
            outcome = Outcome::Undecided;
        }
    }
    if failed {
        outcome = Outcome::Fail;
    }
    Measured {
        outcome,
        residual,
        bound,
    }
}

struct Idempotent {
    source: usize,
    word: StarWord,
    block: ProbeBlock,
}

struct Witness {
    element: usize,
    kind: WitnessKind,
    partner: Option<usize>,
    measured: Measured,
}

/// Partial-isometry and commuting-idempotent test on the ball of radius
/// `max_length`.
pub fn check_inverse(sys: &GeneratorSystem, max_length: usize, k: usize, tol: f64) -> Result<InverseCheckReport> {
    let mut builder = BallBuilder::new(sys, max_length, k, tol)?;
    let probe = ProbeBlock::basis(sys.n(), k);
    let mut idempotents: Vec<Idempotent> = Vec::new();
    let mut max_pi: f64 = 0.0;
    let mut max_comm: f64 = 0.0;
    let mut max_bound: f64 = 0.0;
    let mut undecided = false;
    let mut witness: Option<Witness> = None;

    while witness.is_none() {
        let Some(range) = builder.advance() else { break };
        let elements = &builder.elements;
        let prepared: Vec<(Measured, ProbeBlock)> = range
            .clone()
            .into_par_iter()
            .map(|i| {
                let x = &elements[i];
                let adj = x.word.adjoint();
                let xsx = sys.act(&adj, &x.action);
                let xxsx = sys.act(&x.word, &xsx);
                let pi = measure(&xxsx, &x.action, tol);
                let e = sys.act(&x.word, &sys.act(&adj, &probe));
                (pi, e)
            })
            .collect();
        for (i, (pi, e)) in range.zip(prepared) {
            max_pi = max_pi.max(pi.residual);
            max_bound = max_bound.max(pi.bound);
            match pi.outcome {
                Outcome::Fail => {
                    witness = Some(Witness {
                        element: i,
                        kind: WitnessKind::PartialIsometry,
                        partner: None,
                        measured: pi,
                    });
                    break;
                }
                Outcome::Undecided => undecided = true,
                Outcome::Pass => {}
            }
            if idempotents.iter().any(|f| f.block.matches(&e, tol)) {
                continue;
            }
            let word = elements[i].word.clone();
            let word_adj = word.adjoint();
            let comms: Vec<Measured> = idempotents
                .par_iter()
                .map(|f| {
                    let ef = sys.act(&word, &sys.act(&word_adj, &f.block));
                    let fe = sys.act(&f.word, &sys.act(&f.word.adjoint(), &e));
                    measure(&ef, &fe, tol)
                })
                .collect();
            for (f, m) in idempotents.iter().zip(&comms) {
                max_comm = max_comm.max(m.residual);
                max_bound = max_bound.max(m.bound);
                match m.outcome {
                    Outcome::Fail => {
                        witness = Some(Witness {
                            element: i,
                            kind: WitnessKind::IdempotentsCommute,
                            partner: Some(f.source),
                            measured: *m,
                        });
                        break;
                    }
                    Outcome::Undecided => undecided = true,
                    Outcome::Pass => {}
                }
            }
            if witness.is_some() {
                break;
            }
            idempotents.push(Idempotent {
                source: i,
                word,
                block: e,
            });
        }
    }

    let elements = &builder.elements;
    let closed = witness.is_some() || closed_under_products(sys, elements, max_length, tol);
    let p = sys.presentation();
    let (verdict, residual, error_bound) = match &witness {
        Some(w) => (Verdict::NotInverse, w.measured.residual, w.measured.bound),
        None if !undecided && closed => (Verdict::Inverse, max_pi.max(max_comm), max_bound),
        None => (Verdict::Inconclusive, max_pi.max(max_comm), max_bound),
    };
    let structural = verdict == Verdict::Inverse && p.len() == 1 && p.is_isometric(0);
    Ok(InverseCheckReport {
        verdict,
        structural,
        witness: witness.as_ref().map(|w| sys.render(&elements[w.element].word)),
        witness_length: witness.as_ref().map(|w| elements[w.element].word.len()),
        witness_kind: witness.as_ref().map(|w| w.kind),
        partner: witness
            .as_ref()
            .and_then(|w| w.partner)
            .map(|i| sys.render(&elements[i].word)),
        residual,
        error_bound,
        ball_size: elements.len(),
        idempotents: idempotents.len(),
        max_length: builder.level(),
        requested_length: max_length,
        truncation: sys.n(),
        probe_dim: probe.cols(),
        tol,
        max_partial_isometry_residual: max_pi,
        max_commutator_residual: max_comm,
        closed_under_products: closed,
        exhaustive: None,
    })
}

/// Every product `x y` with `|x| + |y| <= L - 2` matches a ball element.
fn closed_under_products(
    sys: &GeneratorSystem,
    elements: &[super::ball::BallElement],
    max_length: usize,
    tol: f64,
) -> bool {
    let limit = max_length.saturating_sub(2);
    let pairs: Vec<(usize, usize)> = (0..elements.len())
        .flat_map(|a| (0..elements.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| elements[a].word.len() + elements[b].word.len() <= limit)
        .collect();
    pairs.par_iter().all(|&(a, b)| {
        let prod = sys.act(&elements[a].word, &elements[b].action);
        elements.iter().any(|e| e.action.matches(&prod, tol))
    })
}

fn decide_equal(a: &ProbeBlock, b: &ProbeBlock, tol: f64) -> Outcome {
    measure(a, b, tol).outcome
}

/// Counts, for every ball element `x`, the elements `y` with `x y x = x` and
/// `y x y = y`; the semigroup window is inverse when each count is 1.
pub fn check_inverse_exhaustive(
    sys: &GeneratorSystem,
    max_length: usize,
    k: usize,
    tol: f64,
) -> Result<ExhaustiveReport> {
    let ball = enumerate_ball(sys, max_length, k, tol)?;
    if ball.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::BallTooLarge {
            size: ball.len(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let n = sys.n();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d3a_5e0f);
    let weights: Vec<num_complex::Complex64> = (0..ball.probe_dim)
        .map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let single = ProbeBlock::from_vector(n, &weights);
    let els = &ball.elements;
    let singles: Vec<ProbeBlock> = els.par_iter().map(|e| sys.act(&e.word, &single)).collect();

    let equal = |lhs: &StarWord, mid: &StarWord, i: usize| -> Outcome {
        // lhs · mid · lhs applied to the probe versus element i.
        let quick = sys.act(lhs, &sys.act(mid, &singles[i]));
        if decide_equal(&quick, &singles[i], tol) == Outcome::Fail {
            return Outcome::Fail;
        }
        let full = sys.act(lhs, &sys.act(mid, &els[i].action));
        decide_equal(&full, &els[i].action, tol)
    };

    let rows: Vec<(usize, usize)> = (0..els.len())
        .into_par_iter()
        .map(|x| {
            let mut certain = 0;
            let mut unsure = 0;
            for y in 0..els.len() {
                let first = equal(&els[x].word, &els[y].word, x);
                if first == Outcome::Fail {
                    continue;
                }
                let second = equal(&els[y].word, &els[x].word, y);
                match (first, second) {
                    (_, Outcome::Fail) => {}
                    (Outcome::Pass, Outcome::Pass) => certain += 1,
                    _ => unsure += 1,
                }
            }
            (certain, unsure)
        })
        .collect();
    let mut undecided_pairs = 0;
    let mut witness = None;
    let mut any_unsure = false;
    for (x, &(certain, unsure)) in rows.iter().enumerate() {
        undecided_pairs += unsure;
        let definitely_not_unique = certain >= 2 || (certain == 0 && unsure == 0);
        if definitely_not_unique && witness.is_none() {
            witness = Some(x);
        }
        if !(certain == 1 && unsure == 0) {
            any_unsure = true;
        }
    }
    let verdict = match witness {
        Some(_) => Verdict::NotInverse,
        None if !any_unsure => Verdict::Inverse,
        None => Verdict::Inconclusive,
    };
    Ok(ExhaustiveReport {
        verdict,
        witness: witness.map(|i| sys.render(&els[i].word)),
        ball_size: els.len(),
        undecided_pairs,
    })
}
