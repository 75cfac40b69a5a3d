//! Words in generators and their adjoints, a normal form modulo the declared
//! relations, finite balls of distinct operators, and the inverse-semigroup
//! test.

mod ball;
mod check;
mod rewrite;
mod system;
mod word;

pub use ball::{enumerate_ball, Ball, BallElement};
pub use check::{
    check_inverse, check_inverse_exhaustive, ExhaustiveReport, InverseCheckReport, Verdict, WitnessKind,
    DECISION_MARGIN, EXHAUSTIVE_LIMIT,
};
pub use rewrite::{apply_rule, bicyclic_normal_form, reduce, rule_sites, Presentation, RuleSite};
pub use system::{Generator, GeneratorSystem, RELATION_TOL};
pub use word::{Letter, StarWord};
