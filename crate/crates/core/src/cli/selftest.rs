//! Frozen baselines and independent oracles, rerun on demand.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::extension_lab::{
    extract_symbol, hankel_rank, thm32_experiment, thm51_experiment, thm52_construct, validate_extension,
    ExperimentReport, ExtensionCandidate, HANKEL_REL_TOL, UNIMODULAR_GRID,
};
use crate::inner_function::InnerSymbol;
use crate::operator_core::{regular_rep, SemigroupSpec, TruncatedOperator};
use crate::star_semigroup::{
    apply_rule, check_inverse, enumerate_ball, rule_sites, Generator, GeneratorSystem, Letter, StarWord, Verdict,
};

use super::commands::CommandOutput;
use super::config::RunConfig;

/// Witness residuals of `{s, T_Φ}` at `L = 4`, `K = 64`.
pub const BASELINE_B05_N512: f64 = 0.4330127018922193;
pub const BASELINE_B05_B03I_N512: f64 = 0.14830289949963887;
pub const BASELINE_SINGULAR_N768: f64 = 0.3388706568272904;
pub const BASELINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable target, e.g. `< 1e-10` or `== 6`.
    pub target: String,
    pub pass: bool,
}

#[derive(Default)]
struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn below(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, format!("< {limit:e}"), value < limit);
    }

    fn above(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, format!("> {limit:e}"), value > limit);
    }

    fn near(&mut self, name: &str, value: f64, target: f64, tol: f64) {
        self.push(
            name,
            value,
            format!("{target} ± {tol:e}"),
            (value - target).abs() <= tol,
        );
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.push(name, f64::from(u8::from(ok)), "true".into(), ok);
    }

    fn equals(&mut self, name: &str, value: usize, target: usize) {
        self.push(name, value as f64, format!("== {target}"), value == target);
    }

    fn push(&mut self, name: &str, value: f64, target: String, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            value,
            target,
            pass,
        });
    }
}

fn sym(lit: &str) -> InnerSymbol {
    lit.parse().expect("selftest literals are valid")
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn shift_system(n: usize) -> Result<GeneratorSystem> {
    GeneratorSystem::new(vec![Generator::new("s", TruncatedOperator::shift_matrix(n), true)], &[])
}

fn symbols(suite: &mut Suite) -> Result<()> {
    let b = sym("B(0.5)");
    let v = b.eval(0.0)?;
    suite.below("blaschke_value_at_1", (v - Complex64::new(-1.0, 0.0)).norm(), 1e-15);
    suite.below("blaschke_modulus_at_1", (v.norm() - 1.0).abs(), 1e-15);

    let c = b.fourier_coeffs(2);
    let closed = [0.5, -0.75, -0.375].map(|x| Complex64::new(x, 0.0));
    suite.below("closed_form_coefficients", max_diff(&c, &closed), 1e-15);
    suite.below(
        "sampled_coefficients",
        max_diff(&c, &b.fourier_coeffs_sampled(2, 4096)),
        1e-12,
    );

    for lit in ["B(0.5)", "B(0.5,-0.3i)", "z^2 * B(0.8,0.6i)", "B(0.7+0.2i,-0.4)"] {
        let s: f64 = sym(lit).fourier_coeffs(200).iter().map(|c| c.norm_sqr()).sum();
        suite.below(&format!("parseval_200[{lit}]"), (s - 1.0).abs(), 1e-8);
    }

    let square = b.multiply(&b);
    suite.equals("product_degree", square.blaschke_degree(), 2);
    suite.below(
        "product_value_at_1",
        (square.eval(0.0)? - Complex64::new(1.0, 0.0)).norm(),
        1e-15,
    );

    let t = TruncatedOperator::mult_operator(&b, 3);
    suite.below("section_first_column", max_diff(&t.column(0), &closed), 1e-15);
    let mut prev = 0.0;
    let mut monotone = true;
    for n in [8, 32, 128] {
        let m = TruncatedOperator::mult_operator(&sym("B(0.6+0.2i,-0.3+0.5i)"), n);
        let norm = m.matrix().column(0).norm_squared();
        monotone &= norm >= prev && norm <= 1.0 + 1e-12;
        prev = norm;
    }
    suite.holds("section_columns_contractive_and_growing", monotone);
    suite.below("section_column_limit", (prev - 1.0).abs(), 1e-12);
    Ok(())
}

fn balls(suite: &mut Suite) -> Result<()> {
    let single = shift_system(64)?;
    suite.equals("bicyclic_ball_radius_2", enumerate_ball(&single, 2, 16, 1e-9)?.len(), 6);

    let n = 96;
    let sys = GeneratorSystem::new(
        vec![
            Generator::new("s", TruncatedOperator::shift_matrix(n), true),
            Generator::new(
                "t",
                TruncatedOperator::mult_operator(&InnerSymbol::monomial(2), n),
                true,
            ),
        ],
        &[("s", "t")],
    )?;
    let ball = enumerate_ball(&sys, 3, 16, 1e-9)?;
    let big = enumerate_ball(&shift_system(n)?, 6, 16, 1e-9)?;
    suite.holds(
        "monomial_ball_inside_bicyclic_ball",
        ball.elements.iter().all(|e| big.find(&e.action, 1e-9).is_some()),
    );
    Ok(())
}

fn rewriting(suite: &mut Suite, seed: u64) -> Result<()> {
    let n = 256;
    let sys = GeneratorSystem::new(
        vec![
            Generator::new("s", TruncatedOperator::shift_matrix(n), true),
            Generator::new("t", TruncatedOperator::mult_operator(&sym("B(0.5)"), n), true),
        ],
        &[("s", "t")],
    )?;
    let letters = sys.presentation().letters();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut applied = 0;
    while applied < 200 {
        let len = rng.gen_range(2..=8);
        let w = StarWord::from_letters(
            (0..len)
                .map(|_| letters[rng.gen_range(0..letters.len())])
                .collect::<Vec<Letter>>(),
        );
        let sites = rule_sites(&w, sys.presentation());
        if sites.is_empty() {
            continue;
        }
        let site = sites[rng.gen_range(0..sites.len())];
        let v = apply_rule(&w, site);
        let a = sys.action(&w, 16);
        let b = sys.action(&v, 16);
        let bound = a.max_delta() + b.max_delta();
        worst = worst.max((a.distances(&b).into_iter().fold(0.0, f64::max) - bound).max(0.0));
        applied += 1;
    }
    suite.below("rule_application_soundness", worst, 1e-10);
    Ok(())
}

fn extensions(suite: &mut Suite) -> Result<()> {
    let n = 512;
    let b = sym("B(0.5)");
    let t = TruncatedOperator::mult_operator(&b, n);
    let v = validate_extension(&ExtensionCandidate::over_shift(n, vec![t.clone()])?, 1e-10)?;
    suite.holds("multiplier_extension_valid", v.pass);
    let worst = v.conditions.iter().map(|c| c.residual).fold(0.0, f64::max);
    suite.below("multiplier_extension_residual", worst, 1e-10);

    let e = extract_symbol(&t, n - 1, UNIMODULAR_GRID)?;
    suite.below(
        "extracted_blaschke_coefficients",
        max_diff(&e.coefficients, &b.fourier_coeffs(n - 1)),
        1e-10,
    );
    suite.holds("extracted_blaschke_inner", e.inner);

    let sing = sym("S(0:1)");
    let ts = TruncatedOperator::mult_operator(&sing, 768);
    let es = extract_symbol(&ts, 64, UNIMODULAR_GRID)?;
    suite.below(
        "extracted_singular_vs_fft",
        max_diff(&es.coefficients, &sing.fourier_coeffs_sampled(64, 1 << 20)),
        1e-5,
    );
    suite.holds("extracted_singular_inner", es.inner);
    Ok(())
}

fn hankel(suite: &mut Suite) -> Result<()> {
    for k in 1..=3u32 {
        let p = hankel_rank(&InnerSymbol::monomial(k).fourier_coeffs(64), HANKEL_REL_TOL)?;
        suite.equals(&format!("hankel_rank_z^{k}"), p.rank.unwrap_or(usize::MAX), k as usize);
    }
    let deg3 = sym("B(0.5,0.3i,-0.2)").fourier_coeffs(64);
    let p = hankel_rank(&deg3, HANKEL_REL_TOL)?;
    suite.equals("hankel_rank_degree_3", p.rank.unwrap_or(usize::MAX), 3);
    suite.below("hankel_degree_3_sigma4_ratio", p.ratio(3), 1e-8);

    let s = hankel_rank(&sym("S(0:1)").fourier_coeffs(128), HANKEL_REL_TOL)?;
    suite.holds("hankel_singular_not_finite_rank", s.rank.is_none());
    suite.above("hankel_singular_sigma20_ratio", s.ratio(19), 1e-6);
    Ok(())
}

fn experiments(suite: &mut Suite) -> Result<()> {
    for (lit, n, baseline) in [
        ("B(0.5)", 512, BASELINE_B05_N512),
        ("B(0.5,-0.3i)", 512, BASELINE_B05_B03I_N512),
        ("S(0:1)", 768, BASELINE_SINGULAR_N768),
    ] {
        let r = thm32_experiment(&sym(lit), 4, n, 64, 1e-9)?;
        suite.holds(&format!("not_inverse[{lit}]"), r.verdict == Verdict::NotInverse);
        suite.holds(
            &format!("witness_short[{lit}]"),
            r.witness_length.is_some_and(|l| l <= 4),
        );
        suite.near(&format!("witness_residual[{lit}]"), r.residual, baseline, BASELINE_TOL);
    }
    for lit in ["z", "z^2", "z^3"] {
        let r = thm51_experiment(&sym(lit), 4, 512, 64, 1e-9)?;
        suite.holds(
            &format!("inverse[{lit}]"),
            r.trivial_extension && r.verdict == Verdict::Inverse,
        );
    }
    for lit in ["B(0.5)", "B(0.5,-0.5)"] {
        let r = thm51_experiment(&sym(lit), 4, 512, 64, 1e-9)?;
        suite.holds(
            &format!("nontrivial_not_inverse[{lit}]"),
            !r.trivial_extension && r.verdict == Verdict::NotInverse,
        );
    }

    let bicyclic = check_inverse(&shift_system(256)?, 8, 64, 1e-9)?;
    suite.holds(
        "bicyclic_inverse_structural",
        bicyclic.verdict == Verdict::Inverse && bicyclic.structural,
    );
    suite.equals("bicyclic_ball_radius_8", bicyclic.ball_size, 45);

    for gens in [[2u64, 3], [3, 5]] {
        let spec = SemigroupSpec::new(&gens, 257 * gens[0])?;
        let names = gens.map(|g| format!("p{g}"));
        let sys = GeneratorSystem::new(
            vec![
                Generator::new(names[0].clone(), regular_rep(&spec, gens[0], 256)?, true),
                Generator::new(names[1].clone(), regular_rep(&spec, gens[1], 256)?, true),
            ],
            &[(names[0].as_str(), names[1].as_str())],
        )?;
        let r = check_inverse(&sys, 6, 64, 1e-9)?;
        suite.holds(
            &format!("regular_inverse[{},{}]", gens[0], gens[1]),
            r.verdict == Verdict::Inverse,
        );
    }

    let c = thm52_construct(512)?;
    let r = check_inverse(&c.system, 6, 64, 1e-9)?;
    suite.holds("swap_extension_inverse", r.verdict == Verdict::Inverse);
    suite.equals("swap_extension_kernel", c.kernel_dimension, 2);
    suite.below("swap_extension_t_squared", c.t_squared_distance, 1e-10);
    suite.above("swap_extension_properness", c.properness_distance, 0.1);
    Ok(())
}

pub fn run_selftest(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut suite = Suite::default();
    symbols(&mut suite)?;
    balls(&mut suite)?;
    rewriting(&mut suite, cfg.seed)?;
    extensions(&mut suite)?;
    hankel(&mut suite)?;
    experiments(&mut suite)?;
    let failed: Vec<&str> = suite
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let mut rep = ExperimentReport::new("selftest")
        .parameter("seed", cfg.seed)
        .verdict("checks", suite.checks.len())
        .verdict("failed", &failed)
        .verdict("expectation_met", failed.is_empty());
    for c in &suite.checks {
        rep = rep.residual(&c.name, c.value);
    }
    rep = rep.details(&suite.checks);
    Ok(CommandOutput {
        reports: vec![rep],
        dump: None,
    })
}
