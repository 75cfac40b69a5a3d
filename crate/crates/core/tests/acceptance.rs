//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use isolab::cli::{BASELINE_B05_B03I_N512, BASELINE_B05_N512, BASELINE_SINGULAR_N768, BASELINE_TOL};
use isolab::extension_lab::{
    extract_symbol, hankel_rank, thm32_experiment, thm51_experiment, thm52_construct, validate_extension,
    ExtensionCandidate, HANKEL_REL_TOL, UNIMODULAR_GRID,
};
use isolab::operator_core::TruncatedOperator;
use isolab::star_semigroup::{
    apply_rule, bicyclic_normal_form, check_inverse, rule_sites, GeneratorSystem, InverseCheckReport, Letter, StarWord,
    Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_blaschke, regular_system, shift_system, sym, CORPUS};

const K: usize = 64;
const TOL: f64 = 1e-9;

type Criterion = (&'static str, fn() -> Vec<Line>);

struct Line {
    ok: bool,
    detail: String,
}

impl Line {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self {
            ok,
            detail: detail.into(),
        }
    }
}

fn bicyclic(n: usize) -> InverseCheckReport {
    check_inverse(&shift_system(n), 8, K, TOL).unwrap()
}

fn criterion_1() -> Vec<Line> {
    let r = bicyclic(256);
    let sys = shift_system(256);
    let brute: BTreeSet<(usize, usize)> = (0..=8).flat_map(|m| (0..=8 - m).map(move |n| (m, n))).collect();
    let ball = isolab::star_semigroup::enumerate_ball(&sys, 8, K, TOL).unwrap();
    let forms: BTreeSet<(usize, usize)> = ball
        .words()
        .into_iter()
        .map(|w| bicyclic_normal_form(w, sys.presentation()).unwrap())
        .collect();
    vec![
        Line::new(r.verdict == Verdict::Inverse, format!("verdict {}", r.verdict)),
        Line::new(
            r.max_partial_isometry_residual < 1e-10,
            format!("max |xx*x - x| = {:e}", r.max_partial_isometry_residual),
        ),
        Line::new(
            r.max_commutator_residual < 1e-10,
            format!("max idempotent commutator = {:e}", r.max_commutator_residual),
        ),
        Line::new(
            r.ball_size == brute.len() && forms == brute,
            format!("ball {} vs {} pairs (m, n), m + n <= 8", r.ball_size, brute.len()),
        ),
    ]
}

fn regular(gens: [u64; 2], n: usize) -> InverseCheckReport {
    check_inverse(&regular_system(gens, n), 6, K, TOL).unwrap()
}

fn criterion_2() -> Vec<Line> {
    [[2, 3], [3, 5]]
        .into_iter()
        .map(|g| {
            let r = regular(g, 256);
            let worst = r.max_partial_isometry_residual.max(r.max_commutator_residual);
            Line::new(
                r.verdict == Verdict::Inverse && worst < 1e-10,
                format!(
                    "<{},{}>: {} ball {} residual {:e}",
                    g[0], g[1], r.verdict, r.ball_size, worst
                ),
            )
        })
        .collect()
}

const FALSIFYING: [(&str, usize, f64); 3] = [
    ("B(0.5)", 512, BASELINE_B05_N512),
    ("B(0.5,-0.3i)", 512, BASELINE_B05_B03I_N512),
    ("S(0:1)", 768, BASELINE_SINGULAR_N768),
];
const MONOMIALS: [&str; 3] = ["z", "z^2", "z^3"];

fn criterion_3() -> Vec<Line> {
    let mut lines = Vec::new();
    for (lit, n, baseline) in FALSIFYING {
        let a = thm32_experiment(&sym(lit), 4, n, K, TOL).unwrap();
        let b = thm32_experiment(&sym(lit), 4, n, K, TOL).unwrap();
        let ok = a.verdict == Verdict::NotInverse
            && a.witness_length.is_some_and(|l| l <= 4)
            && a.residual > 1e-2
            && (a.residual - baseline).abs() <= BASELINE_TOL
            && a.witness == b.witness
            && (a.residual - b.residual).abs() <= BASELINE_TOL;
        lines.push(Line::new(
            ok,
            format!(
                "{lit}: {} witness {:?} (length {:?}) residual {:.16} baseline {baseline:.16}",
                a.verdict,
                a.witness.as_deref().unwrap_or("-"),
                a.witness_length,
                a.residual
            ),
        ));
    }
    for lit in MONOMIALS {
        let r = thm51_experiment(&sym(lit), 4, 512, K, TOL).unwrap();
        lines.push(Line::new(
            r.verdict == Verdict::Inverse,
            format!("{lit}: {}", r.verdict),
        ));
    }
    lines
}

fn criterion_4() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a11);
    let n = 512;
    (0..10)
        .map(|i| {
            let degree = 1 + i % 4;
            let phi = random_blaschke(&mut rng, degree, 0.8);
            let t = TruncatedOperator::mult_operator(&phi, n);
            let valid = validate_extension(&ExtensionCandidate::over_shift(n, vec![t.clone()]).unwrap(), 1e-10)
                .unwrap()
                .pass;
            let e = extract_symbol(&t, n - 1, UNIMODULAR_GRID).unwrap();
            Line::new(
                valid && e.round_trip_error < 1e-9 && e.inner && e.max_modulus_deviation < 1e-8,
                format!(
                    "{phi}: round trip {:e}, max ||Φ| - 1| on {} points {:e}",
                    e.round_trip_error, e.grid, e.max_modulus_deviation
                ),
            )
        })
        .collect()
}

const DEGREES: [&str; 4] = [
    "B(0.5)",
    "B(0.5,-0.3i)",
    "B(0.5,0.3i,-0.2)",
    "B(0.6,-0.4i,0.2+0.3i,-0.5)",
];

fn criterion_5() -> Vec<Line> {
    let mut lines: Vec<Line> = DEGREES
        .iter()
        .enumerate()
        .map(|(i, lit)| {
            let d = i + 1;
            let p = hankel_rank(&sym(lit).fourier_coeffs(64), HANKEL_REL_TOL).unwrap();
            Line::new(
                p.rank == Some(d) && p.ratio(d) < 1e-8,
                format!("{lit}: rank {:?}, σ{}/σ1 = {:e}", p.rank, d + 1, p.ratio(d)),
            )
        })
        .collect();
    let p = hankel_rank(&sym("S(0:1)").fourier_coeffs(128), HANKEL_REL_TOL).unwrap();
    lines.push(Line::new(
        p.rank.is_none() && p.ratio(19) > 1e-6,
        format!("S(0:1) at D = 128: rank {:?}, σ20/σ1 = {:e}", p.rank, p.ratio(19)),
    ));
    lines
}

fn thm52(n: usize) -> (isolab::extension_lab::Thm52Construction, InverseCheckReport) {
    let c = thm52_construct(n).unwrap();
    let r = check_inverse(&c.system, 6, K, TOL).unwrap();
    (c, r)
}

fn criterion_6() -> Vec<Line> {
    let (c, r) = thm52(512);
    let worst = r.max_partial_isometry_residual.max(r.max_commutator_residual);
    vec![
        Line::new(c.kernel_dimension == 2, format!("dim ker s* = {}", c.kernel_dimension)),
        Line::new(
            r.verdict == Verdict::Inverse && worst < 1e-9,
            format!("{} at L = 6, ball {}, residual {:e}", r.verdict, r.ball_size, worst),
        ),
        Line::new(
            c.properness_distance > 0.1,
            format!("min distance to s^m s*^n, m, n <= 4: {}", c.properness_distance),
        ),
        Line::new(
            c.t_squared_distance < 1e-10,
            format!("|t² - s²| = {:e}", c.t_squared_distance),
        ),
    ]
}

/// Largest raw probe distance and largest excess over the error bound.
fn rule_soundness(sys: &GeneratorSystem, rng: &mut ChaCha8Rng, count: usize) -> (f64, f64) {
    let letters = sys.presentation().letters();
    let mut raw: f64 = 0.0;
    let mut worst: f64 = 0.0;
    let mut applied = 0;
    while applied < count {
        let len = rng.gen_range(2..=10);
        let w = StarWord::from_letters(
            (0..len)
                .map(|_| letters[rng.gen_range(0..letters.len())])
                .collect::<Vec<Letter>>(),
        );
        let sites = rule_sites(&w, sys.presentation());
        if sites.is_empty() {
            continue;
        }
        let v = apply_rule(&w, sites[rng.gen_range(0..sites.len())]);
        let a = sys.action(&w, 16);
        let b = sys.action(&v, 16);
        let bound = a.max_delta() + b.max_delta();
        let d = a.distances(&b).into_iter().fold(0.0, f64::max);
        raw = raw.max(d);
        worst = worst.max((d - bound).max(0.0));
        applied += 1;
    }
    (raw, worst)
}

fn criterion_7() -> Vec<Line> {
    let mut lines = Vec::new();
    let mut stable = vec![
        ("bicyclic", bicyclic(512).verdict, Verdict::Inverse),
        ("<2,3>", regular([2, 3], 512).verdict, Verdict::Inverse),
        ("<3,5>", regular([3, 5], 512).verdict, Verdict::Inverse),
        ("H² ⊕ H²", thm52(1024).1.verdict, Verdict::Inverse),
    ];
    for (lit, n, _) in FALSIFYING {
        let v = thm32_experiment(&sym(lit), 4, 2 * n, K, TOL).unwrap().verdict;
        stable.push((lit, v, Verdict::NotInverse));
    }
    for lit in MONOMIALS {
        stable.push((
            lit,
            thm51_experiment(&sym(lit), 4, 1024, K, TOL).unwrap().verdict,
            Verdict::Inverse,
        ));
    }
    let changed: Vec<String> = stable
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(name, got, _)| format!("{name} -> {got}"))
        .collect();
    lines.push(Line::new(
        changed.is_empty(),
        format!("{} verdicts at doubled N, changed: {changed:?}", stable.len()),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    let systems = [
        isolab::extension_lab::shift_extension(&sym("B(0.5)"), 256).unwrap(),
        isolab::extension_lab::shift_extension(&sym("z^2 * B(0.5,-0.3i)"), 256).unwrap(),
        thm52_construct(256).unwrap().system,
        regular_system([2, 3], 256),
    ];
    let (raw, worst) = systems
        .iter()
        .map(|s| rule_soundness(s, &mut rng, 2500))
        .fold((0.0, 0.0), |(r, w), (a, b)| (f64::max(r, a), f64::max(w, b)));
    lines.push(Line::new(
        worst < 1e-10,
        format!("10000 rule applications, max change {raw:e}, beyond error bound {worst:e}"),
    ));

    let mut parseval_ok = true;
    let mut peak: f64 = 0.0;
    for lit in CORPUS {
        let c = sym(lit).fourier_coeffs(1024);
        let mut sum = 0.0;
        for ck in c {
            let next = sum + ck.norm_sqr();
            parseval_ok &= next >= sum;
            sum = next;
            peak = peak.max(sum);
        }
    }
    parseval_ok &= peak <= 1.0 + 1e-12;
    lines.push(Line::new(
        parseval_ok,
        format!("Parseval partial sums over {} symbols, max {peak:.15}", CORPUS.len()),
    ));
    lines
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("bicyclic window", criterion_1),
        ("regular representations", criterion_2),
        ("falsification and monomials", criterion_3),
        ("symbol round trip", criterion_4),
        ("Hankel rank", criterion_5),
        ("H² ⊕ H² extension", criterion_6),
        ("truncation stability and numerics", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let lines = run();
        let ok = lines.iter().all(|l| l.ok);
        failed += usize::from(!ok);
        println!(
            "{} criterion {} ({name}) [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for l in &lines {
            println!("    {} {}", if l.ok { "ok  " } else { "FAIL" }, l.detail);
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
