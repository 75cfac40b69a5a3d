#![allow(dead_code)]

use isolab::inner_function::InnerSymbol;
use isolab::operator_core::{regular_rep, SemigroupSpec, TruncatedOperator};
use isolab::star_semigroup::{Generator, GeneratorSystem};
use num_complex::Complex64;
use rand::Rng;

pub fn sym(lit: &str) -> InnerSymbol {
    lit.parse().expect("valid literal")
}

/// 6 monomials, 6 Blaschke products, 2 singular symbols.
pub const CORPUS: [&str; 14] = [
    "z",
    "z^2",
    "z^3",
    "z^4",
    "z^5",
    "z^6",
    "B(0.5)",
    "B(0.5,-0.3i)",
    "B(0.5,-0.5)",
    "B(0.7+0.2i,-0.4)",
    "z^2 * B(0.8,0.6i)",
    "B(0.3,-0.6i,0.2+0.2i)",
    "S(0:1)",
    "S(1.5:0.5)",
];

pub fn shift_system(n: usize) -> GeneratorSystem {
    GeneratorSystem::new(vec![Generator::new("s", TruncatedOperator::shift_matrix(n), true)], &[]).unwrap()
}

pub fn regular_system(gens: [u64; 2], n: usize) -> GeneratorSystem {
    let spec = SemigroupSpec::new(&gens, (n as u64 + 1) * gens[0]).unwrap();
    let names = gens.map(|g| format!("p{g}"));
    GeneratorSystem::new(
        vec![
            Generator::new(names[0].clone(), regular_rep(&spec, gens[0], n).unwrap(), true),
            Generator::new(names[1].clone(), regular_rep(&spec, gens[1], n).unwrap(), true),
        ],
        &[(names[0].as_str(), names[1].as_str())],
    )
    .unwrap()
}

/// A zero with modulus at most `r`, uniform in the disc.
pub fn random_zero<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let a = Complex64::from_polar(rho, theta);
    if a.norm() < 1e-3 {
        Complex64::new(1e-3, 0.0)
    } else {
        a
    }
}

pub fn random_blaschke<R: Rng>(rng: &mut R, degree: usize, r: f64) -> InnerSymbol {
    let zeros: Vec<Complex64> = (0..degree).map(|_| random_zero(rng, r)).collect();
    InnerSymbol::blaschke(&zeros).unwrap()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
