//! Regular representations of numerical semigroups.

use isolab::operator_core::{regular_rep, SemigroupSpec};
use isolab::star_semigroup::{check_inverse, Generator, GeneratorSystem};

fn main() -> isolab::Result<()> {
    let n = 256;
    for gens in [[2u64, 3], [3, 5]] {
        let spec = SemigroupSpec::new(&gens, (n as u64 + 1) * gens[0])?;
        let head: Vec<String> = spec.members().iter().take(12).map(u64::to_string).collect();
        println!("<{},{}> = {{{}, …}}", gens[0], gens[1], head.join(", "));
        let a = regular_rep(&spec, gens[0], n)?;
        let b = regular_rep(&spec, gens[1], n)?;
        let ab = a.compose(&b)?;
        let sum = regular_rep(&spec, gens[0] + gens[1], n)?;
        println!(
            "  |π({})π({}) - π({})| = {:e}",
            gens[0],
            gens[1],
            gens[0] + gens[1],
            ab.probe_distance(&sum)?
        );
        let sys = GeneratorSystem::new(
            vec![Generator::new("a", a, true), Generator::new("b", b, true)],
            &[("a", "b")],
        )?;
        let r = check_inverse(&sys, 4, 64, 1e-9)?;
        println!(
            "  L = 4: {} over {} elements, {} idempotents",
            r.verdict, r.ball_size, r.idempotents
        );
    }
    Ok(())
}
