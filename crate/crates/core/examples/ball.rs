//! The ball of star words of length at most L, deduplicated by probe action.

use isolab::operator_core::TruncatedOperator;
use isolab::star_semigroup::{enumerate_ball, Generator, GeneratorSystem};

fn main() -> isolab::Result<()> {
    let n = 128;
    let sys = GeneratorSystem::new(vec![Generator::new("s", TruncatedOperator::shift_matrix(n), true)], &[])?;
    for l in 1..=8 {
        let ball = enumerate_ball(&sys, l, 32, 1e-9)?;
        println!(
            "L = {l}: {} elements, (L + 1)(L + 2)/2 = {}",
            ball.len(),
            (l + 1) * (l + 2) / 2
        );
    }
    let ball = enumerate_ball(&sys, 3, 32, 1e-9)?;
    let words: Vec<String> = ball.words().into_iter().map(|w| sys.render(w)).collect();
    println!("L = 3: {}", words.join(", "));
    Ok(())
}
