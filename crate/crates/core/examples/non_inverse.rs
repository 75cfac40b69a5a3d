//! `(n, m) ↦ z^n Φ^m` is not inverse for non-monomial `Φ`, and inverse for
//! monomials.

use isolab::extension_lab::{thm32_experiment, thm51_experiment};
use isolab::inner_function::InnerSymbol;

fn main() -> isolab::Result<()> {
    for (lit, n) in [("B(0.5)", 512), ("B(0.5,-0.3i)", 512), ("S(0:1)", 768)] {
        let r = thm32_experiment(&lit.parse()?, 4, n, 64, 1e-9)?;
        println!(
            "{lit:14} {} witness {:?} residual {:.16}",
            r.verdict, r.witness, r.residual
        );
    }
    for lit in ["z", "z^2", "z^3", "B(0.5,-0.5)"] {
        let phi: InnerSymbol = lit.parse()?;
        let r = thm51_experiment(&phi, 4, 512, 64, 1e-9)?;
        println!(
            "{lit:14} trivial {:5} verdict {} consistent {}",
            r.trivial_extension, r.verdict, r.consistent
        );
    }
    Ok(())
}
