//! Inverse-semigroup test for the shift together with one multiplier.

use isolab::extension_lab::shift_extension;
use isolab::inner_function::InnerSymbol;
use isolab::star_semigroup::{check_inverse, check_inverse_exhaustive};

fn main() -> isolab::Result<()> {
    for lit in ["z^2", "B(0.5)", "B(0.5,-0.3i)"] {
        let phi: InnerSymbol = lit.parse()?;
        let sys = shift_extension(&phi, 512)?;
        let r = check_inverse(&sys, 4, 64, 1e-9)?;
        println!(
            "{lit:14} {:12} ball {:3} witness {:?} partner {:?} residual {:.6e} ± {:.1e}",
            r.verdict.to_string(),
            r.ball_size,
            r.witness,
            r.partner,
            r.residual,
            r.error_bound
        );
        let slow = check_inverse_exhaustive(&sys, 2, 64, 1e-9)?;
        println!(
            "{:14} exhaustive at L = 2: {} over {} elements",
            "", slow.verdict, slow.ball_size
        );
    }
    Ok(())
}
