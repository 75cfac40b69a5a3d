//! Isometry and commutation with π(1), π(2), π(3) for candidate extensions.

use isolab::extension_lab::{validate_extension, ExtensionCandidate};
use isolab::inner_function::InnerSymbol;
use isolab::operator_core::TruncatedOperator;

fn main() -> isolab::Result<()> {
    let n = 256;
    let phi: InnerSymbol = "B(0.5,-0.3i)".parse()?;
    let candidates = [
        ("T_Φ", TruncatedOperator::mult_operator(&phi, n)),
        ("S*", TruncatedOperator::shift_matrix(n).adjoint()),
        ("swap", TruncatedOperator::swap_unitary(n)?),
    ];
    for (name, t) in candidates {
        let v = validate_extension(&ExtensionCandidate::over_shift(n, vec![t])?, 1e-10)?;
        println!("{name}: {}", if v.pass { "valid" } else { "invalid" });
        for c in &v.conditions {
            println!(
                "    {:12} {:.3e} (allowance {:.1e})",
                c.condition, c.residual, c.allowance
            );
        }
    }
    Ok(())
}
