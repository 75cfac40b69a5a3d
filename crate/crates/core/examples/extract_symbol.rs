//! Recover the symbol of an operator commuting with the shift.

use isolab::extension_lab::{extract_symbol, UNIMODULAR_GRID};
use isolab::inner_function::InnerSymbol;
use isolab::operator_core::TruncatedOperator;

fn main() -> isolab::Result<()> {
    let n = 512;
    for lit in ["z^2 * B(0.6i)", "B(0.8,-0.5)", "S(0:1)"] {
        let phi: InnerSymbol = lit.parse()?;
        let t = TruncatedOperator::mult_operator(&phi, n);
        let e = extract_symbol(&t, 96, UNIMODULAR_GRID)?;
        let err = e
            .coefficients
            .iter()
            .zip(phi.fourier_coeffs(96))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!(
            "{lit:14} coefficient error {err:.1e}, round trip {:.1e}, max ||Φ|-1| {:.1e} (tolerance {:.1e}), inner {}",
            e.round_trip_error, e.max_modulus_deviation, e.unimodular_tolerance, e.inner
        );
    }
    Ok(())
}
