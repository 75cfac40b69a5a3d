//! Hankel rank of coefficient windows: finite for rational symbols.

use isolab::extension_lab::{hankel_rank, HANKEL_REL_TOL};
use isolab::inner_function::InnerSymbol;

fn main() -> isolab::Result<()> {
    for (lit, d) in [
        ("z^3", 64),
        ("B(0.5,-0.3i)", 64),
        ("z * B(0.6,-0.4i,0.2+0.3i)", 64),
        ("S(0:1)", 128),
        ("S(0:1)", 512),
    ] {
        let phi: InnerSymbol = lit.parse()?;
        let p = hankel_rank(&phi.fourier_coeffs(d), HANKEL_REL_TOL)?;
        let head: Vec<String> = p.singular_values.iter().take(6).map(|s| format!("{s:.2e}")).collect();
        println!("{lit:26} D = {d:3}: rank {:?}, σ = [{}, …]", p.rank, head.join(", "));
    }
    Ok(())
}
