//! Parse a symbol literal, evaluate it on the circle and read its coefficients.

use isolab::inner_function::InnerSymbol;

fn main() -> isolab::Result<()> {
    let phi: InnerSymbol = "z * B(0.5,-0.3i) * S(0:1)".parse()?;
    println!("symbol      {phi}");
    println!("degree      {}", phi.blaschke_degree());
    for theta in [0.5, 1.0, 3.0] {
        let v = phi.eval(theta)?;
        println!("Φ(e^i{theta}) = {v:.6}  |Φ| = {:.15}", v.norm());
    }
    let c = phi.fourier_coeffs(8);
    for (k, ck) in c.iter().enumerate() {
        println!("c_{k} = {ck:.6}");
    }
    let head: f64 = phi.fourier_coeffs(512).iter().map(|c| c.norm_sqr()).sum();
    println!("Σ_{{k<=512}} |c_k|² = {head:.12}");

    let b: InnerSymbol = "B(0.5)".parse()?;
    println!("B(0.5) tail beyond 40: {:e}", b.tail_l2(40));
    println!("B(0.5)² = {}", b.power(2));
    Ok(())
}
