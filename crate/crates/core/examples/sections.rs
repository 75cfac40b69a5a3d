//! Finite sections of multipliers, their certified probe window, and dumps.

use isolab::inner_function::InnerSymbol;
use isolab::operator_core::{read_dump, write_dump, TruncatedOperator};

fn main() -> isolab::Result<()> {
    let n = 128;
    let u: InnerSymbol = "B(0.5)".parse()?;
    let v: InnerSymbol = "z^2".parse()?;
    let tu = TruncatedOperator::mult_operator(&u, n);
    let tv = TruncatedOperator::mult_operator(&v, n);
    println!("T_u: N = {}, K = {}, ε = {:e}", tu.n(), tu.probe_dim(), tu.tail_bound());
    println!("isometry defect on probe columns: {:e}", tu.isometry_defect()?);

    let product = tu.compose(&tv)?;
    let direct = TruncatedOperator::mult_operator(&u.multiply(&v), n);
    println!(
        "|T_u T_v - T_uv| on probe columns: {:e}",
        product.probe_distance(&direct)?
    );

    let s = TruncatedOperator::shift_matrix(n);
    let ss = s.adjoint().compose(&s)?;
    println!("S*S = 1: {}", ss.approx_equal(&TruncatedOperator::identity(n), 1e-12)?);
    println!("dim ker S* = {}", s.kernel_of_adjoint(1e-8)?.dimension);

    let path = std::env::temp_dir().join("isolab-section.bin");
    write_dump(&tu, &path)?;
    let (header, m) = read_dump(&path)?;
    println!(
        "dump {}: N = {}, K = {}, eps = {:e}, {}x{}",
        path.display(),
        header.n,
        header.k,
        header.eps,
        m.nrows(),
        m.ncols()
    );
    Ok(())
}
