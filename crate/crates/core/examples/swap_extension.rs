//! An inverse proper extension on H² ⊕ H²: `T = (S ⊕ S) U` with `U` the swap.

use isolab::extension_lab::thm52_construct;
use isolab::star_semigroup::check_inverse;

fn main() -> isolab::Result<()> {
    let c = thm52_construct(512)?;
    println!("dim ker s*          {}", c.kernel_dimension);
    println!("|st - ts|           {:e}", c.commutator_residual);
    println!("|t² - s²|           {:e}", c.t_squared_distance);
    println!(
        "min |t - s^m s*^n|  {} over m, n <= {}",
        c.properness_distance, c.properness_grid
    );
    let r = check_inverse(&c.system, 6, 64, 1e-9)?;
    println!(
        "L = 6: {} over {} elements, {} idempotents",
        r.verdict, r.ball_size, r.idempotents
    );
    Ok(())
}
