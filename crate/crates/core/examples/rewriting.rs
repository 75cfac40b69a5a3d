//! Normal forms of star words under `g* g = 1` and declared commutations.

use isolab::star_semigroup::{apply_rule, bicyclic_normal_form, reduce, rule_sites, Presentation};

fn main() -> isolab::Result<()> {
    let p = Presentation::new(vec!["s".into(), "t".into()], vec![true, true], &[(0, 1)])?;
    for text in ["s* s t", "t s* s t* t", "s* t* t s s", "t s s* t*", "s* t s"] {
        let w = p.parse(text)?;
        let r = reduce(&w, &p)?;
        let star = reduce(&w.adjoint(), &p)?;
        println!("{text:12} -> {:10} adjoint -> {}", p.render(&r), p.render(&star));
    }

    let w = p.parse("s* t s t*")?;
    for site in rule_sites(&w, &p) {
        println!("{} --{site:?}--> {}", p.render(&w), p.render(&apply_rule(&w, site)));
    }

    let single = Presentation::new(vec!["s".into()], vec![true], &[])?;
    let w = single.parse("s s* s* s s s*")?;
    println!(
        "bicyclic form of {} is {:?}",
        single.render(&w),
        bicyclic_normal_form(&w, &single)?
    );
    Ok(())
}
