mod common;

use std::f64::consts::TAU;

use isolab::inner_function::{Atom, InnerSymbol, ATOM_HIT_TOL};
use num_complex::Complex64;
use proptest::prelude::*;

use common::{max_diff, sym, CORPUS};

fn zero() -> impl Strategy<Value = Complex64> {
    (0.05f64..0.9, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn rational() -> impl Strategy<Value = InnerSymbol> {
    (prop::collection::vec(zero(), 0..5), 0u32..4, 0.0..TAU)
        .prop_map(|(zeros, n, c)| InnerSymbol::new(Complex64::from_polar(1.0, c), n, &zeros, Vec::new()).unwrap())
}

fn general() -> impl Strategy<Value = InnerSymbol> {
    (rational(), prop::collection::vec((0.0..TAU, 0.1f64..2.0), 0..3)).prop_map(|(r, atoms)| {
        let mut out = r;
        for (angle, mass) in atoms {
            out = out.multiply(&InnerSymbol::singular_atom(angle, mass).unwrap());
        }
        out
    })
}

fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    (0..a.len()).map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_values_are_unimodular(s in general()) {
        let atoms: Vec<f64> = s.singular().atoms().iter().map(|a: &Atom| a.angle).collect();
        for m in 0..1024 {
            let theta = TAU * (m as f64 + 0.5) / 1024.0;
            let near = atoms.iter().any(|&a| {
                let d = (theta - a).rem_euclid(TAU);
                d.min(TAU - d) < 10.0 * ATOM_HIT_TOL
            });
            if near {
                continue;
            }
            let v = s.eval(theta).unwrap();
            prop_assert!((v.norm() - 1.0).abs() < 1e-9, "θ = {theta}: |Φ| = {}", v.norm());
        }
    }

    #[test]
    fn parseval_partial_sums(s in general()) {
        let c = s.fourier_coeffs(256);
        let mut sum = 0.0;
        for ck in &c {
            let next = sum + ck.norm_sqr();
            prop_assert!(next >= sum);
            sum = next;
        }
        prop_assert!(sum <= 1.0 + 1e-12);
        if s.is_rational() {
            let tail = s.tail_l2(256);
            prop_assert!(1.0 - sum <= tail * tail + 1e-12, "missing {} > tail² {}", 1.0 - sum, tail * tail);
        }
    }

    #[test]
    fn products_convolve_coefficients(u in general(), v in general(), d in 1usize..=64) {
        let direct = u.multiply(&v).fourier_coeffs(d);
        let conv = convolve(&u.fourier_coeffs(d), &v.fourier_coeffs(d));
        prop_assert!(max_diff(&direct, &conv) < 1e-9);
    }

    #[test]
    fn closed_form_matches_sampled(s in rational(), d in 1usize..=64) {
        let closed = s.fourier_coeffs(d);
        let sampled = s.fourier_coeffs_sampled(d, 0);
        prop_assert!(max_diff(&closed, &sampled) < 1e-10);
    }

    #[test]
    fn literal_round_trip(s in general()) {
        let text = s.to_string();
        let back: InnerSymbol = text.parse().unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn coefficients_vanish_below_the_monomial(s in rational()) {
        let n = s.monomial_power() as usize;
        let c = s.fourier_coeffs(n + 4);
        prop_assert!(c[..n].iter().all(|x| x.norm() == 0.0));
    }
}

#[test]
fn corpus_parseval_sums_approach_one() {
    for lit in CORPUS {
        let s = sym(lit);
        let total: f64 = s.fourier_coeffs(4096).iter().map(|c| c.norm_sqr()).sum();
        assert!(total <= 1.0 + 1e-12, "{lit}: {total}");
        let want = if s.is_rational() { 1e-12 } else { 0.05 };
        assert!(1.0 - total < want, "{lit}: {total}");
    }
}

#[test]
fn invalid_symbols_are_rejected() {
    assert!(InnerSymbol::blaschke(&[Complex64::new(1.0 - 1e-13, 0.0)]).is_err());
    assert!(InnerSymbol::singular_atom(0.0, 0.0).is_err());
    assert!(InnerSymbol::identity().with_constant(Complex64::new(0.5, 0.0)).is_err());
    let s = sym("S(1:1)");
    assert!(s.eval(1.0).is_err());
    assert!(s.eval(1.5).is_ok());
}
