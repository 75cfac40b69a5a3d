mod common;

use isolab::extension_lab::shift_extension;
use isolab::star_semigroup::{bicyclic_normal_form, enumerate_ball, reduce, Letter, Presentation, StarWord};
use proptest::prelude::*;

use common::{shift_system, sym};

/// `a`, `b` isometric and commuting, `c` isometric, `d` a plain contraction.
fn presentation() -> Presentation {
    Presentation::new(
        ["a", "b", "c", "d"].map(String::from).to_vec(),
        vec![true, true, true, false],
        &[(0, 1), (1, 2)],
    )
    .unwrap()
}

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = StarWord> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max_len)
        .prop_map(|ls| StarWord::from_letters(ls.into_iter().map(|(g, s)| Letter::new(g, s)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduction_commutes_with_the_involution(w in word(4, 10)) {
        let p = presentation();
        prop_assert_eq!(reduce(&w.adjoint(), &p).unwrap(), reduce(&w, &p).unwrap().adjoint());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn reduction_is_idempotent(w in word(4, 10)) {
        let p = presentation();
        let r = reduce(&w, &p).unwrap();
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(reduce(&r, &p).unwrap(), r);
    }

    #[test]
    fn reduction_is_a_congruence(u in word(4, 6), v in word(4, 6)) {
        let p = presentation();
        let whole = reduce(&u.concat(&v), &p).unwrap();
        let parts = reduce(&reduce(&u, &p).unwrap().concat(&reduce(&v, &p).unwrap()), &p).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn involution_reverses_and_flips(w in word(4, 10)) {
        prop_assert_eq!(w.adjoint().adjoint(), w.clone());
        let a = w.adjoint();
        for (x, y) in w.letters().iter().zip(a.letters().iter().rev()) {
            prop_assert_eq!(x.adjoint(), *y);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduction_preserves_operators(w in word(2, 10)) {
        let sys = shift_extension(&sym("B(0.5,-0.3i)"), 192).unwrap();
        let r = reduce(&w, sys.presentation()).unwrap();
        let a = sys.action(&w, 16);
        let b = sys.action(&r, 16);
        let d = a.distances(&b).into_iter().fold(0.0, f64::max);
        prop_assert!(d < 1e-10 + a.max_delta() + b.max_delta());
    }
}

#[test]
fn bicyclic_pairs_are_distinguishable() {
    let l = 8;
    let sys = shift_system(128);
    let s = Letter::plain(0);
    let mut ops = Vec::new();
    for m in 0..=l {
        for n in 0..=l - m {
            let mut letters = vec![s; m];
            letters.extend(std::iter::repeat_n(s.adjoint(), n));
            let w = StarWord::from_letters(letters);
            assert_eq!(bicyclic_normal_form(&w, sys.presentation()).unwrap(), (m, n));
            ops.push(((m, n), sys.action(&w, 32)));
        }
    }
    for (i, (pi, a)) in ops.iter().enumerate() {
        for (pj, b) in &ops[..i] {
            let d = a.distances(b).into_iter().fold(0.0, f64::max);
            assert!(d > 0.5, "{pi:?} and {pj:?} at distance {d}");
        }
    }
}

#[test]
fn idempotents_of_the_bicyclic_window() {
    let l = 8;
    let sys = shift_system(128);
    let ball = enumerate_ball(&sys, l, 32, 1e-9).unwrap();
    let mut idempotents = Vec::new();
    for e in &ball.elements {
        let square = sys.act(&e.word, &e.action);
        let star = sys.action(&e.word.adjoint(), 32);
        if square.matches(&e.action, 1e-10) && star.matches(&e.action, 1e-10) {
            idempotents.push(e);
        }
    }
    let forms: Vec<(usize, usize)> = idempotents
        .iter()
        .map(|e| bicyclic_normal_form(&e.word, sys.presentation()).unwrap())
        .collect();
    let want: Vec<(usize, usize)> = (0..=l / 2).map(|k| (k, k)).collect();
    let mut sorted = forms.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, want);
    for e in &idempotents {
        for f in &idempotents {
            let ef = sys.act(&e.word, &f.action);
            let fe = sys.act(&f.word, &e.action);
            assert!(ef.distances(&fe).into_iter().fold(0.0, f64::max) < 1e-10);
        }
    }
}

#[test]
fn ball_enumeration_is_deterministic_across_schedules() {
    let sys = shift_extension(&sym("B(0.5)"), 256).unwrap();
    let reference = enumerate_ball(&sys, 4, 32, 1e-9).unwrap();
    for threads in [1, 2, 5] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let again = pool.install(|| enumerate_ball(&sys, 4, 32, 1e-9).unwrap());
        assert_eq!(again.elements, reference.elements, "{threads} threads");
    }
}
