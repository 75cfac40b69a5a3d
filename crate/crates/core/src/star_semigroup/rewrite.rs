//! Normal forms for words over an involutive alphabet with the relations
//! `g* g = 1` (isometric `g`) and `g h = h g` (declared commuting pairs).
//!
//! A word is cut into maximal runs of unstarred and of starred letters.
//! Commutation only acts inside a run, so each run is a trace; `g* g`
//! cancels across a starred/unstarred boundary whenever `g*` can be moved to
//! the end of its run and `g` to the front of the next. Reduction keeps a
//! stack of runs and, after every cancellation, pushes the following run
//! again so that cancellations cascade. Runs are finally written in a fixed
//! representative: unstarred runs as their lexicographically least
//! rearrangement, starred runs as the adjoint of that for their adjoint.

use super::word::{Letter, StarWord};
use crate::error::{Error, Result};

/// The symbolic part of a generator system.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    names: Vec<String>,
    isometric: Vec<bool>,
    commuting: Vec<Vec<bool>>,
}

impl Presentation {
    pub fn new(names: Vec<String>, isometric: Vec<bool>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidSystem("empty alphabet".into()));
        }
        if isometric.len() != n {
            return Err(Error::InvalidSystem(format!(
                "{} isometry flags for {} generators",
                isometric.len(),
                n
            )));
        }
        for (i, name) in names.iter().enumerate() {
            let valid = !name.is_empty() && name != "1" && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidSystem(format!("invalid generator name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidSystem(format!("duplicate generator `{name}`")));
            }
        }
        let mut commuting = vec![vec![false; n]; n];
        for &(g, h) in pairs {
            if g >= n || h >= n {
                return Err(Error::UnknownGenerator(format!("#{}", g.max(h))));
            }
            if g == h {
                return Err(Error::InvalidSystem(format!(
                    "generator `{}` declared commuting with itself",
                    names[g]
                )));
            }
            commuting[g][h] = true;
            commuting[h][g] = true;
        }
        Ok(Self {
            names,
            isometric,
            commuting,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_isometric(&self, g: usize) -> bool {
        self.isometric[g]
    }

    /// Declared `g h = h g`; a letter trivially commutes with itself.
    pub fn commutes(&self, g: usize, h: usize) -> bool {
        g == h || self.commuting[g][h]
    }

    /// Declared pairs `(g, h)`, `g < h`.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for g in 0..self.len() {
            for h in g + 1..self.len() {
                if self.commuting[g][h] {
                    out.push((g, h));
                }
            }
        }
        out
    }

    /// All letters in alphabet order `g < g* < h < h*`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.len())
            .flat_map(|g| [Letter::plain(g), Letter::star(g)])
            .collect()
    }

    pub fn parse(&self, text: &str) -> Result<StarWord> {
        StarWord::parse(text, &self.names)
    }

    pub fn render(&self, w: &StarWord) -> String {
        w.render(&self.names)
    }

    fn check(&self, w: &StarWord) -> Result<()> {
        match w.letters().iter().find(|l| l.generator >= self.len()) {
            Some(l) => Err(Error::UnknownGenerator(format!("#{}", l.generator))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
struct Run {
    starred: bool,
    generators: Vec<usize>,
}

fn push(stack: &mut Vec<Run>, letter: Letter, p: &Presentation) {
    let g = letter.generator;
    if letter.starred {
        match stack.last_mut() {
            Some(run) if run.starred => run.generators.push(g),
            _ => stack.push(Run {
                starred: true,
                generators: vec![g],
            }),
        }
        return;
    }
    let top_positive = matches!(stack.last(), Some(run) if !run.starred);
    let can_reach_front = match stack.last() {
        Some(run) if !run.starred => run.generators.iter().all(|&h| p.commutes(g, h)),
        _ => true,
    };
    if can_reach_front && p.is_isometric(g) {
        let star_idx = if top_positive {
            stack.len().checked_sub(2)
        } else {
            stack.len().checked_sub(1)
        };
        if let Some(si) = star_idx {
            let run = &stack[si];
            debug_assert!(run.starred);
            if let Some(pos) = run.generators.iter().rposition(|&h| h == g) {
                let movable = run.generators[pos + 1..].iter().all(|&h| p.commutes(g, h));
                if movable {
                    stack[si].generators.remove(pos);
                    let trailing = if top_positive { stack.pop() } else { None };
                    if stack[si].generators.is_empty() {
                        stack.remove(si);
                    }
                    if let Some(run) = trailing {
                        for h in run.generators {
                            push(stack, Letter::plain(h), p);
                        }
                    }
                    return;
                }
            }
        }
    }
    match stack.last_mut() {
        Some(run) if !run.starred => run.generators.push(g),
        _ => stack.push(Run {
            starred: false,
            generators: vec![g],
        }),
    }
}

/// Lexicographically least rearrangement of a trace of unstarred letters.
fn canonical_positive(gens: &[usize], p: &Presentation) -> Vec<usize> {
    let mut rest: Vec<usize> = gens.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for (pos, &g) in rest.iter().enumerate() {
            if rest[..pos].contains(&g) {
                continue;
            }
            if rest[..pos].iter().all(|&h| p.commutes(g, h)) && best.is_none_or(|b| g < rest[b]) {
                best = Some(pos);
            }
        }
        let pos = best.expect("the first letter is always available");
        out.push(rest.remove(pos));
    }
    out
}

/// Run normal form. Confluent: any two words equal under the relations
/// reduce to the same word, and `reduce(w*) = reduce(w)*`.
pub fn reduce(w: &StarWord, p: &Presentation) -> Result<StarWord> {
    p.check(w)?;
    let mut stack: Vec<Run> = Vec::new();
    for &l in w.letters() {
        push(&mut stack, l, p);
    }
    let mut letters = Vec::with_capacity(w.len());
    for run in &stack {
        if run.starred {
            let adj: Vec<usize> = run.generators.iter().rev().copied().collect();
            let canon = canonical_positive(&adj, p);
            letters.extend(canon.iter().rev().map(|&g| Letter::star(g)));
        } else {
            let canon = canonical_positive(&run.generators, p);
            letters.extend(canon.iter().map(|&g| Letter::plain(g)));
        }
    }
    Ok(StarWord::from_letters(letters))
}

/// A place where one literal rule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSite {
    /// `g* g -> 1` at positions `(i, i + 1)`.
    Cancel(usize),
    /// `h g -> g h` (unstarred, `g < h`) or `g* h* -> h* g*` at `(i, i + 1)`.
    Swap(usize),
}

pub fn rule_sites(w: &StarWord, p: &Presentation) -> Vec<RuleSite> {
    let ls = w.letters();
    let mut out = Vec::new();
    for i in 0..ls.len().saturating_sub(1) {
        let (a, b) = (ls[i], ls[i + 1]);
        if a.starred && !b.starred && a.generator == b.generator && p.is_isometric(a.generator) {
            out.push(RuleSite::Cancel(i));
        }
        if a.starred == b.starred && a.generator != b.generator && p.commutes(a.generator, b.generator) {
            let out_of_order = if a.starred {
                a.generator < b.generator
            } else {
                a.generator > b.generator
            };
            if out_of_order {
                out.push(RuleSite::Swap(i));
            }
        }
    }
    out
}

pub fn apply_rule(w: &StarWord, site: RuleSite) -> StarWord {
    let mut ls = w.letters().to_vec();
    match site {
        RuleSite::Cancel(i) => {
            ls.drain(i..i + 2);
        }
        RuleSite::Swap(i) => ls.swap(i, i + 1),
    }
    StarWord::from_letters(ls)
}

/// `(m, n)` with `reduce(w) = s^m s*^n` over a single isometric generator.
pub fn bicyclic_normal_form(w: &StarWord, p: &Presentation) -> Result<(usize, usize)> {
    if p.len() != 1 || !p.is_isometric(0) {
        return Err(Error::InvalidSystem(
            "bicyclic normal form needs exactly one isometric generator".into(),
        ));
    }
    let r = reduce(w, p)?;
    let m = r.letters().iter().take_while(|l| !l.starred).count();
    let n = r.len() - m;
    debug_assert!(r.letters()[m..].iter().all(|l| l.starred));
    Ok((m, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> Presentation {
        Presentation::new(vec!["s".into()], vec![true], &[]).unwrap()
    }

    fn pair(commuting: bool) -> Presentation {
        let pairs: &[(usize, usize)] = if commuting { &[(0, 1)] } else { &[] };
        Presentation::new(vec!["s".into(), "t".into()], vec![true, true], pairs).unwrap()
    }

    fn red(text: &str, p: &Presentation) -> String {
        p.render(&reduce(&p.parse(text).unwrap(), p).unwrap())
    }

    #[test]
    fn cancellations() {
        let p = single();
        assert_eq!(red("s* s s* s", &p), "1");
        assert_eq!(red("s s*", &p), "s s*");
        assert_eq!(red("s s* s", &p), "s");
        assert_eq!(red("s* s s", &p), "s");
        assert_eq!(red("s* s* s", &p), "s*");
    }

    #[test]
    fn commuting_pairs_sort() {
        let p = pair(true);
        assert_eq!(red("t s", &p), "s t");
        assert_eq!(red("s* t*", &p), "t* s*");
        assert_eq!(red("t* s* t s", &p), "1");
        // s* cancels through t* once the run is rearranged.
        assert_eq!(red("s* t* s", &p), "t*");
        assert_eq!(red("s* t* t s", &p), "1");
        let q = pair(false);
        assert_eq!(red("t s", &q), "t s");
        assert_eq!(red("s* t* s", &q), "s* t* s");
    }

    #[test]
    fn cascades() {
        let p = pair(true);
        // t s* blocks nothing once s cancels: s* t* (s t) -> 1.
        assert_eq!(red("s* t* s t", &p), "1");
        assert_eq!(red("t* s* s* s s t", &p), "1");
        assert_eq!(red("s* s* t s s", &p), "t");
    }

    #[test]
    fn non_isometric_letters_do_not_cancel() {
        let p = Presentation::new(vec!["s".into()], vec![false], &[]).unwrap();
        assert_eq!(red("s* s", &p), "s* s");
    }

    #[test]
    fn bicyclic_forms() {
        let p = single();
        let nf = |t: &str| bicyclic_normal_form(&p.parse(t).unwrap(), &p).unwrap();
        assert_eq!(nf("s s* s"), (1, 0));
        assert_eq!(nf("s* s s"), (1, 0));
        assert_eq!(nf("s* s* s"), (0, 1));
        assert_eq!(nf("s s s* s* s* s"), (2, 2));
        assert!(bicyclic_normal_form(&StarWord::identity(), &pair(true)).is_err());
    }

    #[test]
    fn rule_sites_are_literal() {
        let p = pair(true);
        let w = p.parse("t s s* s t* s*").unwrap();
        let sites = rule_sites(&w, &p);
        assert_eq!(sites, vec![RuleSite::Swap(0), RuleSite::Cancel(2)]);
        assert_eq!(p.render(&apply_rule(&w, sites[0])), "s t s* s t* s*");
        assert_eq!(p.render(&apply_rule(&w, sites[1])), "t s t* s*");
    }

    #[test]
    fn unknown_generator() {
        let p = single();
        let w = StarWord::from_letters(vec![Letter::plain(3)]);
        assert!(matches!(reduce(&w, &p), Err(Error::UnknownGenerator(_))));
    }
}
