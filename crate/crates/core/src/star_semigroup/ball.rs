use std::collections::HashSet;
use std::ops::Range;

use rayon::prelude::*;

use super::rewrite::reduce;
use super::system::GeneratorSystem;
use super::word::{Letter, StarWord};
use crate::error::Result;
use crate::operator_core::ProbeBlock;

/// One distinct element: its least normal-form word and its probe action.
#[derive(Debug, Clone, PartialEq)]
pub struct BallElement {
    pub word: StarWord,
    pub action: ProbeBlock,
}

#[derive(Debug, Clone)]
pub struct Ball {
    pub elements: Vec<BallElement>,
    pub max_length: usize,
    pub probe_dim: usize,
    pub truncation: usize,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn words(&self) -> Vec<&StarWord> {
        self.elements.iter().map(|e| &e.word).collect()
    }

    /// Index of the element whose action matches `block`.
    pub fn find(&self, block: &ProbeBlock, tol: f64) -> Option<usize> {
        self.elements.iter().position(|e| e.action.matches(block, tol))
    }
}

/// Breadth-first growth of the ball, one word length at a time.
pub(crate) struct BallBuilder<'a> {
    sys: &'a GeneratorSystem,
    k: usize,
    tol: f64,
    max_length: usize,
    level: Option<usize>,
    frontier: Range<usize>,
    seen: HashSet<StarWord>,
    pub(crate) elements: Vec<BallElement>,
}

impl<'a> BallBuilder<'a> {
    pub(crate) fn new(sys: &'a GeneratorSystem, max_length: usize, k: usize, tol: f64) -> Result<Self> {
        sys.check_window(max_length, k, tol)?;
        Ok(Self {
            sys,
            k,
            tol,
            max_length,
            level: None,
            frontier: 0..0,
            seen: HashSet::new(),
            elements: Vec::new(),
        })
    }

    /// Word length of the last completed level.
    pub(crate) fn level(&self) -> usize {
        self.level.unwrap_or(0)
    }

    /// Adds the elements of the next word length and returns their indices.
    pub(crate) fn advance(&mut self) -> Option<Range<usize>> {
        let level = match self.level {
            None => {
                self.level = Some(0);
                self.seen.insert(StarWord::identity());
                self.elements.push(BallElement {
                    word: StarWord::identity(),
                    action: ProbeBlock::basis(self.sys.n(), self.k),
                });
                self.frontier = 0..1;
                return Some(0..1);
            }
            Some(l) if l >= self.max_length => return None,
            Some(l) => l + 1,
        };
        let p = self.sys.presentation();
        let letters = p.letters();
        let mut cands: Vec<(StarWord, usize, Letter)> = Vec::new();
        for parent in self.frontier.clone() {
            for &l in &letters {
                let w = self.elements[parent].word.prepend(l);
                let nf = reduce(&w, p).expect("letters come from the alphabet");
                cands.push((nf, parent, l));
            }
        }
        cands.sort();
        cands.dedup_by(|a, b| a.0 == b.0);
        cands.retain(|c| !self.seen.contains(&c.0));
        for c in &cands {
            self.seen.insert(c.0.clone());
        }
        let sys = self.sys;
        let elements = &self.elements;
        let tol = self.tol;
        let evaluated: Vec<(ProbeBlock, bool)> = cands
            .par_iter()
            .map(|(_, parent, l)| {
                let action = sys.kernel(*l).apply(&elements[*parent].action);
                let known = elements.iter().any(|e| e.action.matches(&action, tol));
                (action, known)
            })
            .collect();
        let start = self.elements.len();
        for ((nf, _, _), (action, known)) in cands.into_iter().zip(evaluated) {
            if known {
                continue;
            }
            if self.elements[start..].iter().any(|e| e.action.matches(&action, tol)) {
                continue;
            }
            self.elements.push(BallElement { word: nf, action });
        }
        self.level = Some(level);
        self.frontier = start..self.elements.len();
        Some(self.frontier.clone())
    }
}

/// All distinct elements of word length `<= max_length`, deduplicated by
/// normal form and then by probe action at `tol`, in shortlex order.
pub fn enumerate_ball(sys: &GeneratorSystem, max_length: usize, k: usize, tol: f64) -> Result<Ball> {
    let mut b = BallBuilder::new(sys, max_length, k, tol)?;
    while b.advance().is_some() {}
    let mut elements = b.elements;
    elements.sort_by(|x, y| x.word.cmp(&y.word));
    Ok(Ball {
        elements,
        max_length,
        probe_dim: k.min(sys.n()),
        truncation: sys.n(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_function::InnerSymbol;
    use crate::operator_core::TruncatedOperator;
    use crate::star_semigroup::system::Generator;

    fn shift_system(n: usize) -> GeneratorSystem {
        GeneratorSystem::new(vec![Generator::new("s", TruncatedOperator::shift_matrix(n), true)], &[]).unwrap()
    }

    #[test]
    fn bicyclic_ball_of_radius_two() {
        let sys = shift_system(64);
        let ball = enumerate_ball(&sys, 2, 16, 1e-9).unwrap();
        let shown: Vec<String> = ball.elements.iter().map(|e| sys.render(&e.word)).collect();
        assert_eq!(shown, ["1", "s", "s*", "s s", "s s*", "s* s*"]);
        assert_eq!(enumerate_ball(&sys, 0, 16, 1e-9).unwrap().len(), 1);
    }

    #[test]
    fn monomial_generator_collapses_onto_the_shift() {
        let n = 96;
        let sys = GeneratorSystem::new(
            vec![
                Generator::new("s", TruncatedOperator::shift_matrix(n), true),
                Generator::new(
                    "t",
                    TruncatedOperator::mult_operator(&InnerSymbol::monomial(2), n),
                    true,
                ),
            ],
            &[("s", "t")],
        )
        .unwrap();
        let ball = enumerate_ball(&sys, 3, 16, 1e-9).unwrap();
        // t = s², so every element is some s^m s*^n and `s s` is spelled `t`.
        let single = shift_system(n);
        let big = enumerate_ball(&single, 6, 16, 1e-9).unwrap();
        for e in &ball.elements {
            assert!(big.find(&e.action, 1e-9).is_some());
        }
        assert!(ball.elements.iter().all(|e| sys.render(&e.word) != "s s"));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let n = 128;
        let sym = InnerSymbol::blaschke_real(&[0.5]).unwrap();
        let sys = GeneratorSystem::new(
            vec![
                Generator::new("s", TruncatedOperator::shift_matrix(n), true),
                Generator::new("t", TruncatedOperator::mult_operator(&sym, n), true),
            ],
            &[("s", "t")],
        )
        .unwrap();
        let a = enumerate_ball(&sys, 2, 8, 1e-9).unwrap();
        let b = enumerate_ball(&sys, 2, 8, 1e-9).unwrap();
        assert_eq!(a.elements, b.elements);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| enumerate_ball(&sys, 2, 8, 1e-9).unwrap());
        assert_eq!(a.elements, c.elements);
    }
}
