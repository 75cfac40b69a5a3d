use super::rewrite::Presentation;
use super::word::{Letter, StarWord};
use crate::error::{Error, Result};
use crate::operator_core::{LetterKernel, ProbeBlock, TruncatedOperator};

/// Declared-relation tolerance for isometries and commuting pairs.
pub const RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub operator: TruncatedOperator,
    pub isometric: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, operator: TruncatedOperator, isometric: bool) -> Self {
        Self {
            name: name.into(),
            operator,
            isometric,
        }
    }
}

/// Generators realized as truncated operators, with declared relations that
/// have been checked against the realization.
#[derive(Debug, Clone)]
pub struct GeneratorSystem {
    presentation: Presentation,
    operators: Vec<TruncatedOperator>,
    kernels: Vec<[LetterKernel; 2]>,
}

impl GeneratorSystem {
    /// `commuting` lists pairs of generator names.
    pub fn new(generators: Vec<Generator>, commuting: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
        let index = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        let mut pairs = Vec::with_capacity(commuting.len());
        for &(a, b) in commuting {
            pairs.push((index(a)?, index(b)?));
        }
        let presentation = Presentation::new(names.clone(), generators.iter().map(|g| g.isometric).collect(), &pairs)?;
        let n = generators[0].operator.n();
        for g in &generators {
            if g.operator.n() != n {
                return Err(Error::SizeMismatch(format!(
                    "generator `{}` has size {}, expected {n}",
                    g.name,
                    g.operator.n()
                )));
            }
            if g.isometric && !g.operator.is_isometry_on_probe(RELATION_TOL)? {
                return Err(Error::InvalidSystem(format!(
                    "generator `{}` is flagged isometric but has defect {:e}",
                    g.name,
                    g.operator.isometry_defect()?
                )));
            }
        }
        for &(a, b) in &pairs {
            let (ga, gb) = (&generators[a].operator, &generators[b].operator);
            let ab = ga.compose(gb)?;
            let ba = gb.compose(ga)?;
            if !ab.approx_equal(&ba, RELATION_TOL)? {
                return Err(Error::InvalidSystem(format!(
                    "`{}` and `{}` do not commute (probe distance {:e})",
                    names[a],
                    names[b],
                    ab.probe_distance(&ba)?
                )));
            }
        }
        let kernels = generators
            .iter()
            .map(|g| [LetterKernel::new(&g.operator), LetterKernel::new(&g.operator.adjoint())])
            .collect();
        Ok(Self {
            presentation,
            operators: generators.into_iter().map(|g| g.operator).collect(),
            kernels,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn names(&self) -> &[String] {
        self.presentation.names()
    }

    pub fn n(&self) -> usize {
        self.operators[0].n()
    }

    pub fn operator(&self, g: usize) -> &TruncatedOperator {
        &self.operators[g]
    }

    pub fn operators(&self) -> &[TruncatedOperator] {
        &self.operators
    }

    pub fn kernel(&self, letter: Letter) -> &LetterKernel {
        &self.kernels[letter.generator][letter.starred as usize]
    }

    pub fn parse(&self, text: &str) -> Result<StarWord> {
        self.presentation.parse(text)
    }

    pub fn render(&self, w: &StarWord) -> String {
        self.presentation.render(w)
    }

    /// `w` applied to `block`, rightmost letter first.
    pub fn act(&self, w: &StarWord, block: &ProbeBlock) -> ProbeBlock {
        let mut out = block.clone();
        for &l in w.letters().iter().rev() {
            out = self.kernel(l).apply(&out);
        }
        out
    }

    /// `w` applied to `e_0, …, e_{k-1}`.
    pub fn action(&self, w: &StarWord, k: usize) -> ProbeBlock {
        self.act(w, &ProbeBlock::basis(self.n(), k))
    }

    /// The word as a truncated operator (matrix products with metadata).
    pub fn realize(&self, w: &StarWord) -> Result<TruncatedOperator> {
        let mut out = TruncatedOperator::identity(self.n());
        for &l in w.letters() {
            let op = if l.starred {
                self.operators[l.generator].adjoint()
            } else {
                self.operators[l.generator].clone()
            };
            out = out.compose(&op)?;
        }
        Ok(out)
    }

    /// Largest per-letter reach at coefficient level `eps` over generators
    /// whose reach is finite inside the window.
    pub fn reach(&self, eps: f64) -> Option<usize> {
        self.operators.iter().filter_map(|op| op.reach(eps)).max()
    }

    /// Corner rule: a window of `k` probe columns and words of length `l`
    /// need `N >= k + l · D_eff`.
    pub fn check_window(&self, l: usize, k: usize, eps: f64) -> Result<()> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::ProbeExhausted(format!(
                "probe dimension {k} must lie in 1..={n}"
            )));
        }
        let d = self.reach(eps).unwrap_or(0);
        let need = k + l * d;
        if need > n {
            return Err(Error::ProbeExhausted(format!(
                "N = {n} is too small for K = {k}, L = {l}, D_eff = {d} (need {need})"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner_function::InnerSymbol;

    fn shift_and(sym: &InnerSymbol, n: usize) -> Result<GeneratorSystem> {
        GeneratorSystem::new(
            vec![
                Generator::new("s", TruncatedOperator::shift_matrix(n), true),
                Generator::new("t", TruncatedOperator::mult_operator(sym, n), true),
            ],
            &[("s", "t")],
        )
    }

    #[test]
    fn declared_relations_are_checked() {
        let sym = InnerSymbol::blaschke_real(&[0.5]).unwrap();
        let sys = shift_and(&sym, 128).unwrap();
        assert_eq!(sys.names(), &["s".to_string(), "t".to_string()]);
        let n = 64;
        let bad = GeneratorSystem::new(
            vec![Generator::new("s", TruncatedOperator::shift_matrix(n).adjoint(), true)],
            &[],
        );
        assert!(matches!(bad, Err(Error::InvalidSystem(_))));
        let s = TruncatedOperator::shift_matrix(2 * n);
        let u = TruncatedOperator::swap_unitary(2 * n).unwrap();
        let not_commuting = GeneratorSystem::new(
            vec![Generator::new("s", s, true), Generator::new("u", u, true)],
            &[("s", "u")],
        );
        assert!(matches!(not_commuting, Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn actions_agree_with_matrix_products() {
        let sym = InnerSymbol::blaschke(&[num_complex::Complex64::new(0.2, 0.4)]).unwrap();
        let sys = shift_and(&sym, 96).unwrap();
        let w = sys.parse("t* s t s* t").unwrap();
        let act = sys.action(&w, 8);
        let real = sys.realize(&w).unwrap();
        for j in 0..8 {
            let col = act.dense_column(j);
            let want = real.column(j);
            let d: f64 = col.iter().zip(&want).map(|(a, b)| (a - b).norm_sqr()).sum();
            assert!(d.sqrt() < 1e-13);
        }
    }

    #[test]
    fn window_rule() {
        let sym = InnerSymbol::blaschke_real(&[0.5]).unwrap();
        let sys = shift_and(&sym, 128).unwrap();
        assert!(sys.check_window(2, 32, 1e-9).is_ok());
        assert!(matches!(sys.check_window(8, 64, 1e-9), Err(Error::ProbeExhausted(_))));
        let sing = InnerSymbol::singular_atom(0.0, 1.0).unwrap();
        let sys = shift_and(&sing, 256).unwrap();
        assert!(sys.check_window(4, 64, 1e-9).is_ok());
    }
}
