use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A generator or its adjoint. Ordered `g < g* < h < h*` for `g < h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub starred: bool,
}

impl Letter {
    pub fn new(generator: usize, starred: bool) -> Self {
        Self { generator, starred }
    }

    pub fn plain(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn star(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub fn adjoint(self) -> Self {
        Self::new(self.generator, !self.starred)
    }
}

/// A product of letters, read left to right as operator composition:
/// `g h` acts by `h` first. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StarWord {
    letters: Vec<Letter>,
}

impl StarWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reverses the order and flips every star.
    pub fn adjoint(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.adjoint()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// `letter · self`.
    pub fn prepend(&self, letter: Letter) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Self { letters }
    }

    /// Parses `s t* s s*` against the generator names. `1` or an empty string
    /// is the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Self::identity());
        }
        let mut letters = Vec::new();
        for token in trimmed.split_whitespace() {
            let (name, starred) = match token.strip_suffix('*') {
                Some(base) => (base, true),
                None => (token, false),
            };
            if name.is_empty() || name.contains('*') {
                return Err(Error::WordSyntax {
                    input: text.to_string(),
                    reason: format!("malformed letter `{token}`"),
                });
            }
            let generator = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            letters.push(Letter::new(generator, starred));
        }
        Ok(Self { letters })
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let name = names
                    .get(l.generator)
                    .cloned()
                    .unwrap_or_else(|| format!("g{}", l.generator));
                if l.starred {
                    format!("{name}*")
                } else {
                    name
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Shortlex: by length, then lexicographically by letters.
impl Ord for StarWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for StarWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
