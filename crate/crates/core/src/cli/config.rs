use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::inner_function::InnerSymbol;

pub const DEFAULT_N: usize = 512;
pub const DEFAULT_K: usize = 64;
pub const DEFAULT_L: usize = 4;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x0015_01ab;
pub const MAX_TOL: f64 = 1e-4;

/// Values given on the command line; `None` falls through to the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub tol: Option<f64>,
    pub symbols: Vec<String>,
    pub gens: Vec<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub exhaustive: bool,
    pub dump_operator: Option<PathBuf>,
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(rename = "K")]
    k: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    tol: Option<f64>,
    #[serde(default)]
    symbols: Vec<String>,
    gens: Option<Gens>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    #[serde(rename = "D")]
    window: Option<usize>,
    exhaustive: Option<bool>,
    expect: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Gens {
    Text(String),
    List(Vec<toml::Value>),
}

impl Gens {
    fn into_strings(self) -> Result<Vec<String>> {
        match self {
            Gens::Text(s) => Ok(split_list(&s)),
            Gens::List(items) => items
                .into_iter()
                .map(|v| match v {
                    toml::Value::String(s) => Ok(s),
                    toml::Value::Integer(i) => Ok(i.to_string()),
                    other => Err(Error::Config(format!("unsupported generator entry {other}"))),
                })
                .collect(),
        }
    }
}

pub fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

/// Fully resolved run parameters: flags, then config file, then defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub tol: f64,
    pub symbols: Vec<InnerSymbol>,
    pub gens: Vec<String>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    /// Coefficient window `D` for symbol extraction and Hankel rank.
    pub window: Option<usize>,
    pub exhaustive: bool,
    pub dump_operator: Option<PathBuf>,
    pub expect: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: DEFAULT_N,
            k: DEFAULT_K,
            l: DEFAULT_L,
            tol: DEFAULT_TOL,
            symbols: Vec::new(),
            gens: Vec::new(),
            out: None,
            seed: DEFAULT_SEED,
            window: None,
            exhaustive: false,
            dump_operator: None,
            expect: None,
        }
    }
}

impl RunConfig {
    pub fn resolve(flags: Overrides, file: Option<&Path>) -> Result<Self> {
        let f = match file {
            Some(p) => {
                let text =
                    fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| Error::Config(e.to_string()))?
            }
            None => FileConfig::default(),
        };
        let d = Self::default();
        let symbol_text = if flags.symbols.is_empty() {
            f.symbols
        } else {
            flags.symbols
        };
        let symbols = symbol_text
            .iter()
            .map(|s| s.parse::<InnerSymbol>())
            .collect::<Result<Vec<_>>>()?;
        let gens = if !flags.gens.is_empty() {
            flags.gens
        } else if let Some(g) = f.gens {
            g.into_strings()?
        } else {
            Vec::new()
        };
        let cfg = Self {
            n: flags.n.or(f.n).unwrap_or(d.n),
            k: flags.k.or(f.k).unwrap_or(d.k),
            l: flags.l.or(f.l).unwrap_or(d.l),
            tol: flags.tol.or(f.tol).unwrap_or(d.tol),
            symbols,
            gens,
            out: flags.out.or(f.out),
            seed: flags.seed.or(f.seed).unwrap_or(d.seed),
            window: flags.window.or(f.window),
            exhaustive: flags.exhaustive || f.exhaustive.unwrap_or(false),
            dump_operator: flags.dump_operator,
            expect: flags.expect.or(f.expect),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks, then `N >= K + L · D_eff` against the rational symbols.
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol <= MAX_TOL) {
            return Err(Error::Config(format!(
                "tolerance {} must lie in (0, {MAX_TOL}]",
                self.tol
            )));
        }
        if self.n < 2 {
            return Err(Error::Config(format!("N = {} must be at least 2", self.n)));
        }
        if self.k == 0 || self.k > self.n {
            return Err(Error::Config(format!("K = {} must lie in 1..={}", self.k, self.n)));
        }
        let d = self.reach();
        if self.k + self.l * d > self.n {
            return Err(Error::Config(format!(
                "N = {} is below K + L·D_eff = {} + {}·{}",
                self.n, self.k, self.l, d
            )));
        }
        Ok(())
    }

    /// Largest per-letter reach over the shift and the rational symbols:
    /// the first order whose l2 tail is at most `tol`.
    pub fn reach(&self) -> usize {
        let shift = usize::from(self.gens.iter().any(|g| g == "shift") || !self.symbols.is_empty());
        self.symbols
            .iter()
            .filter(|s| s.is_rational())
            .map(|s| {
                let profile = s.tail_l2_profile(self.n);
                profile.iter().position(|&t| t <= self.tol).unwrap_or(self.n)
            })
            .fold(shift, usize::max)
    }
}
