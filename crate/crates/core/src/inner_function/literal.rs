//! Text form `z^n * B(a1,a2,...) * S(theta:mu,...) * C(c)`, complex numbers
//! written `re+imi`. Printing uses the shortest round-trip float form, so
//! `parse(print(sym)) == sym` bit for bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{Atom, InnerSymbol};
use crate::error::{Error, Result};

pub(crate) struct ComplexLiteral(pub Complex64);

impl fmt::Display for ComplexLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im.is_sign_negative() {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

fn syntax(input: &str, reason: impl Into<String>) -> Error {
    Error::SymbolSyntax {
        input: input.to_string(),
        reason: reason.into(),
    }
}

pub(crate) fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let bad = || syntax(text, "expected a complex number like 0.5-0.3i");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            let im_text = &body[k..];
            let im = match im_text {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_text
                    .strip_prefix('+')
                    .unwrap_or(im_text)
                    .parse::<f64>()
                    .map_err(|_| bad())?,
            };
            Ok(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => body.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(Complex64::new(0.0, im))
        }
    }
}

impl fmt::Display for InnerSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.monomial_power() > 0 {
            parts.push(format!("z^{}", self.monomial_power()));
        }
        if !self.factors().is_empty() {
            let zeros: Vec<String> = self
                .factors()
                .iter()
                .map(|b| ComplexLiteral(b.zero()).to_string())
                .collect();
            parts.push(format!("B({})", zeros.join(",")));
        }
        if !self.singular().is_empty() {
            let atoms: Vec<String> = self
                .singular()
                .atoms()
                .iter()
                .map(|a| format!("{}:{}", a.angle, a.mass))
                .collect();
            parts.push(format!("S({})", atoms.join(",")));
        }
        if self.constant() != Complex64::new(1.0, 0.0) {
            parts.push(format!("C({})", ComplexLiteral(self.constant())));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

fn inner_args<'a>(input: &str, part: &'a str, head: &str) -> Result<&'a str> {
    part.strip_prefix(head)
        .and_then(|rest| rest.trim_start().strip_prefix('('))
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| syntax(input, format!("malformed `{part}`")))
}

impl FromStr for InnerSymbol {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let mut constant = Complex64::new(1.0, 0.0);
        let mut power: u32 = 0;
        let mut zeros: Vec<Complex64> = Vec::new();
        let mut atoms: Vec<Atom> = Vec::new();
        if input.trim().is_empty() {
            return Err(syntax(input, "empty literal"));
        }
        for raw in input.split('*') {
            let part = raw.trim();
            if part == "1" {
                continue;
            } else if part == "z" {
                power += 1;
            } else if let Some(exp) = part.strip_prefix("z^") {
                let n: u32 = exp
                    .trim()
                    .parse()
                    .map_err(|_| syntax(input, format!("bad exponent in `{part}`")))?;
                power += n;
            } else if part.starts_with('B') {
                let args = inner_args(input, part, "B")?;
                for z in args.split(',') {
                    zeros.push(parse_complex(z).map_err(|_| syntax(input, format!("bad zero `{z}`")))?);
                }
            } else if part.starts_with('S') {
                let args = inner_args(input, part, "S")?;
                for item in args.split(',') {
                    let (theta, mu) = item
                        .split_once(':')
                        .ok_or_else(|| syntax(input, format!("atom `{item}` needs theta:mu")))?;
                    let theta: f64 = theta
                        .trim()
                        .parse()
                        .map_err(|_| syntax(input, format!("bad angle `{theta}`")))?;
                    let mu: f64 = mu
                        .trim()
                        .parse()
                        .map_err(|_| syntax(input, format!("bad mass `{mu}`")))?;
                    atoms.push(Atom::new(theta, mu)?);
                }
            } else if part.starts_with('C') {
                let args = inner_args(input, part, "C")?;
                constant *= parse_complex(args)?;
            } else {
                return Err(syntax(input, format!("unknown component `{part}`")));
            }
        }
        InnerSymbol::new(constant, power, &zeros, atoms)
    }
}
