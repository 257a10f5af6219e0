use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// An ordinal below ω^ω as its little-endian coefficient word
/// `a0 a1 … am`, with `am ≠ 0` unless the word is empty (the ordinal 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cnf(Vec<u64>);

impl Cnf {
    pub fn new(coeffs: Vec<u64>) -> Result<Cnf> {
        if coeffs.last() == Some(&0) {
            return Err(Error::invalid(format!(
                "{coeffs:?} is not in Cantor normal form: the last coefficient is 0"
            )));
        }
        Ok(Cnf(coeffs))
    }

    pub fn zero() -> Cnf {
        Cnf(Vec::new())
    }

    /// Drop trailing zero coefficients.
    pub fn from_word(mut coeffs: Vec<u64>) -> Cnf {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Cnf(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent of the leading power of ω; `None` for 0.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `ω^6·5 + ω^4·4 + ω^3·3 + ω·2 + 11`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| match (i, a) {
                (0, a) => a.to_string(),
                (1, 1) => "ω".into(),
                (1, a) => format!("ω·{a}"),
                (i, 1) => format!("ω^{i}"),
                (i, a) => format!("ω^{i}·{a}"),
            })
            .collect();
        terms.join(" + ")
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Cnf {
    type Err = Error;

    /// Comma-separated coefficients; the empty string is 0.
    fn from_str(s: &str) -> Result<Cnf> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Cnf::zero());
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(format!("bad coefficient `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Cnf::new(coeffs)
    }
}

/// Ordinal sum. With `d` the degree of `β`: below `d` the coefficients are
/// `β`'s, at `d` they add, above `d` they are `α`'s. When `α` has degree
/// below `d` this is just `β`.
pub fn cnf_add(alpha: &Cnf, beta: &Cnf) -> Cnf {
    let Some(d) = beta.degree() else {
        return alpha.clone();
    };
    if alpha.degree().is_none_or(|a| a < d) {
        return beta.clone();
    }
    let mut out: Vec<u64> = beta.0[..d].to_vec();
    out.push(alpha.coeff(d) + beta.coeff(d));
    out.extend_from_slice(&alpha.0[d + 1..]);
    Cnf(out)
}

/// Ordinal comparison.
pub fn cnf_cmp(alpha: &Cnf, beta: &Cnf) -> Ordering {
    alpha
        .0
        .len()
        .cmp(&beta.0.len())
        .then_with(|| alpha.0.iter().rev().cmp(beta.0.iter().rev()))
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        cnf_cmp(self, other)
    }
}
