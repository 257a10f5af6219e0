//! Monadic second-order logic over word positions.
//!
//! Atoms are `x < y`, `x ∈ X`, `X ⊆ Y` and `α_F(x)`, where `F` is a padded
//! first-order formula over the track variables `t1 … tn` stating that the
//! column at position `x` satisfies `F`.
//!
//! The cross-position atom `θ_F(x1, …, xm)` states that the letters at the
//! given positions satisfy `F(v1, …, vm)`. It is evaluated by [`mso_holds`]
//! but not compiled; see [`crate::msoplus`].

mod compile;
mod holds;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{track_index, Formula};
use crate::{Error, Result};

pub use compile::compile_mso;
pub(crate) use compile::{compile_dfa, Dfa};
pub use holds::mso_holds;
pub use parse::{mso_from_sexp, parse_mso};

/// Sort of a second-order variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Position,
    Set,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MsoFormula {
    True,
    False,
    Lt(String, String),
    In(String, String),
    Subset(String, String),
    Alpha(Formula, String),
    Theta(Formula, Vec<String>),
    Not(Box<MsoFormula>),
    And(Vec<MsoFormula>),
    Or(Vec<MsoFormula>),
    Implies(Box<MsoFormula>, Box<MsoFormula>),
    Exists(Sort, String, Box<MsoFormula>),
    Forall(Sort, String, Box<MsoFormula>),
}

impl MsoFormula {
    pub fn lt(x: &str, y: &str) -> Self {
        MsoFormula::Lt(x.into(), y.into())
    }

    pub fn in_set(x: &str, set: &str) -> Self {
        MsoFormula::In(x.into(), set.into())
    }

    pub fn subset(a: &str, b: &str) -> Self {
        MsoFormula::Subset(a.into(), b.into())
    }

    pub fn alpha(f: Formula, x: &str) -> Self {
        MsoFormula::Alpha(f, x.into())
    }

    pub fn theta(f: Formula, xs: &[&str]) -> Self {
        MsoFormula::Theta(f, xs.iter().map(|x| x.to_string()).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: MsoFormula) -> Self {
        MsoFormula::Not(Box::new(f))
    }

    pub fn and(fs: impl IntoIterator<Item = MsoFormula>) -> Self {
        MsoFormula::And(fs.into_iter().collect())
    }

    pub fn or(fs: impl IntoIterator<Item = MsoFormula>) -> Self {
        MsoFormula::Or(fs.into_iter().collect())
    }

    pub fn implies(a: MsoFormula, b: MsoFormula) -> Self {
        MsoFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists_pos(x: &str, f: MsoFormula) -> Self {
        MsoFormula::Exists(Sort::Position, x.into(), Box::new(f))
    }

    pub fn forall_pos(x: &str, f: MsoFormula) -> Self {
        MsoFormula::Forall(Sort::Position, x.into(), Box::new(f))
    }

    pub fn exists_set(x: &str, f: MsoFormula) -> Self {
        MsoFormula::Exists(Sort::Set, x.into(), Box::new(f))
    }

    pub fn forall_set(x: &str, f: MsoFormula) -> Self {
        MsoFormula::Forall(Sort::Set, x.into(), Box::new(f))
    }

    /// `x = y` on positions.
    pub fn eq_pos(x: &str, y: &str) -> Self {
        Self::and([Self::not(Self::lt(x, y)), Self::not(Self::lt(y, x))])
    }

    /// `y` is the successor of `x`. `z` must not clash with `x` or `y`.
    pub fn succ(x: &str, y: &str, z: &str) -> Self {
        Self::and([
            Self::lt(x, y),
            Self::not(Self::exists_pos(
                z,
                Self::and([Self::lt(x, z), Self::lt(z, y)]),
            )),
        ])
    }

    /// `x` is the first position.
    pub fn first(x: &str, z: &str) -> Self {
        Self::not(Self::exists_pos(z, Self::lt(z, x)))
    }

    /// `x` is the last position.
    pub fn last(x: &str, z: &str) -> Self {
        Self::not(Self::exists_pos(z, Self::lt(x, z)))
    }

    /// Free variables with the sort their uses force.
    pub fn free_vars(&self) -> Result<BTreeMap<String, Sort>> {
        let mut out = BTreeMap::new();
        self.collect_free(&mut Vec::new(), &mut out)?;
        Ok(out)
    }

    fn collect_free(
        &self,
        bound: &mut Vec<(String, Sort)>,
        out: &mut BTreeMap<String, Sort>,
    ) -> Result<()> {
        let mut use_var = |v: &str, s: Sort, bound: &Vec<(String, Sort)>| -> Result<()> {
            let found = bound.iter().rev().find(|(n, _)| n == v).map(|(_, s)| *s);
            let have = match found {
                Some(b) => b,
                None => *out.entry(v.to_string()).or_insert(s),
            };
            if have == s {
                Ok(())
            } else {
                Err(Error::invalid(format!(
                    "variable `{v}` used as both a position and a set"
                )))
            }
        };
        match self {
            MsoFormula::True | MsoFormula::False => Ok(()),
            MsoFormula::Lt(x, y) => {
                use_var(x, Sort::Position, bound)?;
                use_var(y, Sort::Position, bound)
            }
            MsoFormula::In(x, s) => {
                use_var(x, Sort::Position, bound)?;
                use_var(s, Sort::Set, bound)
            }
            MsoFormula::Subset(a, b) => {
                use_var(a, Sort::Set, bound)?;
                use_var(b, Sort::Set, bound)
            }
            MsoFormula::Alpha(_, x) => use_var(x, Sort::Position, bound),
            MsoFormula::Theta(_, xs) => xs.iter().try_for_each(|x| use_var(x, Sort::Position, bound)),
            MsoFormula::Not(g) => g.collect_free(bound, out),
            MsoFormula::And(gs) | MsoFormula::Or(gs) => {
                gs.iter().try_for_each(|g| g.collect_free(bound, out))
            }
            MsoFormula::Implies(a, b) => {
                a.collect_free(bound, out)?;
                b.collect_free(bound, out)
            }
            MsoFormula::Exists(s, v, g) | MsoFormula::Forall(s, v, g) => {
                bound.push((v.clone(), *s));
                let r = g.collect_free(bound, out);
                bound.pop();
                r
            }
        }
    }

    /// Checks sorts and that no variable is free.
    pub fn check_sentence(&self) -> Result<()> {
        let free = self.free_vars()?;
        if free.is_empty() {
            Ok(())
        } else {
            Err(Error::NotSentence(free.into_keys().collect()))
        }
    }

    /// Distinct `α` formulas in first-occurrence order.
    pub fn alphas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let MsoFormula::Alpha(g, _) = f {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        });
        out
    }

    /// Borrowed `α` formulas, in occurrence order with repeats.
    pub(crate) fn alpha_refs(&self) -> Vec<&Formula> {
        fn go<'a>(f: &'a MsoFormula, out: &mut Vec<&'a Formula>) {
            match f {
                MsoFormula::Alpha(g, _) => out.push(g),
                MsoFormula::Not(g) | MsoFormula::Exists(_, _, g) | MsoFormula::Forall(_, _, g) => {
                    go(g, out)
                }
                MsoFormula::And(gs) | MsoFormula::Or(gs) => gs.iter().for_each(|g| go(g, out)),
                MsoFormula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Every `α` formula mentions only tracks `t1 … tn`, and every `θ`
    /// formula only `v1 … vm` for its `m` positions.
    pub fn check_tracks(&self, n: usize) -> Result<()> {
        for f in self.alphas() {
            for v in f.free_vars() {
                if !matches!(track_index(&v), Some(i) if i >= 1 && i <= n) {
                    return Err(Error::invalid(format!(
                        "`{v}` in `{f}` is not a track variable of a {n}-track word"
                    )));
                }
            }
        }
        let mut bad = None;
        self.visit(&mut |g| {
            if let MsoFormula::Theta(f, xs) = g {
                if n != 1 {
                    bad.get_or_insert(format!("θ atoms need 1-track words, not {n}"));
                }
                for v in f.free_vars() {
                    if !matches!(theta_index(&v), Some(i) if i >= 1 && i <= xs.len()) {
                        bad.get_or_insert(format!(
                            "`{v}` in `{f}` is not one of v1 … v{}",
                            xs.len()
                        ));
                    }
                }
            }
        });
        bad.map_or(Ok(()), |m| Err(Error::invalid(m)))
    }

    pub fn has_theta(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, MsoFormula::Theta(..)));
        found
    }

    pub fn visit(&self, f: &mut impl FnMut(&MsoFormula)) {
        f(self);
        match self {
            MsoFormula::Not(g) | MsoFormula::Exists(_, _, g) | MsoFormula::Forall(_, _, g) => {
                g.visit(f)
            }
            MsoFormula::And(gs) | MsoFormula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            MsoFormula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn has_set_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(
                f,
                MsoFormula::Exists(Sort::Set, ..) | MsoFormula::Forall(Sort::Set, ..)
            ) {
                found = true;
            }
        });
        found
    }

    /// Maximal nesting of connectives and quantifiers.
    pub fn depth(&self) -> usize {
        match self {
            MsoFormula::Not(g) | MsoFormula::Exists(_, _, g) | MsoFormula::Forall(_, _, g) => {
                1 + g.depth()
            }
            MsoFormula::And(gs) | MsoFormula::Or(gs) => {
                1 + gs.iter().map(Self::depth).max().unwrap_or(0)
            }
            MsoFormula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    /// All variable names, bound or free.
    pub fn var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            MsoFormula::Lt(a, b) | MsoFormula::In(a, b) | MsoFormula::Subset(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            MsoFormula::Alpha(_, x) => {
                out.insert(x.clone());
            }
            MsoFormula::Theta(_, xs) => out.extend(xs.iter().cloned()),
            MsoFormula::Exists(_, v, _) | MsoFormula::Forall(_, v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }
}

impl fmt::Display for MsoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsoFormula::True => f.write_str("true"),
            MsoFormula::False => f.write_str("false"),
            MsoFormula::Lt(x, y) => write!(f, "(lt {x} {y})"),
            MsoFormula::In(x, s) => write!(f, "(in {x} {s})"),
            MsoFormula::Subset(a, b) => write!(f, "(subset {a} {b})"),
            MsoFormula::Alpha(g, x) => write!(f, "(alpha {g} {x})"),
            MsoFormula::Theta(g, xs) => write!(f, "(theta {g} {})", xs.join(" ")),
            MsoFormula::Not(g) => write!(f, "(not {g})"),
            MsoFormula::And(gs) | MsoFormula::Or(gs) => {
                f.write_str(if matches!(self, MsoFormula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            MsoFormula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            MsoFormula::Exists(s, v, g) | MsoFormula::Forall(s, v, g) => {
                let q = if matches!(self, MsoFormula::Exists(..)) { "exists" } else { "forall" };
                let k = match s {
                    Sort::Position => "P",
                    Sort::Set => "S",
                };
                write!(f, "({q}{k} {v} {g})")
            }
        }
    }
}

/// `vi` as used inside `θ` formulas.
pub fn theta_var(i: usize) -> String {
    format!("v{i}")
}

pub fn theta_index(name: &str) -> Option<usize> {
    name.strip_prefix('v')?.parse().ok()
}
