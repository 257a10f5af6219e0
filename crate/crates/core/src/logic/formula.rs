use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Signature;
use crate::{Error, Result};

/// A first-order term: the signature has no function symbols, so a term is a
/// variable or a constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First-order formula over a relational signature, with the padding
/// predicate `Pad` available when read over the padded language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Pad(Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn rel(name: &str, vars: &[&str]) -> Self {
        Formula::Rel(name.to_string(), vars.iter().map(|v| Term::var(*v)).collect())
    }

    pub fn eq_vars(x: &str, y: &str) -> Self {
        Formula::Eq(Term::var(x), Term::var(y))
    }

    pub fn pad_var(x: &str) -> Self {
        Formula::Pad(Term::var(x))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: impl IntoIterator<Item = Formula>) -> Self {
        Formula::And(fs.into_iter().collect())
    }

    pub fn or(fs: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Or(fs.into_iter().collect())
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Self {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    /// Existential closure over the given variables, innermost last.
    pub fn exists_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    pub fn forall_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// The unbound variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<&str>| {
            if let Term::Var(v) = t {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, ts) => ts.iter().for_each(|t| term(t, bound)),
            Formula::Eq(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Formula::Pad(t) => term(t, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Whether `var` occurs free.
    pub fn has_free(&self, var: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Rel(_, ts) => ts.iter().any(|t| t.as_var() == Some(var)),
            Formula::Eq(a, b) => a.as_var() == Some(var) || b.as_var() == Some(var),
            Formula::Pad(t) => t.as_var() == Some(var),
            Formula::Not(f) => f.has_free(var),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.has_free(var)),
            Formula::Implies(a, b) => a.has_free(var) || b.has_free(var),
            Formula::Exists(v, f) | Formula::Forall(v, f) => v != var && f.has_free(var),
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Rel(_, ts) => {
                out.extend(ts.iter().filter_map(|t| t.as_var().map(str::to_string)))
            }
            Formula::Eq(a, b) => {
                out.extend([a, b].iter().filter_map(|t| t.as_var().map(str::to_string)))
            }
            Formula::Pad(t) => out.extend(t.as_var().map(str::to_string)),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Constant symbols occurring in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut add = |t: &Term| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        };
        self.visit(&mut |f| match f {
            Formula::Rel(_, ts) => ts.iter().for_each(&mut add),
            Formula::Eq(a, b) => {
                add(a);
                add(b);
            }
            Formula::Pad(t) => add(t),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn mentions_pad(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::Pad(_)) {
                found = true;
            }
        });
        found
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
            _ => 0,
        }
    }

    /// Check relation arities and constant names against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        let mut err = None;
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            let terms: &[Term] = match f {
                Formula::Rel(name, ts) => {
                    match sig.arity(name) {
                        None => err = Some(Error::UnknownRelation(name.clone())),
                        Some(a) if a != ts.len() => {
                            err = Some(Error::Arity {
                                name: name.clone(),
                                expected: a,
                                found: ts.len(),
                            })
                        }
                        _ => {}
                    }
                    ts
                }
                Formula::Eq(a, b) => {
                    for t in [a, b] {
                        if let Term::Const(c) = t {
                            if !sig.is_constant(c) {
                                err = Some(Error::invalid(format!("unknown constant `{c}`")));
                            }
                        }
                    }
                    &[]
                }
                Formula::Pad(Term::Const(c)) if !sig.is_constant(c) => {
                    err = Some(Error::invalid(format!("unknown constant `{c}`")));
                    &[]
                }
                _ => &[],
            };
            for t in terms {
                if let Term::Const(c) = t {
                    if !sig.is_constant(c) {
                        err = Some(Error::invalid(format!("unknown constant `{c}`")));
                    }
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Capture-avoiding simultaneous substitution. Every key of `mapping`
    /// must be free in `self`.
    pub fn substitute(&self, mapping: &BTreeMap<String, Term>) -> Result<Formula> {
        let free = self.free_vars();
        if let Some(k) = mapping.keys().find(|k| !free.contains(*k)) {
            return Err(Error::invalid(format!(
                "substitution key `{k}` is not free in the formula"
            )));
        }
        Ok(self.rename(mapping))
    }

    /// Like [`Formula::substitute`] but keys that are not free are ignored.
    pub fn rename(&self, mapping: &BTreeMap<String, Term>) -> Formula {
        if mapping.is_empty() {
            return self.clone();
        }
        let map_term = |t: &Term| -> Term {
            match t {
                Term::Var(v) => mapping.get(v).cloned().unwrap_or_else(|| t.clone()),
                Term::Const(_) => t.clone(),
            }
        };
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Rel(name, ts) => Formula::Rel(name.clone(), ts.iter().map(map_term).collect()),
            Formula::Eq(a, b) => Formula::Eq(map_term(a), map_term(b)),
            Formula::Pad(t) => Formula::Pad(map_term(t)),
            Formula::Not(f) => Formula::Not(Box::new(f.rename(mapping))),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename(mapping)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename(mapping)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.rename(mapping)), Box::new(b.rename(mapping)))
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let is_exists = matches!(self, Formula::Exists(..));
                let mut inner: BTreeMap<String, Term> = mapping
                    .iter()
                    .filter(|(k, _)| *k != v && body.has_free(k))
                    .map(|(k, t)| (k.clone(), t.clone()))
                    .collect();
                if inner.is_empty() {
                    return self.clone();
                }
                let captures = inner.values().any(|t| t.as_var() == Some(v.as_str()));
                let bound = if captures {
                    let mut avoid = body.all_vars();
                    avoid.extend(inner.keys().cloned());
                    avoid.extend(inner.values().filter_map(|t| t.as_var().map(str::to_string)));
                    let fresh = fresh_name(v, &avoid);
                    inner.insert(v.clone(), Term::Var(fresh.clone()));
                    fresh
                } else {
                    v.clone()
                };
                let body = Box::new(body.rename(&inner));
                if is_exists {
                    Formula::Exists(bound, body)
                } else {
                    Formula::Forall(bound, body)
                }
            }
        }
    }

    /// Substitute a single variable by a term.
    pub fn rename_var(&self, from: &str, to: Term) -> Formula {
        let mut m = BTreeMap::new();
        m.insert(from.to_string(), to);
        self.rename(&m)
    }

    /// Existential closure over all free variables.
    pub fn exists_closure(&self) -> Formula {
        let free: Vec<String> = self.free_vars().into_iter().collect();
        Formula::exists_many(&free, self.clone())
    }
}

/// Smallest `base<k>` (k ≥ 1) not in `avoid`.
pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded search")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Rel(name, ts) => {
                write!(f, "(rel {name}")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Pad(t) => write!(f, "(pad {t})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus(a: &str, b: &str, c: &str) -> Formula {
        Formula::rel("plus", &[a, b, c])
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(plus("x", "y", "z").free_vars(), set(&["x", "y", "z"]));
        assert_eq!(
            Formula::exists("x", plus("x", "x", "y")).free_vars(),
            set(&["y"])
        );
        assert!(Formula::True.free_vars().is_empty());
    }

    #[test]
    fn substitute_constant() {
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), Term::constant("c1"));
        let out = plus("x", "y", "z").substitute(&m).unwrap();
        assert_eq!(
            out,
            Formula::Rel(
                "plus".into(),
                vec![Term::constant("c1"), Term::var("y"), Term::var("z")]
            )
        );
    }

    #[test]
    fn substitute_avoids_capture() {
        let f = Formula::exists("y", Formula::eq_vars("x", "y"));
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), Term::var("y"));
        let out = f.substitute(&m).unwrap();
        assert_eq!(out, Formula::exists("y1", Formula::eq_vars("y", "y1")));
        assert_eq!(out.free_vars(), set(&["y"]));
    }

    #[test]
    fn substitute_rejects_non_free_key() {
        let f = Formula::exists("x", plus("x", "x", "y"));
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), Term::var("z"));
        assert!(f.substitute(&m).is_err());
    }

    #[test]
    fn fresh_name_picks_smallest_unused() {
        let avoid = set(&["y1", "y2", "y"]);
        assert_eq!(fresh_name("y", &avoid), "y3");
    }

    #[test]
    fn display_is_prefix_syntax() {
        let f = Formula::forall(
            "x",
            Formula::implies(plus("x", "x", "x"), Formula::not(Formula::pad_var("x"))),
        );
        assert_eq!(
            f.to_string(),
            "(forall x (implies (rel plus x x x) (not (pad x))))"
        );
    }
}
