use super::{empty, AutomaticPresentation};
use crate::automata::MAutomaton;
use crate::logic::{Formula, Term};
use crate::theories::require_sentence;
use crate::{Error, Result};

/// Negation normal form: negations only on atoms, no implications.
pub fn nnf(f: &Formula) -> Formula {
    push(f, false)
}

fn push(f: &Formula, neg: bool) -> Formula {
    match f {
        Formula::True | Formula::False => {
            if (f == &Formula::True) != neg {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Rel(..) | Formula::Eq(..) | Formula::Pad(_) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => push(g, !neg),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| push(g, neg)).collect();
            if matches!(f, Formula::And(_)) != neg {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if neg {
                Formula::And(vec![push(a, false), push(b, true)])
            } else {
                Formula::Or(vec![push(a, true), push(b, false)])
            }
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = Box::new(push(g, neg));
            if matches!(f, Formula::Exists(..)) != neg {
                Formula::Exists(v.clone(), body)
            } else {
                Formula::Forall(v.clone(), body)
            }
        }
    }
}

/// A compiled subformula: with no variables in scope it is a truth value;
/// otherwise an automaton over the scope, or a constant standing for the
/// whole domain power or nothing.
enum Value {
    Const(bool),
    Auto(MAutomaton),
}

struct Compiler<'a> {
    p: &'a AutomaticPresentation,
    vars: Vec<String>,
}

impl Compiler<'_> {
    fn track(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Const(c) => Err(Error::Unsupported(format!(
                "constant `{c}` in a formula over a presented structure"
            ))),
            Term::Var(v) => self
                .vars
                .iter()
                .rposition(|x| x == v)
                .ok_or_else(|| Error::NotSentence(vec![v.clone()])),
        }
    }

    fn k(&self) -> usize {
        self.vars.len()
    }

    fn atom(&self, f: &Formula) -> Result<Value> {
        match f {
            Formula::Rel(name, args) => {
                let a = self
                    .p
                    .relation(name)
                    .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                if a.tracks() != args.len() {
                    return Err(Error::Arity {
                        name: name.clone(),
                        expected: a.tracks(),
                        found: args.len(),
                    });
                }
                let map = args.iter().map(|t| self.track(t)).collect::<Result<Vec<_>>>()?;
                Ok(Value::Auto(self.p.relativize(&a.reindex(self.k(), &map)?)?))
            }
            Formula::Eq(a, b) => {
                let (i, j) = (self.track(a)?, self.track(b)?);
                if i == j {
                    return Ok(Value::Const(true));
                }
                let mut eq = MAutomaton::new(2, self.p.theory().clone());
                let q = eq.add_state();
                eq.set_initial(q);
                eq.set_final(q);
                eq.add_transition(q, Formula::eq_vars("t1", "t2"), q)?;
                Ok(Value::Auto(self.p.relativize(&eq.reindex(self.k(), &[i, j])?)?))
            }
            Formula::Pad(_) => Err(Error::Unsupported(
                "the padding predicate in a formula over a presented structure".into(),
            )),
            _ => unreachable!("atoms only"),
        }
    }

    fn negate(&self, v: Value) -> Result<Value> {
        Ok(match v {
            Value::Const(b) => Value::Const(!b),
            Value::Auto(a) => Value::Auto(self.p.relativize(&a.complement()?)?.trim()?),
        })
    }

    fn compile(&mut self, f: &Formula) -> Result<Value> {
        match f {
            Formula::True => Ok(Value::Const(true)),
            Formula::False => Ok(Value::Const(false)),
            Formula::Rel(..) | Formula::Eq(..) | Formula::Pad(_) => self.atom(f),
            Formula::Not(g) => {
                let v = self.compile(g)?;
                self.negate(v)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let conj = matches!(f, Formula::And(_));
                let mut acc: Option<MAutomaton> = None;
                for g in gs {
                    match self.compile(g)? {
                        Value::Const(b) if b == conj => {}
                        Value::Const(b) => return Ok(Value::Const(b)),
                        Value::Auto(a) => {
                            acc = Some(match acc {
                                None => a,
                                Some(x) if conj => x.intersect(&a)?.trim()?,
                                Some(x) => x.union(&a)?.trim()?,
                            })
                        }
                    }
                }
                Ok(acc.map_or(Value::Const(conj), Value::Auto))
            }
            Formula::Implies(..) => self.compile(&nnf(f)),
            Formula::Exists(x, g) => {
                self.vars.push(x.clone());
                let body = self.compile(g);
                self.vars.pop();
                Ok(match body? {
                    Value::Const(b) => Value::Const(b),
                    Value::Auto(a) if self.vars.is_empty() => Value::Const(!a.is_empty()?),
                    Value::Auto(a) => Value::Auto(a.project(self.k() + 1)?),
                })
            }
            Formula::Forall(x, g) => {
                let inner = Formula::exists(x, nnf(&Formula::not((**g).clone())));
                let v = self.compile(&inner)?;
                self.negate(v)
            }
        }
    }
}

/// The automaton over `free.len()` tracks accepting the encodings of the
/// tuples that satisfy `phi`.
pub fn compile_fo(p: &AutomaticPresentation, phi: &Formula, free: &[String]) -> Result<MAutomaton> {
    if free.is_empty() {
        return Err(Error::invalid(
            "compile_fo needs at least one free variable; use decide_fo for sentences",
        ));
    }
    let missing: Vec<String> = phi
        .free_vars()
        .into_iter()
        .filter(|v| !free.contains(v))
        .collect();
    if !missing.is_empty() {
        return Err(Error::NotSentence(missing));
    }
    let mut c = Compiler {
        p,
        vars: free.to_vec(),
    };
    let k = free.len();
    let theory = p.theory().clone();
    let a = match c.compile(&nnf(phi))? {
        Value::Const(true) => p.domain_power(k)?,
        Value::Const(false) => empty(k, theory.clone()),
        Value::Auto(a) => a,
    };
    // tuples of domain words, as far as the padding can tell
    if k == 1 {
        a.intersect(p.domain())?.trim()
    } else if a.state_count() == 0 {
        Ok(empty(k, theory))
    } else {
        Ok(a)
    }
}

/// Truth of a first-order sentence in the presented structure.
pub fn decide_fo(p: &AutomaticPresentation, sentence: &Formula) -> Result<bool> {
    require_sentence(sentence)?;
    let mut c = Compiler { p, vars: Vec::new() };
    match c.compile(&nnf(sentence))? {
        Value::Const(b) => Ok(b),
        Value::Auto(_) => unreachable!("no tracks without free variables"),
    }
}
