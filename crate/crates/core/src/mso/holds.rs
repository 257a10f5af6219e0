use std::collections::HashMap;

use super::{theta_var, MsoFormula, Sort};
use crate::automata::{convolve, TupleWord};
use crate::logic::{track_var, Formula};
use crate::theories::{Assignment, Element, PaddedTheory, Theory};
use crate::{Error, Result};

/// Longest word on which set quantifiers are enumerated.
pub const SET_QUANTIFIER_LIMIT: usize = 20;

#[derive(Clone, Copy)]
enum Val {
    Pos(usize),
    Set(u32),
}

struct Model<'a> {
    len: usize,
    columns: Vec<Vec<Element>>,
    alpha: HashMap<&'a Formula, Vec<bool>>,
    theory: &'a PaddedTheory,
}

impl Model<'_> {
    /// `F(w[x1], …, w[xm])` on a 1-track word.
    fn theta(&self, f: &Formula, at: &[usize]) -> Result<bool> {
        let env: Assignment = at
            .iter()
            .enumerate()
            .map(|(i, &p)| (theta_var(i + 1), self.columns[p][0].clone()))
            .collect();
        self.theory.eval(f, &env)
    }
}

/// Truth of an MSO sentence on the word model of `w`.
pub fn mso_holds(phi: &MsoFormula, w: &TupleWord, theory: &PaddedTheory) -> Result<bool> {
    phi.check_sentence()?;
    phi.check_tracks(w.tracks())?;
    let columns = convolve(w, &theory.pad_element());
    if phi.has_set_quantifier() && columns.len() > SET_QUANTIFIER_LIMIT {
        return Err(Error::Unsupported(format!(
            "set quantifiers over a word of length {} (limit {SET_QUANTIFIER_LIMIT})",
            columns.len()
        )));
    }
    let mut alpha = HashMap::new();
    for f in phi.alpha_refs() {
        let mut row = Vec::with_capacity(columns.len());
        for col in &columns {
            let env: Assignment = col
                .iter()
                .enumerate()
                .map(|(i, e)| (track_var(i + 1), e.clone()))
                .collect();
            row.push(theory.eval(f, &env)?);
        }
        alpha.insert(f, row);
    }
    let model = Model {
        len: columns.len(),
        columns,
        alpha,
        theory,
    };
    eval(phi, &model, &mut Vec::new())
}

fn lookup(env: &[(&str, Val)], v: &str) -> Val {
    env.iter()
        .rev()
        .find(|(n, _)| *n == v)
        .map(|(_, val)| *val)
        .expect("sentence checked")
}

fn pos(env: &[(&str, Val)], v: &str) -> usize {
    match lookup(env, v) {
        Val::Pos(p) => p,
        Val::Set(_) => unreachable!("sorts checked"),
    }
}

fn set(env: &[(&str, Val)], v: &str) -> u32 {
    match lookup(env, v) {
        Val::Set(s) => s,
        Val::Pos(_) => unreachable!("sorts checked"),
    }
}

fn eval<'a>(f: &'a MsoFormula, m: &Model<'_>, env: &mut Vec<(&'a str, Val)>) -> Result<bool> {
    Ok(match f {
        MsoFormula::True => true,
        MsoFormula::False => false,
        MsoFormula::Lt(x, y) => pos(env, x) < pos(env, y),
        MsoFormula::In(x, s) => set(env, s) >> pos(env, x) & 1 == 1,
        MsoFormula::Subset(a, b) => set(env, a) & !set(env, b) == 0,
        MsoFormula::Alpha(g, x) => m.alpha[g][pos(env, x)],
        MsoFormula::Theta(g, xs) => {
            let at: Vec<usize> = xs.iter().map(|x| pos(env, x)).collect();
            m.theta(g, &at)?
        }
        MsoFormula::Not(g) => !eval(g, m, env)?,
        MsoFormula::And(gs) => {
            for g in gs {
                if !eval(g, m, env)? {
                    return Ok(false);
                }
            }
            true
        }
        MsoFormula::Or(gs) => {
            for g in gs {
                if eval(g, m, env)? {
                    return Ok(true);
                }
            }
            false
        }
        MsoFormula::Implies(a, b) => !eval(a, m, env)? || eval(b, m, env)?,
        MsoFormula::Exists(s, v, g) | MsoFormula::Forall(s, v, g) => {
            let want = matches!(f, MsoFormula::Exists(..));
            let values: Box<dyn Iterator<Item = Val>> = match s {
                Sort::Position => Box::new((0..m.len).map(Val::Pos)),
                Sort::Set => Box::new((0..1u32 << m.len).map(Val::Set)),
            };
            for val in values {
                env.push((v, val));
                let r = eval(g, m, env);
                env.pop();
                if r? == want {
                    return Ok(want);
                }
            }
            !want
        }
    })
}
