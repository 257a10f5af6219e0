//! Compilation by structural induction over a finite alphabet.
//!
//! The distinct `α` formulas are split into minterms, so every column of a
//! word satisfies exactly one of them. A letter of the internal automata is a
//! minterm index together with one bit per variable in scope; a position
//! variable is a bit track holding exactly one 1.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use super::{MsoFormula, Sort};
use crate::automata::{minterms_of, MAutomaton};
use crate::logic::{simplify, Formula};
use crate::theories::{PaddedTheory, Theory};
use crate::{Error, Result};

/// Complete deterministic automaton over `symbols × 2^bits` letters, with
/// initial state 0. Letter `l` carries symbol `l >> bits` and variable bits
/// `l & (2^bits - 1)`.
#[derive(Clone, Debug)]
pub(crate) struct Dfa {
    pub(crate) bits: usize,
    pub(crate) symbols: usize,
    pub(crate) delta: Vec<Vec<usize>>,
    pub(crate) finals: Vec<bool>,
}

fn bit(mask: usize, i: usize) -> bool {
    mask >> i & 1 == 1
}

impl Dfa {
    fn letters(&self) -> usize {
        self.symbols << self.bits
    }

    pub(crate) fn states(&self) -> usize {
        self.delta.len()
    }

    /// Table-driven construction: `step(state, symbol, mask)`.
    fn build(
        bits: usize,
        symbols: usize,
        states: usize,
        finals: &[usize],
        step: impl Fn(usize, usize, usize) -> usize,
    ) -> Dfa {
        let mask = (1usize << bits) - 1;
        let delta = (0..states)
            .map(|q| {
                (0..symbols << bits)
                    .map(|l| step(q, l >> bits, l & mask))
                    .collect()
            })
            .collect();
        let mut f = vec![false; states];
        for &q in finals {
            f[q] = true;
        }
        Dfa {
            bits,
            symbols,
            delta,
            finals: f,
        }
    }

    fn constant(bits: usize, symbols: usize, accept: bool) -> Dfa {
        let finals: &[usize] = if accept { &[0] } else { &[] };
        Dfa::build(bits, symbols, 1, finals, |_, _, _| 0)
    }

    fn complement(mut self) -> Dfa {
        for f in &mut self.finals {
            *f = !*f;
        }
        self
    }

    fn product(&self, other: &Dfa, op: fn(bool, bool) -> bool) -> Dfa {
        debug_assert_eq!(self.letters(), other.letters());
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(0, 0)];
        ids.insert((0, 0), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let row = (0..self.letters())
                .map(|l| {
                    let next = (self.delta[p][l], other.delta[q][l]);
                    *ids.entry(next).or_insert_with(|| {
                        pairs.push(next);
                        pairs.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| op(self.finals[p], other.finals[q]))
            .collect();
        Dfa {
            bits: self.bits,
            symbols: self.symbols,
            delta,
            finals,
        }
    }

    /// Existentially quantify the last variable bit, by subset construction.
    fn project_last(&self) -> Dfa {
        let nb = self.bits - 1;
        let letters = self.symbols << nb;
        let low = (1usize << nb) - 1;
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets = vec![vec![0]];
        ids.insert(vec![0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let set = sets[i].clone();
            let mut row = Vec::with_capacity(letters);
            for l in 0..letters {
                let base = (l >> nb) << self.bits | (l & low);
                let mut next: Vec<usize> = set
                    .iter()
                    .flat_map(|&q| [self.delta[q][base], self.delta[q][base | 1 << nb]])
                    .collect();
                next.sort_unstable();
                next.dedup();
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        sets.push(next.clone());
                        ids.insert(next, sets.len() - 1);
                        sets.len() - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.finals[q]))
            .collect();
        Dfa {
            bits: nb,
            symbols: self.symbols,
            delta,
            finals,
        }
    }

    /// Moore partition refinement on the reachable part.
    pub(crate) fn minimize(&self) -> Dfa {
        let mut order = vec![0];
        let mut seen = vec![false; self.states()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            for &r in &self.delta[q] {
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        let mut class: HashMap<usize, usize> =
            order.iter().map(|&q| (q, self.finals[q] as usize)).collect();
        let mut count = class.values().copied().collect::<std::collections::BTreeSet<_>>().len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = HashMap::new();
            for &q in &order {
                let mut sig = Vec::with_capacity(self.letters() + 1);
                sig.push(class[&q]);
                sig.extend(self.delta[q].iter().map(|r| class[r]));
                let n = ids.len();
                next.insert(q, *ids.entry(sig).or_insert(n));
            }
            let done = ids.len() == count;
            count = ids.len();
            class = next;
            if done {
                break;
            }
        }
        let mut delta = vec![Vec::new(); count];
        let mut finals = vec![false; count];
        for &q in &order {
            let c = class[&q];
            if delta[c].is_empty() {
                delta[c] = self.delta[q].iter().map(|r| class[r]).collect();
                finals[c] = self.finals[q];
            }
        }
        Dfa {
            bits: self.bits,
            symbols: self.symbols,
            delta,
            finals,
        }
    }

    /// Runs on a sequence of symbols (no variable bits).
    #[cfg(test)]
    pub(crate) fn accepts_symbols(&self, word: &[usize]) -> bool {
        debug_assert_eq!(self.bits, 0);
        let mut q = 0;
        for &s in word {
            q = self.delta[q][s];
        }
        self.finals[q]
    }
}

struct Ctx<'a> {
    symbols: usize,
    alpha: HashMap<&'a Formula, Vec<bool>>,
    vars: Vec<(String, Sort)>,
}

impl Ctx<'_> {
    fn var(&self, v: &str, sort: Sort) -> Result<usize> {
        match self.vars.iter().rposition(|(n, _)| n == v) {
            Some(i) if self.vars[i].1 == sort => Ok(i),
            Some(_) => Err(Error::invalid(format!("variable `{v}` used with the wrong sort"))),
            None => Err(Error::NotSentence(vec![v.to_string()])),
        }
    }

    fn bits(&self) -> usize {
        self.vars.len()
    }
}

fn singleton(bits: usize, symbols: usize, x: usize) -> Dfa {
    Dfa::build(bits, symbols, 3, &[1], move |q, _, m| match (q, bit(m, x)) {
        (0, false) => 0,
        (0, true) | (1, false) => 1,
        _ => 2,
    })
}

fn compile<'a>(f: &'a MsoFormula, ctx: &mut Ctx<'a>) -> Result<Dfa> {
    let (b, s) = (ctx.bits(), ctx.symbols);
    Ok(match f {
        MsoFormula::True => Dfa::constant(b, s, true),
        MsoFormula::False => Dfa::constant(b, s, false),
        MsoFormula::Lt(x, y) => {
            let (x, y) = (ctx.var(x, Sort::Position)?, ctx.var(y, Sort::Position)?);
            // 0: before x, 1: after x, 2: after y, 3: dead
            Dfa::build(b, s, 4, &[2], move |q, _, m| match (q, bit(m, x), bit(m, y)) {
                (0, false, false) => 0,
                (0, true, false) | (1, false, false) => 1,
                (1, false, true) | (2, false, false) => 2,
                _ => 3,
            })
        }
        MsoFormula::In(x, set) => {
            let (x, set) = (ctx.var(x, Sort::Position)?, ctx.var(set, Sort::Set)?);
            Dfa::build(b, s, 3, &[1], move |q, _, m| match (q, bit(m, x)) {
                (0, false) => 0,
                (0, true) if bit(m, set) => 1,
                (1, false) => 1,
                _ => 2,
            })
        }
        MsoFormula::Subset(a, c) => {
            let (a, c) = (ctx.var(a, Sort::Set)?, ctx.var(c, Sort::Set)?);
            Dfa::build(b, s, 2, &[0], move |q, _, m| {
                if q == 0 && !(bit(m, a) && !bit(m, c)) {
                    0
                } else {
                    1
                }
            })
        }
        MsoFormula::Alpha(g, x) => {
            let x = ctx.var(x, Sort::Position)?;
            let pos = ctx.alpha[g].clone();
            Dfa::build(b, s, 3, &[1], move |q, sym, m| match (q, bit(m, x)) {
                (0, false) => 0,
                (0, true) if pos[sym] => 1,
                (1, false) => 1,
                _ => 2,
            })
        }
        MsoFormula::Theta(..) => {
            return Err(Error::Fragment(
                "θ atoms relate several positions and have no automaton; use the MSO⁺ procedure"
                    .into(),
            ))
        }
        MsoFormula::Not(g) => compile(g, ctx)?.complement(),
        MsoFormula::And(gs) | MsoFormula::Or(gs) => {
            let conj = matches!(f, MsoFormula::And(_));
            let mut acc = Dfa::constant(b, s, conj);
            for g in gs {
                let d = compile(g, ctx)?;
                let op: fn(bool, bool) -> bool = if conj { |p, q| p && q } else { |p, q| p || q };
                acc = acc.product(&d, op).minimize();
            }
            acc
        }
        MsoFormula::Implies(p, q) => {
            let p = compile(p, ctx)?;
            let q = compile(q, ctx)?;
            p.product(&q, |a, b| !a || b).minimize()
        }
        MsoFormula::Exists(sort, v, g) | MsoFormula::Forall(sort, v, g) => {
            let universal = matches!(f, MsoFormula::Forall(..));
            ctx.vars.push((v.clone(), *sort));
            let body = compile(g, ctx);
            ctx.vars.pop();
            let mut body = body?;
            if universal {
                body = body.complement();
            }
            if *sort == Sort::Position {
                body = body.product(&singleton(b + 1, s, b), |p, q| p && q);
            }
            let out = body.project_last().minimize();
            if universal {
                out.complement()
            } else {
                out
            }
        }
    })
}

/// Compile a sentence to the internal automaton over the minterms of its
/// `α` formulas. The minterms are returned in letter order.
pub(crate) fn compile_dfa(phi: &MsoFormula, theory: &PaddedTheory) -> Result<(Dfa, Vec<Formula>)> {
    phi.check_sentence()?;
    let alphas = phi.alphas();
    for f in &alphas {
        f.check(theory.signature())?;
    }
    let terms = minterms_of(theory, &alphas)?;
    let mut alpha: HashMap<&Formula, Vec<bool>> = HashMap::new();
    for g in phi.alpha_refs() {
        let i = alphas.iter().position(|a| a == g).expect("collected above");
        alpha
            .entry(g)
            .or_insert_with(|| terms.iter().map(|(_, pos)| pos.contains(&i)).collect());
    }
    let mut ctx = Ctx {
        symbols: terms.len(),
        alpha,
        vars: Vec::new(),
    };
    let dfa = compile(phi, &mut ctx)?.minimize();
    Ok((dfa, terms.into_iter().map(|(m, _)| m).collect()))
}

/// An automaton accepting exactly the `tracks`-tuples on which the sentence
/// holds.
pub fn compile_mso(phi: &MsoFormula, tracks: usize, theory: Arc<PaddedTheory>) -> Result<MAutomaton> {
    phi.check_tracks(tracks)?;
    let (dfa, terms) = compile_dfa(phi, &theory)?;
    let mut out = MAutomaton::new(tracks, theory);
    out.add_states(dfa.states());
    out.set_initial(0);
    for (q, row) in dfa.delta.iter().enumerate() {
        if dfa.finals[q] {
            out.set_final(q);
        }
        let mut by_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (sym, &r) in row.iter().enumerate() {
            by_target.entry(r).or_default().push(sym);
        }
        for (r, syms) in by_target {
            let label = if syms.len() == terms.len() {
                Formula::True
            } else {
                simplify(&Formula::or(syms.iter().map(|&s| terms[s].clone())))
            };
            out.add_transition(q, label, r)?;
        }
    }
    out.trim()
}
