//! MSO with cross-position atoms `θ_F(x1, …, xm)`, and satisfiability of
//! the fragment where every `θ` atom has at most one argument outside a
//! fixed prefix `∃x1 … ∃xn` of symbol-position variables.
//!
//! The prefix variables are replaced by constants `c1 … cn` naming the
//! letters at those positions. What is left is an ordinary MSO sentence
//! whose `α` formulas mention the constants; it is compiled once, and the
//! background theory is asked whether some choice of constants realizes
//! the letters of some accepting path.

mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automata::TupleWord;
use crate::logic::{fresh_name, track_var, Formula, PadKind, PadMask, Term};
use crate::mso::{compile_dfa, mso_holds, theta_index, Dfa, MsoFormula, Sort};
use crate::theories::{Element, PaddedTheory, Theory};
use crate::{par, Error, Result};

pub use parse::parse_msoplus;

/// Most minterm letters the letter-set search handles.
const MAX_LETTERS: usize = 64;
/// Most `(state, letter set)` pairs the letter-set search visits.
const MAX_CONFIGURATIONS: usize = 1 << 20;

/// `∃x1 … ∃xn body`, with the prefix kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsoPlusSentence {
    symvars: Vec<String>,
    body: MsoFormula,
}

impl MsoPlusSentence {
    /// The body may only have the prefix variables free, all as positions.
    pub fn new(symvars: Vec<String>, body: MsoFormula) -> Result<Self> {
        let s = MsoPlusSentence { symvars, body };
        s.to_mso().check_sentence()?;
        s.to_mso().check_tracks(1)?;
        let distinct: BTreeSet<&String> = s.symvars.iter().collect();
        if distinct.len() != s.symvars.len() {
            return Err(Error::invalid("repeated variable in the symvars prefix"));
        }
        Ok(s)
    }

    pub fn symvars(&self) -> &[String] {
        &self.symvars
    }

    pub fn body(&self) -> &MsoFormula {
        &self.body
    }

    /// The whole sentence as one MSO formula, for direct evaluation.
    pub fn to_mso(&self) -> MsoFormula {
        self.symvars
            .iter()
            .rev()
            .fold(self.body.clone(), |f, x| {
                MsoFormula::Exists(Sort::Position, x.clone(), Box::new(f))
            })
    }

    /// Whether the sentence holds on a word, by direct semantics.
    pub fn holds(&self, word: &[Element], theory: &PaddedTheory) -> Result<bool> {
        mso_holds(&self.to_mso(), &TupleWord(vec![word.to_vec()]), theory)
    }
}

impl fmt::Display for MsoPlusSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "symvars {}", self.symvars.join(" "))?;
        write!(f, "{}", self.body)
    }
}

/// The first violation of the fragment constraint, if any.
pub fn fragment_violation(phi: &MsoPlusSentence) -> Option<String> {
    let prefix: BTreeSet<&str> = phi.symvars.iter().map(String::as_str).collect();
    let mut out = None;
    phi.body.visit(&mut |f| match f {
        MsoFormula::Exists(_, v, _) | MsoFormula::Forall(_, v, _) if prefix.contains(v.as_str()) => {
            out.get_or_insert(format!("prefix variable `{v}` is bound again in the body"));
        }
        MsoFormula::Theta(g, xs) => {
            let foreign: BTreeSet<&str> = xs
                .iter()
                .map(String::as_str)
                .filter(|x| !prefix.contains(x))
                .collect();
            if foreign.len() > 1 {
                out.get_or_insert(format!(
                    "`{f}` has {} arguments outside the prefix: {:?}",
                    foreign.len(),
                    foreign
                ));
            }
            if g.free_vars().iter().any(|v| theta_index(v).is_none()) {
                out.get_or_insert(format!("`{g}` has free variables other than v1 … vm"));
            }
        }
        _ => {}
    });
    out
}

pub fn check_fragment(phi: &MsoPlusSentence) -> bool {
    fragment_violation(phi).is_none()
}

/// The prefix turned into constants.
#[derive(Clone, Debug)]
pub struct Rewritten {
    /// An MSO sentence over 1-track words whose `α` formulas may mention
    /// the constants as free variables.
    pub sentence: MsoFormula,
    pub constants: Vec<String>,
}

/// `∃x1 … ∃xn (⋀ α_{t1 = ci}(xi) ∧ φ')` where each `θ_F` atom becomes an
/// `α` atom at its one foreign argument, with the prefix arguments read as
/// constants. An atom with no foreign argument is first anchored at its
/// last argument through a fresh position equal to it.
pub fn rewrite_with_constants(phi: &MsoPlusSentence) -> Result<Rewritten> {
    if let Some(m) = fragment_violation(phi) {
        return Err(Error::Fragment(m));
    }
    let mut avoid = phi.to_mso().var_names();
    phi.body.visit(&mut |f| {
        if let MsoFormula::Alpha(g, _) | MsoFormula::Theta(g, _) = f {
            avoid.extend(g.all_vars());
        }
    });
    let constants: Vec<String> = phi
        .symvars
        .iter()
        .map(|_| {
            let c = fresh_name("_c", &avoid);
            avoid.insert(c.clone());
            c
        })
        .collect();
    let of: BTreeMap<&str, &str> = phi
        .symvars
        .iter()
        .map(String::as_str)
        .zip(constants.iter().map(String::as_str))
        .collect();
    let body = replace_theta(&phi.body, &of, &mut avoid);
    let mut parts: Vec<MsoFormula> = phi
        .symvars
        .iter()
        .zip(&constants)
        .map(|(x, c)| MsoFormula::alpha(Formula::eq_vars(&track_var(1), c), x))
        .collect();
    parts.push(body);
    let matrix = if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        MsoFormula::And(parts)
    };
    let sentence = MsoPlusSentence {
        symvars: phi.symvars.clone(),
        body: matrix,
    }
    .to_mso();
    Ok(Rewritten {
        sentence,
        constants,
    })
}

fn replace_theta(f: &MsoFormula, of: &BTreeMap<&str, &str>, avoid: &mut BTreeSet<String>) -> MsoFormula {
    let rec = |g: &MsoFormula, avoid: &mut BTreeSet<String>| replace_theta(g, of, avoid);
    match f {
        MsoFormula::Theta(g, xs) => {
            let foreign = xs.iter().find(|x| !of.contains_key(x.as_str()));
            let anchor = foreign.unwrap_or_else(|| xs.last().expect("θ has arguments"));
            let subst: BTreeMap<String, Term> = xs
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let to = if x == anchor {
                        track_var(1)
                    } else {
                        of[x.as_str()].to_string()
                    };
                    (format!("v{}", i + 1), Term::Var(to))
                })
                .collect();
            let g = g.rename(&subst);
            match foreign {
                Some(y) => MsoFormula::Alpha(g, y.clone()),
                None => {
                    let y = fresh_name("_y", avoid);
                    avoid.insert(y.clone());
                    MsoFormula::exists_pos(
                        &y,
                        MsoFormula::and([MsoFormula::eq_pos(&y, anchor), MsoFormula::Alpha(g, y.clone())]),
                    )
                }
            }
        }
        MsoFormula::Not(g) => MsoFormula::not(rec(g, avoid)),
        MsoFormula::And(gs) => MsoFormula::And(gs.iter().map(|g| rec(g, avoid)).collect()),
        MsoFormula::Or(gs) => MsoFormula::Or(gs.iter().map(|g| rec(g, avoid)).collect()),
        MsoFormula::Implies(a, b) => MsoFormula::implies(rec(a, avoid), rec(b, avoid)),
        MsoFormula::Exists(s, v, g) => MsoFormula::Exists(*s, v.clone(), Box::new(rec(g, avoid))),
        MsoFormula::Forall(s, v, g) => MsoFormula::Forall(*s, v.clone(), Box::new(rec(g, avoid))),
        other => other.clone(),
    }
}

/// A set of minterm letters used along some accepting path, with one such
/// path.
#[derive(Clone, Debug)]
pub struct LetterSet {
    pub letters: u64,
    pub path: Vec<usize>,
}

/// Subset-minimal letter sets of accepting paths of a sentence automaton.
fn letter_sets(dfa: &Dfa) -> Result<Vec<LetterSet>> {
    if dfa.bits != 0 {
        return Err(Error::invalid("letter sets need a sentence automaton"));
    }
    if dfa.symbols > MAX_LETTERS {
        return Err(Error::Unsupported(format!(
            "{} minterm letters (limit {MAX_LETTERS})",
            dfa.symbols
        )));
    }
    let mut found: Vec<LetterSet> = Vec::new();
    let mut parent: HashMap<(usize, u64), Option<((usize, u64), usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert((0, 0), None);
    queue.push_back((0usize, 0u64));
    let path_to = |parent: &HashMap<_, Option<((usize, u64), usize)>>, mut at: (usize, u64)| {
        let mut path = Vec::new();
        while let Some(Some((prev, l))) = parent.get(&at) {
            path.push(*l);
            at = *prev;
        }
        path.reverse();
        path
    };
    while let Some((q, s)) = queue.pop_front() {
        if found.iter().any(|f| f.letters & !s == 0) {
            continue;
        }
        if dfa.finals[q] {
            found.retain(|f| s & !f.letters != 0);
            found.push(LetterSet {
                letters: s,
                path: path_to(&parent, (q, s)),
            });
            continue;
        }
        for (l, &r) in dfa.delta[q].iter().enumerate() {
            let next = (r, s | 1 << l);
            if !parent.contains_key(&next) {
                if parent.len() >= MAX_CONFIGURATIONS {
                    return Err(Error::Unsupported(format!(
                        "letter-set search exceeded {MAX_CONFIGURATIONS} configurations"
                    )));
                }
                parent.insert(next, Some(((q, s), l)));
                queue.push_back(next);
            }
        }
    }
    Ok(found)
}

/// Compiled form of an MSO⁺ sentence: the automaton over minterm letters
/// and the minterms, whose free variables are `t1` and the constants.
pub struct Compiled {
    pub rewritten: Rewritten,
    dfa: Dfa,
    pub minterms: Vec<Formula>,
}

impl Compiled {
    pub fn new(phi: &MsoPlusSentence, theory: &PaddedTheory) -> Result<Compiled> {
        let rewritten = rewrite_with_constants(phi)?;
        let (dfa, minterms) = compile_dfa(&rewritten.sentence, theory)?;
        Ok(Compiled {
            rewritten,
            dfa,
            minterms,
        })
    }

    pub fn states(&self) -> usize {
        self.dfa.states()
    }

    pub fn letter_sets(&self) -> Result<Vec<LetterSet>> {
        letter_sets(&self.dfa)
    }

    /// `∃c̄ ⋀_{J ∈ S} ∃a_J ψ_J(c̄, a_J)` as a formula with the constants
    /// and the `a_J` free, together with those variables.
    pub fn query(&self, s: u64) -> (Formula, Vec<String>) {
        let mut vars = self.rewritten.constants.clone();
        let mut parts = Vec::new();
        for j in (0..self.minterms.len()).filter(|j| s >> j & 1 == 1) {
            let a = format!("_a{j}");
            parts.push(self.minterms[j].rename_var(&track_var(1), Term::Var(a.clone())));
            vars.push(a);
        }
        (Formula::and(parts), vars)
    }
}

/// Letters of a 1-track word are proper elements.
fn letter_mask(theory: &PaddedTheory, vars: &[String]) -> PadMask {
    if theory.is_fresh() {
        vars.iter().map(|v| (v.clone(), PadKind::Proper)).collect()
    } else {
        PadMask::new()
    }
}

/// Whether some finite word over the theory's domain satisfies `phi`.
pub fn sat_plus(phi: &MsoPlusSentence, theory: &PaddedTheory) -> Result<bool> {
    let c = Compiled::new(phi, theory)?;
    let sets = c.letter_sets()?;
    par::try_any(&sets, |s| {
        let (q, vars) = c.query(s.letters);
        theory.satisfiable_with(&q, &letter_mask(theory, &vars))
    })
}

/// A word satisfying `phi`, built from an accepting path and a witness of
/// its letter-set query.
pub fn find_model(phi: &MsoPlusSentence, theory: &PaddedTheory) -> Result<Option<Vec<Element>>> {
    let c = Compiled::new(phi, theory)?;
    for s in c.letter_sets()? {
        let (q, vars) = c.query(s.letters);
        let Some(w) = theory.find_witness_with(&q, &vars, &letter_mask(theory, &vars))? else {
            continue;
        };
        let word = s.path.iter().map(|j| w[&format!("_a{j}")].clone()).collect();
        return Ok(Some(word));
    }
    Ok(None)
}

/// Every word over the finite domain of length at most `bound`, tried by
/// direct semantics.
pub fn brute_force_sat(phi: &MsoPlusSentence, theory: &PaddedTheory, bound: usize) -> Result<bool> {
    let domain = theory
        .base()
        .finite_domain()
        .ok_or_else(|| Error::Unsupported(format!("{} is not finite", theory.name())))?;
    let mso = phi.to_mso();
    let mut words: Vec<Vec<Element>> = vec![Vec::new()];
    for len in 0..=bound {
        if len > 0 {
            words = words
                .iter()
                .flat_map(|w| {
                    domain.iter().map(move |e| {
                        let mut v = w.clone();
                        v.push(e.clone());
                        v
                    })
                })
                .collect();
        }
        let hit = par::try_any(&words, |w| {
            mso_holds(&mso, &TupleWord(vec![w.clone()]), theory)
        })?;
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Length bound under which a satisfiable sentence has a model: with the
/// constants fixed, a shortest accepting path of the compiled automaton
/// is shorter than its state count.
pub fn derived_bound(phi: &MsoPlusSentence, theory: &PaddedTheory) -> Result<usize> {
    Ok(Compiled::new(phi, theory)?.states())
}
