#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use mauto::automata::{MAutomaton, TupleWord};
use mauto::logic::{parse_formula, Formula};
use mauto::mso::MsoFormula;
use mauto::msoplus::MsoPlusSentence;
use mauto::theories::{registry, Element, FiniteStructure, PadMode, PaddedTheory, Theory};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Domain {a, b}, P = {a}, R = {(a,b), (b,b)}.
pub fn two() -> Arc<PaddedTheory> {
    static T: OnceLock<Arc<PaddedTheory>> = OnceLock::new();
    T.get_or_init(|| {
        let base: Arc<dyn Theory> = Arc::new(
            FiniteStructure::new("pr2", &["a", "b"])
                .unwrap()
                .with_relation("P", 1, &[vec!["a"]])
                .unwrap()
                .with_relation("R", 2, &[vec!["a", "b"], vec!["b", "b"]])
                .unwrap(),
        );
        registry::register(base.clone());
        registry::padded(base, PadMode::Fresh).unwrap()
    })
    .clone()
}

pub fn letters() -> Vec<Element> {
    vec![Element::sym("a"), Element::sym("b")]
}

/// All words over `alphabet` of length at most `max`, shortest first.
pub fn words(alphabet: &[Element], max: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Element>| {
                alphabet.iter().map(move |e| {
                    let mut v = w.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// All `k`-tuples of words of length at most `max`.
pub fn tuples(alphabet: &[Element], k: usize, max: usize) -> Vec<TupleWord> {
    let ws = words(alphabet, max);
    let mut out: Vec<Vec<Vec<Element>>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|t| {
                ws.iter().map(move |w| {
                    let mut t = t.clone();
                    t.push(w.clone());
                    t
                })
            })
            .collect();
    }
    out.into_iter().map(TupleWord).collect()
}

pub fn formula(theory: &PaddedTheory, text: &str) -> Formula {
    parse_formula(text, theory.signature()).unwrap()
}

fn random_atom(rng: &mut StdRng, k: usize) -> String {
    let mut atoms = vec![
        "(rel P t1)".to_string(),
        "(pad t1)".to_string(),
        "(= t1 a)".to_string(),
        "(= t1 b)".to_string(),
    ];
    if k == 2 {
        atoms.extend(
            ["(rel P t2)", "(pad t2)", "(rel R t1 t2)", "(= t1 t2)", "(= t2 a)"]
                .map(String::from),
        );
    }
    atoms.choose(rng).unwrap().clone()
}

fn random_label(rng: &mut StdRng, k: usize) -> String {
    let a = random_atom(rng, k);
    match rng.gen_range(0..6) {
        0 => "true".into(),
        1 => format!("(not {a})"),
        2 => format!("(and {a} {})", random_atom(rng, k)),
        3 => format!("(or {a} (not {}))", random_atom(rng, k)),
        _ => a,
    }
}

/// A random automaton with at most four states over [`two`].
pub fn random_automaton(rng: &mut StdRng, k: usize) -> MAutomaton {
    let t = two();
    let mut a = MAutomaton::new(k, t.clone());
    let n = rng.gen_range(1..=4);
    let qs = a.add_states(n);
    a.set_initial(qs[0]);
    if n > 1 && rng.gen_bool(0.2) {
        a.set_initial(qs[1]);
    }
    for &q in &qs {
        if rng.gen_bool(0.4) {
            a.set_final(q);
        }
    }
    for &p in &qs {
        for &q in &qs {
            if rng.gen_bool(0.45) {
                let label = formula(&t, &random_label(rng, k));
                a.add_transition(p, label, q).unwrap();
            }
        }
    }
    a
}

/// Components of a tuple word that are proper letters only.
pub fn insert_track(w: &TupleWord, i: usize, u: Vec<Element>) -> TupleWord {
    let mut tracks = w.0.clone();
    tracks.insert(i, u);
    TupleWord(tracks)
}

const LETTER_FORMULAS: [&str; 5] = ["(rel P t1)", "(= t1 a)", "(not (rel P t1))", "(= t1 b)", "true"];

pub struct MsoGen<'a> {
    pub rng: &'a mut StdRng,
    fresh: usize,
    thetas: usize,
    prefix: Vec<String>,
    max_thetas: usize,
}

impl<'a> MsoGen<'a> {
    pub fn new(rng: &'a mut StdRng) -> Self {
        MsoGen {
            rng,
            fresh: 0,
            thetas: 0,
            prefix: Vec::new(),
            max_thetas: 0,
        }
    }

    fn name(&mut self, set: bool) -> String {
        self.fresh += 1;
        if set {
            format!("S{}", self.fresh)
        } else {
            format!("y{}", self.fresh)
        }
    }

    fn letter_formula(&mut self) -> Formula {
        formula(&two(), LETTER_FORMULAS.choose(self.rng).unwrap())
    }

    fn theta(&mut self, foreign: Option<&String>) -> MsoFormula {
        let mut args = self.prefix.clone();
        args.extend(foreign.cloned());
        let pool: &[&str] = match args.len() {
            1 => &["(rel P v1)", "(= v1 a)"],
            2 => &["(= v1 v2)", "(rel R v1 v2)", "(rel R v2 v1)", "(not (= v1 v2))"],
            _ => &[
                "(or (= v1 v3) (= v2 v3))",
                "(rel R v1 v3)",
                "(and (rel R v2 v3) (not (= v1 v3)))",
            ],
        };
        let f = formula(&two(), pool.choose(self.rng).unwrap());
        self.thetas += 1;
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        MsoFormula::theta(f, &refs)
    }

    fn atom(&mut self, pos: &[String], sets: &[String]) -> MsoFormula {
        let all: Vec<String> = self.prefix.iter().chain(pos).cloned().collect();
        if all.is_empty() {
            return if self.rng.gen_bool(0.5) {
                MsoFormula::True
            } else {
                MsoFormula::False
            };
        }
        let x = all.choose(self.rng).unwrap().clone();
        let can_theta = self.thetas < self.max_thetas && !(self.prefix.is_empty() && pos.is_empty());
        match self.rng.gen_range(0..5) {
            0 | 1 => {
                let y = all.choose(self.rng).unwrap();
                MsoFormula::lt(&x, y)
            }
            2 if !sets.is_empty() => MsoFormula::in_set(&x, sets.choose(self.rng).unwrap()),
            3 if can_theta => {
                let foreign = pos.choose(self.rng).cloned();
                if self.prefix.is_empty() && foreign.is_none() {
                    let f = self.letter_formula();
                    return MsoFormula::alpha(f, &x);
                }
                self.theta(foreign.as_ref())
            }
            _ => {
                let f = self.letter_formula();
                MsoFormula::alpha(f, &x)
            }
        }
    }

    fn body(&mut self, depth: usize, pos: &mut Vec<String>, sets: &mut Vec<String>) -> MsoFormula {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.atom(pos, sets);
        }
        match self.rng.gen_range(0..8) {
            0 => MsoFormula::not(self.body(depth - 1, pos, sets)),
            1 => {
                let a = self.body(depth - 1, pos, sets);
                let b = self.body(depth - 1, pos, sets);
                MsoFormula::and([a, b])
            }
            2 => {
                let a = self.body(depth - 1, pos, sets);
                let b = self.body(depth - 1, pos, sets);
                MsoFormula::or([a, b])
            }
            3 => {
                let a = self.body(depth - 1, pos, sets);
                let b = self.body(depth - 1, pos, sets);
                MsoFormula::implies(a, b)
            }
            4 | 5 => {
                let v = self.name(false);
                pos.push(v.clone());
                let g = self.body(depth - 1, pos, sets);
                pos.pop();
                if self.rng.gen_bool(0.5) {
                    MsoFormula::exists_pos(&v, g)
                } else {
                    MsoFormula::forall_pos(&v, g)
                }
            }
            _ => {
                let v = self.name(true);
                sets.push(v.clone());
                let g = self.body(depth - 1, pos, sets);
                sets.pop();
                if self.rng.gen_bool(0.5) {
                    MsoFormula::exists_set(&v, g)
                } else {
                    MsoFormula::forall_set(&v, g)
                }
            }
        }
    }

    /// A random MSO sentence over one track.
    pub fn sentence(&mut self, depth: usize) -> MsoFormula {
        self.prefix.clear();
        self.max_thetas = 0;
        self.body(depth, &mut Vec::new(), &mut Vec::new())
    }

    /// A random sentence of the MSO⁺ fragment with `n` prefix variables
    /// and at most `p` cross-position atoms.
    pub fn fragment(&mut self, n: usize, p: usize, depth: usize) -> MsoPlusSentence {
        self.prefix = (1..=n).map(|i| format!("x{i}")).collect();
        self.thetas = 0;
        self.max_thetas = p;
        let body = self.body(depth, &mut Vec::new(), &mut Vec::new());
        let s = MsoPlusSentence::new(self.prefix.clone(), body).unwrap();
        self.prefix.clear();
        s
    }
}
