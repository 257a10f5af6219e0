//! Presburger arithmetic `(ω; +)` decided by quantifier elimination.
//!
//! Input formulas use the single relation `plus/3` (the graph of addition)
//! and equality. Internally they are translated to linear integer
//! constraints, every variable relativized to `≥ 0`, and quantifiers are
//! eliminated innermost first with Cooper's method. The cost is triply
//! exponential in the worst case.

mod cooper;
mod linear;

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use super::{require_assigned, require_sentence, Assignment, Element, Theory};
use crate::logic::{Formula, Signature, Term};
use crate::{Error, Result};

pub use cooper::eliminate_exists;
pub use linear::{Atom, Lin, Qf};

/// Largest numeral for which [`Theory::define_element`] builds a defining
/// formula.
pub const DEFINABLE_LIMIT: u64 = 1 << 16;

/// Search cap for witness values; only reached if elimination is unsound.
const SEARCH_CAP: i128 = 1 << 24;

#[derive(Debug)]
pub struct Presburger {
    signature: Signature,
    cache: Mutex<HashMap<Formula, bool>>,
}

impl Default for Presburger {
    fn default() -> Self {
        Self::new()
    }
}

impl Presburger {
    pub fn new() -> Self {
        Presburger {
            signature: Signature::new().with_relation("plus", 3).unwrap(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Quantifier-free equivalent of `phi` over ω, in the free variables of
    /// `phi` (which are not relativized).
    pub fn eliminate(&self, phi: &Formula) -> Result<Qf> {
        self.eliminate_with(phi, &HashMap::new())
    }

    fn eliminate_with(&self, phi: &Formula, values: &HashMap<String, i128>) -> Result<Qf> {
        let tr = Translator {
            counter: Cell::new(0),
            values,
        };
        tr.qf(phi, &BTreeMap::new(), false)
    }

    /// Search `ℕ^k` in order of increasing coordinate sum, up to `max_sum`.
    pub fn diagonal_search(
        &self,
        phi: &Formula,
        vars: &[String],
        max_sum: u64,
    ) -> Result<Option<Assignment>> {
        let k = vars.len();
        if k == 0 {
            return Ok(self.eval(phi, &Assignment::new())?.then(Assignment::new));
        }
        let mut point = vec![0u64; k];
        for sum in 0..=max_sum {
            if let Some(found) = self.search_sum(phi, vars, &mut point, 0, sum)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn search_sum(
        &self,
        phi: &Formula,
        vars: &[String],
        point: &mut Vec<u64>,
        i: usize,
        remaining: u64,
    ) -> Result<Option<Assignment>> {
        if i + 1 == vars.len() {
            point[i] = remaining;
            let env: Assignment = vars
                .iter()
                .zip(point.iter())
                .map(|(v, &n)| (v.clone(), Element::Nat(n)))
                .collect();
            return Ok(self.eval(phi, &env)?.then_some(env));
        }
        for n in 0..=remaining {
            point[i] = n;
            if let Some(found) = self.search_sum(phi, vars, point, i + 1, remaining - n)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

fn nonneg(x: &str) -> Qf {
    Qf::atom(Atom::Le(Lin::var(x).scale(-1)))
}

fn numeral(e: &Element) -> Result<i128> {
    e.as_nat()
        .map(i128::from)
        .ok_or_else(|| Error::invalid(format!("`{e}` is not a natural number")))
}

/// Formula to quantifier-free linear constraints. Bound variables get
/// internal names (`%k`) so they never clash with free ones.
struct Translator<'a> {
    counter: Cell<usize>,
    values: &'a HashMap<String, i128>,
}

impl Translator<'_> {
    fn term(&self, t: &Term, scope: &BTreeMap<String, String>) -> Result<Lin> {
        match t {
            Term::Var(v) => Ok(match scope.get(v) {
                Some(internal) => Lin::var(internal),
                None => match self.values.get(v) {
                    Some(&n) => Lin::constant(n),
                    None => Lin::var(v),
                },
            }),
            Term::Const(c) => Err(Error::invalid(format!(
                "constant `{c}` is not in the Presburger signature"
            ))),
        }
    }

    fn qf(&self, f: &Formula, scope: &BTreeMap<String, String>, neg: bool) -> Result<Qf> {
        Ok(match f {
            Formula::True => Qf::bool(!neg),
            Formula::False => Qf::bool(neg),
            Formula::Rel(name, ts) => {
                if name != "plus" || ts.len() != 3 {
                    return Err(match name.as_str() {
                        "plus" => Error::Arity {
                            name: name.clone(),
                            expected: 3,
                            found: ts.len(),
                        },
                        _ => Error::UnknownRelation(name.clone()),
                    });
                }
                let l = self
                    .term(&ts[0], scope)?
                    .add(&self.term(&ts[1], scope)?)
                    .sub(&self.term(&ts[2], scope)?);
                Qf::atom(if neg { Atom::Ne(l) } else { Atom::Eq(l) })
            }
            Formula::Eq(a, b) => {
                let l = self.term(a, scope)?.sub(&self.term(b, scope)?);
                Qf::atom(if neg { Atom::Ne(l) } else { Atom::Eq(l) })
            }
            Formula::Pad(_) => {
                return Err(Error::Unsupported(
                    "padding predicate reached the Presburger backend".into(),
                ))
            }
            Formula::Not(g) => self.qf(g, scope, !neg)?,
            Formula::And(gs) | Formula::Or(gs) => {
                let parts = gs
                    .iter()
                    .map(|g| self.qf(g, scope, neg))
                    .collect::<Result<Vec<_>>>()?;
                if matches!(f, Formula::And(_)) != neg {
                    Qf::and(parts)
                } else {
                    Qf::or(parts)
                }
            }
            Formula::Implies(a, b) => {
                // a → b  ≡  ¬a ∨ b
                let na = self.qf(a, scope, !neg)?;
                let b = self.qf(b, scope, neg)?;
                if neg {
                    Qf::and([na, b])
                } else {
                    Qf::or([na, b])
                }
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let k = self.counter.get();
                self.counter.set(k + 1);
                let internal = format!("%{k}");
                let mut inner = scope.clone();
                inner.insert(v.clone(), internal.clone());
                // ∃ with neg=false or ∀ with neg=true is an existential block
                let existential = matches!(f, Formula::Exists(..)) != neg;
                let body_neg = matches!(f, Formula::Forall(..));
                // ∀v g ≡ ¬∃v ¬g; the outer negation folds into `neg`
                let body = self.qf(g, &inner, body_neg)?;
                let q = eliminate_exists(&internal, &Qf::and([nonneg(&internal), body]));
                if existential {
                    q
                } else {
                    q.negate()
                }
            }
        })
    }
}

impl Theory for Presburger {
    fn name(&self) -> &str {
        "presburger"
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn decide(&self, sentence: &Formula) -> Result<bool> {
        require_sentence(sentence)?;
        if let Some(&b) = self.cache.lock().unwrap().get(sentence) {
            return Ok(b);
        }
        let result = match self.eliminate(sentence)? {
            Qf::True => true,
            Qf::False => false,
            other => {
                return Err(Error::invalid(format!(
                    "elimination left a non-ground residue `{other}`"
                )))
            }
        };
        self.cache.lock().unwrap().insert(sentence.clone(), result);
        Ok(result)
    }

    fn eval(&self, phi: &Formula, env: &Assignment) -> Result<bool> {
        require_assigned(phi, env)?;
        let values = phi
            .free_vars()
            .into_iter()
            .map(|v| numeral(&env[&v]).map(|n| (v, n)))
            .collect::<Result<HashMap<_, _>>>()?;
        match self.eliminate_with(phi, &values)? {
            Qf::True => Ok(true),
            Qf::False => Ok(false),
            other => Err(Error::invalid(format!(
                "evaluation left a non-ground residue `{other}`"
            ))),
        }
    }

    fn find_witness(&self, phi: &Formula, vars: &[String]) -> Result<Option<Assignment>> {
        if let Some(v) = phi.free_vars().into_iter().find(|v| !vars.contains(v)) {
            return Err(Error::invalid(format!(
                "free variable `{v}` is not among the witness variables"
            )));
        }
        let mut current = Qf::and(
            vars.iter()
                .map(|v| nonneg(v))
                .chain([self.eliminate(phi)?]),
        );
        let mut out = Assignment::new();
        for (i, v) in vars.iter().enumerate() {
            let mut theta = current.clone();
            for w in vars[i + 1..].iter().rev() {
                theta = eliminate_exists(w, &theta);
            }
            if i == 0 && eliminate_exists(v, &theta) == Qf::False {
                return Ok(None);
            }
            let mut n: i128 = 0;
            loop {
                let env: HashMap<String, i128> = [(v.clone(), n)].into();
                if theta.eval(&env) == Some(true) {
                    break;
                }
                n += 1;
                if n > SEARCH_CAP {
                    return Err(Error::invalid("witness search exceeded its cap"));
                }
            }
            current = current.substitute(v, &Lin::constant(n));
            out.insert(v.clone(), Element::Nat(n as u64));
        }
        Ok(Some(out))
    }

    fn define_element(&self, e: &Element, var: &str) -> Option<Formula> {
        let n = e.as_nat()?;
        if n > DEFINABLE_LIMIT {
            return None;
        }
        Some(define_numeral(n, var))
    }

    fn parse_element(&self, token: &str) -> Result<Element> {
        token
            .parse::<u64>()
            .map(Element::Nat)
            .map_err(|_| Error::parse(format!("`{token}` is not a natural number")))
    }

    fn contains(&self, e: &Element) -> bool {
        matches!(e, Element::Nat(_))
    }
}

/// `x = 0` as `x + x = x`.
pub fn zero(x: &str) -> Formula {
    Formula::rel("plus", &[x, x, x])
}

/// `x = 1`: nonzero and not a sum of two nonzero numbers.
pub fn one(x: &str) -> Formula {
    Formula::and([
        Formula::not(zero(x)),
        Formula::forall(
            "a",
            Formula::forall(
                "b",
                Formula::implies(
                    Formula::rel("plus", &["a", "b", x]),
                    Formula::or([zero("a"), zero("b")]),
                ),
            ),
        ),
    ])
}

/// A formula in `x` defining `n`, by binary expansion from the definable 1.
pub fn define_numeral(n: u64, x: &str) -> Formula {
    if n == 0 {
        return zero(x);
    }
    let bits: Vec<bool> = (0..64 - n.leading_zeros())
        .rev()
        .map(|i| (n >> i) & 1 == 1)
        .collect();
    // y0 = 1, y_{i+1} = 2·y_i + bit, x = y_last
    let y = |i: usize| format!("y{i}");
    let last = bits.len() - 1;
    let mut body = Formula::eq_vars(&y(last), x);
    for i in (1..=last).rev() {
        let (prev, cur) = (y(i - 1), y(i));
        let step = if bits[i] {
            Formula::exists(
                "w",
                Formula::and([
                    Formula::rel("plus", &[&prev, &prev, "w"]),
                    Formula::rel("plus", &["w", "o", &cur]),
                ]),
            )
        } else {
            Formula::rel("plus", &[&prev, &prev, &cur])
        };
        body = Formula::exists(&cur, Formula::and([step, body]));
    }
    let body = Formula::exists(&y(0), Formula::and([Formula::eq_vars(&y(0), "o"), body]));
    Formula::exists("o", Formula::and([one("o"), body]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn decide(text: &str) -> bool {
        let p = Presburger::new();
        p.decide(&parse_formula(text, p.signature()).unwrap()).unwrap()
    }

    #[test]
    fn zero_exists() {
        assert!(decide("(exists x (rel plus x x x))"));
    }

    #[test]
    fn additive_identity_forces_zero() {
        assert!(decide(
            "(forall x (forall y (implies (rel plus x y y) (rel plus x x x))))"
        ));
    }

    #[test]
    fn no_largest_number_and_no_negatives() {
        assert!(decide("(forall x (exists y (rel plus x x y)))"));
        assert!(decide("(forall x (exists y (rel plus y x x)))"));
        assert!(!decide("(forall x (exists y (and (rel plus x y y) (rel plus y y y))))"));
        assert!(!decide("(exists x (forall y (exists z (rel plus y z x))))"));
        assert!(!decide("(forall x (forall y (exists z (rel plus x z y))))"));
    }

    #[test]
    fn every_number_is_even_or_odd() {
        let p = Presburger::new();
        let succ = Formula::exists(
            "o",
            Formula::and([one("o"), Formula::rel("plus", &["u", "o", "x"])]),
        );
        let f = Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::or([
                    Formula::rel("plus", &["y", "y", "x"]),
                    Formula::exists("u", Formula::and([Formula::rel("plus", &["y", "y", "u"]), succ])),
                ]),
            ),
        );
        assert!(p.decide(&f).unwrap());
    }

    #[test]
    fn numerals_define_their_values() {
        let p = Presburger::new();
        for n in [0u64, 1, 2, 5, 6, 13] {
            let f = define_numeral(n, "x");
            for m in 0..16u64 {
                let env: Assignment = [("x".to_string(), Element::Nat(m))].into();
                assert_eq!(p.eval(&f, &env).unwrap(), m == n, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn witness_for_double() {
        let p = Presburger::new();
        let f = parse_formula(
            "(and (rel plus x x y) (not (= y x)))",
            p.signature(),
        )
        .unwrap();
        let vars = ["x".to_string(), "y".to_string()];
        let w = p.find_witness(&f, &vars).unwrap().unwrap();
        assert!(p.eval(&f, &w).unwrap());
        assert_eq!(w["x"], Element::Nat(1));
        assert_eq!(w["y"], Element::Nat(2));
        let d = p.diagonal_search(&f, &vars, 8).unwrap().unwrap();
        assert!(p.eval(&f, &d).unwrap());
        let never = parse_formula("(and (rel plus x x x) (not (= x x)))", p.signature()).unwrap();
        assert!(p.find_witness(&never, &["x".to_string()]).unwrap().is_none());
    }

    #[test]
    fn rejects_foreign_relation() {
        let p = Presburger::new();
        let f = Formula::exists("x", Formula::rel("times", &["x", "x", "x"]));
        assert!(matches!(p.decide(&f), Err(Error::UnknownRelation(_))));
    }
}
