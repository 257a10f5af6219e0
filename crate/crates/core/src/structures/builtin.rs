use std::sync::Arc;

use super::AutomaticPresentation;
use crate::automata::MAutomaton;
use crate::logic::{track_var, Formula, Term};
use crate::theories::presburger::zero;
use crate::theories::{registry, Element, PadMode, PaddedTheory, Theory};
use crate::{Error, Result};

fn proper(i: usize) -> Formula {
    Formula::not(Formula::pad_var(&track_var(i)))
}

fn all_proper(k: usize) -> Formula {
    Formula::and((1..=k).map(proper))
}

/// Loop on proper columns, then one proper column satisfying `last` into a
/// final state.
fn last_letter(k: usize, theory: &Arc<PaddedTheory>, last: Formula) -> Result<MAutomaton> {
    let mut a = MAutomaton::new(k, theory.clone());
    let [q0, q1] = [a.add_state(), a.add_state()];
    a.set_initial(q0);
    a.set_final(q1);
    a.add_transition(q0, all_proper(k), q0)?;
    a.add_transition(q0, Formula::and([all_proper(k), last]), q1)?;
    Ok(a)
}

/// The word structure over the domain of `base`: equal length, prefix,
/// `A_R` (same-length prefixes, last letters in `R`) for each relation `R`
/// of `base`, and `A_eq` (same length, same last letter).
pub fn ees_presentation(base: Arc<dyn Theory>) -> Result<AutomaticPresentation> {
    let theory = registry::padded(base.clone(), PadMode::Fresh)?;
    let name = format!("ees:{}", base.name());

    let mut domain = MAutomaton::new(1, theory.clone());
    let q = domain.add_state();
    domain.set_initial(q);
    domain.set_final(q);
    domain.add_transition(q, Formula::True, q)?;

    let mut eqlength = MAutomaton::new(2, theory.clone());
    let q = eqlength.add_state();
    eqlength.set_initial(q);
    eqlength.set_final(q);
    eqlength.add_transition(q, all_proper(2), q)?;

    let mut prefix = MAutomaton::new(2, theory.clone());
    let [q0, q1] = [prefix.add_state(), prefix.add_state()];
    prefix.set_initial(q0);
    prefix.set_final(q0);
    prefix.set_final(q1);
    prefix.add_transition(q0, Formula::and([all_proper(2), Formula::eq_vars("t1", "t2")]), q0)?;
    let tail = Formula::and([Formula::pad_var("t1"), proper(2)]);
    prefix.add_transition(q0, tail.clone(), q1)?;
    prefix.add_transition(q1, tail, q1)?;

    let mut rels = vec![
        ("eqlength".to_string(), eqlength),
        ("prefix".to_string(), prefix),
    ];
    for (r, k) in base.signature().relations() {
        let vars: Vec<String> = (1..=*k).map(track_var).collect();
        let atom = Formula::Rel(r.clone(), vars.into_iter().map(Term::Var).collect());
        rels.push((format!("A_{r}"), last_letter(*k, &theory, atom)?));
    }
    rels.push((
        "A_eq".to_string(),
        last_letter(2, &theory, Formula::eq_vars("t1", "t2"))?,
    ));
    AutomaticPresentation::new(&name, domain, rels)
}

fn presburger_alias_zero() -> Result<Arc<PaddedTheory>> {
    registry::padded(registry::presburger(), PadMode::Alias(Element::Nat(0)))
}

/// Words that are empty or end in a nonzero letter: the state records
/// whether the last letter read was nonzero.
fn nonzero_last(theory: &Arc<PaddedTheory>) -> Result<MAutomaton> {
    let mut a = MAutomaton::new(1, theory.clone());
    let [ok, trailing] = [a.add_state(), a.add_state()];
    a.set_initial(ok);
    a.set_final(ok);
    for q in [ok, trailing] {
        a.add_transition(q, Formula::not(zero("t1")), ok)?;
        a.add_transition(q, zero("t1"), trailing)?;
    }
    Ok(a)
}

/// `(ω∖{0}; ×)` over `(ω;+)` with 0 as padding: a number is the word of its
/// prime exponents, and multiplication adds exponents letterwise.
pub fn skolem_presentation() -> Result<AutomaticPresentation> {
    let theory = presburger_alias_zero()?;
    let mut times = MAutomaton::new(3, theory.clone());
    let q = times.add_state();
    times.set_initial(q);
    times.set_final(q);
    times.add_transition(q, Formula::rel("plus", &["t1", "t2", "t3"]), q)?;
    AutomaticPresentation::new(
        "skolem",
        nonzero_last(&theory)?,
        vec![("times".to_string(), times)],
    )
}

/// `(ω^ω; +)` over `(ω;+)` with 0 as padding, through the little-endian
/// Cantor normal form. Below the leading exponent of `β` the sum copies
/// `β`, at it the coefficients add, above it the sum copies `α`.
pub fn ordinal_presentation() -> Result<AutomaticPresentation> {
    let theory = presburger_alias_zero()?;
    let mut plus = MAutomaton::new(3, theory.clone());
    let [q0, q1] = [plus.add_state(), plus.add_state()];
    plus.set_initial(q0);
    plus.set_initial(q1);
    plus.set_final(q1);
    plus.add_transition(q0, Formula::eq_vars("t3", "t2"), q0)?;
    plus.add_transition(
        q0,
        Formula::and([
            Formula::not(zero("t2")),
            Formula::rel("plus", &["t1", "t2", "t3"]),
        ]),
        q1,
    )?;
    plus.add_transition(
        q1,
        Formula::and([zero("t2"), Formula::eq_vars("t3", "t1")]),
        q1,
    )?;
    AutomaticPresentation::new(
        "ordinal-omega-omega",
        nonzero_last(&theory)?,
        vec![("plus".to_string(), plus)],
    )
}

/// The exponent word of `n ≥ 1` over the primes 2, 3, 5, ….
pub fn skolem_encode(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::invalid("0 is not in the domain of Skolem arithmetic"));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while rest > 1 {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        out.push(e);
        p = next_prime(p);
    }
    Ok(out)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn next_prime(p: u64) -> u64 {
    (p + 1..).find(|&q| is_prime(q)).expect("primes are unbounded")
}

/// Inverse of [`skolem_encode`]; `None` on overflow.
pub fn skolem_decode(word: &[u64]) -> Option<u64> {
    let mut n: u64 = 1;
    let mut p = 2u64;
    for &e in word {
        let e = u32::try_from(e).ok()?;
        n = n.checked_mul(p.checked_pow(e)?)?;
        p = next_prime(p);
    }
    Some(n)
}
