use std::collections::BTreeMap;

use super::{simplify, Formula, Term};

/// Whether a variable denotes the padding symbol or a proper element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PadKind {
    Padding,
    Proper,
}

/// Padding status of the free variables of a formula.
pub type PadMask = BTreeMap<String, PadKind>;

/// Translate a formula over the padded language into one over the base
/// language, given which free variables denote the padding symbol.
///
/// Variables missing from `mask` are treated as proper; constants are always
/// proper. Quantifiers are split into the padding case and the proper case.
/// The result is simplified.
pub fn eliminate_pad(f: &Formula, mask: &PadMask) -> Formula {
    let mut mask = mask.clone();
    simplify(&elim(f, &mut mask))
}

fn is_padding(t: &Term, mask: &PadMask) -> bool {
    match t {
        Term::Var(v) => mask.get(v) == Some(&PadKind::Padding),
        Term::Const(_) => false,
    }
}

fn elim(f: &Formula, mask: &mut PadMask) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Pad(t) => {
            if is_padding(t, mask) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Rel(_, ts) => {
            if ts.iter().any(|t| is_padding(t, mask)) {
                Formula::False
            } else {
                f.clone()
            }
        }
        Formula::Eq(a, b) => match (is_padding(a, mask), is_padding(b, mask)) {
            (true, true) => Formula::True,
            (false, false) => f.clone(),
            _ => Formula::False,
        },
        Formula::Not(g) => Formula::not(elim(g, mask)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| elim(g, mask)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| elim(g, mask)).collect()),
        Formula::Implies(a, b) => Formula::implies(elim(a, mask), elim(b, mask)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let saved = mask.insert(v.clone(), PadKind::Padding);
            let padded = elim(g, mask);
            mask.insert(v.clone(), PadKind::Proper);
            let proper = elim(g, mask);
            match saved {
                Some(k) => mask.insert(v.clone(), k),
                None => mask.remove(v),
            };
            if matches!(f, Formula::Exists(..)) {
                Formula::or([padded, Formula::exists(v, proper)])
            } else {
                Formula::and([padded, Formula::forall(v, proper)])
            }
        }
    }
}
