//! Background structures: the oracle interface and its backends.

mod finite;
mod padded;
pub mod presburger;
pub mod registry;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::logic::{Formula, Signature};
use crate::{Error, Result};

pub use finite::FiniteStructure;
pub use padded::{PadMode, PaddedTheory};
pub use presburger::Presburger;

/// An element of a background domain, or the fresh padding symbol `#`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Pad,
    Nat(u64),
    Sym(Arc<str>),
    Word(Vec<Element>),
}

impl Element {
    pub fn sym(s: &str) -> Self {
        Element::Sym(Arc::from(s))
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Element::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_pad(&self) -> bool {
        matches!(self, Element::Pad)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Pad => f.write_str("#"),
            Element::Nat(n) => write!(f, "{n}"),
            Element::Sym(s) => f.write_str(s),
            Element::Word(w) => {
                f.write_str("[")?;
                for (i, e) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Values of free variables.
pub type Assignment = BTreeMap<String, Element>;

/// Decision interface for a background structure.
///
/// `satisfiable` must agree with `decide` on the existential closure, and
/// `eval` with `decide` after substituting the assigned elements.
pub trait Theory: Send + Sync + fmt::Debug {
    /// Name used in file headers (`presburger`, a structure file, ...).
    fn name(&self) -> &str;

    fn signature(&self) -> &Signature;

    /// Truth of a sentence.
    fn decide(&self, sentence: &Formula) -> Result<bool>;

    /// Truth of `phi` under an assignment covering its free variables.
    fn eval(&self, phi: &Formula, env: &Assignment) -> Result<bool>;

    fn satisfiable(&self, phi: &Formula) -> Result<bool> {
        self.decide(&phi.exists_closure())
    }

    /// An assignment to `vars` satisfying `phi`, if any.
    fn find_witness(&self, phi: &Formula, vars: &[String]) -> Result<Option<Assignment>>;

    /// A formula with the single free variable `var` defining `e`, when `e`
    /// is nameable.
    fn define_element(&self, e: &Element, var: &str) -> Option<Formula>;

    fn parse_element(&self, token: &str) -> Result<Element>;

    fn contains(&self, e: &Element) -> bool;

    /// The whole domain, for finite structures.
    fn finite_domain(&self) -> Option<Vec<Element>> {
        None
    }
}

pub(crate) fn require_sentence(phi: &Formula) -> Result<()> {
    let free = phi.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        Err(Error::NotSentence(free.into_iter().collect()))
    }
}

pub(crate) fn require_assigned(phi: &Formula, env: &Assignment) -> Result<()> {
    let missing: Vec<String> = phi
        .free_vars()
        .into_iter()
        .filter(|v| !env.contains_key(v))
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::invalid(format!("unassigned variables {missing:?}")))
    }
}
