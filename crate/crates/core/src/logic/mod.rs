//! First-order syntax over a relational signature, optionally extended with
//! the padding predicate, and the reduction from padded to unpadded queries.

mod formula;
mod pad;
mod parse;
mod signature;
mod simplify;

pub(crate) use formula::fresh_name;
pub use formula::{Formula, Term};
pub use pad::{eliminate_pad, PadKind, PadMask};
pub use parse::{formula_from_sexp, parse_formula};
pub use signature::Signature;
pub use simplify::simplify;

/// Name of the i-th track variable (1-based), as used in transition labels.
pub fn track_var(i: usize) -> String {
    format!("t{i}")
}

/// Inverse of [`track_var`].
pub fn track_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('t')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}
