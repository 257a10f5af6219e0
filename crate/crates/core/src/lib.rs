//! Multitape synchronous automata over arbitrary, possibly infinite, alphabets.
//!
//! Transitions carry first-order formulas that are interpreted in a background
//! structure extended with a padding predicate. The crate provides:
//!
//! * [`logic`]: signatures, first-order formulas, padding elimination;
//! * [`theories`]: decision oracles for finite structures and Presburger
//!   arithmetic, plus the padded wrapper;
//! * [`automata`]: the automaton type, its boolean/projection algebra and
//!   emptiness;
//! * [`mso`]: monadic second-order sentences over word positions and their
//!   compilation to automata;
//! * [`structures`]: automatic presentations and the first-order decision
//!   pipeline, with built-in presentations for word structures, Skolem
//!   arithmetic and ordinal addition below omega^omega;
//! * [`msoplus`]: satisfiability for the restricted cross-position extension.

pub mod automata;
pub mod error;
pub mod logic;
pub mod mso;
pub mod msoplus;
pub(crate) mod par;
pub mod sexp;
pub mod structures;
pub mod theories;

pub use error::{Error, Result};
