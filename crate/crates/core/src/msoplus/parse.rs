use super::MsoPlusSentence;
use crate::logic::Signature;
use crate::mso::parse_mso;
use crate::{Error, Result};

/// A `symvars x1 … xn` line followed by the body in the MSO syntax, where
/// `(theta FORMULA x…)` binds `v1 … vm` of `FORMULA` to the positions.
/// Lines starting with `;` are comments.
pub fn parse_msoplus(text: &str, sig: &Signature) -> Result<MsoPlusSentence> {
    let mut lines = text.lines();
    let header = lines
        .by_ref()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with(';'))
        .ok_or_else(|| Error::parse("empty MSO⁺ sentence"))?;
    let vars = header
        .strip_prefix("symvars")
        .filter(|rest| rest.is_empty() || rest.starts_with(char::is_whitespace))
        .ok_or_else(|| Error::parse(format!("expected `symvars x1 … xn`, found `{header}`")))?;
    let symvars = vars.split_whitespace().map(str::to_string).collect();
    let body: Vec<&str> = lines.collect();
    MsoPlusSentence::new(symvars, parse_mso(&body.join("\n"), sig)?)
}
