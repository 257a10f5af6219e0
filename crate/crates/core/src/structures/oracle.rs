use std::sync::Arc;

use super::{compile_fo, decide_fo, AutomaticPresentation};
use crate::automata::TupleWord;
use crate::logic::{Formula, Signature};
use crate::theories::{require_assigned, Assignment, Element, Theory};
use crate::{Error, Result};

/// A presented structure used as a background theory. Elements are
/// [`Element::Word`]s over the letters of the presentation's base theory.
#[derive(Debug)]
pub struct PresentationTheory {
    p: Arc<AutomaticPresentation>,
}

pub fn oracle_from_presentation(p: Arc<AutomaticPresentation>) -> Arc<PresentationTheory> {
    Arc::new(PresentationTheory { p })
}

impl PresentationTheory {
    pub fn presentation(&self) -> &Arc<AutomaticPresentation> {
        &self.p
    }

    fn letters<'a>(&self, e: &'a Element) -> Result<&'a [Element]> {
        match e {
            Element::Word(w) if self.contains(e) => Ok(w),
            _ => Err(Error::invalid(format!(
                "`{e}` is not an element of {}",
                self.p.name()
            ))),
        }
    }

    /// In alias mode the padding letter may trail a found word; the
    /// presented element is the word without it.
    fn strip(&self, mut w: Vec<Element>) -> Vec<Element> {
        if !self.p.theory().is_fresh() {
            let pad = self.p.theory().pad_element();
            while w.last() == Some(&pad) {
                w.pop();
            }
        }
        w
    }
}

impl Theory for PresentationTheory {
    fn name(&self) -> &str {
        self.p.name()
    }

    fn signature(&self) -> &Signature {
        self.p.signature()
    }

    fn decide(&self, sentence: &Formula) -> Result<bool> {
        decide_fo(&self.p, sentence)
    }

    fn eval(&self, phi: &Formula, env: &Assignment) -> Result<bool> {
        require_assigned(phi, env)?;
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        if free.is_empty() {
            return self.decide(phi);
        }
        let tuple = free
            .iter()
            .map(|v| self.letters(&env[v]).map(<[Element]>::to_vec))
            .collect::<Result<Vec<_>>>()?;
        compile_fo(&self.p, phi, &free)?.accepts(&TupleWord(tuple))
    }

    fn find_witness(&self, phi: &Formula, vars: &[String]) -> Result<Option<Assignment>> {
        if vars.is_empty() {
            return Ok(self.decide(phi)?.then(Assignment::new));
        }
        let Some(TupleWord(tracks)) = compile_fo(&self.p, phi, vars)?.find_word()? else {
            return Ok(None);
        };
        Ok(Some(
            vars.iter()
                .zip(tracks)
                .map(|(v, w)| (v.clone(), Element::Word(self.strip(w))))
                .collect(),
        ))
    }

    fn define_element(&self, _e: &Element, _var: &str) -> Option<Formula> {
        None
    }

    /// `[a b c]`, with letters in the base theory's syntax; `[]` is the
    /// empty word.
    fn parse_element(&self, token: &str) -> Result<Element> {
        let inner = token
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::parse(format!("expected a word `[a b …]`, found `{token}`")))?;
        let base = self.p.theory().base();
        let w = inner
            .split_whitespace()
            .map(|t| base.parse_element(t))
            .collect::<Result<Vec<_>>>()?;
        let e = Element::Word(w);
        if !self.contains(&e) {
            return Err(Error::invalid(format!(
                "`{token}` is not an element of {}",
                self.p.name()
            )));
        }
        Ok(e)
    }

    fn contains(&self, e: &Element) -> bool {
        let Element::Word(w) = e else {
            return false;
        };
        let base = self.p.theory().base();
        w.iter().all(|l| !l.is_pad() && base.contains(l))
            && self
                .p
                .domain()
                .accepts(&TupleWord(vec![w.clone()]))
                .unwrap_or(false)
    }
}
