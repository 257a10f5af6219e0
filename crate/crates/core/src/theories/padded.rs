use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::{require_assigned, require_sentence, Assignment, Element, Theory};
use crate::logic::{eliminate_pad, simplify, Formula, PadKind, PadMask, Signature};
use crate::{Error, Result};

/// How the padding symbol `#` is realized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PadMode {
    /// `#` is a new element outside the base domain.
    Fresh,
    /// `#` is the given base element, which must be definable.
    Alias(Element),
}

impl fmt::Display for PadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadMode::Fresh => f.write_str("fresh"),
            PadMode::Alias(e) => write!(f, "alias {e}"),
        }
    }
}

const PAD_VAR: &str = "_pad";

/// A base structure extended with the padding predicate.
pub struct PaddedTheory {
    base: Arc<dyn Theory>,
    mode: PadMode,
    /// Defining formula of the aliased element, free in [`PAD_VAR`].
    pad_def: Option<Formula>,
    descriptor: String,
    cache: Mutex<HashMap<Formula, bool>>,
    sat_cache: Mutex<HashMap<(Formula, PadMask), bool>>,
    eval_cache: Mutex<HashMap<(Formula, Vec<Element>), bool>>,
}

impl fmt::Debug for PaddedTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PaddedTheory")
            .field("base", &self.base.name())
            .field("mode", &self.mode)
            .finish()
    }
}

impl PaddedTheory {
    pub fn new(base: Arc<dyn Theory>, mode: PadMode) -> Result<Self> {
        let pad_def = match &mode {
            PadMode::Fresh => None,
            PadMode::Alias(e) => {
                if !base.contains(e) {
                    return Err(Error::invalid(format!(
                        "padding alias `{e}` is not an element of {}",
                        base.name()
                    )));
                }
                Some(base.define_element(e, PAD_VAR).ok_or_else(|| {
                    Error::invalid(format!("padding alias `{e}` is not definable"))
                })?)
            }
        };
        let descriptor = format!("{} pad {}", base.name(), mode);
        Ok(PaddedTheory {
            base,
            mode,
            pad_def,
            descriptor,
            cache: Mutex::new(HashMap::new()),
            sat_cache: Mutex::new(HashMap::new()),
            eval_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn fresh(base: Arc<dyn Theory>) -> Self {
        Self::new(base, PadMode::Fresh).expect("fresh padding always applies")
    }

    pub fn alias(base: Arc<dyn Theory>, e: Element) -> Result<Self> {
        Self::new(base, PadMode::Alias(e))
    }

    pub fn base(&self) -> &Arc<dyn Theory> {
        &self.base
    }

    pub fn mode(&self) -> &PadMode {
        &self.mode
    }

    pub fn is_fresh(&self) -> bool {
        self.mode == PadMode::Fresh
    }

    /// The element written in padded positions.
    pub fn pad_element(&self) -> Element {
        match &self.mode {
            PadMode::Fresh => Element::Pad,
            PadMode::Alias(e) => e.clone(),
        }
    }

    /// `NAME pad MODE`, as written in automaton headers.
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Whether `e` is a letter of the padded alphabet.
    pub fn is_letter(&self, e: &Element) -> bool {
        (self.is_fresh() && e.is_pad()) || self.base.contains(e)
    }

    /// Alias mode: replace every `Pad(t)` by the defining formula of the
    /// aliased element.
    fn unalias(&self, f: &Formula) -> Formula {
        let def = self.pad_def.as_ref().expect("alias mode");
        match f {
            Formula::Pad(t) => def.rename_var(PAD_VAR, t.clone()),
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => f.clone(),
            Formula::Not(g) => Formula::not(self.unalias(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.unalias(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.unalias(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.unalias(a), self.unalias(b)),
            Formula::Exists(v, g) => Formula::exists(v, self.unalias(g)),
            Formula::Forall(v, g) => Formula::forall(v, self.unalias(g)),
        }
    }

    /// The base-language formula equivalent to `f` once the variables in
    /// `mask` are fixed to padding or proper values.
    pub fn to_base(&self, f: &Formula, mask: &PadMask) -> Formula {
        match self.mode {
            PadMode::Fresh => eliminate_pad(f, mask),
            PadMode::Alias(_) => {
                let mut parts = vec![self.unalias(f)];
                for (v, kind) in mask {
                    let p = self.unalias(&Formula::pad_var(v));
                    parts.push(match kind {
                        PadKind::Padding => p,
                        PadKind::Proper => Formula::not(p),
                    });
                }
                simplify(&Formula::And(parts))
            }
        }
    }

    /// Satisfiability with the variables of `mask` forced to padding or
    /// proper values and all other free variables unconstrained.
    pub fn satisfiable_with(&self, f: &Formula, mask: &PadMask) -> Result<bool> {
        let key = (f.clone(), mask.clone());
        if let Some(&b) = self.sat_cache.lock().unwrap().get(&key) {
            return Ok(b);
        }
        let b = self.satisfiable_uncached(f, mask)?;
        self.sat_cache.lock().unwrap().insert(key, b);
        Ok(b)
    }

    fn satisfiable_uncached(&self, f: &Formula, mask: &PadMask) -> Result<bool> {
        let free: Vec<String> = f
            .free_vars()
            .into_iter()
            .filter(|v| !mask.contains_key(v))
            .collect();
        let closed_rest = Formula::exists_many(&free, f.clone());
        let g = simplify(&closed_rest);
        let base = self.to_base(&g, mask);
        self.decide_base(&base.exists_closure())
    }

    fn decide_base(&self, sentence: &Formula) -> Result<bool> {
        match sentence {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            s => {
                if let Some(&b) = self.cache.lock().unwrap().get(s) {
                    return Ok(b);
                }
                let b = self.base.decide(s)?;
                self.cache.lock().unwrap().insert(s.clone(), b);
                Ok(b)
            }
        }
    }

    fn eval_uncached(&self, phi: &Formula, env: &Assignment) -> Result<bool> {
        match self.mode {
            PadMode::Fresh => {
                let mut mask = PadMask::new();
                let mut proper = Assignment::new();
                for v in phi.free_vars() {
                    let e = &env[&v];
                    if e.is_pad() {
                        mask.insert(v, PadKind::Padding);
                    } else {
                        mask.insert(v.clone(), PadKind::Proper);
                        proper.insert(v, e.clone());
                    }
                }
                let g = eliminate_pad(phi, &mask);
                match g {
                    Formula::True => Ok(true),
                    Formula::False => Ok(false),
                    g => self.base.eval(&g, &proper),
                }
            }
            PadMode::Alias(_) => {
                let env: Assignment = env
                    .iter()
                    .map(|(k, e)| {
                        let e = if e.is_pad() { self.pad_element() } else { e.clone() };
                        (k.clone(), e)
                    })
                    .collect();
                self.base.eval(&self.unalias(phi), &env)
            }
        }
    }

    /// A witness with the variables of `mask` fixed to padding or proper.
    pub fn find_witness_with(
        &self,
        f: &Formula,
        vars: &[String],
        mask: &PadMask,
    ) -> Result<Option<Assignment>> {
        match self.mode {
            PadMode::Alias(_) => self.base.find_witness(&self.to_base(f, mask), vars),
            PadMode::Fresh => {
                let open: Vec<&String> = vars.iter().filter(|v| !mask.contains_key(*v)).collect();
                // fewest padded variables first
                let mut choices: Vec<u64> = (0..1u64 << open.len()).collect();
                choices.sort_by_key(|m| (m.count_ones(), *m));
                for bits in choices {
                    let mut full = mask.clone();
                    for (i, v) in open.iter().enumerate() {
                        let kind = if bits >> i & 1 == 1 {
                            PadKind::Padding
                        } else {
                            PadKind::Proper
                        };
                        full.insert((*v).clone(), kind);
                    }
                    let proper: Vec<String> = vars
                        .iter()
                        .filter(|v| full.get(*v) != Some(&PadKind::Padding))
                        .cloned()
                        .collect();
                    let g = eliminate_pad(f, &full);
                    if g == Formula::False {
                        continue;
                    }
                    if let Some(mut w) = self.base.find_witness(&g, &proper)? {
                        for v in vars {
                            if full.get(v) == Some(&PadKind::Padding) {
                                w.insert(v.clone(), Element::Pad);
                            }
                        }
                        return Ok(Some(w));
                    }
                }
                Ok(None)
            }
        }
    }
}

impl Theory for PaddedTheory {
    fn name(&self) -> &str {
        self.base.name()
    }

    fn signature(&self) -> &Signature {
        self.base.signature()
    }

    fn decide(&self, sentence: &Formula) -> Result<bool> {
        require_sentence(sentence)?;
        self.decide_base(&self.to_base(sentence, &PadMask::new()))
    }

    fn eval(&self, phi: &Formula, env: &Assignment) -> Result<bool> {
        require_assigned(phi, env)?;
        if phi.is_quantifier_free() {
            return self.eval_uncached(phi, env);
        }
        let key = (
            phi.clone(),
            phi.free_vars().iter().map(|v| env[v].clone()).collect(),
        );
        if let Some(&b) = self.eval_cache.lock().unwrap().get(&key) {
            return Ok(b);
        }
        let b = self.eval_uncached(phi, env)?;
        self.eval_cache.lock().unwrap().insert(key, b);
        Ok(b)
    }

    fn satisfiable(&self, phi: &Formula) -> Result<bool> {
        self.satisfiable_with(phi, &PadMask::new())
    }

    fn find_witness(&self, phi: &Formula, vars: &[String]) -> Result<Option<Assignment>> {
        self.find_witness_with(phi, vars, &PadMask::new())
    }

    fn define_element(&self, e: &Element, var: &str) -> Option<Formula> {
        if e.is_pad() {
            return Some(Formula::pad_var(var));
        }
        let d = self.base.define_element(e, var)?;
        Some(match self.mode {
            PadMode::Fresh => Formula::and([Formula::not(Formula::pad_var(var)), d]),
            PadMode::Alias(_) => d,
        })
    }

    fn parse_element(&self, token: &str) -> Result<Element> {
        if token == "#" {
            return Ok(self.pad_element());
        }
        self.base.parse_element(token)
    }

    fn contains(&self, e: &Element) -> bool {
        self.is_letter(e)
    }

    fn finite_domain(&self) -> Option<Vec<Element>> {
        let mut d = self.base.finite_domain()?;
        if self.is_fresh() {
            d.push(Element::Pad);
        }
        Some(d)
    }
}
