//! Automatic presentations: a structure whose domain and relations are
//! recognizable, through an injective word encoding, by automata over a
//! background theory. Its first-order theory is decided by compiling
//! formulas to automata and testing emptiness.

mod builtin;
mod cnf;
mod fo;
mod oracle;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex};

use crate::automata::MAutomaton;
use crate::logic::{Formula, PadKind, PadMask, Signature};
use crate::theories::{registry, PaddedTheory};
use crate::{Error, Result};

pub use builtin::{
    ees_presentation, ordinal_presentation, skolem_decode, skolem_encode, skolem_presentation,
};
pub use cnf::{cnf_add, cnf_cmp, Cnf};
pub use fo::{compile_fo, decide_fo, nnf};
pub use oracle::{oracle_from_presentation, PresentationTheory};

/// A presented structure: a 1-track domain automaton and one automaton per
/// relation symbol, all over the same padded theory.
pub struct AutomaticPresentation {
    name: String,
    theory: Arc<PaddedTheory>,
    signature: Signature,
    domain: MAutomaton,
    relations: BTreeMap<String, MAutomaton>,
    /// Domain used inside the pipeline. In alias mode it is closed under
    /// adding and removing trailing padding, like every intermediate result.
    working_domain: MAutomaton,
    universal: bool,
    powers: Mutex<HashMap<usize, MAutomaton>>,
}

impl std::fmt::Debug for AutomaticPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AutomaticPresentation")
            .field("name", &self.name)
            .field("theory", &self.theory.descriptor())
            .field("relations", &self.relations.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// Alias mode: close the language under appending and removing all-padding
/// columns.
fn saturate(a: &MAutomaton) -> Result<MAutomaton> {
    let theory = a.theory().clone();
    let all_pad = Formula::and(a.track_vars().iter().map(|v| Formula::pad_var(v)));
    let mask: PadMask = a
        .track_vars()
        .into_iter()
        .map(|v| (v, PadKind::Padding))
        .collect();
    let mut out = a.clone();
    // states reaching a final state on padding columns become final
    let mut changed = true;
    while changed {
        changed = false;
        for t in a.transitions() {
            if out.is_final(t.to)
                && !out.is_final(t.from)
                && theory.satisfiable_with(&t.label, &mask)?
            {
                out.set_final(t.from);
                changed = true;
            }
        }
    }
    let sink = out.add_state();
    let finals: Vec<usize> = out.finals().iter().copied().collect();
    for q in finals {
        out.add_transition(q, all_pad.clone(), sink)?;
    }
    out.set_final(sink);
    out.add_transition(sink, all_pad, sink)?;
    out.trim()
}

impl AutomaticPresentation {
    /// Assemble a presentation. Relation automata are restricted to tuples
    /// of domain elements.
    pub fn new(
        name: &str,
        domain: MAutomaton,
        relations: Vec<(String, MAutomaton)>,
    ) -> Result<AutomaticPresentation> {
        if domain.tracks() != 1 {
            return Err(Error::TrackMismatch {
                expected: 1,
                found: domain.tracks(),
            });
        }
        let theory = domain.theory().clone();
        let alias = !theory.is_fresh();
        let working_domain = if alias { saturate(&domain)? } else { domain.clone() };
        let universal = working_domain.complement()?.is_empty()?;
        let mut p = AutomaticPresentation {
            name: name.to_string(),
            theory: theory.clone(),
            signature: Signature::new(),
            domain,
            relations: BTreeMap::new(),
            working_domain,
            universal,
            powers: Mutex::new(HashMap::new()),
        };
        for (rel, a) in relations {
            if a.theory().descriptor() != theory.descriptor() {
                return Err(Error::TheoryMismatch(
                    theory.descriptor().to_string(),
                    a.theory().descriptor().to_string(),
                ));
            }
            p.signature.add_relation(&rel, a.tracks())?;
            let a = if alias { saturate(&a)? } else { a };
            let a = p.relativize(&a)?;
            p.relations.insert(rel, a);
        }
        Ok(p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn theory(&self) -> &Arc<PaddedTheory> {
        &self.theory
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The domain automaton as given.
    pub fn domain(&self) -> &MAutomaton {
        &self.domain
    }

    pub fn relation(&self, name: &str) -> Option<&MAutomaton> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &MAutomaton)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Whether every tuple is a tuple of domain elements, so that
    /// relativization can be skipped.
    pub fn has_universal_domain(&self) -> bool {
        self.universal
    }

    /// The `k`-th cartesian power of the domain.
    pub fn domain_power(&self, k: usize) -> Result<MAutomaton> {
        if let Some(a) = self.powers.lock().unwrap().get(&k) {
            return Ok(a.clone());
        }
        let a = if self.universal {
            universal(k, self.theory.clone())
        } else {
            let mut acc = self.working_domain.reindex(k, &[0])?;
            for i in 1..k {
                acc = acc.intersect(&self.working_domain.reindex(k, &[i])?)?;
            }
            acc.trim()?
        };
        self.powers.lock().unwrap().insert(k, a.clone());
        Ok(a)
    }

    /// Restrict to tuples of domain elements.
    pub(crate) fn relativize(&self, a: &MAutomaton) -> Result<MAutomaton> {
        if self.universal {
            return Ok(a.clone());
        }
        a.intersect(&self.domain_power(a.tracks())?)?.trim()
    }

    /// Load the text format
    ///
    /// ```text
    /// theory presburger pad alias 0
    /// domain dom.aut
    /// rel plus/3 plus.aut
    /// ```
    ///
    /// with automaton paths relative to the presentation file.
    pub fn load(path: &Path) -> Result<AutomaticPresentation> {
        let text = std::fs::read_to_string(path)?;
        let dir = path.parent();
        let mut header = None;
        let mut domain = None;
        let mut rels = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::parse(format!("{}:{}: {m}", path.display(), no + 1));
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let resolve = |f: &str| match dir {
                Some(d) => d.join(f),
                None => Path::new(f).to_path_buf(),
            };
            match key {
                "theory" => {
                    let (name, pad) = rest.split_once(" pad ").unwrap_or((rest, "fresh"));
                    header = Some(registry::padded_by_name(name.trim(), pad.trim(), dir)?);
                }
                "domain" => domain = Some(MAutomaton::load(&resolve(rest))?),
                "rel" => {
                    let (sig, file) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| err("expected `rel NAME/k FILE`".into()))?;
                    let (name, k) = sig
                        .split_once('/')
                        .ok_or_else(|| err(format!("expected NAME/k, found `{sig}`")))?;
                    let k: usize = k.parse().map_err(|_| err(format!("bad arity in `{sig}`")))?;
                    let a = MAutomaton::load(&resolve(file.trim()))?;
                    if a.tracks() != k {
                        return Err(err(format!(
                            "`{name}` declared with arity {k} but its automaton has {} tracks",
                            a.tracks()
                        )));
                    }
                    rels.push((name.to_string(), a));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let domain = domain.ok_or_else(|| Error::parse("presentation without a `domain` line"))?;
        if let Some(t) = header {
            if t.descriptor() != domain.theory().descriptor() {
                return Err(Error::TheoryMismatch(
                    t.descriptor().to_string(),
                    domain.theory().descriptor().to_string(),
                ));
            }
        }
        let name = path.display().to_string();
        AutomaticPresentation::new(&name, domain, rels)
    }

    /// Built-ins `ees` (over Presburger), `ees:THEORY`, `skolem` and
    /// `ordinal-omega-omega`; anything else is read as a presentation file.
    pub fn by_name(name: &str, dir: Option<&Path>) -> Result<Arc<AutomaticPresentation>> {
        static BUILTIN: Mutex<Option<HashMap<String, Arc<AutomaticPresentation>>>> =
            Mutex::new(None);
        if let Some(p) = BUILTIN.lock().unwrap().get_or_insert_with(HashMap::new).get(name) {
            return Ok(p.clone());
        }
        let p = match name {
            "skolem" => skolem_presentation()?,
            "ordinal-omega-omega" => ordinal_presentation()?,
            "ees" => ees_presentation(registry::presburger())?,
            _ => match name.strip_prefix("ees:") {
                Some(base) => ees_presentation(registry::base_theory(base, dir)?)?,
                None => {
                    let path = match dir {
                        Some(d) if Path::new(name).is_relative() => d.join(name),
                        _ => Path::new(name).to_path_buf(),
                    };
                    if !path.is_file() {
                        return Err(Error::invalid(format!("unknown presentation `{name}`")));
                    }
                    AutomaticPresentation::load(&path)?
                }
            },
        };
        let p = Arc::new(p);
        BUILTIN
            .lock()
            .unwrap()
            .get_or_insert_with(HashMap::new)
            .insert(name.to_string(), p.clone());
        Ok(p)
    }
}

/// One state, initial and final, looping on `true`.
pub(crate) fn universal(k: usize, theory: Arc<PaddedTheory>) -> MAutomaton {
    let mut a = MAutomaton::new(k, theory);
    let q = a.add_state();
    a.set_initial(q);
    a.set_final(q);
    a.add_transition(q, Formula::True, q).expect("true is a valid label");
    a
}

/// One state, neither final nor looping.
pub(crate) fn empty(k: usize, theory: Arc<PaddedTheory>) -> MAutomaton {
    let mut a = MAutomaton::new(k, theory);
    let q = a.add_state();
    a.set_initial(q);
    a
}
