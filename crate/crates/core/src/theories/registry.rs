//! Process-wide lookup of theories by name, so that automata loaded from
//! different files share one oracle (and its caches).

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use super::{FiniteStructure, PadMode, PaddedTheory, Presburger, Theory};
use crate::{Error, Result};

#[derive(Default)]
struct Registry {
    bases: HashMap<String, Arc<dyn Theory>>,
    padded: HashMap<(String, PadMode), Arc<PaddedTheory>>,
}

fn registry() -> &'static Mutex<Registry> {
    static REG: OnceLock<Mutex<Registry>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

/// The shared Presburger oracle.
pub fn presburger() -> Arc<dyn Theory> {
    base_theory("presburger", None).expect("built-in theory")
}

/// Make a theory available under its name.
pub fn register(theory: Arc<dyn Theory>) {
    let mut reg = registry().lock().unwrap();
    reg.bases.insert(theory.name().to_string(), theory);
}

/// Resolve `presburger`, a registered name, or a finite-structure file
/// (relative paths are taken from `dir`).
pub fn base_theory(name: &str, dir: Option<&Path>) -> Result<Arc<dyn Theory>> {
    if let Some(t) = registry().lock().unwrap().bases.get(name) {
        return Ok(t.clone());
    }
    let theory: Arc<dyn Theory> = if name == "presburger" {
        Arc::new(Presburger::new())
    } else {
        let path = match dir {
            Some(d) if Path::new(name).is_relative() => d.join(name),
            _ => Path::new(name).to_path_buf(),
        };
        if !path.is_file() {
            return Err(Error::invalid(format!("unknown theory `{name}`")));
        }
        let canonical = path.canonicalize()?;
        let key = canonical.display().to_string();
        if let Some(t) = registry().lock().unwrap().bases.get(&key) {
            return Ok(t.clone());
        }
        let text = std::fs::read_to_string(&canonical)?;
        Arc::new(FiniteStructure::parse(&key, &text)?)
    };
    let mut reg = registry().lock().unwrap();
    Ok(reg
        .bases
        .entry(theory.name().to_string())
        .or_insert(theory)
        .clone())
}

/// The padded extension of a base theory, shared per (theory, mode).
pub fn padded(base: Arc<dyn Theory>, mode: PadMode) -> Result<Arc<PaddedTheory>> {
    let key = (base.name().to_string(), mode.clone());
    let same = |t: &Arc<PaddedTheory>| {
        std::ptr::addr_eq(Arc::as_ptr(t.base()), Arc::as_ptr(&base))
    };
    if let Some(t) = registry().lock().unwrap().padded.get(&key) {
        if same(t) {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(PaddedTheory::new(base.clone(), mode)?);
    let mut reg = registry().lock().unwrap();
    // a different structure under the same name replaces the cached one
    let slot = reg.padded.entry(key).or_insert_with(|| t.clone());
    if !same(slot) {
        *slot = t;
    }
    Ok(slot.clone())
}

/// Resolve a theory name and padding mode given as text (`fresh`, or
/// `alias ELEM`).
pub fn padded_by_name(name: &str, pad: &str, dir: Option<&Path>) -> Result<Arc<PaddedTheory>> {
    let base = base_theory(name, dir)?;
    let words: Vec<&str> = pad.split_whitespace().collect();
    let mode = match words.as_slice() {
        [] | ["fresh"] => PadMode::Fresh,
        ["alias", e] => PadMode::Alias(base.parse_element(e)?),
        _ => return Err(Error::parse(format!("bad padding mode `{pad}`"))),
    };
    padded(base, mode)
}
