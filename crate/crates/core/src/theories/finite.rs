use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use super::{require_assigned, require_sentence, Assignment, Element, Theory};
use crate::logic::{Formula, Signature, Term};
use crate::{Error, Result};

/// An explicit finite structure, decided by exhaustive Tarskian semantics.
///
/// Every domain element is also a constant symbol naming itself.
#[derive(Debug, Clone)]
pub struct FiniteStructure {
    name: String,
    domain: Vec<Arc<str>>,
    index: HashMap<Arc<str>, usize>,
    tables: BTreeMap<String, HashSet<Vec<usize>>>,
    signature: Signature,
}

impl FiniteStructure {
    pub fn new(name: &str, domain: &[&str]) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::invalid("finite structure needs a nonempty domain"));
        }
        let mut signature = Signature::new();
        let mut index = HashMap::new();
        let mut elems = Vec::new();
        for (i, d) in domain.iter().enumerate() {
            if !is_ident(d) {
                return Err(Error::invalid(format!("bad element name `{d}`")));
            }
            signature.add_constant(d)?;
            let d: Arc<str> = Arc::from(*d);
            index.insert(d.clone(), i);
            elems.push(d);
        }
        Ok(FiniteStructure {
            name: name.to_string(),
            domain: elems,
            index,
            tables: BTreeMap::new(),
            signature,
        })
    }

    /// Add a relation given as tuples of element names.
    pub fn add_relation(&mut self, rel: &str, arity: usize, tuples: &[Vec<&str>]) -> Result<()> {
        self.signature.add_relation(rel, arity)?;
        let mut table = HashSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::Arity {
                    name: rel.to_string(),
                    expected: arity,
                    found: t.len(),
                });
            }
            let ids = t
                .iter()
                .map(|e| {
                    self.index
                        .get(*e)
                        .copied()
                        .ok_or_else(|| Error::invalid(format!("`{e}` is not in the domain")))
                })
                .collect::<Result<Vec<_>>>()?;
            table.insert(ids);
        }
        self.tables.insert(rel.to_string(), table);
        Ok(())
    }

    pub fn with_relation(mut self, rel: &str, arity: usize, tuples: &[Vec<&str>]) -> Result<Self> {
        self.add_relation(rel, arity, tuples)?;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.domain.iter().map(|d| Element::Sym(d.clone()))
    }

    /// Parse the text format:
    ///
    /// ```text
    /// domain a b c
    /// rel P/1 = {a}
    /// rel E/2 = {(a,a) (b,b)}
    /// ```
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut structure: Option<FiniteStructure> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::parse(format!("line {}: {m}", lineno + 1));
            if let Some(rest) = line.strip_prefix("domain") {
                if structure.is_some() {
                    return Err(err("duplicate `domain` line"));
                }
                let elems: Vec<&str> = rest.split_whitespace().collect();
                structure = Some(FiniteStructure::new(name, &elems)?);
            } else if let Some(rest) = line.strip_prefix("rel") {
                let s = structure
                    .as_mut()
                    .ok_or_else(|| err("`rel` before `domain`"))?;
                let (head, body) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `rel NAME/k = {...}`"))?;
                let (rel, arity) = head
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| err("expected NAME/k"))?;
                let arity: usize = arity.trim().parse().map_err(|_| err("bad arity"))?;
                let body = body.trim();
                let inner = body
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| err("tuple set must be enclosed in braces"))?;
                let tuples = parse_tuples(inner).map_err(|m| err(&m))?;
                s.add_relation(rel.trim(), arity, &tuples)?;
            } else {
                return Err(err("expected `domain` or `rel`"));
            }
        }
        structure.ok_or_else(|| Error::parse("missing `domain` line"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&path.display().to_string(), &text)
    }

    fn elem_index(&self, e: &Element) -> Result<usize> {
        match e {
            Element::Sym(s) => self
                .index
                .get(s)
                .copied()
                .ok_or_else(|| Error::invalid(format!("`{s}` is not in the domain"))),
            other => Err(Error::invalid(format!("`{other}` is not an element of {}", self.name))),
        }
    }

    fn term_value(&self, t: &Term, env: &HashMap<&str, usize>) -> Result<usize> {
        match t {
            Term::Var(v) => env
                .get(v.as_str())
                .copied()
                .ok_or_else(|| Error::invalid(format!("unassigned variable `{v}`"))),
            Term::Const(c) => self
                .index
                .get(c.as_str())
                .copied()
                .ok_or_else(|| Error::invalid(format!("unknown constant `{c}`"))),
        }
    }

    fn holds<'a>(&self, f: &'a Formula, env: &mut HashMap<&'a str, usize>) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(name, ts) => {
                let table = self
                    .tables
                    .get(name)
                    .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                let tuple = ts
                    .iter()
                    .map(|t| self.term_value(t, env))
                    .collect::<Result<Vec<_>>>()?;
                table.contains(&tuple)
            }
            Formula::Eq(a, b) => self.term_value(a, env)? == self.term_value(b, env)?,
            Formula::Pad(_) => {
                return Err(Error::Unsupported(
                    "padding predicate in an unpadded finite structure".into(),
                ))
            }
            Formula::Not(g) => !self.holds(g, env)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.holds(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.holds(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.holds(a, env)? || self.holds(b, env)?,
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let want = matches!(f, Formula::Exists(..));
                let saved = env.get(v.as_str()).copied();
                let mut result = !want;
                for i in 0..self.domain.len() {
                    env.insert(v, i);
                    if self.holds(g, env)? == want {
                        result = want;
                        break;
                    }
                }
                match saved {
                    Some(s) => env.insert(v, s),
                    None => env.remove(v.as_str()),
                };
                result
            }
        })
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || c == '_')
        && s != "true"
        && s != "false"
}

fn parse_tuples(inner: &str) -> std::result::Result<Vec<Vec<&str>>, String> {
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or("unclosed tuple")?;
            out.push(r[..close].split(',').map(str::trim).collect());
            rest = r[close + 1..].trim_start().trim_start_matches(',').trim_start();
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == ',')
                .unwrap_or(rest.len());
            out.push(vec![&rest[..end]]);
            rest = rest[end..].trim_start().trim_start_matches(',').trim_start();
        }
    }
    Ok(out)
}

impl Theory for FiniteStructure {
    fn name(&self) -> &str {
        &self.name
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn decide(&self, sentence: &Formula) -> Result<bool> {
        require_sentence(sentence)?;
        self.holds(sentence, &mut HashMap::new())
    }

    fn eval(&self, phi: &Formula, env: &Assignment) -> Result<bool> {
        require_assigned(phi, env)?;
        let mut local = HashMap::new();
        for (k, v) in env {
            local.insert(k.as_str(), self.elem_index(v)?);
        }
        self.holds(phi, &mut local)
    }

    fn satisfiable(&self, phi: &Formula) -> Result<bool> {
        let vars: Vec<String> = phi.free_vars().into_iter().collect();
        Ok(self.find_witness(phi, &vars)?.is_some())
    }

    fn find_witness(&self, phi: &Formula, vars: &[String]) -> Result<Option<Assignment>> {
        let n = self.domain.len();
        let k = vars.len();
        let mut idx = vec![0usize; k];
        loop {
            let mut env: HashMap<&str, usize> = HashMap::new();
            for (v, &i) in vars.iter().zip(&idx) {
                env.insert(v, i);
            }
            if self.holds(phi, &mut env)? {
                return Ok(Some(
                    vars.iter()
                        .zip(&idx)
                        .map(|(v, &i)| (v.clone(), Element::Sym(self.domain[i].clone())))
                        .collect(),
                ));
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == k {
                    return Ok(None);
                }
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn define_element(&self, e: &Element, var: &str) -> Option<Formula> {
        match e {
            Element::Sym(s) if self.index.contains_key(s) => Some(Formula::Eq(
                Term::var(var),
                Term::Const(s.to_string()),
            )),
            _ => None,
        }
    }

    fn parse_element(&self, token: &str) -> Result<Element> {
        let e = Element::sym(token);
        self.elem_index(&e)?;
        Ok(e)
    }

    fn contains(&self, e: &Element) -> bool {
        self.elem_index(e).is_ok()
    }

    fn finite_domain(&self) -> Option<Vec<Element>> {
        Some(self.elements().collect())
    }
}
