use crate::{Error, Result};

/// Relational signature: relation symbols with positive arities and constant
/// symbols. Equality is built in and never listed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Result<Self> {
        self.add_relation(name, arity)?;
        Ok(self)
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::invalid(format!("relation `{name}` must have positive arity")));
        }
        if self.arity(name).is_some() || self.is_constant(name) {
            return Err(Error::invalid(format!("duplicate symbol `{name}`")));
        }
        self.relations.push((name.to_string(), arity));
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<()> {
        if self.arity(name).is_some() || self.is_constant(name) {
            return Err(Error::invalid(format!("duplicate symbol `{name}`")));
        }
        self.constants.push(name.to_string());
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, a)| a)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }
}
