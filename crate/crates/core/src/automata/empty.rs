use std::collections::{HashMap, VecDeque};

use super::{deconvolve, MAutomaton, State, TupleWord};
use crate::logic::{track_var, PadKind, PadMask};
use crate::theories::Element;
use crate::Result;

/// A search node: a state and the set of tracks already exhausted.
type Node = (State, u64);

impl MAutomaton {
    /// Whether no tuple is accepted.
    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.shortest_path()?.is_none())
    }

    /// A shortest accepted tuple, if any.
    pub fn find_word(&self) -> Result<Option<TupleWord>> {
        let Some(path) = self.shortest_path()? else {
            return Ok(None);
        };
        let vars = self.track_vars();
        let mut columns = Vec::with_capacity(path.len());
        for (ti, ended) in path {
            let label = &self.transitions[ti].label;
            let mask = self.mask(ended);
            let w = self
                .theory
                .find_witness_with(label, &vars, &mask)?
                .ok_or_else(|| crate::Error::invalid("satisfiable label without a witness"))?;
            columns.push(vars.iter().map(|v| w[v].clone()).collect::<Vec<Element>>());
        }
        let pad = self.theory.pad_element();
        let word = if self.theory.is_fresh() {
            deconvolve(&columns, self.tracks, &pad)
        } else {
            // every track keeps its full column sequence
            let mut out = vec![Vec::new(); self.tracks];
            for col in &columns {
                for (t, e) in col.iter().enumerate() {
                    out[t].push(e.clone());
                }
            }
            TupleWord(out)
        };
        Ok(Some(word))
    }

    /// Mask for a column in which the tracks in `ended` are padding and the
    /// others proper (fresh padding only; alias mode leaves columns free).
    fn mask(&self, ended: u64) -> PadMask {
        let mut m = PadMask::new();
        if self.theory.is_fresh() {
            for i in 0..self.tracks {
                let kind = if ended >> i & 1 == 1 {
                    PadKind::Padding
                } else {
                    PadKind::Proper
                };
                m.insert(track_var(i + 1), kind);
            }
        }
        m
    }

    /// Breadth-first search for an accepting path over canonical
    /// convolutions: each track's padding is a suffix and no column is
    /// entirely padding. Returns the transitions taken with the padding
    /// pattern of each column.
    fn shortest_path(&self) -> Result<Option<Vec<(usize, u64)>>> {
        if self.initial.iter().any(|q| self.is_final(*q)) {
            return Ok(Some(Vec::new()));
        }
        let fresh = self.theory.is_fresh();
        let full: u64 = if self.tracks >= 64 {
            u64::MAX
        } else {
            (1u64 << self.tracks) - 1
        };
        let outgoing = self.outgoing();
        let mut parent: HashMap<Node, Option<(Node, usize, u64)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            parent.insert((q, 0), None);
            queue.push_back((q, 0u64));
        }
        while let Some((q, ended)) = queue.pop_front() {
            for &ti in &outgoing[q] {
                let t = &self.transitions[ti];
                let patterns: Vec<u64> = if fresh {
                    supersets(ended, full).filter(|m| *m != full).collect()
                } else {
                    vec![0]
                };
                for m in patterns {
                    let node = (t.to, m);
                    if parent.contains_key(&node) {
                        continue;
                    }
                    if !self.theory.satisfiable_with(&t.label, &self.mask(m))? {
                        continue;
                    }
                    parent.insert(node, Some(((q, ended), ti, m)));
                    if self.is_final(t.to) {
                        return Ok(Some(unwind(&parent, node)));
                    }
                    queue.push_back(node);
                }
            }
        }
        Ok(None)
    }
}

fn supersets(base: u64, full: u64) -> impl Iterator<Item = u64> {
    let free = full & !base;
    // enumerate subsets of `free` in increasing order
    let mut sub: Option<u64> = Some(0);
    std::iter::from_fn(move || {
        let s = sub?;
        sub = if s == free { None } else { Some(((s | !free).wrapping_add(1)) & free) };
        Some(base | s)
    })
}

fn unwind(parent: &HashMap<Node, Option<(Node, usize, u64)>>, mut node: Node) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    while let Some(Some((prev, ti, m))) = parent.get(&node) {
        out.push((*ti, *m));
        node = *prev;
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::supersets;

    #[test]
    fn supersets_enumerates_all() {
        let got: Vec<u64> = supersets(0b001, 0b111).collect();
        assert_eq!(got, vec![0b001, 0b011, 0b101, 0b111]);
        let got: Vec<u64> = supersets(0b11, 0b11).collect();
        assert_eq!(got, vec![0b11]);
    }
}
