//! Multitape synchronous automata with first-order transition labels.
//!
//! A transition label is a formula over the track variables `t1 … tn`,
//! read in the padded structure. An automaton accepts a tuple of words when
//! some run over the convolution of the tuple reaches a final state.

mod empty;
mod ops;
mod text;
mod tracks;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::logic::{track_index, track_var, Formula};
use crate::theories::{Assignment, Element, PaddedTheory, Theory};
use crate::{par, Error, Result};

pub(crate) use ops::minterms_of;
pub use text::{parse_automaton, print_automaton};

pub type State = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: State,
    pub label: Formula,
    pub to: State,
}

/// A tuple of words, one per track. Components may differ in length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleWord(pub Vec<Vec<Element>>);

impl TupleWord {
    pub fn new(tracks: Vec<Vec<Element>>) -> Self {
        TupleWord(tracks)
    }

    pub fn tracks(&self) -> usize {
        self.0.len()
    }

    /// Length of the convolution: the longest component.
    pub fn len(&self) -> usize {
        self.0.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for TupleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if w.is_empty() {
                f.write_str("\"\"")?;
            }
            for (j, e) in w.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// Columnwise superposition of the tracks, shorter ones filled with `pad`.
pub fn convolve(w: &TupleWord, pad: &Element) -> Vec<Vec<Element>> {
    (0..w.len())
        .map(|i| {
            w.0.iter()
                .map(|track| track.get(i).cloned().unwrap_or_else(|| pad.clone()))
                .collect()
        })
        .collect()
}

/// Split a convolution back into its tracks, dropping padding.
pub fn deconvolve(columns: &[Vec<Element>], tracks: usize, pad: &Element) -> TupleWord {
    let mut out = vec![Vec::new(); tracks];
    for col in columns {
        for (t, e) in col.iter().enumerate() {
            if e != pad {
                out[t].push(e.clone());
            }
        }
    }
    TupleWord(out)
}

/// An automaton over `tracks` tapes, bound to a padded theory.
#[derive(Clone)]
pub struct MAutomaton {
    tracks: usize,
    theory: Arc<PaddedTheory>,
    names: Vec<String>,
    transitions: Vec<Transition>,
    initial: BTreeSet<State>,
    finals: BTreeSet<State>,
}

impl fmt::Debug for MAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_automaton(self))
    }
}

impl MAutomaton {
    pub fn new(tracks: usize, theory: Arc<PaddedTheory>) -> Self {
        assert!(tracks >= 1, "an automaton needs at least one track");
        MAutomaton {
            tracks,
            theory,
            names: Vec::new(),
            transitions: Vec::new(),
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
        }
    }

    /// Add a state named `q<k>` for its index `k`.
    pub fn add_state(&mut self) -> State {
        let id = self.names.len();
        self.names.push(format!("q{id}"));
        id
    }

    pub fn add_named_state(&mut self, name: &str) -> Result<State> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::invalid(format!("duplicate state `{name}`")));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    pub fn add_states(&mut self, n: usize) -> Vec<State> {
        (0..n).map(|_| self.add_state()).collect()
    }

    /// Add a transition; the label's free variables must be track variables.
    pub fn add_transition(&mut self, from: State, label: Formula, to: State) -> Result<()> {
        for v in label.free_vars() {
            match track_index(&v) {
                Some(i) if (1..=self.tracks).contains(&i) => {}
                _ => {
                    return Err(Error::invalid(format!(
                        "label variable `{v}` is not a track of a {}-track automaton",
                        self.tracks
                    )))
                }
            }
        }
        label.check(self.theory.signature())?;
        if from >= self.names.len() || to >= self.names.len() {
            return Err(Error::invalid("transition endpoint out of range"));
        }
        self.transitions.push(Transition { from, label, to });
        Ok(())
    }

    pub(crate) fn push_transition(&mut self, from: State, label: Formula, to: State) {
        self.transitions.push(Transition { from, label, to });
    }

    pub fn set_initial(&mut self, q: State) {
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: State) {
        self.finals.insert(q);
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    pub fn theory(&self) -> &Arc<PaddedTheory> {
        &self.theory
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.names[q]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &BTreeSet<State> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals.contains(&q)
    }

    /// Rename states to `q0 … q{n-1}` in index order.
    pub fn renumbered(&self) -> MAutomaton {
        let mut out = self.clone();
        out.names = (0..self.names.len()).map(|i| format!("q{i}")).collect();
        out
    }

    /// Track variables `t1 … tn`.
    pub fn track_vars(&self) -> Vec<String> {
        (1..=self.tracks).map(track_var).collect()
    }

    pub(crate) fn same_setting(&self, other: &MAutomaton) -> Result<()> {
        if self.theory.descriptor() != other.theory.descriptor() {
            return Err(Error::TheoryMismatch(
                self.theory.descriptor().to_string(),
                other.theory.descriptor().to_string(),
            ));
        }
        if self.tracks != other.tracks {
            return Err(Error::TrackMismatch {
                expected: self.tracks,
                found: other.tracks,
            });
        }
        Ok(())
    }

    fn check_word(&self, w: &TupleWord) -> Result<()> {
        if w.tracks() != self.tracks {
            return Err(Error::TrackMismatch {
                expected: self.tracks,
                found: w.tracks(),
            });
        }
        for e in w.0.iter().flatten() {
            if e.is_pad() || !self.theory.base().contains(e) {
                return Err(Error::invalid(format!(
                    "`{e}` is not a letter of {}",
                    self.theory.name()
                )));
            }
        }
        Ok(())
    }

    fn column_env(&self, col: &[Element]) -> Assignment {
        col.iter()
            .enumerate()
            .map(|(i, e)| (track_var(i + 1), e.clone()))
            .collect()
    }

    /// An accepting run over the convolution of `w`, as a state sequence of
    /// length `|⟨w⟩| + 1`.
    pub fn accepting_run(&self, w: &TupleWord) -> Result<Option<Vec<State>>> {
        self.check_word(w)?;
        let columns = convolve(w, &self.theory.pad_element());
        self.run_columns(&columns)
    }

    /// Run over raw columns; used for convolutions built by hand.
    pub fn run_columns(&self, columns: &[Vec<Element>]) -> Result<Option<Vec<State>>> {
        let n = self.state_count();
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, t) in self.transitions.iter().enumerate() {
            by_source[t.from].push(i);
        }
        // layers[k][q] = predecessor of q after k columns
        let mut layers: Vec<HashMap<State, State>> = Vec::with_capacity(columns.len());
        let mut current: BTreeSet<State> = self.initial.clone();
        for col in columns {
            let env = self.column_env(col);
            let mut verdicts: HashMap<&Formula, bool> = HashMap::new();
            let mut next: HashMap<State, State> = HashMap::new();
            for &q in &current {
                for &ti in &by_source[q] {
                    let t = &self.transitions[ti];
                    if next.contains_key(&t.to) {
                        continue;
                    }
                    let ok = match verdicts.get(&t.label) {
                        Some(&b) => b,
                        None => {
                            let b = self.theory.eval(&t.label, &env)?;
                            verdicts.insert(&t.label, b);
                            b
                        }
                    };
                    if ok {
                        next.insert(t.to, q);
                    }
                }
            }
            current = next.keys().copied().collect();
            layers.push(next);
            if current.is_empty() {
                return Ok(None);
            }
        }
        let Some(&end) = current.iter().find(|q| self.finals.contains(q)) else {
            return Ok(None);
        };
        let mut run = vec![end];
        let mut q = end;
        for layer in layers.iter().rev() {
            q = layer[&q];
            run.push(q);
        }
        run.reverse();
        Ok(Some(run))
    }

    pub fn accepts(&self, w: &TupleWord) -> Result<bool> {
        Ok(self.accepting_run(w)?.is_some())
    }

    /// Membership for many words, spread over the thread pool.
    pub fn accepts_all(&self, words: &[TupleWord]) -> Result<Vec<bool>> {
        par::try_map(words, |w| self.accepts(w))
    }

    /// Distinct transition labels in first-occurrence order.
    pub fn labels(&self) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        self.transitions
            .iter()
            .filter(|t| seen.insert(&t.label))
            .map(|t| t.label.clone())
            .collect()
    }
}
