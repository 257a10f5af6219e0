use std::collections::{BTreeMap, BTreeSet};

use super::{MAutomaton, State};
use crate::logic::{simplify, track_var, Formula, PadKind, PadMask, Term};
use crate::{Error, Result};

fn pad(i: usize) -> Formula {
    Formula::pad_var(&track_var(i))
}

fn proper(i: usize) -> Formula {
    Formula::not(pad(i))
}

impl MAutomaton {
    /// Two-state automaton accepting the convolutions in which track `i`
    /// (1-based) is padded only on a suffix.
    pub fn suffix_padded(&self, i: usize) -> MAutomaton {
        let mut a = MAutomaton::new(self.tracks, self.theory.clone());
        let [q0, q1] = [a.add_state(), a.add_state()];
        a.set_initial(q0);
        a.set_final(q0);
        a.set_final(q1);
        a.push_transition(q0, proper(i), q0);
        a.push_transition(q0, pad(i), q1);
        a.push_transition(q1, pad(i), q1);
        a
    }

    /// Existentially quantify track `i` (1-based) away.
    ///
    /// Labels become `∃ti φ` with later tracks shifted down. States from
    /// which a final state is reachable while every remaining track is
    /// already padded become final: those columns exist only because the
    /// removed word was longer.
    pub fn project(&self, i: usize) -> Result<MAutomaton> {
        let n = self.tracks;
        if n < 2 {
            return Err(Error::invalid(
                "projecting the only track is an emptiness question; use is_empty",
            ));
        }
        if !(1..=n).contains(&i) {
            return Err(Error::invalid(format!("track {i} out of range 1..={n}")));
        }
        let src = if self.theory.is_fresh() {
            self.intersect(&self.suffix_padded(i))?
        } else {
            self.clone()
        };

        // padding closure on the original labels
        let mut mask = PadMask::new();
        for j in (1..=n).filter(|j| *j != i) {
            mask.insert(track_var(j), PadKind::Padding);
        }
        if self.theory.is_fresh() {
            mask.insert(track_var(i), PadKind::Proper);
        }
        let tail: Vec<bool> = crate::par::try_map(&src.transitions, |t| {
            self.theory.satisfiable_with(&t.label, &mask)
        })?;
        let mut back = vec![Vec::new(); src.state_count()];
        for (t, ok) in src.transitions.iter().zip(&tail) {
            if *ok {
                back[t.to].push(t.from);
            }
        }
        let mut finals: BTreeSet<State> = src.finals.clone();
        let mut stack: Vec<State> = finals.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &p in &back[q] {
                if finals.insert(p) {
                    stack.push(p);
                }
            }
        }

        let shift: BTreeMap<String, Term> = (i + 1..=n)
            .map(|j| (track_var(j), Term::var(track_var(j - 1))))
            .collect();
        let mut out = MAutomaton::new(n - 1, self.theory.clone());
        out.names = src.names.clone();
        out.initial = src.initial.clone();
        out.finals = finals;
        for t in &src.transitions {
            let q = simplify(&Formula::exists(&track_var(i), t.label.clone()));
            out.push_transition(t.from, q.rename(&shift), t.to);
        }
        out.trim()
    }

    /// Move track `j` (0-based) to position `map[j]` of a `new_tracks`-track
    /// automaton. Tracks not in the image of `map` are unconstrained; `map`
    /// need not be injective (shared positions force equal words).
    pub fn reindex(&self, new_tracks: usize, map: &[usize]) -> Result<MAutomaton> {
        if map.len() != self.tracks {
            return Err(Error::TrackMismatch {
                expected: self.tracks,
                found: map.len(),
            });
        }
        if map.iter().any(|&m| m >= new_tracks) {
            return Err(Error::invalid("track map points past the new track count"));
        }
        let image: BTreeSet<usize> = map.iter().map(|m| m + 1).collect();
        let extra: Vec<usize> = (1..=new_tracks).filter(|k| !image.contains(k)).collect();
        let rename: BTreeMap<String, Term> = map
            .iter()
            .enumerate()
            .map(|(j, &m)| (track_var(j + 1), Term::var(track_var(m + 1))))
            .collect();
        let fresh = self.theory.is_fresh();
        let all_image_pad = Formula::and(image.iter().map(|&k| pad(k)));
        let guard = if fresh && !extra.is_empty() {
            Formula::not(all_image_pad.clone())
        } else {
            Formula::True
        };
        let mut out = MAutomaton::new(new_tracks, self.theory.clone());
        out.names = self.names.clone();
        out.initial = self.initial.clone();
        out.finals = self.finals.clone();
        for t in &self.transitions {
            let label = simplify(&Formula::and([t.label.rename(&rename), guard.clone()]));
            out.push_transition(t.from, label, t.to);
        }
        if !extra.is_empty() {
            let absorb = if fresh {
                Formula::and([
                    all_image_pad,
                    Formula::or(extra.iter().map(|&k| proper(k))),
                ])
            } else {
                all_image_pad
            };
            let absorb = simplify(&absorb);
            let sink = out.add_state();
            out.set_final(sink);
            for &q in &self.finals {
                out.push_transition(q, absorb.clone(), sink);
            }
            out.push_transition(sink, absorb, sink);
        }
        out.trim()
    }

    /// Insert an unconstrained track at position `k` (1-based).
    pub fn cylindrify(&self, k: usize) -> Result<MAutomaton> {
        let n = self.tracks;
        if !(1..=n + 1).contains(&k) {
            return Err(Error::invalid(format!("position {k} out of range 1..={}", n + 1)));
        }
        let map: Vec<usize> = (0..n).map(|j| if j + 1 < k { j } else { j + 1 }).collect();
        self.reindex(n + 1, &map)
    }
}
