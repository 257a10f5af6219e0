use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{MAutomaton, State};
use crate::logic::{simplify, Formula};
use crate::theories::Theory;
use crate::{par, Result};

impl MAutomaton {
    /// Disjoint union of the two machines.
    pub fn union(&self, other: &MAutomaton) -> Result<MAutomaton> {
        self.same_setting(other)?;
        let mut out = MAutomaton::new(self.tracks, self.theory.clone());
        out.add_states(self.state_count() + other.state_count());
        let off = self.state_count();
        for t in &self.transitions {
            out.push_transition(t.from, t.label.clone(), t.to);
        }
        for t in &other.transitions {
            out.push_transition(t.from + off, t.label.clone(), t.to + off);
        }
        out.initial = self
            .initial
            .iter()
            .copied()
            .chain(other.initial.iter().map(|q| q + off))
            .collect();
        out.finals = self
            .finals
            .iter()
            .copied()
            .chain(other.finals.iter().map(|q| q + off))
            .collect();
        Ok(out)
    }

    /// Product automaton restricted to reachable pairs, with conjoined labels;
    /// unsatisfiable conjunctions are dropped.
    pub fn intersect(&self, other: &MAutomaton) -> Result<MAutomaton> {
        self.same_setting(other)?;
        let out_a = self.outgoing();
        let out_b = other.outgoing();
        let mut out = MAutomaton::new(self.tracks, self.theory.clone());
        let mut ids: HashMap<(State, State), State> = HashMap::new();
        let mut queue = VecDeque::new();
        for &p in &self.initial {
            for &q in &other.initial {
                let id = out.add_state();
                ids.insert((p, q), id);
                out.set_initial(id);
                queue.push_back((p, q));
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let src = ids[&(p, q)];
            if self.is_final(p) && other.is_final(q) {
                out.set_final(src);
            }
            let mut candidates = Vec::new();
            for &ta in &out_a[p] {
                for &tb in &out_b[q] {
                    let (a, b) = (&self.transitions[ta], &other.transitions[tb]);
                    let label = simplify(&Formula::and([a.label.clone(), b.label.clone()]));
                    if label != Formula::False {
                        candidates.push((label, (a.to, b.to)));
                    }
                }
            }
            let keep = par::try_map(&candidates, |(l, _)| self.theory.satisfiable(l))?;
            for ((label, pair), ok) in candidates.into_iter().zip(keep) {
                if !ok {
                    continue;
                }
                let dst = *ids.entry(pair).or_insert_with(|| {
                    queue.push_back(pair);
                    out.add_state()
                });
                out.push_transition(src, label, dst);
            }
        }
        Ok(out.dedup_transitions())
    }

    pub(crate) fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.state_count()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from].push(i);
        }
        out
    }

    fn dedup_transitions(mut self) -> MAutomaton {
        let mut seen = std::collections::HashSet::new();
        self.transitions.retain(|t| seen.insert(t.clone()));
        self
    }

    /// Drop unsatisfiable transitions and states that are not both reachable
    /// and co-reachable; surviving states keep their relative order.
    pub fn trim(&self) -> Result<MAutomaton> {
        let labels: Vec<Formula> = self.transitions.iter().map(|t| simplify(&t.label)).collect();
        let sat = par::try_map(&labels, |l| {
            Ok(*l != Formula::False && self.theory.satisfiable(l)?)
        })?;
        let live: Vec<(State, Formula, State)> = self
            .transitions
            .iter()
            .zip(labels)
            .zip(sat)
            .filter(|(_, ok)| *ok)
            .map(|((t, l), _)| (t.from, l, t.to))
            .collect();
        let n = self.state_count();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for (a, _, b) in &live {
            fwd[*a].push(*b);
            bwd[*b].push(*a);
        }
        let reach = closure(&self.initial, &fwd);
        let coreach = closure(&self.finals, &bwd);
        let useful: Vec<State> = (0..n).filter(|q| reach[*q] && coreach[*q]).collect();
        let mut map = vec![usize::MAX; n];
        for (i, &q) in useful.iter().enumerate() {
            map[q] = i;
        }
        let mut out = MAutomaton::new(self.tracks, self.theory.clone());
        for &q in &useful {
            out.names.push(self.names[q].clone());
        }
        for (a, l, b) in live {
            if map[a] != usize::MAX && map[b] != usize::MAX {
                out.push_transition(map[a], l, map[b]);
            }
        }
        out.initial = self.initial.iter().filter(|q| map[**q] != usize::MAX).map(|q| map[*q]).collect();
        out.finals = self.finals.iter().filter(|q| map[**q] != usize::MAX).map(|q| map[*q]).collect();
        Ok(out.dedup_transitions().renumbered())
    }

    /// Minterms of the label set: satisfiable conjunctions choosing each
    /// label or its negation, with the set of labels taken positively.
    pub fn minterms(&self) -> Result<Vec<(Formula, BTreeSet<usize>)>> {
        minterms_of(&self.theory, &self.labels())
    }

    /// Equivalent automaton whose labels are pairwise exclusive and jointly
    /// exhaustive.
    pub fn mintermize(&self) -> Result<MAutomaton> {
        let labels = self.labels();
        let index: HashMap<&Formula, usize> =
            labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let terms = minterms_of(&self.theory, &labels)?;
        let mut out = MAutomaton::new(self.tracks, self.theory.clone());
        out.names = self.names.clone();
        out.initial = self.initial.clone();
        out.finals = self.finals.clone();
        for t in &self.transitions {
            let i = index[&t.label];
            for (m, pos) in &terms {
                if pos.contains(&i) {
                    out.push_transition(t.from, m.clone(), t.to);
                }
            }
        }
        Ok(out.dedup_transitions())
    }

    /// Subset construction over the minterms, with an explicit sink: every
    /// (state, minterm) pair has exactly one successor.
    pub fn determinize(&self) -> Result<MAutomaton> {
        let labels = self.labels();
        let index: HashMap<&Formula, usize> =
            labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let terms = minterms_of(&self.theory, &labels)?;
        let outgoing = self.outgoing();
        let mut out = MAutomaton::new(self.tracks, self.theory.clone());
        let mut ids: BTreeMap<BTreeSet<State>, State> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let start = self.initial.clone();
        ids.insert(start.clone(), out.add_state());
        out.set_initial(0);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let src = ids[&set];
            if set.iter().any(|q| self.is_final(*q)) {
                out.set_final(src);
            }
            for (m, pos) in &terms {
                let succ: BTreeSet<State> = set
                    .iter()
                    .flat_map(|&q| outgoing[q].iter())
                    .map(|&ti| &self.transitions[ti])
                    .filter(|t| pos.contains(&index[&t.label]))
                    .map(|t| t.to)
                    .collect();
                let dst = match ids.get(&succ) {
                    Some(&d) => d,
                    None => {
                        let d = out.add_state();
                        ids.insert(succ.clone(), d);
                        queue.push_back(succ);
                        d
                    }
                };
                out.push_transition(src, m.clone(), dst);
            }
        }
        Ok(out)
    }

    /// Accepts exactly the tuples this automaton rejects.
    pub fn complement(&self) -> Result<MAutomaton> {
        let mut d = self.determinize()?;
        d.finals = (0..d.state_count()).filter(|q| !d.finals.contains(q)).collect();
        Ok(d)
    }
}

fn closure(start: &BTreeSet<State>, edges: &[Vec<State>]) -> Vec<bool> {
    let mut seen = vec![false; edges.len()];
    let mut stack: Vec<State> = start.iter().copied().collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &r in &edges[q] {
            if !seen[r] {
                seen[r] = true;
                stack.push(r);
            }
        }
    }
    seen
}

/// Satisfiable minterms of `labels`, built by splitting one label at a time
/// and pruning unsatisfiable halves as soon as they appear.
pub(crate) fn minterms_of(
    theory: &crate::theories::PaddedTheory,
    labels: &[Formula],
) -> Result<Vec<(Formula, BTreeSet<usize>)>> {
    let mut terms: Vec<(Vec<Formula>, BTreeSet<usize>)> = vec![(Vec::new(), BTreeSet::new())];
    for (i, l) in labels.iter().enumerate() {
        let mut split = Vec::with_capacity(terms.len() * 2);
        for (lits, pos) in &terms {
            let mut with = lits.clone();
            with.push(l.clone());
            let mut p = pos.clone();
            p.insert(i);
            split.push((with, p));
            let mut without = lits.clone();
            without.push(Formula::not(l.clone()));
            split.push((without, pos.clone()));
        }
        let formulas: Vec<Formula> = split
            .iter()
            .map(|(lits, _)| simplify(&Formula::And(lits.clone())))
            .collect();
        let keep = par::try_map(&formulas, |f| {
            Ok(*f != Formula::False && theory.satisfiable(f)?)
        })?;
        terms = split
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(t, _)| t)
            .collect();
    }
    Ok(terms
        .into_iter()
        .map(|(lits, pos)| (simplify(&Formula::And(lits)), pos))
        .collect())
}
