//! Text format:
//!
//! ```text
//! tracks 2
//! theory presburger pad fresh
//! states q0 q1
//! initial q0
//! final q1
//! q0 -> q1 : (rel plus t1 t1 t2)
//! ```
//!
//! `//` starts a comment. A label may continue over several lines while its
//! parentheses are unbalanced.

use std::collections::HashMap;
use std::fmt::Write;
use std::path::Path;

use super::MAutomaton;
use crate::logic::parse_formula;
use crate::theories::{registry, Theory};
use crate::{Error, Result};

pub fn print_automaton(a: &MAutomaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tracks {}", a.tracks);
    let _ = writeln!(s, "theory {}", a.theory.descriptor());
    let names = |qs: &mut dyn Iterator<Item = usize>| {
        qs.map(|q| a.names[q].clone()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(s, "states {}", names(&mut (0..a.state_count())).trim_end());
    let _ = writeln!(s, "initial {}", names(&mut a.initial.iter().copied()));
    let _ = writeln!(s, "final {}", names(&mut a.finals.iter().copied()));
    for t in &a.transitions {
        let _ = writeln!(s, "{} -> {} : {}", a.names[t.from], a.names[t.to], t.label);
    }
    s.lines()
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

fn depth(s: &str) -> i64 {
    s.chars()
        .map(|c| match c {
            '(' => 1,
            ')' => -1,
            _ => 0,
        })
        .sum()
}

/// Parse the text format. Theory files named in the header are resolved
/// relative to `dir`.
pub fn parse_automaton(text: &str, dir: Option<&Path>) -> Result<MAutomaton> {
    let mut lines: Vec<(usize, String)> = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("").trim();
        if let Some((start, mut acc)) = pending.take() {
            acc.push(' ');
            acc.push_str(line);
            if depth(&acc) > 0 {
                pending = Some((start, acc));
            } else {
                lines.push((start, acc));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if line.contains("->") && depth(line) > 0 {
            pending = Some((no + 1, line.to_string()));
        } else {
            lines.push((no + 1, line.to_string()));
        }
    }
    if let Some((start, _)) = pending {
        return Err(Error::parse(format!("line {start}: unbalanced parentheses")));
    }

    let mut tracks: Option<usize> = None;
    let mut theory = None;
    let mut auto: Option<MAutomaton> = None;
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (no, line) in lines {
        let err = |m: String| Error::parse(format!("line {no}: {m}"));
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((&line, ""));
        let rest = rest.trim();
        match key {
            "tracks" => {
                let n: usize = rest.parse().map_err(|_| err(format!("bad track count `{rest}`")))?;
                if n == 0 {
                    return Err(err("an automaton needs at least one track".into()));
                }
                tracks = Some(n);
            }
            "theory" => {
                let (name, pad) = match rest.split_once(" pad ") {
                    Some((n, p)) => (n.trim(), p.trim()),
                    None => (rest, "fresh"),
                };
                theory = Some(registry::padded_by_name(name, pad, dir)?);
            }
            "states" => {
                let n = tracks.ok_or_else(|| err("`states` before `tracks`".into()))?;
                let t = theory
                    .clone()
                    .ok_or_else(|| err("`states` before `theory`".into()))?;
                let mut a = MAutomaton::new(n, t);
                for name in rest.split_whitespace() {
                    let id = a.add_named_state(name).map_err(|e| err(e.to_string()))?;
                    ids.insert(name.to_string(), id);
                }
                auto = Some(a);
            }
            "initial" | "final" => {
                let a = auto.as_mut().ok_or_else(|| err(format!("`{key}` before `states`")))?;
                for name in rest.split_whitespace() {
                    let q = *ids
                        .get(name)
                        .ok_or_else(|| err(format!("unknown state `{name}`")))?;
                    if key == "initial" {
                        a.set_initial(q);
                    } else {
                        a.set_final(q);
                    }
                }
            }
            _ => {
                let a = auto
                    .as_mut()
                    .ok_or_else(|| err("transition before `states`".into()))?;
                let (lhs, label) = line
                    .split_once(':')
                    .ok_or_else(|| err(format!("expected `q -> q' : FORMULA`, found `{line}`")))?;
                let (from, to) = lhs
                    .split_once("->")
                    .ok_or_else(|| err(format!("expected `q -> q'`, found `{lhs}`")))?;
                let state = |s: &str| {
                    ids.get(s.trim())
                        .copied()
                        .ok_or_else(|| err(format!("unknown state `{}`", s.trim())))
                };
                let (from, to) = (state(from)?, state(to)?);
                let f = parse_formula(label.trim(), a.theory.signature())
                    .map_err(|e| err(e.to_string()))?;
                a.add_transition(from, f, to).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    auto.ok_or_else(|| Error::parse("missing `states` line"))
}

impl MAutomaton {
    pub fn load(path: &Path) -> Result<MAutomaton> {
        let text = std::fs::read_to_string(path)?;
        parse_automaton(&text, path.parent())
    }
}
