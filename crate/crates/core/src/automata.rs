//! Nondeterministic finite automata whose transition labels are
//! propositional classes: a symbol (one assignment) takes a transition iff
//! it satisfies the label. Formulas compile to such automata by a tableau
//! over subformula sets; a stream compiles to a chain accepting exactly
//! itself; emptiness and products give the satisfaction checks.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::Result;
use crate::prop::PropClass;
use crate::semantics::DataStream;
use crate::syntax::{Alphabet, Formula};

pub type StateId = u32;

/// NFA over assignment symbols with class-labeled transitions. Stored
/// labels are always satisfiable, and parallel transitions between the
/// same pair of states are merged by label disjunction.
#[derive(Debug, Clone)]
pub struct Pnfa {
    alphabet: Arc<Alphabet>,
    start: StateId,
    transitions: Vec<(StateId, PropClass, StateId)>,
    accepting: Vec<bool>,
    tags: Vec<String>,
}

impl Pnfa {
    /// Builds an automaton, dropping unsatisfiable labels and merging
    /// parallel transitions. `tags` may be empty for default state names.
    pub fn new(
        alphabet: &Arc<Alphabet>,
        start: StateId,
        transitions: Vec<(StateId, PropClass, StateId)>,
        accepting: Vec<bool>,
        mut tags: Vec<String>,
    ) -> Pnfa {
        let n = accepting.len();
        assert!((start as usize) < n, "start state out of range");
        if tags.is_empty() {
            tags = (0..n).map(|i| format!("q{i}")).collect();
        }
        assert_eq!(tags.len(), n, "one tag per state");
        let mut merged: Vec<(StateId, PropClass, StateId)> = Vec::new();
        let mut at: HashMap<(StateId, StateId), usize> = HashMap::new();
        for (src, label, dst) in transitions {
            assert!((src as usize) < n && (dst as usize) < n, "transition out of range");
            assert!(label.alphabet() == alphabet, "label over a different alphabet");
            if !label.is_satisfiable() {
                continue;
            }
            match at.get(&(src, dst)) {
                Some(&slot) => {
                    let combined = merged[slot].1.or(&label);
                    merged[slot].1 = combined;
                }
                None => {
                    at.insert((src, dst), merged.len());
                    merged.push((src, label, dst));
                }
            }
        }
        Pnfa {
            alphabet: alphabet.clone(),
            start,
            transitions: merged,
            accepting,
            tags,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn transitions(&self) -> &[(StateId, PropClass, StateId)] {
        &self.transitions
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state as usize]
    }

    pub fn tag(&self, state: StateId) -> &str {
        &self.tags[state as usize]
    }

    /// Whether the automaton accepts the stream, by subset simulation.
    pub fn accepts(&self, pi: &DataStream) -> bool {
        assert!(pi.alphabet() == &self.alphabet, "stream over a different alphabet");
        let mut current = vec![false; self.n_states()];
        current[self.start as usize] = true;
        for step in pi.steps() {
            let mut next = vec![false; self.n_states()];
            for (src, label, dst) in &self.transitions {
                if current[*src as usize] && label.sat_contains(*step) {
                    next[*dst as usize] = true;
                }
            }
            current = next;
        }
        current
            .iter()
            .zip(self.accepting.iter())
            .any(|(reached, accepting)| *reached && *accepting)
    }

    /// Whether the language is empty: no accepting state is reachable.
    /// Stored labels are satisfiable, so graph reachability suffices.
    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.n_states()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(s) = stack.pop() {
            if self.accepting[s as usize] {
                return false;
            }
            for (src, _, dst) in &self.transitions {
                if *src == s && !seen[*dst as usize] {
                    seen[*dst as usize] = true;
                    stack.push(*dst);
                }
            }
        }
        true
    }

    /// Synchronous product; the language is the intersection. Only pairs
    /// reachable from the joint start are materialized.
    pub fn product(&self, other: &Pnfa) -> Pnfa {
        assert!(self.alphabet == *other.alphabet(), "products need one alphabet");
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs: Vec<(StateId, StateId)> = Vec::new();
        let mut transitions = Vec::new();
        let mut intern = |pair: (StateId, StateId),
                          pairs: &mut Vec<(StateId, StateId)>,
                          work: &mut Vec<(StateId, (StateId, StateId))>| {
            *index.entry(pair).or_insert_with(|| {
                let id = pairs.len() as StateId;
                pairs.push(pair);
                work.push((id, pair));
                id
            })
        };
        let mut work = Vec::new();
        intern((self.start, other.start), &mut pairs, &mut work);
        while let Some((src, (s1, s2))) = work.pop() {
            for (t1, l1, d1) in &self.transitions {
                if *t1 != s1 {
                    continue;
                }
                for (t2, l2, d2) in &other.transitions {
                    if *t2 != s2 {
                        continue;
                    }
                    let label = l1.and(l2);
                    if !label.is_satisfiable() {
                        continue;
                    }
                    let dst = intern((*d1, *d2), &mut pairs, &mut work);
                    transitions.push((src, label, dst));
                }
            }
        }
        let accepting: Vec<bool> = pairs
            .iter()
            .map(|(s1, s2)| self.accepting[*s1 as usize] && other.accepting[*s2 as usize])
            .collect();
        let tags: Vec<String> = pairs
            .iter()
            .map(|(s1, s2)| format!("({},{})", self.tags[*s1 as usize], other.tags[*s2 as usize]))
            .collect();
        Pnfa::new(&self.alphabet, 0, transitions, accepting, tags)
    }

    /// Graphviz rendering with state tags and DNF edge labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph pnfa {\n  rankdir=LR;\n  init [shape=point, label=\"\"];\n");
        for s in 0..self.n_states() as StateId {
            let shape = if self.is_accepting(s) { "doublecircle" } else { "circle" };
            let _ = writeln!(
                out,
                "  s{} [shape={}, label=\"{}\"];",
                s,
                shape,
                dot_escape(self.tag(s))
            );
        }
        let _ = writeln!(out, "  init -> s{};", self.start);
        for (src, label, dst) in &self.transitions {
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}\"];",
                src,
                dst,
                dot_escape(&label.to_dnf_string())
            );
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Tableau translation of a positive-normal-form formula: states are sets
/// of pending subformulas, the language is exactly the set of streams
/// satisfying the formula. Errors if the formula is not in positive normal
/// form or uses an atom outside the alphabet.
pub fn tableau(f: &Formula, alphabet: &Arc<Alphabet>) -> Result<Pnfa> {
    let fqa = crate::fqa::query_tableau(f.as_query(), alphabet)?;
    Ok(crate::fqa::to_pnfa(&fqa))
}

/// Chain automaton accepting exactly the given stream: one state per
/// instant plus a final accepting state, each step labeled with the class
/// characterizing its assignment.
pub fn stream_automaton(pi: &DataStream) -> Pnfa {
    let n = pi.len();
    let transitions = pi
        .steps()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (
                i as StateId,
                PropClass::singleton(pi.alphabet(), *a),
                (i + 1) as StateId,
            )
        })
        .collect();
    let mut accepting = vec![false; n + 1];
    accepting[n] = true;
    let tags = (0..=n).map(|i| format!("q{i}")).collect();
    Pnfa::new(pi.alphabet(), 0, transitions, accepting, tags)
}
