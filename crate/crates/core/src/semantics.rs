//! Finite-stream semantics: timestamped recordings, their normalized form,
//! the satisfaction relation, and an exhaustive reference solver.
//!
//! Satisfaction is over finite (possibly empty) streams. An atom needs a
//! first instant that carries it; `X q` needs a next instant satisfying
//! `q`, while `WX q` also holds on the empty stream; `p U q` may discharge
//! `q` on any suffix *including the empty one past the last instant*, so
//! `G a` fails on every finite stream (the empty suffix falsifies `a`).

use std::sync::Arc;

use crate::arena::{Arena, Node};
use crate::error::{Error, Result};
use crate::prop::PropClass;
use crate::syntax::{Alphabet, Assignment, Formula, Query};

/// Recording as captured: observations tagged with non-decreasing
/// timestamps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStream {
    alphabet: Arc<Alphabet>,
    observations: Vec<(u64, Assignment)>,
}

impl RawStream {
    pub fn new(alphabet: &Arc<Alphabet>, observations: Vec<(u64, Assignment)>) -> RawStream {
        RawStream {
            alphabet: alphabet.clone(),
            observations,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn observations(&self) -> &[(u64, Assignment)] {
        &self.observations
    }
}

/// Replaces timestamps with observation indices. Observations sharing a
/// timestamp stay as distinct consecutive instants; a decreasing timestamp
/// is an error naming the violating observation.
pub fn normalize(raw: &RawStream) -> Result<DataStream> {
    let mut last: Option<u64> = None;
    for (index, (t, _)) in raw.observations.iter().enumerate() {
        if last.is_some_and(|prev| *t < prev) {
            return Err(Error::DecreasingTimestamp { index });
        }
        last = Some(*t);
    }
    DataStream::new(
        &raw.alphabet,
        raw.observations.iter().map(|(_, a)| *a).collect(),
    )
}

/// Normalized finite stream: a sequence of assignments over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataStream {
    alphabet: Arc<Alphabet>,
    steps: Vec<Assignment>,
}

impl DataStream {
    pub fn new(alphabet: &Arc<Alphabet>, steps: Vec<Assignment>) -> Result<DataStream> {
        for a in &steps {
            if a.bits() >> alphabet.len() != 0 {
                return Err(Error::AlphabetMismatch(format!(
                    "assignment {:#x} has bits outside the {}-proposition alphabet",
                    a.bits(),
                    alphabet.len()
                )));
            }
        }
        Ok(DataStream {
            alphabet: alphabet.clone(),
            steps,
        })
    }

    /// The empty stream.
    pub fn empty(alphabet: &Arc<Alphabet>) -> DataStream {
        DataStream {
            alphabet: alphabet.clone(),
            steps: Vec::new(),
        }
    }

    /// Builds a stream from held-proposition names, one slice per instant.
    pub fn from_props(alphabet: &Arc<Alphabet>, steps: &[&[&str]]) -> Result<DataStream> {
        let mut encoded = Vec::with_capacity(steps.len());
        for held in steps {
            let mut a = Assignment::EMPTY;
            for name in *held {
                let i = alphabet
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownProp(name.to_string()))?;
                a = a.with(i);
            }
            encoded.push(a);
        }
        DataStream::new(alphabet, encoded)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Assignment] {
        &self.steps
    }

    /// Re-encodes the stream over a sub-alphabet, dropping the other
    /// propositions.
    pub fn project(&self, to: &Arc<Alphabet>) -> Result<DataStream> {
        let steps = self
            .steps
            .iter()
            .map(|a| a.project(&self.alphabet, to))
            .collect::<Result<Vec<_>>>()?;
        Ok(DataStream {
            alphabet: to.clone(),
            steps,
        })
    }
}

struct Evaluator<'a> {
    arena: &'a Arena,
    steps: &'a [Assignment],
    /// One slot per (suffix index, node id).
    memo: Vec<Option<bool>>,
}

impl<'a> Evaluator<'a> {
    fn eval(&mut self, i: usize, id: u32) -> bool {
        let slot = i * self.arena.len() + id as usize;
        if let Some(v) = self.memo[slot] {
            return v;
        }
        let len = self.steps.len();
        let v = match self.arena.node(id) {
            Node::True => true,
            Node::False => false,
            Node::Var => unreachable!("formulas carry no placeholder"),
            Node::Atom(p) => i < len && self.steps[i].contains(p as usize),
            Node::Not(x) => !self.eval(i, x),
            Node::And(l, r) => self.eval(i, l) && self.eval(i, r),
            Node::Or(l, r) => self.eval(i, l) || self.eval(i, r),
            Node::Next(x) => i < len && self.eval(i + 1, x),
            Node::WeakNext(x) => i >= len || self.eval(i + 1, x),
            Node::Until(l, r) => {
                self.eval(i, r) || (i < len && self.eval(i, l) && self.eval(i + 1, id))
            }
            Node::Release(l, r) => {
                self.eval(i, r) && (i >= len || self.eval(i, l) || self.eval(i + 1, id))
            }
        };
        self.memo[slot] = Some(v);
        v
    }
}

/// Whether the stream satisfies the formula. Memoized per (suffix,
/// subformula), so the cost is the product of stream length and formula
/// size. Errors if the formula uses an atom outside the stream alphabet.
pub fn evaluate(pi: &DataStream, f: &Formula) -> Result<bool> {
    let mut arena = Arena::new(pi.alphabet.clone());
    let root = arena.intern(f.as_query())?;
    let mut ev = Evaluator {
        memo: vec![None; (pi.len() + 1) * arena.len()],
        arena: &arena,
        steps: &pi.steps,
    };
    Ok(ev.eval(0, root))
}

/// Reference solver: tries every class over the alphabet and keeps those
/// whose substitution satisfies all streams. Exponential in `2^|AP|`;
/// capped at four propositions.
pub fn brute_force_solutions(
    alphabet: &Arc<Alphabet>,
    streams: &[DataStream],
    q: &Query,
) -> Result<Vec<PropClass>> {
    q.check_atoms(alphabet)?;
    for pi in streams {
        if pi.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch(
                "stream alphabet differs from the query alphabet".into(),
            ));
        }
    }
    let mut solutions = Vec::new();
    'classes: for gamma in PropClass::enumerate_all(alphabet)? {
        let f = q.substitute(&gamma)?;
        for pi in streams {
            if !evaluate(pi, &f)? {
                continue 'classes;
            }
        }
        solutions.push(gamma);
    }
    Ok(solutions)
}
