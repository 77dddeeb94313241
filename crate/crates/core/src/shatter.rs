//! Finds every class γ whose instantiation empties a query automaton's
//! language. Each transition label confines its solutions to an interval
//! of the class lattice; the search walks subsets of the shatterable
//! labels in cardinality order, intersects their intervals, and keeps an
//! intersection when cutting those labels disconnects the accepting
//! states. Recording splits along the two empty-assignment classes, since
//! acceptance flips between the two accepting sets there.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fqa::Fqa;
use crate::prop::{eps_class_intervals, PropClass, PropInterval, PropQueryClass};
use crate::syntax::{Alphabet, Assignment};

/// How a transition label constrains the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    /// No instantiation kills the label: its solution interval is empty,
    /// so cutting it never helps and it degrades to an always-on edge.
    Unshatterable,
    /// Some instantiations kill the label and some keep it alive; its
    /// solution interval is a proper constraint.
    Surviving,
    /// Every instantiation kills the label; the edge never fires.
    Dead,
}

/// A distinct transition label of the input automaton, classified.
#[derive(Debug, Clone)]
pub struct LabelInfo {
    pub label: PropQueryClass,
    pub kind: LabelKind,
    /// Classes whose instantiation kills the label. `None` exactly for
    /// unshatterable labels; the full interval for dead ones.
    pub interval: Option<PropInterval>,
    /// How many transitions carry the label.
    pub transitions: usize,
}

/// Classifies every distinct label and rewrites the automaton for the
/// subset search: dead-labeled transitions are removed, unshatterable
/// ones are relabeled to true (only their connectivity matters), and
/// surviving ones are kept verbatim. Acceptance is unchanged.
pub fn preprocess(m: &Fqa) -> (Fqa, Vec<LabelInfo>) {
    let mut infos: Vec<LabelInfo> = Vec::new();
    let mut seen: HashMap<PropQueryClass, usize> = HashMap::new();
    for (_, label, _) in m.transitions() {
        match seen.get(label) {
            Some(&slot) => infos[slot].transitions += 1,
            None => {
                let interval = label.shattering_interval();
                let kind = if label.is_dead() {
                    LabelKind::Dead
                } else if interval.is_none() {
                    LabelKind::Unshatterable
                } else {
                    LabelKind::Surviving
                };
                seen.insert(label.clone(), infos.len());
                infos.push(LabelInfo {
                    label: label.clone(),
                    kind,
                    interval,
                    transitions: 1,
                });
            }
        }
    }
    let top = PropQueryClass::of_bool(m.alphabet(), true);
    let transitions = m
        .transitions()
        .iter()
        .filter_map(|(src, label, dst)| {
            let info = &infos[seen[label]];
            match info.kind {
                LabelKind::Dead => None,
                LabelKind::Unshatterable => Some((*src, top.clone(), *dst)),
                LabelKind::Surviving => Some((*src, label.clone(), *dst)),
            }
        })
        .collect();
    let acceptance = (0..m.n_states() as u32).map(|s| m.acceptance(s).clone()).collect();
    let tags = (0..m.n_states() as u32).map(|s| m.tag(s).to_string()).collect();
    (
        Fqa::new(m.alphabet(), m.start(), transitions, acceptance, tags),
        infos,
    )
}

/// Union of lattice intervals; the answer form of a shattering search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    alphabet: Arc<Alphabet>,
    intervals: Vec<PropInterval>,
}

impl SolutionSet {
    /// Every class: the single interval `[true, false]`.
    pub fn full(alphabet: &Arc<Alphabet>) -> SolutionSet {
        SolutionSet {
            alphabet: alphabet.clone(),
            intervals: vec![PropInterval::full(alphabet)],
        }
    }

    /// No class at all.
    pub fn empty(alphabet: &Arc<Alphabet>) -> SolutionSet {
        SolutionSet {
            alphabet: alphabet.clone(),
            intervals: Vec::new(),
        }
    }

    /// Normalizes a list of intervals: drops empty ones and duplicates,
    /// preserving first-occurrence order.
    pub fn from_intervals(alphabet: &Arc<Alphabet>, intervals: Vec<PropInterval>) -> SolutionSet {
        let mut kept = Vec::new();
        for interval in intervals {
            assert!(interval.alphabet() == alphabet, "interval over a different alphabet");
            if !interval.is_empty() && !kept.contains(&interval) {
                kept.push(interval);
            }
        }
        SolutionSet {
            alphabet: alphabet.clone(),
            intervals: kept,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn intervals(&self) -> &[PropInterval] {
        &self.intervals
    }

    pub fn is_solvable(&self) -> bool {
        !self.intervals.is_empty()
    }

    pub fn contains(&self, class: &PropClass) -> bool {
        self.intervals.iter().any(|i| i.contains(class))
    }

    /// Pairwise interval intersection of two unions. Errors when the
    /// result would exceed `cap` intervals.
    pub fn intersect(&self, other: &SolutionSet, cap: usize) -> Result<SolutionSet> {
        assert!(self.alphabet == *other.alphabet(), "intersection needs one alphabet");
        let mut kept: Vec<PropInterval> = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let joint = a.and(b);
                if !joint.is_empty() && !kept.contains(&joint) {
                    if kept.len() == cap {
                        return Err(Error::IntervalCapExceeded { cap });
                    }
                    kept.push(joint);
                }
            }
        }
        Ok(SolutionSet {
            alphabet: self.alphabet.clone(),
            intervals: kept,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ShatterOptions {
    /// Skip supersets of subsets whose solutions are fully recorded.
    pub prune: bool,
    /// Abort with a timeout error past this point.
    pub deadline: Option<Instant>,
}

impl Default for ShatterOptions {
    fn default() -> ShatterOptions {
        ShatterOptions {
            prune: true,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ShatterStats {
    pub states: usize,
    pub transitions: usize,
    /// Distinct labels in the input, split by kind.
    pub total_labels: usize,
    pub surviving_labels: usize,
    pub unshatterable_labels: usize,
    pub dead_labels: usize,
    /// Transitions of the input carrying a surviving label.
    pub shatterable_edges: usize,
    pub subsets_examined: u64,
    pub subsets_pruned: u64,
    /// Reachability tests against either accepting set.
    pub emptiness_checks: u64,
    /// Whether intervals reduced to assignment-set bookkeeping.
    pub assignment_set_path: bool,
}

#[derive(Debug, Clone)]
pub struct ShatterRun {
    pub solutions: SolutionSet,
    pub stats: ShatterStats,
}

/// Surviving-label interval in assignment-set form, when it has one:
/// `[¬⟨A⟩, false]` excludes one assignment from solutions' sat sets,
/// `[true, ⟨A⟩]` requires one. Subset intersections then reduce to a pair
/// of assignment sets (excluded, required).
#[derive(Debug, Clone, Copy)]
enum SetForm {
    Excluded(Assignment),
    Required(Assignment),
}

fn set_form(interval: &PropInterval) -> Option<SetForm> {
    if !interval.upper().is_satisfiable() {
        let missing = interval.lower().not();
        if missing.sat_count() == 1 {
            return missing.iter_sat().next().map(SetForm::Excluded);
        }
        None
    } else if interval.lower().is_tautology() && interval.upper().sat_count() == 1 {
        interval.upper().iter_sat().next().map(SetForm::Required)
    } else {
        None
    }
}

/// Yields all `u64` bitmasks with `n` significant bits, in order of
/// increasing population count; ties enumerate numerically.
struct SubsetsByCardinality {
    n: u32,
    k: u32,
    current: u64,
    exhausted: bool,
}

impl SubsetsByCardinality {
    fn new(n: usize) -> SubsetsByCardinality {
        assert!(n <= 62);
        SubsetsByCardinality {
            n: n as u32,
            k: 0,
            current: 0,
            exhausted: false,
        }
    }
}

impl Iterator for SubsetsByCardinality {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.exhausted {
            if self.k >= self.n {
                return None;
            }
            self.k += 1;
            self.current = (1u64 << self.k) - 1;
            self.exhausted = false;
        }
        let out = self.current;
        if out == 0 {
            self.exhausted = true;
        } else {
            let carry = out & out.wrapping_neg();
            let ripple = out + carry;
            if ripple >= 1u64 << self.n {
                self.exhausted = true;
            } else {
                self.current = ripple | ((out ^ ripple) >> (2 + carry.trailing_zeros()));
            }
        }
        Some(out)
    }
}

/// Computes the classes whose instantiation empties the automaton's
/// language, as a union of lattice intervals, together with search
/// statistics. Errors if more than 62 distinct surviving labels occur or
/// the deadline passes.
pub fn shatter_fqa(m: &Fqa, opts: &ShatterOptions) -> Result<ShatterRun> {
    let alphabet = m.alphabet().clone();
    let (rewritten, infos) = preprocess(m);
    let mut stats = ShatterStats {
        states: m.n_states(),
        transitions: m.transitions().len(),
        total_labels: infos.len(),
        ..ShatterStats::default()
    };
    let mut surviving: Vec<&LabelInfo> = Vec::new();
    for info in &infos {
        match info.kind {
            LabelKind::Surviving => {
                stats.surviving_labels += 1;
                stats.shatterable_edges += info.transitions;
                surviving.push(info);
            }
            LabelKind::Unshatterable => stats.unshatterable_labels += 1,
            LabelKind::Dead => stats.dead_labels += 1,
        }
    }
    if surviving.len() > 62 {
        return Err(Error::TooManyShatterableLabels(surviving.len()));
    }
    let intervals: Vec<PropInterval> = surviving
        .iter()
        .map(|info| info.interval.clone().expect("surviving labels have intervals"))
        .collect();
    let forms: Option<Vec<SetForm>> = intervals.iter().map(set_form).collect();
    stats.assignment_set_path = forms.is_some();
    let index_of: HashMap<&PropQueryClass, usize> = surviving
        .iter()
        .enumerate()
        .map(|(i, info)| (&info.label, i))
        .collect();

    let n = rewritten.n_states();
    let mut adjacency: Vec<Vec<(u32, Option<usize>)>> = vec![Vec::new(); n];
    for (src, label, dst) in rewritten.transitions() {
        adjacency[*src as usize].push((*dst, index_of.get(label).copied()));
    }
    let (f_true, f_false) = rewritten.acceptance_sets();
    let (eps_true, eps_false) = eps_class_intervals(&alphabet);

    let mut recorded: Vec<PropInterval> = Vec::new();
    let mut covered_masks: Vec<u64> = Vec::new();
    let mut mark = vec![0u64; n];
    let mut generation = 0u64;
    let mut stack: Vec<u32> = Vec::new();

    for mask in SubsetsByCardinality::new(surviving.len()) {
        if stats.subsets_examined.wrapping_add(stats.subsets_pruned) & 0xff == 0 {
            if let Some(deadline) = opts.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout);
                }
            }
        }
        if opts.prune && covered_masks.iter().any(|c| mask & c == *c) {
            stats.subsets_pruned += 1;
            continue;
        }
        stats.subsets_examined += 1;

        // The subset's solution constraint, split along the two
        // empty-assignment classes.
        let mut half_true: Option<PropInterval> = None;
        let mut half_false: Option<PropInterval> = None;
        let mut undivided: Option<PropInterval> = None;
        let (true_nonempty, false_nonempty) = match &forms {
            Some(forms) => {
                let mut excluded: BTreeSet<Assignment> = BTreeSet::new();
                let mut required: BTreeSet<Assignment> = BTreeSet::new();
                let mut bits = mask;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    match forms[i] {
                        SetForm::Excluded(a) => {
                            excluded.insert(a);
                        }
                        SetForm::Required(a) => {
                            required.insert(a);
                        }
                    }
                }
                let nonempty = excluded.intersection(&required).next().is_none();
                let t = nonempty && !excluded.contains(&Assignment::EMPTY);
                let f = nonempty && !required.contains(&Assignment::EMPTY);
                if t || f {
                    let lower = PropClass::from_assignments(&alphabet, excluded.iter().copied()).not();
                    let upper = PropClass::from_assignments(&alphabet, required.iter().copied());
                    if t {
                        let with_empty = upper.or(&PropClass::singleton(&alphabet, Assignment::EMPTY));
                        half_true = Some(PropInterval::new(lower.clone(), with_empty));
                    }
                    if f {
                        let sans_empty =
                            lower.and(&PropClass::singleton(&alphabet, Assignment::EMPTY).not());
                        half_false = Some(PropInterval::new(sans_empty, upper.clone()));
                    }
                    undivided = Some(PropInterval::new(lower, upper));
                }
                (t, f)
            }
            None => {
                let mut joint = PropInterval::full(&alphabet);
                let mut bits = mask;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    joint = joint.and(&intervals[i]);
                }
                let t = joint.and(&eps_true);
                let f = joint.and(&eps_false);
                let t_nonempty = !t.is_empty();
                let f_nonempty = !f.is_empty();
                half_true = t_nonempty.then_some(t);
                half_false = f_nonempty.then_some(f);
                undivided = Some(joint);
                (t_nonempty, f_nonempty)
            }
        };
        if !true_nonempty && !false_nonempty {
            covered_masks.push(mask);
            continue;
        }

        // One reachability pass over the automaton without the subset's
        // transitions decides emptiness against both accepting sets.
        generation += 1;
        let start = rewritten.start() as usize;
        mark[start] = generation;
        stack.push(rewritten.start());
        let mut reaches_true = false;
        let mut reaches_false = false;
        while let Some(s) = stack.pop() {
            reaches_true |= f_true[s as usize];
            reaches_false |= f_false[s as usize];
            for &(dst, label) in &adjacency[s as usize] {
                if let Some(i) = label {
                    if mask >> i & 1 == 1 {
                        continue;
                    }
                }
                if mark[dst as usize] != generation {
                    mark[dst as usize] = generation;
                    stack.push(dst);
                }
            }
        }

        let mut record_true = false;
        let mut record_false = false;
        if true_nonempty {
            stats.emptiness_checks += 1;
            record_true = !reaches_true;
        }
        if false_nonempty {
            stats.emptiness_checks += 1;
            record_false = !reaches_false;
        }
        if record_true && record_false {
            recorded.push(undivided.expect("constraint materialized"));
        } else if record_true {
            recorded.push(half_true.expect("constraint materialized"));
        } else if record_false {
            recorded.push(half_false.expect("constraint materialized"));
        }
        if (record_true || !true_nonempty) && (record_false || !false_nonempty) {
            covered_masks.push(mask);
        }
    }

    Ok(ShatterRun {
        solutions: SolutionSet::from_intervals(&alphabet, recorded),
        stats,
    })
}
