//! Automata for queries: transition labels and acceptance conditions are
//! query classes (propositional classes with one free placeholder).
//! Instantiating the placeholder with a concrete class specializes the
//! automaton to an NFA, and instantiation commutes with substitution into
//! the original query. Built by the same tableau as formula automata.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::arena::{Arena, Node};
use crate::automata::{dot_escape, Pnfa, StateId};
use crate::error::{Error, Result};
use crate::prop::{PropClass, PropQueryClass};
use crate::syntax::{Alphabet, Assignment, Query};

/// NFA whose labels and acceptance conditions are query classes. A state
/// is accepting in the instantiation at γ iff the empty assignment
/// satisfies its acceptance class at γ; acceptance therefore depends only
/// on whether γ holds of the empty assignment, giving two possible
/// accepting sets overall.
#[derive(Debug, Clone)]
pub struct Fqa {
    alphabet: Arc<Alphabet>,
    start: StateId,
    transitions: Vec<(StateId, PropQueryClass, StateId)>,
    acceptance: Vec<PropQueryClass>,
    tags: Vec<String>,
}

impl Fqa {
    /// Builds an automaton, dropping dead labels and merging parallel
    /// transitions by disjunction. `tags` may be empty for defaults.
    pub fn new(
        alphabet: &Arc<Alphabet>,
        start: StateId,
        transitions: Vec<(StateId, PropQueryClass, StateId)>,
        acceptance: Vec<PropQueryClass>,
        mut tags: Vec<String>,
    ) -> Fqa {
        let n = acceptance.len();
        assert!((start as usize) < n, "start state out of range");
        if tags.is_empty() {
            tags = (0..n).map(|i| format!("q{i}")).collect();
        }
        assert_eq!(tags.len(), n, "one tag per state");
        for acc in &acceptance {
            assert!(acc.alphabet() == alphabet, "acceptance over a different alphabet");
        }
        let mut merged: Vec<(StateId, PropQueryClass, StateId)> = Vec::new();
        let mut at: HashMap<(StateId, StateId), usize> = HashMap::new();
        for (src, label, dst) in transitions {
            assert!((src as usize) < n && (dst as usize) < n, "transition out of range");
            assert!(label.alphabet() == alphabet, "label over a different alphabet");
            if label.is_dead() {
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
        Fqa {
            alphabet: alphabet.clone(),
            start,
            transitions: merged,
            acceptance,
            tags,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.acceptance.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn transitions(&self) -> &[(StateId, PropQueryClass, StateId)] {
        &self.transitions
    }

    pub fn acceptance(&self, state: StateId) -> &PropQueryClass {
        &self.acceptance[state as usize]
    }

    pub fn tag(&self, state: StateId) -> &str {
        &self.tags[state as usize]
    }

    /// Specializes the automaton to the query instantiated at `class`:
    /// labels become concrete classes, a state accepts iff the empty
    /// assignment satisfies its instantiated acceptance class.
    pub fn instantiate(&self, class: &PropClass) -> Pnfa {
        let transitions = self
            .transitions
            .iter()
            .map(|(src, label, dst)| (*src, label.instantiate(class), *dst))
            .collect();
        let accepting = self
            .acceptance
            .iter()
            .map(|acc| acc.instantiate(class).sat_contains(Assignment::EMPTY))
            .collect();
        Pnfa::new(&self.alphabet, self.start, transitions, accepting, self.tags.clone())
    }

    /// The two possible accepting sets: states accepting when the
    /// instantiating class holds of the empty assignment, and when not.
    pub fn acceptance_sets(&self) -> (Vec<bool>, Vec<bool>) {
        let at_true = self
            .acceptance
            .iter()
            .map(|acc| acc.true_class().sat_contains(Assignment::EMPTY))
            .collect();
        let at_false = self
            .acceptance
            .iter()
            .map(|acc| acc.false_class().sat_contains(Assignment::EMPTY))
            .collect();
        (at_true, at_false)
    }

    /// Graphviz rendering; state labels carry the acceptance class.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph fqa {\n  rankdir=LR;\n  init [shape=point, label=\"\"];\n");
        for s in 0..self.n_states() as StateId {
            let _ = writeln!(
                out,
                "  s{} [shape=circle, label=\"{}\\neps: {}\"];",
                s,
                dot_escape(self.tag(s)),
                dot_escape(&self.acceptance(s).to_string())
            );
        }
        let _ = writeln!(out, "  init -> s{};", self.start);
        for (src, label, dst) in &self.transitions {
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}\"];",
                src,
                dst,
                dot_escape(&label.to_string())
            );
        }
        out.push_str("}\n");
        out
    }
}

/// One alternative of a tableau state: consume a symbol satisfying the
/// label, then owe the `next` obligations.
#[derive(Clone)]
struct Alt {
    label: PropQueryClass,
    next: BTreeSet<u32>,
}

fn cross(left: &[Alt], right: &[Alt]) -> Vec<Alt> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            let label = a.label.and(&b.label);
            if label.is_dead() {
                continue;
            }
            let mut next = a.next.clone();
            next.extend(b.next.iter().copied());
            out.push(Alt { label, next });
        }
    }
    out
}

struct Builder {
    arena: Arena,
    alts: HashMap<u32, Vec<Alt>>,
    eps: HashMap<u32, PropQueryClass>,
}

impl Builder {
    fn new(alphabet: Arc<Alphabet>) -> Builder {
        Builder {
            arena: Arena::new(alphabet),
            alts: HashMap::new(),
            eps: HashMap::new(),
        }
    }

    fn literal(&self, id: u32) -> PropQueryClass {
        let ab = self.arena.alphabet();
        match self.arena.node(id) {
            Node::True => PropQueryClass::of_bool(ab, true),
            Node::False => PropQueryClass::of_bool(ab, false),
            Node::Var => PropQueryClass::var(ab),
            Node::Atom(i) => PropQueryClass::from_class(PropClass::prop(ab, i as usize)),
            Node::Not(x) => match self.arena.node(x) {
                Node::Var => PropQueryClass::not_var(ab),
                Node::Atom(i) => PropQueryClass::from_class(PropClass::prop(ab, i as usize).not()),
                _ => unreachable!("negation below a literal in positive normal form"),
            },
            _ => unreachable!("not a literal"),
        }
    }

    /// Alternatives of a single subformula, unfolding until/release one
    /// step and distributing conjunction over the branches.
    fn alts_node(&mut self, id: u32) -> Vec<Alt> {
        if let Some(cached) = self.alts.get(&id) {
            return cached.clone();
        }
        let unit = |label: PropQueryClass| {
            if label.is_dead() {
                Vec::new()
            } else {
                vec![Alt { label, next: BTreeSet::new() }]
            }
        };
        let step = |label: PropQueryClass, obligation: u32| {
            vec![Alt { label, next: BTreeSet::from([obligation]) }]
        };
        let top = PropQueryClass::of_bool(self.arena.alphabet(), true);
        let computed = match self.arena.node(id) {
            Node::True | Node::False | Node::Var | Node::Atom(_) | Node::Not(_) => {
                unit(self.literal(id))
            }
            Node::And(l, r) => {
                let left = self.alts_node(l);
                let right = self.alts_node(r);
                cross(&left, &right)
            }
            Node::Or(l, r) => {
                let mut v = self.alts_node(l);
                v.extend(self.alts_node(r));
                v
            }
            Node::Next(x) | Node::WeakNext(x) => step(top, x),
            Node::Until(l, r) => {
                let mut v = self.alts_node(r);
                let left = self.alts_node(l);
                v.extend(cross(&left, &step(top, id)));
                v
            }
            Node::Release(l, r) => {
                let mut hold = self.alts_node(l);
                hold.extend(step(top, id));
                let right = self.alts_node(r);
                cross(&right, &hold)
            }
        };
        self.alts.insert(id, computed.clone());
        computed
    }

    /// Query class characterizing the instantiations satisfied by the
    /// empty stream: nexts fail, weak nexts hold, until/release reduce to
    /// their right argument.
    fn eps_node(&mut self, id: u32) -> PropQueryClass {
        if let Some(cached) = self.eps.get(&id) {
            return cached.clone();
        }
        let ab = self.arena.alphabet().clone();
        let computed = match self.arena.node(id) {
            Node::True | Node::False | Node::Var | Node::Atom(_) | Node::Not(_) => self.literal(id),
            Node::And(l, r) => self.eps_node(l).and(&self.eps_node(r)),
            Node::Or(l, r) => self.eps_node(l).or(&self.eps_node(r)),
            Node::Next(_) => PropQueryClass::of_bool(&ab, false),
            Node::WeakNext(_) => PropQueryClass::of_bool(&ab, true),
            Node::Until(_, r) | Node::Release(_, r) => self.eps_node(r),
        };
        self.eps.insert(id, computed.clone());
        computed
    }
}

/// Tableau translation of a positive-normal-form query. States are sets
/// of pending subformulas; for every class γ over the alphabet, the
/// instantiation at γ accepts exactly the streams satisfying the query
/// with γ substituted for the placeholder.
pub fn query_tableau(q: &Query, alphabet: &Arc<Alphabet>) -> Result<Fqa> {
    if !q.is_pnf() {
        return Err(Error::NotInPnf);
    }
    let mut builder = Builder::new(alphabet.clone());
    let root = builder.arena.intern(q)?;
    let mut states: Vec<Vec<u32>> = vec![vec![root]];
    let mut index: HashMap<Vec<u32>, StateId> = HashMap::from([(vec![root], 0)]);
    let mut transitions = Vec::new();
    let mut cursor = 0;
    while cursor < states.len() {
        let members = states[cursor].clone();
        let src = cursor as StateId;
        cursor += 1;
        let mut alts = vec![Alt {
            label: PropQueryClass::of_bool(alphabet, true),
            next: BTreeSet::new(),
        }];
        for &m in &members {
            let member_alts = builder.alts_node(m);
            alts = cross(&alts, &member_alts);
        }
        for alt in alts {
            let key: Vec<u32> = alt.next.iter().copied().collect();
            let dst = match index.get(&key) {
                Some(&d) => d,
                None => {
                    let d = states.len() as StateId;
                    index.insert(key.clone(), d);
                    states.push(key);
                    d
                }
            };
            transitions.push((src, alt.label, dst));
        }
    }
    let acceptance: Vec<PropQueryClass> = states
        .iter()
        .map(|members| {
            members.iter().fold(
                PropQueryClass::of_bool(alphabet, true),
                |acc, &m| acc.and(&builder.eps_node(m)),
            )
        })
        .collect();
    let tags: Vec<String> = states
        .iter()
        .map(|members| {
            let inner: Vec<String> = members
                .iter()
                .map(|&m| builder.arena.to_query(m).to_string())
                .collect();
            format!("{{{}}}", inner.join(", "))
        })
        .collect();
    Ok(Fqa::new(alphabet, 0, transitions, acceptance, tags))
}

/// Converts an automaton with placeholder-free labels to a plain NFA.
pub(crate) fn to_pnfa(fqa: &Fqa) -> Pnfa {
    let transitions = fqa
        .transitions()
        .iter()
        .map(|(src, label, dst)| {
            assert!(label.is_var_free(), "label mentions the placeholder");
            (*src, label.true_class(), *dst)
        })
        .collect();
    let accepting = (0..fqa.n_states() as StateId)
        .map(|s| {
            let acc = fqa.acceptance(s);
            assert!(acc.is_var_free(), "acceptance mentions the placeholder");
            acc.true_class().sat_contains(Assignment::EMPTY)
        })
        .collect();
    let tags = (0..fqa.n_states() as StateId)
        .map(|s| fqa.tag(s).to_string())
        .collect();
    Pnfa::new(fqa.alphabet(), fqa.start(), transitions, accepting, tags)
}

/// Product of a plain NFA with a query automaton. The result accepts, at
/// every instantiation, exactly the intersection of the languages. A pair
/// inherits the query automaton's acceptance class when the NFA state is
/// accepting and is never accepting otherwise.
pub fn product_pnfa_fqa(m1: &Pnfa, m2: &Fqa) -> Result<Fqa> {
    if m1.alphabet() != m2.alphabet() {
        return Err(Error::AlphabetMismatch(
            "product of automata over different alphabets".to_string(),
        ));
    }
    let alphabet = m1.alphabet().clone();
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut work: Vec<(StateId, (StateId, StateId))> = Vec::new();
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
    let mut transitions = Vec::new();
    intern((m1.start(), m2.start()), &mut pairs, &mut work);
    while let Some((src, (s1, s2))) = work.pop() {
        for (t1, l1, d1) in m1.transitions() {
            if *t1 != s1 {
                continue;
            }
            for (t2, l2, d2) in m2.transitions() {
                if *t2 != s2 {
                    continue;
                }
                let label = PropQueryClass::from_class(l1.clone()).and(l2);
                if label.is_dead() {
                    continue;
                }
                let dst = intern((*d1, *d2), &mut pairs, &mut work);
                transitions.push((src, label, dst));
            }
        }
    }
    let acceptance: Vec<PropQueryClass> = pairs
        .iter()
        .map(|(s1, s2)| {
            if m1.is_accepting(*s1) {
                m2.acceptance(*s2).clone()
            } else {
                PropQueryClass::of_bool(&alphabet, false)
            }
        })
        .collect();
    let tags: Vec<String> = pairs
        .iter()
        .map(|(s1, s2)| format!("({},{})", m1.tag(*s1), m2.tag(*s2)))
        .collect();
    Ok(Fqa::new(&alphabet, 0, transitions, acceptance, tags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::stream_automaton;
    use crate::semantics::{evaluate, DataStream};
    use crate::syntax::parse;

    fn alpha(names: &[&str]) -> Arc<Alphabet> {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    fn all_streams(alphabet: &Arc<Alphabet>, max_len: usize) -> Vec<DataStream> {
        let mut out = vec![DataStream::empty(alphabet)];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for prefix in &frontier {
                for a in alphabet.assignments() {
                    let mut steps: Vec<_> = prefix.clone();
                    steps.push(a);
                    out.push(DataStream::new(alphabet, steps.clone()).unwrap());
                    next.push(steps);
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn always_var_is_a_single_state_loop() {
        let ab = alpha(&["a"]);
        let q = parse("G var", &ab).unwrap().to_pnf();
        let m = query_tableau(&q, &ab).unwrap();
        assert_eq!(m.n_states(), 1);
        assert_eq!(m.transitions().len(), 1);
        let (src, label, dst) = &m.transitions()[0];
        assert_eq!((*src, *dst), (0, 0));
        assert!(!label.is_var_free());
        let (at_true, at_false) = m.acceptance_sets();
        assert_eq!(at_true, vec![true]);
        assert_eq!(at_false, vec![false]);
    }

    #[test]
    fn instantiation_matches_substitution() {
        let ab = alpha(&["a", "b"]);
        let streams = all_streams(&ab, 2);
        let classes = PropClass::enumerate_all(&ab).unwrap();
        for text in [
            "var",
            "!var",
            "G var",
            "a U var",
            "X var",
            "var R b",
            "F(var & X true)",
            "!var | a",
            "(a & var) U (b & !var)",
        ] {
            let q = parse(text, &ab).unwrap().to_pnf();
            let m = query_tableau(&q, &ab).unwrap();
            for class in &classes {
                let specialized = m.instantiate(class);
                let plugged = q.substitute(class).unwrap();
                for pi in &streams {
                    assert_eq!(
                        specialized.accepts(pi),
                        evaluate(pi, &plugged).unwrap(),
                        "{text} at {class} on {:?}",
                        pi.steps()
                    );
                }
            }
        }
    }

    #[test]
    fn acceptance_depends_only_on_empty_assignment_membership() {
        let ab = alpha(&["a", "b"]);
        for text in ["G var", "a U var", "var R b", "F(var & X true)", "WX var"] {
            let q = parse(text, &ab).unwrap().to_pnf();
            let m = query_tableau(&q, &ab).unwrap();
            let (at_true, at_false) = m.acceptance_sets();
            for class in PropClass::enumerate_all(&ab).unwrap() {
                let expected = if class.sat_contains(Assignment::EMPTY) {
                    &at_true
                } else {
                    &at_false
                };
                let specialized = m.instantiate(&class);
                for s in 0..m.n_states() as StateId {
                    assert_eq!(specialized.is_accepting(s), expected[s as usize], "{text}");
                }
            }
        }
    }

    #[test]
    fn contradictory_query_instantiates_to_empty_language() {
        let ab = alpha(&["a"]);
        let q = parse("var & !var", &ab).unwrap();
        let m = query_tableau(&q, &ab).unwrap();
        assert!(m.transitions().is_empty());
        for class in PropClass::enumerate_all(&ab).unwrap() {
            assert!(m.instantiate(&class).is_empty());
        }
    }

    #[test]
    fn composed_labels_pin_one_assignment_and_one_polarity() {
        let ab = alpha(&["a", "b"]);
        let pi = DataStream::from_props(&ab, &[&["a"], &["a", "b"], &[]]).unwrap();
        let q = parse("!(G var)", &ab).unwrap().to_pnf();
        let m = product_pnfa_fqa(&stream_automaton(&pi), &query_tableau(&q, &ab).unwrap()).unwrap();
        assert!(!m.transitions().is_empty());
        for (_, label, _) in m.transitions() {
            let weight = label.base().sat_count()
                + label.with_var().sat_count()
                + label.without_var().sat_count();
            assert_eq!(weight, 1, "label {label} pins more than one assignment");
        }
    }

    #[test]
    fn product_language_is_intersection_at_every_instantiation() {
        let ab = alpha(&["a"]);
        let pi = DataStream::from_props(&ab, &[&["a"], &["a"]]).unwrap();
        let m1 = stream_automaton(&pi);
        let q = parse("!(G var)", &ab).unwrap().to_pnf();
        let m2 = query_tableau(&q, &ab).unwrap();
        let joint = product_pnfa_fqa(&m1, &m2).unwrap();
        for class in PropClass::enumerate_all(&ab).unwrap() {
            let lhs = joint.instantiate(&class);
            let rhs = m2.instantiate(&class);
            for candidate in all_streams(&ab, 3) {
                assert_eq!(
                    lhs.accepts(&candidate),
                    m1.accepts(&candidate) && rhs.accepts(&candidate)
                );
            }
        }
    }

    #[test]
    fn product_rejects_mismatched_alphabets() {
        let ab1 = alpha(&["a"]);
        let ab2 = alpha(&["a", "b"]);
        let pi = DataStream::empty(&ab1);
        let q = parse("G var", &ab2).unwrap().to_pnf();
        let m2 = query_tableau(&q, &ab2).unwrap();
        assert!(product_pnfa_fqa(&stream_automaton(&pi), &m2).is_err());
    }

    #[test]
    fn query_tableau_requires_positive_normal_form() {
        let ab = alpha(&["a"]);
        let q = parse("!(a U var)", &ab).unwrap();
        assert!(matches!(query_tableau(&q, &ab), Err(Error::NotInPnf)));
        assert!(query_tableau(&q.to_pnf(), &ab).is_ok());
    }

    #[test]
    fn dot_output_carries_acceptance_classes() {
        let ab = alpha(&["a"]);
        let q = parse("G var", &ab).unwrap().to_pnf();
        let dot = query_tableau(&q, &ab).unwrap().to_dot();
        assert!(dot.starts_with("digraph fqa {"));
        assert!(dot.contains("eps:"));
    }
}
