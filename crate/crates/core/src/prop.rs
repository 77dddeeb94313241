//! Propositional layer: equivalence classes of propositional formulas as
//! truth tables, the implication lattice and its intervals, and three-part
//! classes for propositional queries (the `g1 | (var & g2) | (!var & g3)`
//! shattering form).
//!
//! A class stores the full satisfying-assignment set as a `2^|AP|`-bit
//! vector. The order is implication: `c1 <= c2` iff every formula of `c2`
//! implies every formula of `c1`, i.e. `sat(c2) ⊆ sat(c1)`. The class of
//! `true` is the minimum and the class of `false` the maximum; `and` is the
//! least upper bound and `or` the greatest lower bound.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Assignment, Formula, Query};

/// Word images of single propositions for alphabet indices 0..5; higher
/// indices toggle whole words.
const PROP_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn word_count(assignments: usize) -> usize {
    assignments.div_ceil(64)
}

/// Propositional equivalence class: the set of assignments satisfying any
/// representative formula, as a truth-table bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropClass {
    alphabet: Arc<Alphabet>,
    sat: Box<[u64]>,
}

impl PropClass {
    fn blank(alphabet: &Arc<Alphabet>) -> PropClass {
        let words = word_count(alphabet.assignment_count());
        PropClass {
            alphabet: alphabet.clone(),
            sat: vec![0u64; words].into_boxed_slice(),
        }
    }

    /// Zeroes the unused bits of the top word so equality and hashing see
    /// a canonical image.
    fn mask_top(&mut self) {
        let bits = self.alphabet.assignment_count();
        let rem = bits % 64;
        if rem != 0 {
            *self.sat.last_mut().unwrap() &= (1u64 << rem) - 1;
        }
    }

    /// Class of `true` (every assignment) or `false` (no assignment).
    pub fn of_bool(alphabet: &Arc<Alphabet>, value: bool) -> PropClass {
        let mut c = PropClass::blank(alphabet);
        if value {
            c.sat.fill(u64::MAX);
            c.mask_top();
        }
        c
    }

    /// Class of a single proposition.
    pub fn prop(alphabet: &Arc<Alphabet>, index: usize) -> PropClass {
        assert!(index < alphabet.len(), "proposition index out of range");
        let mut c = PropClass::blank(alphabet);
        if index < 6 {
            c.sat.fill(PROP_PATTERNS[index]);
        } else {
            let stride = index - 6;
            for (w, word) in c.sat.iter_mut().enumerate() {
                if w >> stride & 1 == 1 {
                    *word = u64::MAX;
                }
            }
        }
        c.mask_top();
        c
    }

    /// Class characterizing exactly one assignment: the conjunction that
    /// lists every proposition positively or negatively.
    pub fn singleton(alphabet: &Arc<Alphabet>, assignment: Assignment) -> PropClass {
        let mut c = PropClass::blank(alphabet);
        let i = assignment.index();
        assert!(i < alphabet.assignment_count(), "assignment outside alphabet");
        c.sat[i / 64] |= 1u64 << (i % 64);
        c
    }

    pub fn from_assignments<I>(alphabet: &Arc<Alphabet>, assignments: I) -> PropClass
    where
        I: IntoIterator<Item = Assignment>,
    {
        let mut c = PropClass::blank(alphabet);
        for a in assignments {
            let i = a.index();
            assert!(i < alphabet.assignment_count(), "assignment outside alphabet");
            c.sat[i / 64] |= 1u64 << (i % 64);
        }
        c
    }

    pub fn from_fn(alphabet: &Arc<Alphabet>, f: impl Fn(Assignment) -> bool) -> PropClass {
        PropClass::from_assignments(
            alphabet,
            alphabet.assignments().filter(|a| f(*a)),
        )
    }

    /// All classes over the alphabet, in truth-table order. Limited to
    /// four propositions (65536 classes).
    pub fn enumerate_all(alphabet: &Arc<Alphabet>) -> Result<Vec<PropClass>> {
        if alphabet.len() > 4 {
            return Err(Error::TooManyProps { len: alphabet.len(), cap: 4 });
        }
        let assignments = alphabet.assignment_count();
        let mut out = Vec::with_capacity(1usize << assignments);
        for bits in 0..(1u64 << assignments) {
            let mut c = PropClass::blank(alphabet);
            c.sat[0] = bits;
            out.push(c);
        }
        Ok(out)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn check_same(&self, other: &PropClass) {
        assert!(
            self.alphabet == other.alphabet,
            "classes built over different alphabets"
        );
    }

    /// Least upper bound: conjunction of representatives.
    pub fn and(&self, other: &PropClass) -> PropClass {
        self.check_same(other);
        let mut c = self.clone();
        for (w, o) in c.sat.iter_mut().zip(other.sat.iter()) {
            *w &= o;
        }
        c
    }

    /// Greatest lower bound: disjunction of representatives.
    pub fn or(&self, other: &PropClass) -> PropClass {
        self.check_same(other);
        let mut c = self.clone();
        for (w, o) in c.sat.iter_mut().zip(other.sat.iter()) {
            *w |= o;
        }
        c
    }

    pub fn not(&self) -> PropClass {
        let mut c = self.clone();
        for w in c.sat.iter_mut() {
            *w = !*w;
        }
        c.mask_top();
        c
    }

    /// Assignments of `self` not in `other`.
    pub fn minus(&self, other: &PropClass) -> PropClass {
        self.check_same(other);
        let mut c = self.clone();
        for (w, o) in c.sat.iter_mut().zip(other.sat.iter()) {
            *w &= !o;
        }
        c
    }

    pub fn is_satisfiable(&self) -> bool {
        self.sat.iter().any(|w| *w != 0)
    }

    pub fn is_tautology(&self) -> bool {
        self.sat_count() == self.alphabet.assignment_count()
    }

    pub fn sat_contains(&self, assignment: Assignment) -> bool {
        let i = assignment.index();
        i < self.alphabet.assignment_count() && self.sat[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn sat_count(&self) -> usize {
        self.sat.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn sat_subset_of(&self, other: &PropClass) -> bool {
        self.check_same(other);
        self.sat
            .iter()
            .zip(other.sat.iter())
            .all(|(w, o)| w & !o == 0)
    }

    /// Lattice order: `self` is weaker than (implied by) `other`.
    pub fn le(&self, other: &PropClass) -> bool {
        other.sat_subset_of(self)
    }

    pub fn iter_sat(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.alphabet
            .assignments()
            .filter(move |a| self.sat_contains(*a))
    }

    fn minterm_literals(&self, assignment: Assignment) -> Vec<(usize, bool)> {
        (0..self.alphabet.len())
            .map(|i| (i, assignment.contains(i)))
            .collect()
    }

    /// Canonical disjunctive normal form: one full minterm per satisfying
    /// assignment, in truth-table order.
    pub fn to_formula(&self) -> Formula {
        if !self.is_satisfiable() {
            return Formula::FALSE;
        }
        if self.is_tautology() {
            return Formula::TRUE;
        }
        let mut terms = self.iter_sat().map(|a| {
            let mut literals = self.minterm_literals(a).into_iter().map(|(i, held)| {
                let atom = Query::atom(self.alphabet.name(i));
                if held {
                    atom
                } else {
                    Query::not(atom)
                }
            });
            let first = literals.next().expect("alphabet is non-empty here");
            literals.fold(first, Query::and)
        });
        let first = terms.next().expect("satisfiable class has a minterm");
        let dnf = terms.fold(first, Query::or);
        dnf.into_formula().expect("minterms contain no placeholder")
    }

    /// Text form of [`PropClass::to_formula`], parseable by the grammar.
    pub fn to_dnf_string(&self) -> String {
        if !self.is_satisfiable() {
            return "false".to_string();
        }
        if self.is_tautology() {
            return "true".to_string();
        }
        let terms: Vec<String> = self
            .iter_sat()
            .map(|a| {
                let lits: Vec<String> = self
                    .minterm_literals(a)
                    .into_iter()
                    .map(|(i, held)| {
                        if held {
                            self.alphabet.name(i).to_string()
                        } else {
                            format!("!{}", self.alphabet.name(i))
                        }
                    })
                    .collect();
                lits.join(" & ")
            })
            .collect();
        if terms.len() > 1 && self.alphabet.len() > 1 {
            terms
                .iter()
                .map(|t| format!("({t})"))
                .collect::<Vec<_>>()
                .join(" | ")
        } else {
            terms.join(" | ")
        }
    }
}

impl fmt::Display for PropClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dnf_string())
    }
}

/// Evaluates a propositional query to its class; `var_value` supplies the
/// placeholder when allowed.
fn eval_prop(q: &Query, alphabet: &Arc<Alphabet>, var_value: Option<bool>) -> Result<PropClass> {
    match q {
        Query::True => Ok(PropClass::of_bool(alphabet, true)),
        Query::False => Ok(PropClass::of_bool(alphabet, false)),
        Query::Var => match var_value {
            Some(v) => Ok(PropClass::of_bool(alphabet, v)),
            None => Err(Error::VarNotAllowed),
        },
        Query::Atom(name) => {
            let index = alphabet
                .index_of(name)
                .ok_or_else(|| Error::UnknownProp(name.to_string()))?;
            Ok(PropClass::prop(alphabet, index))
        }
        Query::Not(inner) => Ok(eval_prop(inner, alphabet, var_value)?.not()),
        Query::And(l, r) => {
            Ok(eval_prop(l, alphabet, var_value)?.and(&eval_prop(r, alphabet, var_value)?))
        }
        Query::Or(l, r) => {
            Ok(eval_prop(l, alphabet, var_value)?.or(&eval_prop(r, alphabet, var_value)?))
        }
        Query::Next(_) | Query::WeakNext(_) | Query::Until(_, _) | Query::Release(_, _) => {
            Err(Error::NotPropositional)
        }
    }
}

/// Class of a propositional formula; errors on temporal operators.
pub fn class_of(f: &Formula, alphabet: &Arc<Alphabet>) -> Result<PropClass> {
    eval_prop(f.as_query(), alphabet, None)
}

/// Interval `[lower, upper]` in the class lattice: every class implied by
/// `lower` and implying `upper`. Non-empty iff `sat(upper) ⊆ sat(lower)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropInterval {
    lower: PropClass,
    upper: PropClass,
}

impl PropInterval {
    pub fn new(lower: PropClass, upper: PropClass) -> PropInterval {
        lower.check_same(&upper);
        PropInterval { lower, upper }
    }

    /// `[true, false]`: the whole lattice.
    pub fn full(alphabet: &Arc<Alphabet>) -> PropInterval {
        PropInterval {
            lower: PropClass::of_bool(alphabet, true),
            upper: PropClass::of_bool(alphabet, false),
        }
    }

    pub fn lower(&self) -> &PropClass {
        &self.lower
    }

    pub fn upper(&self) -> &PropClass {
        &self.upper
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.lower.alphabet()
    }

    pub fn is_empty(&self) -> bool {
        !self.upper.sat_subset_of(&self.lower)
    }

    pub fn contains(&self, class: &PropClass) -> bool {
        self.upper.sat_subset_of(class) && class.sat_subset_of(&self.lower)
    }

    /// Pointwise conjunction: `[l1 & l2, u1 | u2]`, which equals the set
    /// intersection of the two intervals.
    pub fn and(&self, other: &PropInterval) -> PropInterval {
        PropInterval {
            lower: self.lower.and(&other.lower),
            upper: self.upper.or(&other.upper),
        }
    }
}

/// Interval forms of the two empty-stream equivalence classes: classes the
/// empty stream satisfies (`[true, <no proposition holds>]`) and classes it
/// falsifies (`[<some proposition holds>, false]`). They partition the
/// lattice: membership in the first is exactly `∅ ∈ sat(class)`.
pub fn eps_class_intervals(alphabet: &Arc<Alphabet>) -> (PropInterval, PropInterval) {
    let none_held = PropClass::singleton(alphabet, Assignment::EMPTY);
    let sat_by_empty = PropInterval::new(PropClass::of_bool(alphabet, true), none_held.clone());
    let falsified_by_empty =
        PropInterval::new(none_held.not(), PropClass::of_bool(alphabet, false));
    (sat_by_empty, falsified_by_empty)
}

/// Class of a propositional query, split by the placeholder:
/// `base | (var & with_var) | (!var & without_var)` with the three
/// assignment sets pairwise disjoint. Equal queries produce equal triples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropQueryClass {
    base: PropClass,
    with_var: PropClass,
    without_var: PropClass,
}

impl PropQueryClass {
    /// Canonical triple from the two instantiations at `true` and `false`.
    pub fn from_true_false(at_true: PropClass, at_false: PropClass) -> PropQueryClass {
        at_true.check_same(&at_false);
        let base = at_true.and(&at_false);
        let with_var = at_true.minus(&base);
        let without_var = at_false.minus(&base);
        PropQueryClass { base, with_var, without_var }
    }

    /// Lifts a placeholder-free class.
    pub fn from_class(class: PropClass) -> PropQueryClass {
        PropQueryClass {
            with_var: PropClass::of_bool(class.alphabet(), false),
            without_var: PropClass::of_bool(class.alphabet(), false),
            base: class,
        }
    }

    pub fn of_bool(alphabet: &Arc<Alphabet>, value: bool) -> PropQueryClass {
        PropQueryClass::from_class(PropClass::of_bool(alphabet, value))
    }

    /// The bare placeholder `var`.
    pub fn var(alphabet: &Arc<Alphabet>) -> PropQueryClass {
        PropQueryClass::from_true_false(
            PropClass::of_bool(alphabet, true),
            PropClass::of_bool(alphabet, false),
        )
    }

    /// The negated placeholder `!var`.
    pub fn not_var(alphabet: &Arc<Alphabet>) -> PropQueryClass {
        PropQueryClass::from_true_false(
            PropClass::of_bool(alphabet, false),
            PropClass::of_bool(alphabet, true),
        )
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.base.alphabet()
    }

    pub fn base(&self) -> &PropClass {
        &self.base
    }

    pub fn with_var(&self) -> &PropClass {
        &self.with_var
    }

    pub fn without_var(&self) -> &PropClass {
        &self.without_var
    }

    /// Instantiation at `class`: assignments of `base`, plus those of
    /// `with_var` where `class` holds, plus those of `without_var` where
    /// it does not.
    pub fn instantiate(&self, class: &PropClass) -> PropClass {
        self.base
            .or(&class.and(&self.with_var))
            .or(&class.not().and(&self.without_var))
    }

    /// Instantiation at the class of `true`.
    pub fn true_class(&self) -> PropClass {
        self.base.or(&self.with_var)
    }

    /// Instantiation at the class of `false`.
    pub fn false_class(&self) -> PropClass {
        self.base.or(&self.without_var)
    }

    pub fn and(&self, other: &PropQueryClass) -> PropQueryClass {
        PropQueryClass::from_true_false(
            self.true_class().and(&other.true_class()),
            self.false_class().and(&other.false_class()),
        )
    }

    pub fn or(&self, other: &PropQueryClass) -> PropQueryClass {
        PropQueryClass::from_true_false(
            self.true_class().or(&other.true_class()),
            self.false_class().or(&other.false_class()),
        )
    }

    /// True when every instantiation is unsatisfiable.
    pub fn is_dead(&self) -> bool {
        !self.base.is_satisfiable()
            && !self.with_var.is_satisfiable()
            && !self.without_var.is_satisfiable()
    }

    /// True when the placeholder parts are empty.
    pub fn is_var_free(&self) -> bool {
        !self.with_var.is_satisfiable() && !self.without_var.is_satisfiable()
    }

    /// Classes whose substitution makes this query unsatisfiable, as an
    /// interval: `[!with_var, without_var]` when `base` is unsatisfiable,
    /// nothing otherwise. In the canonical triple `with_var` and
    /// `without_var` are disjoint, so the interval is never empty.
    pub fn shattering_interval(&self) -> Option<PropInterval> {
        if self.base.is_satisfiable() {
            return None;
        }
        debug_assert!(!self.with_var.and(&self.without_var).is_satisfiable());
        Some(PropInterval::new(self.with_var.not(), self.without_var.clone()))
    }
}

/// Canonical three-part class of a propositional query; errors on temporal
/// operators or unknown atoms.
pub fn to_snf(q: &Query, alphabet: &Arc<Alphabet>) -> Result<PropQueryClass> {
    let at_true = eval_prop(q, alphabet, Some(true))?;
    let at_false = eval_prop(q, alphabet, Some(false))?;
    Ok(PropQueryClass::from_true_false(at_true, at_false))
}

impl fmt::Display for PropQueryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | (var & {}) | (!var & {})",
            self.base, self.with_var, self.without_var
        )
    }
}
