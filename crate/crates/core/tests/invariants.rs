//! Property tests: grammar round trips, normal forms, lattice laws, and
//! the contracts tying automata to stream semantics.

use std::sync::Arc;

use fltlq::{
    class_of, evaluate, parse, qc1, query_tableau, to_snf, Alphabet, DataStream, PropClass,
    PropInterval, QcOptions, Query,
};
use proptest::prelude::*;

fn alphabet() -> Arc<Alphabet> {
    Alphabet::new(["a", "b"]).unwrap()
}

fn arb_leaf(with_var: bool) -> BoxedStrategy<Query> {
    let mut options = vec![
        Just(Query::True).boxed(),
        Just(Query::False).boxed(),
        Just(Query::atom("a")).boxed(),
        Just(Query::atom("b")).boxed(),
    ];
    if with_var {
        options.push(Just(Query::Var).boxed());
    }
    proptest::strategy::Union::new(options).boxed()
}

fn arb_query_with(with_var: bool, temporal: bool) -> BoxedStrategy<Query> {
    arb_leaf(with_var)
        .prop_recursive(3, 24, 2, move |inner| {
            let mut options = vec![
                inner.clone().prop_map(Query::not).boxed(),
                (inner.clone(), inner.clone())
                    .prop_map(|(l, r)| Query::and(l, r))
                    .boxed(),
                (inner.clone(), inner.clone())
                    .prop_map(|(l, r)| Query::or(l, r))
                    .boxed(),
            ];
            if temporal {
                options.push(inner.clone().prop_map(Query::next).boxed());
                options.push(inner.clone().prop_map(Query::weak_next).boxed());
                options.push(
                    (inner.clone(), inner.clone())
                        .prop_map(|(l, r)| Query::until(l, r))
                        .boxed(),
                );
                options.push(
                    (inner.clone(), inner)
                        .prop_map(|(l, r)| Query::release(l, r))
                        .boxed(),
                );
            }
            proptest::strategy::Union::new(options).boxed()
        })
        .boxed()
}

fn arb_query() -> BoxedStrategy<Query> {
    arb_query_with(true, true)
}

fn arb_formula() -> BoxedStrategy<Query> {
    arb_query_with(false, true)
}

fn arb_prop_query() -> BoxedStrategy<Query> {
    arb_query_with(true, false)
}

fn arb_stream() -> BoxedStrategy<DataStream> {
    prop::collection::vec(0u32..4, 0..4)
        .prop_map(|bits| {
            let ab = alphabet();
            DataStream::new(
                &ab,
                bits.into_iter().map(fltlq::Assignment::from_bits).collect(),
            )
            .unwrap()
        })
        .boxed()
}

fn arb_class() -> BoxedStrategy<PropClass> {
    (0usize..16)
        .prop_map(|i| PropClass::enumerate_all(&alphabet()).unwrap()[i].clone())
        .boxed()
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(q in arb_query()) {
        let ab = alphabet();
        let reparsed = parse(&q.to_string(), &ab).unwrap();
        prop_assert_eq!(reparsed, q);
    }

    #[test]
    fn pnf_has_leaf_negations_only_and_preserves_meaning(
        q in arb_formula(),
        pi in arb_stream(),
    ) {
        let f = q.into_formula().unwrap();
        let g = f.to_pnf();
        prop_assert!(g.is_pnf());
        prop_assert_eq!(evaluate(&pi, &f).unwrap(), evaluate(&pi, &g).unwrap());
    }

    #[test]
    fn negation_dualizes_until_and_next(
        l in arb_formula(),
        r in arb_formula(),
        pi in arb_stream(),
    ) {
        let lhs = Query::not(Query::until(l.clone(), r.clone()))
            .into_formula()
            .unwrap();
        let rhs = Query::release(Query::not(l.clone()), Query::not(r.clone()))
            .into_formula()
            .unwrap();
        prop_assert_eq!(evaluate(&pi, &lhs).unwrap(), evaluate(&pi, &rhs).unwrap());
        let lhs = Query::not(Query::next(l.clone())).into_formula().unwrap();
        let rhs = Query::weak_next(Query::not(l)).into_formula().unwrap();
        prop_assert_eq!(evaluate(&pi, &lhs).unwrap(), evaluate(&pi, &rhs).unwrap());
    }

    #[test]
    fn class_operations_are_sat_set_operations(c1 in arb_class(), c2 in arb_class()) {
        let ab = alphabet();
        for a in ab.assignments() {
            prop_assert_eq!(
                c1.and(&c2).sat_contains(a),
                c1.sat_contains(a) && c2.sat_contains(a)
            );
            prop_assert_eq!(
                c1.or(&c2).sat_contains(a),
                c1.sat_contains(a) || c2.sat_contains(a)
            );
            prop_assert_eq!(c1.not().sat_contains(a), !c1.sat_contains(a));
        }
        prop_assert_eq!(c1.le(&c2), c2.sat_subset_of(&c1));
        prop_assert_eq!(class_of(&c1.to_formula(), &ab).unwrap(), c1);
    }

    #[test]
    fn interval_conjunction_is_set_intersection(
        l1 in arb_class(), u1 in arb_class(),
        l2 in arb_class(), u2 in arb_class(),
        c in arb_class(),
    ) {
        let i1 = PropInterval::new(l1, u1);
        let i2 = PropInterval::new(l2, u2);
        prop_assert_eq!(
            i1.and(&i2).contains(&c),
            i1.contains(&c) && i2.contains(&c)
        );
    }

    #[test]
    fn snf_instantiation_matches_substitution(q in arb_prop_query(), c in arb_class()) {
        let ab = alphabet();
        let triple = to_snf(&q, &ab).unwrap();
        let direct = class_of(&q.substitute(&c).unwrap(), &ab).unwrap();
        prop_assert_eq!(triple.instantiate(&c), direct);
        prop_assert!(!triple.with_var().and(triple.without_var()).is_satisfiable());
        prop_assert!(!triple.base().and(triple.with_var()).is_satisfiable());
        prop_assert!(!triple.base().and(triple.without_var()).is_satisfiable());
    }

    #[test]
    fn shattering_interval_is_exactly_the_killing_classes(q in arb_prop_query()) {
        let ab = alphabet();
        let triple = to_snf(&q, &ab).unwrap();
        let interval = triple.shattering_interval();
        for c in PropClass::enumerate_all(&ab).unwrap() {
            let killed = !triple.instantiate(&c).is_satisfiable();
            match &interval {
                Some(i) => prop_assert_eq!(i.contains(&c), killed),
                None => prop_assert!(!killed),
            }
        }
    }

    #[test]
    fn query_automaton_agrees_with_substitution(
        q in arb_query(),
        c in arb_class(),
        pi in arb_stream(),
    ) {
        let ab = alphabet();
        let pnf = q.to_pnf();
        let m = query_tableau(&pnf, &ab).unwrap();
        let expected = evaluate(&pi, &pnf.substitute(&c).unwrap()).unwrap();
        prop_assert_eq!(m.instantiate(&c).accepts(&pi), expected);
    }

    #[test]
    fn acceptance_set_selection_follows_the_empty_assignment(
        q in arb_query(),
        c in arb_class(),
    ) {
        let ab = alphabet();
        let m = query_tableau(&q.to_pnf(), &ab).unwrap();
        let (at_true, at_false) = m.acceptance_sets();
        let chosen = if c.sat_contains(fltlq::Assignment::EMPTY) {
            at_true
        } else {
            at_false
        };
        let specialized = m.instantiate(&c);
        for s in 0..m.n_states() as u32 {
            prop_assert_eq!(specialized.is_accepting(s), chosen[s as usize]);
        }
    }

    #[test]
    fn empty_stream_projection_agrees(q in arb_query(), c in arb_class()) {
        let ab = alphabet();
        let pnf = q.to_pnf();
        let projected = pnf.eps_projection().unwrap();
        prop_assert!(projected.is_propositional());
        let empty = DataStream::empty(&ab);
        prop_assert_eq!(
            evaluate(&empty, &pnf.substitute(&c).unwrap()).unwrap(),
            evaluate(&empty, &projected.substitute(&c).unwrap()).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pruned_and_exhaustive_searches_agree(q in arb_query(), pi in arb_stream()) {
        let ab = alphabet();
        let pruned = qc1(&pi, &q, &QcOptions::default()).unwrap();
        let exhaustive = qc1(
            &pi,
            &q,
            &QcOptions { prune: false, ..QcOptions::default() },
        )
        .unwrap();
        prop_assert_eq!(
            exhaustive.stats.subsets_examined,
            1u64 << exhaustive.stats.surviving_labels
        );
        for c in PropClass::enumerate_all(&ab).unwrap() {
            prop_assert_eq!(pruned.solutions.contains(&c), exhaustive.solutions.contains(&c));
        }
    }

    #[test]
    fn solver_answers_are_sound_and_complete(q in arb_query(), pi in arb_stream()) {
        let ab = alphabet();
        let run = qc1(&pi, &q, &QcOptions::default()).unwrap();
        for c in PropClass::enumerate_all(&ab).unwrap() {
            let satisfied = evaluate(&pi, &q.substitute(&c).unwrap()).unwrap();
            prop_assert_eq!(run.solutions.contains(&c), satisfied, "class {}", c);
        }
    }
}
