//! Shared generators for the integration suites: exhaustive formula
//! enumeration by height, seeded random formulas/queries/streams, and
//! stream space enumeration.

#![allow(dead_code)]

use std::sync::Arc;

use fltlq::{Alphabet, Assignment, DataStream, Query};
use rand::Rng;

/// Every formula of height at most `depth`: leaves are the alphabet's
/// atoms plus the constants; connectives are negation, the two nexts,
/// conjunction, disjunction, until, and release.
pub fn enumerate_to_depth(alphabet: &Arc<Alphabet>, depth: usize) -> Vec<Query> {
    let mut leaves: Vec<Query> = vec![Query::True, Query::False];
    for name in alphabet.names() {
        leaves.push(Query::atom(name.as_str()));
    }
    let mut below = leaves.clone();
    for _ in 1..depth {
        let mut next = leaves.clone();
        for f in &below {
            next.push(Query::not(f.clone()));
            next.push(Query::next(f.clone()));
            next.push(Query::weak_next(f.clone()));
        }
        for l in &below {
            for r in &below {
                next.push(Query::and(l.clone(), r.clone()));
                next.push(Query::or(l.clone(), r.clone()));
                next.push(Query::until(l.clone(), r.clone()));
                next.push(Query::release(l.clone(), r.clone()));
            }
        }
        below = next;
    }
    below
}

/// Uniformly random formula tree of height at most `depth`; leaves may
/// include the placeholder when `with_var` is set.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    depth: usize,
    with_var: bool,
) -> Query {
    let op = if depth <= 1 { 0 } else { rng.gen_range(0..8) };
    match op {
        0 => {
            let choices = alphabet.len() + 2 + usize::from(with_var);
            match rng.gen_range(0..choices) {
                0 => Query::True,
                1 => Query::False,
                i if i - 2 < alphabet.len() => Query::atom(alphabet.name(i - 2)),
                _ => Query::Var,
            }
        }
        1 => Query::not(random_formula(rng, alphabet, depth - 1, with_var)),
        2 => Query::next(random_formula(rng, alphabet, depth - 1, with_var)),
        3 => Query::weak_next(random_formula(rng, alphabet, depth - 1, with_var)),
        op => {
            let l = random_formula(rng, alphabet, depth - 1, with_var);
            let r = random_formula(rng, alphabet, depth - 1, with_var);
            match op {
                4 => Query::and(l, r),
                5 => Query::or(l, r),
                6 => Query::until(l, r),
                _ => Query::release(l, r),
            }
        }
    }
}

/// Random query guaranteed to mention the placeholder.
pub fn random_query(rng: &mut impl Rng, alphabet: &Arc<Alphabet>, depth: usize) -> Query {
    loop {
        let q = random_formula(rng, alphabet, depth, true);
        if q.has_var() {
            return q;
        }
    }
}

pub fn random_stream_of_len(
    rng: &mut impl Rng,
    alphabet: &Arc<Alphabet>,
    len: usize,
) -> DataStream {
    let mask = (alphabet.assignment_count() - 1) as u32;
    let steps = (0..len)
        .map(|_| Assignment::from_bits(rng.gen::<u32>() & mask))
        .collect();
    DataStream::new(alphabet, steps).unwrap()
}

pub fn random_stream(rng: &mut impl Rng, alphabet: &Arc<Alphabet>, max_len: usize) -> DataStream {
    let len = rng.gen_range(0..=max_len);
    random_stream_of_len(rng, alphabet, len)
}

/// Every stream over the alphabet with at most `max_len` instants.
pub fn all_streams(alphabet: &Arc<Alphabet>, max_len: usize) -> Vec<DataStream> {
    let mut out = vec![DataStream::empty(alphabet)];
    let mut frontier: Vec<Vec<Assignment>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for a in alphabet.assignments() {
                let mut steps = prefix.clone();
                steps.push(a);
                out.push(DataStream::new(alphabet, steps.clone()).unwrap());
                next.push(steps);
            }
        }
        frontier = next;
    }
    out
}

/// The randomized solver-versus-brute-force instance grid: queries of
/// height at most 4 mentioning the placeholder, with one to three streams
/// of length at most 4 over a two-proposition alphabet.
pub fn solver_grid(
    rng: &mut impl Rng,
    alphabet: &Arc<Alphabet>,
    cases: usize,
) -> Vec<(Query, Vec<DataStream>)> {
    (0..cases)
        .map(|_| {
            let q = random_query(rng, alphabet, 4);
            let n = rng.gen_range(1..=3);
            let streams = (0..n).map(|_| random_stream(rng, alphabet, 4)).collect();
            (q, streams)
        })
        .collect()
}
