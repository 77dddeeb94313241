//! End-to-end query checking: find every class whose substitution for the
//! placeholder makes all given streams satisfy the query. Per stream, the
//! solutions are exactly the classes shattering the product of the stream
//! automaton with the negated query's automaton; streams then combine by
//! intersecting their solution sets.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use crate::automata::stream_automaton;
use crate::error::{Error, Result};
use crate::fqa::{product_pnfa_fqa, query_tableau, Fqa};
use crate::semantics::DataStream;
use crate::shatter::{shatter_fqa, ShatterOptions, ShatterRun, SolutionSet};
use crate::syntax::{Alphabet, Query};

#[derive(Debug, Clone)]
pub struct QcOptions {
    /// Skip shattering subsets whose solutions are already recorded.
    pub prune: bool,
    /// Process shorter streams first, so an unsolvable instance dies on
    /// the cheapest automata.
    pub sort_streams: bool,
    /// Reject effective alphabets beyond this many propositions; the
    /// class lattice is doubly exponential in them.
    pub max_props: usize,
    /// Abort when an intersection of per-stream answers would hold more
    /// intervals than this.
    pub max_intervals: usize,
    pub timeout: Option<Duration>,
    /// Restrict the effective alphabet to the query's atoms plus these
    /// propositions; `None` keeps the streams' full alphabet.
    pub project: Option<Vec<String>>,
    /// Worker threads for multi-stream runs; results merge in stream
    /// order, so the answer does not depend on scheduling.
    pub jobs: usize,
}

impl Default for QcOptions {
    fn default() -> QcOptions {
        QcOptions {
            prune: true,
            sort_streams: true,
            max_props: 16,
            max_intervals: 10_000,
            timeout: None,
            project: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StreamStat {
    /// Position of the stream in the input list.
    pub index: usize,
    pub len: usize,
    pub surviving_labels: usize,
    pub shatterable_edges: usize,
    pub subsets_examined: u64,
    pub subsets_pruned: u64,
    pub emptiness_checks: u64,
    pub millis: u64,
}

#[derive(Debug, Clone, Default)]
pub struct QcStats {
    pub streams_total: usize,
    pub streams_processed: usize,
    /// Whether the run stopped because the answer emptied before the
    /// last stream.
    pub early_terminated: bool,
    /// One entry per processed stream, in processing order.
    pub per_stream: Vec<StreamStat>,
    pub millis: u64,
}

impl QcStats {
    pub fn total_surviving_labels(&self) -> usize {
        self.per_stream.iter().map(|s| s.surviving_labels).sum()
    }

    pub fn total_subsets_examined(&self) -> u64 {
        self.per_stream.iter().map(|s| s.subsets_examined).sum()
    }
}

#[derive(Debug, Clone)]
pub struct QcReport {
    pub query: String,
    pub solvable: bool,
    pub solutions: SolutionSet,
    pub stats: QcStats,
}

/// The alphabet the search actually runs over: the declared one, or,
/// under a projection, the query's atoms plus the listed propositions in
/// declared order.
fn effective_alphabet(
    q: &Query,
    declared: &Arc<Alphabet>,
    project: Option<&[String]>,
) -> Result<Arc<Alphabet>> {
    let Some(keep) = project else {
        return Ok(declared.clone());
    };
    for name in keep {
        if declared.index_of(name).is_none() {
            return Err(Error::UnknownProp(name.clone()));
        }
    }
    let needed = q.atoms();
    let names: Vec<&str> = declared
        .names()
        .iter()
        .map(|n| n.as_str())
        .filter(|n| needed.contains(*n) || keep.iter().any(|k| k == n))
        .collect();
    Alphabet::new(names)
}

fn stat_of(index: usize, len: usize, run: &ShatterRun, millis: u64) -> StreamStat {
    StreamStat {
        index,
        len,
        surviving_labels: run.stats.surviving_labels,
        shatterable_edges: run.stats.shatterable_edges,
        subsets_examined: run.stats.subsets_examined,
        subsets_pruned: run.stats.subsets_pruned,
        emptiness_checks: run.stats.emptiness_checks,
        millis,
    }
}

/// Composes one stream with the negated-query automaton and shatters the
/// product. The stream is projected onto the automaton's alphabet first
/// when they differ.
fn run_one(
    automaton: &Fqa,
    pi: &DataStream,
    shatter_opts: &ShatterOptions,
) -> Result<(ShatterRun, u64)> {
    let started = Instant::now();
    let effective = automaton.alphabet();
    let projected;
    let pi = if pi.alphabet() == effective {
        pi
    } else {
        projected = pi.project(effective)?;
        &projected
    };
    let composed = product_pnfa_fqa(&stream_automaton(pi), automaton)?;
    let run = shatter_fqa(&composed, shatter_opts)?;
    Ok((run, started.elapsed().as_millis() as u64))
}

/// Solves one stream: the classes γ with `π ⊨ q[γ]`, as an interval
/// union, with the shattering statistics of the underlying search.
pub fn qc1(pi: &DataStream, q: &Query, opts: &QcOptions) -> Result<ShatterRun> {
    let alphabet = pi.alphabet().clone();
    if alphabet.len() > opts.max_props {
        return Err(Error::TooManyProps {
            len: alphabet.len(),
            cap: opts.max_props,
        });
    }
    q.check_atoms(&alphabet)?;
    let negated = Query::not(q.clone()).to_pnf();
    let automaton = query_tableau(&negated, &alphabet)?;
    let shatter_opts = ShatterOptions {
        prune: opts.prune,
        deadline: opts.timeout.map(|t| Instant::now() + t),
    };
    let (run, _) = run_one(&automaton, pi, &shatter_opts)?;
    Ok(run)
}

/// Solves a whole batch: the classes γ with `π ⊨ q[γ]` for every stream
/// π. The negated-query automaton is built once; per-stream answers are
/// intersected in stream order (shortest first by default) and the run
/// stops as soon as the intersection empties.
pub fn qc_multi(streams: &[DataStream], q: &Query, opts: &QcOptions) -> Result<QcReport> {
    let started = Instant::now();
    let deadline = opts.timeout.map(|t| started + t);
    let declared = match streams.first() {
        Some(pi) => pi.alphabet().clone(),
        None => Alphabet::new(q.atoms().iter().map(|s| s.to_string()))?,
    };
    for pi in streams {
        if pi.alphabet() != &declared {
            return Err(Error::AlphabetMismatch(
                "streams declare different alphabets".to_string(),
            ));
        }
    }
    q.check_atoms(&declared)?;
    let effective = effective_alphabet(q, &declared, opts.project.as_deref())?;
    if effective.len() > opts.max_props {
        return Err(Error::TooManyProps {
            len: effective.len(),
            cap: opts.max_props,
        });
    }
    let negated = Query::not(q.clone()).to_pnf();
    let automaton = query_tableau(&negated, &effective)?;
    let shatter_opts = ShatterOptions {
        prune: opts.prune,
        deadline,
    };
    let mut order: Vec<usize> = (0..streams.len()).collect();
    if opts.sort_streams {
        order.sort_by_key(|&i| streams[i].len());
    }

    let mut solutions = SolutionSet::full(&effective);
    let mut per_stream: Vec<StreamStat> = Vec::new();
    let mut early_terminated = false;
    let workers = opts.jobs.max(1).min(order.len().max(1));

    if workers <= 1 {
        for (pos, &i) in order.iter().enumerate() {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout);
                }
            }
            let (run, millis) = run_one(&automaton, &streams[i], &shatter_opts)?;
            solutions = solutions.intersect(&run.solutions, opts.max_intervals)?;
            per_stream.push(stat_of(i, streams[i].len(), &run, millis));
            if !solutions.is_solvable() && pos + 1 < order.len() {
                early_terminated = true;
                break;
            }
        }
    } else {
        // Workers claim stream positions in order and send results back;
        // this thread merges them in position order, so the outcome
        // matches the sequential fold exactly.
        let cancel = AtomicBool::new(false);
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel::<(usize, Result<(ShatterRun, u64)>)>();
        thread::scope(|scope| -> Result<()> {
            for _ in 0..workers {
                let tx = tx.clone();
                let cancel = &cancel;
                let next = &next;
                let order = &order;
                let automaton = &automaton;
                let shatter_opts = &shatter_opts;
                scope.spawn(move || loop {
                    if cancel.load(Ordering::Relaxed) {
                        break;
                    }
                    let pos = next.fetch_add(1, Ordering::Relaxed);
                    if pos >= order.len() {
                        break;
                    }
                    let outcome = run_one(automaton, &streams[order[pos]], shatter_opts);
                    if tx.send((pos, outcome)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            let mut pending: HashMap<usize, Result<(ShatterRun, u64)>> = HashMap::new();
            let mut merged = 0usize;
            while merged < order.len() {
                let Ok((pos, outcome)) = rx.recv() else {
                    break;
                };
                pending.insert(pos, outcome);
                while let Some(outcome) = pending.remove(&merged) {
                    let i = order[merged];
                    merged += 1;
                    let step = outcome.and_then(|(run, millis)| {
                        let next_solutions =
                            solutions.intersect(&run.solutions, opts.max_intervals)?;
                        Ok((run, millis, next_solutions))
                    });
                    match step {
                        Err(e) => {
                            cancel.store(true, Ordering::Relaxed);
                            return Err(e);
                        }
                        Ok((run, millis, next_solutions)) => {
                            solutions = next_solutions;
                            per_stream.push(stat_of(i, streams[i].len(), &run, millis));
                            if !solutions.is_solvable() && merged < order.len() {
                                early_terminated = true;
                                cancel.store(true, Ordering::Relaxed);
                                return Ok(());
                            }
                        }
                    }
                }
            }
            Ok(())
        })?;
    }

    let streams_processed = per_stream.len();
    Ok(QcReport {
        query: q.to_string(),
        solvable: solutions.is_solvable(),
        solutions,
        stats: QcStats {
            streams_total: streams.len(),
            streams_processed,
            early_terminated,
            per_stream,
            millis: started.elapsed().as_millis() as u64,
        },
    })
}
