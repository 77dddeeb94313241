//! Query checking for finite-trace linear temporal logic over recorded
//! data streams.
//!
//! A *query* is a temporal formula with one placeholder (`var`) standing
//! for an unknown propositional formula. Given streams of observations,
//! the solver computes every propositional class whose substitution makes
//! all streams satisfy the query, reported as a union of intervals in the
//! lattice of propositional classes.
//!
//! The pipeline: a query in positive normal form compiles to an automaton
//! whose labels and acceptance conditions carry the placeholder
//! ([`fqa`]); composing it with the automaton of a negated-query and a
//! stream reduces solving to *shattering*, the search for instantiations
//! emptying the product's language ([`shatter`]); per-stream answers then
//! intersect ([`qc`]).
//!
//! ```
//! use fltlq::{parse, qc_multi, Alphabet, DataStream, QcOptions};
//!
//! let alphabet = Alphabet::new(["req", "ack"]).unwrap();
//! let stream = DataStream::from_props(&alphabet, &[&["req"], &["ack"]]).unwrap();
//! let query = parse("G(req -> F(var & X true))", &alphabet).unwrap();
//! let report = qc_multi(std::slice::from_ref(&stream), &query, &QcOptions::default()).unwrap();
//! assert!(report.solvable);
//! for interval in report.solutions.intervals() {
//!     println!("[{}, {}]", interval.lower(), interval.upper());
//! }
//! ```

mod arena;
pub mod automata;
pub mod error;
pub mod fqa;
pub mod prop;
pub mod qc;
pub mod semantics;
pub mod shatter;
pub mod syntax;

pub use automata::{stream_automaton, tableau, Pnfa, StateId};
pub use error::{Error, Result};
pub use fqa::{product_pnfa_fqa, query_tableau, Fqa};
pub use prop::{
    class_of, eps_class_intervals, to_snf, PropClass, PropInterval, PropQueryClass,
};
pub use qc::{qc1, qc_multi, QcOptions, QcReport, QcStats, StreamStat};
pub use semantics::{brute_force_solutions, evaluate, normalize, DataStream, RawStream};
pub use shatter::{
    preprocess, shatter_fqa, LabelInfo, LabelKind, ShatterOptions, ShatterRun, ShatterStats,
    SolutionSet,
};
pub use syntax::{
    parse, parse_formula, scan_atoms, Alphabet, Assignment, Formula, Polarity, Query, MAX_PROPS,
};
