//! Command-line front end: evaluate formulas over recorded streams, solve
//! placeholder queries, dump the underlying automata, and run a seeded
//! synthetic benchmark.
//!
//! Exit codes: 0 for a positive answer (all streams satisfied, query
//! solvable, dump or benchmark produced), 1 for a negative answer, 2 for
//! any error (bad arguments, unreadable input, caps or timeouts hit).

mod bench;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use fltlq::{
    evaluate, parse, parse_formula, product_pnfa_fqa, qc_multi, query_tableau, scan_atoms,
    stream_automaton, tableau, Alphabet, DataStream, Fqa, Pnfa, QcOptions, QcReport, Query,
};
use serde_json::json;

pub(crate) type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "fltlq",
    version,
    about = "Temporal-logic query checking over finite data streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a placeholder-free formula on every stream
    Check {
        /// Stream files (.json or .csv)
        #[arg(long, required = true, num_args = 1.., value_name = "FILE")]
        streams: Vec<PathBuf>,
        /// Formula text, e.g. "G(req -> F(ack & X true))"
        #[arg(long, value_name = "TEXT")]
        query: String,
        /// Renumber CSV timestamps instead of requiring 0,1,2,...
        #[arg(long)]
        normalize: bool,
    },
    /// Solve a query: the classes whose substitution for `var` satisfies
    /// the query on every stream
    Solve {
        /// Stream files (.json or .csv)
        #[arg(long, required = true, num_args = 1.., value_name = "FILE")]
        streams: Vec<PathBuf>,
        /// Query text containing `var`, e.g. "G(req -> F(var & X true))"
        #[arg(long, value_name = "TEXT")]
        query: String,
        /// Restrict streams to the query's atoms plus these propositions
        #[arg(long, value_delimiter = ',', value_name = "PROPS")]
        project: Option<Vec<String>>,
        /// Examine every label subset instead of skipping covered ones
        #[arg(long)]
        no_prune: bool,
        /// Cap on the effective alphabet size
        #[arg(long, default_value_t = 16, value_name = "N")]
        max_ap: usize,
        /// Cap on stored solution intervals
        #[arg(long, default_value_t = 10_000, value_name = "N")]
        max_intervals: usize,
        /// Abort after this many seconds
        #[arg(long, value_name = "SECS")]
        timeout_secs: Option<u64>,
        /// Worker threads across streams
        #[arg(long, default_value_t = 1, value_name = "N")]
        jobs: usize,
        /// Renumber CSV timestamps instead of requiring 0,1,2,...
        #[arg(long)]
        normalize: bool,
    },
    /// Print an automaton for a formula or query
    Automaton {
        /// Formula or query text
        #[arg(long, value_name = "TEXT")]
        query: String,
        /// Which automaton to dump
        #[arg(long, value_enum, default_value_t = AutomatonKind::Query)]
        kind: AutomatonKind,
        /// Output format
        #[arg(long, value_enum, default_value_t = DumpFormat::Dot)]
        format: DumpFormat,
        /// Stream files fixing the alphabet; the first one feeds
        /// --kind composed. Defaults to the query's own atoms, sorted
        #[arg(long, num_args = 1.., value_name = "FILE")]
        streams: Vec<PathBuf>,
        /// Renumber CSV timestamps instead of requiring 0,1,2,...
        #[arg(long)]
        normalize: bool,
    },
    /// Solve seeded random instances and print per-family averages
    Bench {
        /// Product propositions prod0..prodN-1
        #[arg(long, default_value_t = 2, value_name = "N")]
        products: usize,
        /// Promotion propositions promo0..promoN-1
        #[arg(long, default_value_t = 0, value_name = "N")]
        promos: usize,
        /// Stream length
        #[arg(long, default_value_t = 1095, value_name = "N")]
        length: usize,
        /// Stream generator seed
        #[arg(long, default_value_t = 0, value_name = "N")]
        seed: u64,
        /// Examine every label subset instead of skipping covered ones
        #[arg(long)]
        no_prune: bool,
        /// Abort any single instance after this many seconds
        #[arg(long, value_name = "SECS")]
        timeout_secs: Option<u64>,
        /// Cap on the alphabet size
        #[arg(long, default_value_t = 16, value_name = "N")]
        max_ap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AutomatonKind {
    /// Automaton of the formula itself (rejects `var`)
    Formula,
    /// Query automaton with per-state acceptance classes
    Query,
    /// First stream composed with the negated query, the object the
    /// solver shatters
    Composed,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpFormat {
    Dot,
    Json,
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        // A closed pipe downstream (e.g. `fltlq ... | head`) ends output
        // early; that is not an error.
        Err(e) if is_broken_pipe(e.as_ref()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &(dyn std::error::Error + 'static)) -> bool {
    e.downcast_ref::<std::io::Error>()
        .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn emit(text: &str) -> CliResult<()> {
    use std::io::Write;
    writeln!(std::io::stdout().lock(), "{text}")?;
    Ok(())
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Check {
            streams,
            query,
            normalize,
        } => cmd_check(&streams, &query, normalize),
        Command::Solve {
            streams,
            query,
            project,
            no_prune,
            max_ap,
            max_intervals,
            timeout_secs,
            jobs,
            normalize,
        } => {
            let opts = QcOptions {
                prune: !no_prune,
                max_props: max_ap,
                max_intervals,
                timeout: timeout_secs.map(Duration::from_secs),
                project,
                jobs,
                ..QcOptions::default()
            };
            cmd_solve(&streams, &query, &opts, normalize)
        }
        Command::Automaton {
            query,
            kind,
            format,
            streams,
            normalize,
        } => cmd_automaton(&query, kind, format, &streams, normalize),
        Command::Bench {
            products,
            promos,
            length,
            seed,
            no_prune,
            timeout_secs,
            max_ap,
        } => {
            let cfg = bench::BenchConfig {
                products,
                promos,
                length,
                seed,
                prune: !no_prune,
                timeout: timeout_secs.map(Duration::from_secs),
                max_ap,
            };
            bench::run(&cfg, &mut std::io::stdout().lock())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_check(paths: &[PathBuf], query: &str, normalize: bool) -> CliResult<ExitCode> {
    let (alphabet, streams) = io::load_streams(paths, normalize)?;
    let f = parse_formula(query, &alphabet)?;
    let mut all = true;
    for s in &streams {
        let sat = evaluate(&s.stream, &f)?;
        emit(&format!("{}: {}", s.name, if sat { "sat" } else { "unsat" }))?;
        all &= sat;
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_solve(
    paths: &[PathBuf],
    query: &str,
    opts: &QcOptions,
    normalize: bool,
) -> CliResult<ExitCode> {
    let (alphabet, named) = io::load_streams(paths, normalize)?;
    let q = parse(query, &alphabet)?;
    let streams: Vec<DataStream> = named.into_iter().map(|s| s.stream).collect();
    let report = qc_multi(&streams, &q, opts)?;
    emit(&serde_json::to_string_pretty(&report_json(&report, query))?)?;
    Ok(if report.solvable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// The query is echoed as the user wrote it, not in the desugared internal
// rendering held by the report.
fn report_json(report: &QcReport, query_text: &str) -> serde_json::Value {
    let intervals: Vec<_> = report
        .solutions
        .intervals()
        .iter()
        .map(|iv| {
            json!({
                "lower": iv.lower().to_dnf_string(),
                "upper": iv.upper().to_dnf_string(),
            })
        })
        .collect();
    json!({
        "query": query_text,
        "solvable": report.solvable,
        "intervals": intervals,
        "stats": {
            "streams": report.stats.streams_total,
            "labels": report.stats.total_surviving_labels(),
            "subsets": report.stats.total_subsets_examined(),
            "millis": report.stats.millis,
        },
    })
}

fn cmd_automaton(
    query_text: &str,
    kind: AutomatonKind,
    format: DumpFormat,
    paths: &[PathBuf],
    normalize: bool,
) -> CliResult<ExitCode> {
    let loaded = if paths.is_empty() {
        None
    } else {
        Some(io::load_streams(paths, normalize)?)
    };
    let alphabet: Arc<Alphabet> = match &loaded {
        Some((alphabet, _)) => alphabet.clone(),
        None => {
            let mut names = scan_atoms(query_text)?;
            names.sort();
            Alphabet::new(names)?
        }
    };
    let q = parse(query_text, &alphabet)?;
    let text = match kind {
        AutomatonKind::Formula => {
            let m = tableau(&q.into_formula()?.to_pnf(), &alphabet)?;
            match format {
                DumpFormat::Dot => m.to_dot(),
                DumpFormat::Json => serde_json::to_string_pretty(&pnfa_json(&m))?,
            }
        }
        AutomatonKind::Query => {
            let m = query_tableau(&q.to_pnf(), &alphabet)?;
            match format {
                DumpFormat::Dot => m.to_dot(),
                DumpFormat::Json => serde_json::to_string_pretty(&fqa_json(&m))?,
            }
        }
        AutomatonKind::Composed => {
            let (_, streams) = loaded
                .as_ref()
                .ok_or("--kind composed needs --streams")?;
            let first = streams
                .first()
                .ok_or("--kind composed needs at least one stream")?;
            let m_q = query_tableau(&Query::not(q).to_pnf(), &alphabet)?;
            let m = product_pnfa_fqa(&stream_automaton(&first.stream), &m_q)?;
            match format {
                DumpFormat::Dot => m.to_dot(),
                DumpFormat::Json => serde_json::to_string_pretty(&fqa_json(&m))?,
            }
        }
    };
    emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn pnfa_json(m: &Pnfa) -> serde_json::Value {
    let states: Vec<_> = (0..m.n_states() as u32)
        .map(|s| json!({ "id": s, "tag": m.tag(s), "accepting": m.is_accepting(s) }))
        .collect();
    let transitions: Vec<_> = m
        .transitions()
        .iter()
        .map(|(src, label, dst)| {
            json!({ "src": src, "label": label.to_dnf_string(), "dst": dst })
        })
        .collect();
    json!({
        "type": "formula-automaton",
        "alphabet": m.alphabet().names(),
        "start": m.start(),
        "states": states,
        "transitions": transitions,
    })
}

fn fqa_json(m: &Fqa) -> serde_json::Value {
    let states: Vec<_> = (0..m.n_states() as u32)
        .map(|s| {
            json!({ "id": s, "tag": m.tag(s), "acceptance": m.acceptance(s).to_string() })
        })
        .collect();
    let transitions: Vec<_> = m
        .transitions()
        .iter()
        .map(|(src, label, dst)| json!({ "src": src, "label": label.to_string(), "dst": dst }))
        .collect();
    json!({
        "type": "query-automaton",
        "alphabet": m.alphabet().names(),
        "start": m.start(),
        "states": states,
        "transitions": transitions,
    })
}
