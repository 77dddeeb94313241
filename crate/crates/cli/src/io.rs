//! Stream file ingestion. The extension picks the format:
//!
//! - `.json`: one file carries an alphabet and any number of named streams,
//!   each step listing the propositions that hold at that instant.
//! - `.csv`: one stream per file; header `time,a,b,...`, then one row per
//!   instant with 0/1 cells. Times must count 0,1,2,... unless renumbering
//!   is requested, in which case any non-decreasing column is accepted.
//!
//! Every file in one invocation must declare the same alphabet, names and
//! order both.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fltlq::{normalize, Alphabet, Assignment, DataStream, RawStream};
use serde::Deserialize;

use crate::CliResult;

/// A stream plus the label it is reported under: the declared name for
/// JSON entries, the file stem for CSV files.
pub struct NamedStream {
    pub name: String,
    pub stream: DataStream,
}

#[derive(Deserialize)]
struct JsonDoc {
    alphabet: Vec<String>,
    streams: Vec<JsonStream>,
}

#[derive(Deserialize)]
struct JsonStream {
    name: String,
    steps: Vec<Vec<String>>,
}

/// Loads every file and checks that all of them declare the same alphabet.
pub fn load_streams(
    paths: &[PathBuf],
    normalize_times: bool,
) -> CliResult<(Arc<Alphabet>, Vec<NamedStream>)> {
    let mut merged: Option<(Arc<Alphabet>, Vec<NamedStream>)> = None;
    for path in paths {
        let (alphabet, mut streams) = load_file(path, normalize_times)?;
        match &mut merged {
            None => merged = Some((alphabet, streams)),
            Some((have, list)) => {
                if have.names() != alphabet.names() {
                    return Err(format!(
                        "{}: alphabet {:?} differs from {:?} declared by an earlier file",
                        path.display(),
                        alphabet.names(),
                        have.names()
                    )
                    .into());
                }
                list.append(&mut streams);
            }
        }
    }
    merged.ok_or_else(|| "no stream files given".into())
}

fn load_file(path: &Path, normalize_times: bool) -> CliResult<(Arc<Alphabet>, Vec<NamedStream>)> {
    match path.extension().and_then(|e| e.to_str()).unwrap_or("") {
        "json" => load_json(path),
        "csv" => load_csv(path, normalize_times),
        _ => Err(format!(
            "{}: unsupported extension, expected .json or .csv",
            path.display()
        )
        .into()),
    }
}

fn load_json(path: &Path) -> CliResult<(Arc<Alphabet>, Vec<NamedStream>)> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: JsonDoc =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let alphabet = Alphabet::new(doc.alphabet)?;
    let mut out = Vec::with_capacity(doc.streams.len());
    for entry in doc.streams {
        let mut steps = Vec::with_capacity(entry.steps.len());
        for (i, step) in entry.steps.iter().enumerate() {
            let mut a = Assignment::EMPTY;
            for prop in step {
                let idx = alphabet.index_of(prop).ok_or_else(|| {
                    format!(
                        "{}: stream {:?}, step {i}: proposition {prop:?} is not in the alphabet",
                        path.display(),
                        entry.name
                    )
                })?;
                a = a.with(idx);
            }
            steps.push(a);
        }
        out.push(NamedStream {
            name: entry.name,
            stream: DataStream::new(&alphabet, steps)?,
        });
    }
    Ok((alphabet, out))
}

fn load_csv(path: &Path, normalize_times: bool) -> CliResult<(Arc<Alphabet>, Vec<NamedStream>)> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| format!("{}: empty file", path.display()))?;
    let mut cols = header.split(',').map(str::trim);
    if cols.next() != Some("time") {
        return Err(format!("{}: first header column must be `time`", path.display()).into());
    }
    let alphabet = Alphabet::new(cols)?;

    let mut observations = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = line_no + 1;
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != alphabet.len() + 1 {
            return Err(format!(
                "{}:{row}: expected {} cells, found {}",
                path.display(),
                alphabet.len() + 1,
                cells.len()
            )
            .into());
        }
        let time: u64 = cells[0]
            .parse()
            .map_err(|_| format!("{}:{row}: bad time value {:?}", path.display(), cells[0]))?;
        let mut a = Assignment::EMPTY;
        for (i, cell) in cells[1..].iter().enumerate() {
            match *cell {
                "0" => {}
                "1" => a = a.with(i),
                other => {
                    return Err(format!(
                        "{}:{row}: column {} must be 0 or 1, found {other:?}",
                        path.display(),
                        alphabet.name(i)
                    )
                    .into())
                }
            }
        }
        observations.push((time, a));
    }

    if !normalize_times {
        for (i, (t, _)) in observations.iter().enumerate() {
            if *t != i as u64 {
                return Err(format!(
                    "{}: time column must count 0,1,2,... (observation {i} has time {t}); \
                     pass --normalize to renumber",
                    path.display()
                )
                .into());
            }
        }
    }
    let stream = normalize(&RawStream::new(&alphabet, observations))?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("stream")
        .to_string();
    Ok((alphabet, vec![NamedStream { name, stream }]))
}
