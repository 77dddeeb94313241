//! Seeded synthetic benchmark: a random sales-style stream over product
//! and promotion propositions, solved against the two query families
//! `G(prod_i -> F(var & X true))` and
//! `G((promo_i & prod_j) -> F(var & X true))`.

use std::io::Write;
use std::time::{Duration, Instant};

use fltlq::{parse, qc1, Alphabet, Assignment, DataStream, QcOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliResult;

pub struct BenchConfig {
    pub products: usize,
    pub promos: usize,
    pub length: usize,
    pub seed: u64,
    pub prune: bool,
    pub timeout: Option<Duration>,
    pub max_ap: usize,
}

struct Family {
    label: &'static str,
    runs: usize,
    millis: f64,
    edges: f64,
    labels: f64,
}

impl Family {
    fn record(&mut self, elapsed: Duration, edges: usize, labels: usize) {
        self.runs += 1;
        self.millis += elapsed.as_secs_f64() * 1e3;
        self.edges += edges as f64;
        self.labels += labels as f64;
    }

    fn print(&self, out: &mut dyn Write) -> CliResult<()> {
        let n = self.runs.max(1) as f64;
        writeln!(
            out,
            "{:<44} {:>5} {:>10.1} {:>23.1} {:>24.1}",
            self.label,
            self.runs,
            self.millis / n,
            self.edges / n,
            self.labels / n
        )?;
        Ok(())
    }
}

/// Generates one stream from the seed, solves every instance of both
/// families over it, and prints per-family averages. Everything except the
/// time column is a pure function of the arguments.
pub fn run(cfg: &BenchConfig, out: &mut dyn Write) -> CliResult<()> {
    if cfg.products == 0 {
        return Err("bench needs at least one product (--products)".into());
    }
    let mut names: Vec<String> = (0..cfg.products).map(|i| format!("prod{i}")).collect();
    names.extend((0..cfg.promos).map(|i| format!("promo{i}")));
    let alphabet = Alphabet::new(names)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mask = (alphabet.assignment_count() - 1) as u32;
    let steps = (0..cfg.length)
        .map(|_| Assignment::from_bits(rng.gen::<u32>() & mask))
        .collect();
    let stream = DataStream::new(&alphabet, steps)?;

    let opts = QcOptions {
        prune: cfg.prune,
        max_props: cfg.max_ap,
        timeout: cfg.timeout,
        ..QcOptions::default()
    };

    writeln!(
        out,
        "stream: {} propositions, length {}, seed {}",
        alphabet.len(),
        cfg.length,
        cfg.seed
    )?;
    writeln!(
        out,
        "{:<44} {:>5} {:>10} {:>23} {:>24}",
        "query class", "runs", "avg ms", "avg shatterable edges", "avg shatterable labels"
    )?;

    let mut single = Family {
        label: "G(prod_i -> F(var & X true))",
        runs: 0,
        millis: 0.0,
        edges: 0.0,
        labels: 0.0,
    };
    for i in 0..cfg.products {
        let q = parse(&format!("G(prod{i} -> F(var & X true))"), &alphabet)?;
        let t0 = Instant::now();
        let run = qc1(&stream, &q, &opts)?;
        single.record(
            t0.elapsed(),
            run.stats.shatterable_edges,
            run.stats.surviving_labels,
        );
    }
    single.print(out)?;

    if cfg.promos > 0 {
        let mut paired = Family {
            label: "G((promo_i & prod_j) -> F(var & X true))",
            runs: 0,
            millis: 0.0,
            edges: 0.0,
            labels: 0.0,
        };
        for i in 0..cfg.promos {
            for j in 0..cfg.products {
                let q = parse(
                    &format!("G((promo{i} & prod{j}) -> F(var & X true))"),
                    &alphabet,
                )?;
                let t0 = Instant::now();
                let run = qc1(&stream, &q, &opts)?;
                paired.record(
                    t0.elapsed(),
                    run.stats.shatterable_edges,
                    run.stats.surviving_labels,
                );
            }
        }
        paired.print(out)?;
    }
    Ok(())
}
