//! Branch-count benchmarks over random graph families, with the per-size
//! geometric mean, the worst case, and an exponential fit of the growth.

use std::io::{Read, Write};
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{mis_branch, SolveConfig};
use crate::error::{Error, Result};
use crate::generators::{generate, Generator};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub generator: Generator,
    /// Ascending graph sizes.
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub config: SolveConfig,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
}

/// One solved instance. Field names double as the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub mis: usize,
    pub branches: u64,
    pub time_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeSummary {
    pub n: usize,
    /// exp(mean ln(branches + 1)).
    pub geomean: f64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summaries: Vec<SizeSummary>,
    pub fitted_gamma: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at size `n`; independent of scheduling.
pub fn derive_seed(master: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(n as u64)) ^ trial as u64)
}

impl BenchSpec {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Input("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Input("no sizes given".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("sizes must be strictly ascending".into()));
        }
        for &n in &self.sizes {
            self.generator.check_size(n)?;
        }
        Ok(())
    }
}

/// Generates and solves every (size, trial) instance.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = spec
        .sizes
        .iter()
        .flat_map(|&n| (0..spec.trials).map(move |t| (n, t)))
        .collect();
    let solve = |&(n, trial): &(usize, usize)| -> Result<BenchRecord> {
        let seed = derive_seed(spec.seed, n, trial);
        let fail = |e: Error| Error::Internal(format!("n={n} trial={trial} seed={seed}: {e}"));
        let g = generate(spec.generator, n, seed).map_err(fail)?;
        let cfg = SolveConfig {
            seed,
            ..spec.config.clone()
        };
        let start = Instant::now();
        let report = mis_branch(&g, &cfg).map_err(fail)?;
        Ok(BenchRecord {
            n,
            trial,
            seed,
            mis: report.mis_size,
            branches: report.branch_count,
            time_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let records: Vec<BenchRecord> = pool.install(|| jobs.par_iter().map(solve).collect::<Result<_>>())?;
    let report = summarize(records);
    for s in &report.summaries {
        info!("n={} geomean={:.3} max={}", s.n, s.geomean, s.max);
    }
    Ok(report)
}

/// Per-size statistics and the fitted γ for a set of records.
pub fn summarize(records: Vec<BenchRecord>) -> BenchReport {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let summaries: Vec<SizeSummary> = sizes
        .iter()
        .map(|&n| {
            let counts: Vec<u64> = records.iter().filter(|r| r.n == n).map(|r| r.branches).collect();
            let mean_log = counts.iter().map(|&b| ((b + 1) as f64).ln()).sum::<f64>() / counts.len() as f64;
            SizeSummary {
                n,
                geomean: mean_log.exp(),
                max: counts.iter().copied().max().unwrap_or(0),
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = summaries.iter().map(|s| (s.n as f64, s.geomean.ln())).collect();
    BenchReport {
        records,
        fitted_gamma: fit_gamma(&points),
        summaries,
    }
}

/// exp of the least-squares slope of `ln y` against `n`. A single point is
/// fitted through the origin.
pub fn fit_gamma(points: &[(f64, f64)]) -> f64 {
    match points {
        [] => 1.0,
        [(n, y)] => {
            if *n > 0.0 {
                (y / n).exp()
            } else {
                1.0
            }
        }
        _ => {
            let k = points.len() as f64;
            let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
            let my = points.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
            (sxy / sxx).exp()
        }
    }
}

/// Writes the records as CSV followed by a `#`-prefixed summary block.
pub fn write_report(report: &BenchReport, out: &mut impl Write) -> Result<()> {
    let io = |e: std::io::Error| Error::Internal(format!("writing report: {e}"));
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        for r in &report.records {
            w.serialize(r).map_err(|e| Error::Internal(e.to_string()))?;
        }
        if report.records.is_empty() {
            w.write_record(["n", "trial", "seed", "mis", "branches", "time_ms"])
                .map_err(|e| Error::Internal(e.to_string()))?;
        }
        w.flush().map_err(io)?;
    }
    writeln!(out, "# summary").map_err(io)?;
    writeln!(out, "# n,geomean,max").map_err(io)?;
    for s in &report.summaries {
        writeln!(out, "# {},{},{}", s.n, s.geomean, s.max).map_err(io)?;
    }
    writeln!(out, "# fitted_gamma,{}", report.fitted_gamma).map_err(io)?;
    Ok(())
}

/// Reads a report written by [`write_report`]. The records are re-summarized;
/// the stored summary block is returned alongside for comparison.
pub fn read_report(input: impl Read) -> Result<(BenchReport, Vec<SizeSummary>, f64)> {
    let mut text = String::new();
    let mut input = input;
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::Input(format!("reading report: {e}")))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let records = reader
        .deserialize()
        .collect::<std::result::Result<Vec<BenchRecord>, _>>()
        .map_err(|e| Error::Input(format!("bad report row: {e}")))?;
    let mut stored = Vec::new();
    let mut gamma = None;
    let bad = |line: &str| Error::Input(format!("bad summary line '{line}'"));
    for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
        let fields: Vec<&str> = line.split(',').collect();
        match fields.as_slice() {
            ["summary"] | ["n", "geomean", "max"] => {}
            ["fitted_gamma", g] => gamma = Some(g.parse().map_err(|_| bad(line))?),
            [n, g, m] => stored.push(SizeSummary {
                n: n.parse().map_err(|_| bad(line))?,
                geomean: g.parse().map_err(|_| bad(line))?,
                max: m.parse().map_err(|_| bad(line))?,
            }),
            _ => return Err(bad(line)),
        }
    }
    let gamma = gamma.ok_or_else(|| Error::Input("report has no fitted_gamma line".into()))?;
    Ok((summarize(records), stored, gamma))
}
