//! The `optbranch` command line: `solve`, `discover` and `bench`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{run_bench, write_report, BenchSpec};
use crate::branching_table::{branching_table, DEFAULT_ENUMERATION_LIMIT};
use crate::clause::{build_candidates, hash_label};
use crate::engine::{mis_branch, SolveConfig, SolverKind};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::graph::{Graph, Measure, VertexSet};
use crate::io::{parse_graph, GraphFormat};
use crate::optimizer::minimize_gamma;
use crate::region::{bits_to_string, Region};

#[derive(Debug, Parser)]
#[command(
    name = "optbranch",
    version,
    about = "Maximum independent sets with optimal branching rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve maximum independent set on a graph file
    Solve {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Print {"mis_size","branch_count","time_ms"} as JSON
        #[arg(long)]
        json: bool,
    },
    /// Print the branching table, candidate clauses and optimal rule of a region
    Discover {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Region vertices, 1-based ids or letters (a = 1)
        #[arg(long, value_delimiter = ',', required = true)]
        region: Vec<String>,
        /// Boundary vertices; derived from the host graph when omitted
        #[arg(long, value_delimiter = ',')]
        boundary: Option<Vec<String>>,
    },
    /// Run branch-count benchmarks on random graphs
    Bench {
        /// Generator: 3reg, er[:d], kings[:f], grid[:f]
        #[arg(long = "gen")]
        generator: String,
        /// Sizes as start:end:step (inclusive) or a comma-separated list
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Use the LP relaxation with rounding instead of exact set covers
    #[arg(long)]
    lp: bool,
    #[arg(long)]
    no_env_pruning: bool,
    #[arg(long, value_enum, default_value_t = MeasureArg::Vc)]
    measure: MeasureArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Dimacs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeasureArg {
    /// Number of vertices
    Vc,
    /// Sum of max(0, degree − 2)
    Ed,
}

impl SolverArgs {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            measure: match self.measure {
                MeasureArg::Vc => Measure::VertexCount,
                MeasureArg::Ed => Measure::EffectiveDegree,
            },
            solver_kind: if self.lp {
                SolverKind::LpRelaxed
            } else {
                SolverKind::Exact
            },
            env_pruning: !self.no_env_pruning,
            ..SolveConfig::default()
        }
    }
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Edgelist => GraphFormat::EdgeList,
            FormatArg::Dimacs => GraphFormat::Dimacs,
        }
    }
}

#[derive(Serialize)]
struct SolveJson {
    mis_size: usize,
    branch_count: u64,
    time_ms: f64,
}

/// Runs the command line with `args` (including the program name) and
/// returns the exit code: 0 on success, 2 on input errors, 1 otherwise.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Internal(format!("output: {e}"))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Solve {
            file,
            input,
            solver,
            json,
        } => {
            let g = parse_graph(&file, input.format.into())?;
            let start = Instant::now();
            let report = mis_branch(&g, &solver.config())?;
            let time_ms = start.elapsed().as_secs_f64() * 1e3;
            if json {
                let body = SolveJson {
                    mis_size: report.mis_size,
                    branch_count: report.branch_count,
                    time_ms,
                };
                let text = serde_json::to_string(&body).map_err(|e| Error::Internal(e.to_string()))?;
                writeln!(out, "{text}").map_err(io_err)?;
            } else {
                writeln!(out, "mis_size={} branches={}", report.mis_size, report.branch_count).map_err(io_err)?;
            }
        }
        Command::Discover {
            file,
            input,
            solver,
            region,
            boundary,
        } => {
            let g = parse_graph(&file, input.format.into())?;
            discover(&g, &region, boundary.as_deref(), &solver.config(), out)?;
        }
        Command::Bench {
            generator,
            sizes,
            trials,
            seed,
            out: path,
            jobs,
            solver,
        } => {
            let spec = BenchSpec {
                generator: generator.parse::<Generator>()?,
                sizes: parse_sizes(&sizes)?,
                trials,
                seed,
                config: solver.config(),
                jobs,
            };
            let report = run_bench(&spec)?;
            let file = File::create(&path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_report(&report, &mut w)?;
            w.flush().map_err(io_err)?;
            for s in &report.summaries {
                writeln!(out, "n={} geomean={:.4} max={}", s.n, s.geomean, s.max).map_err(io_err)?;
            }
            writeln!(out, "fitted_gamma={:.6}", report.fitted_gamma).map_err(io_err)?;
        }
    }
    Ok(())
}

/// `a:b:step` (inclusive) or `n1,n2,...`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Input(format!("bad size list '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step): (usize, usize, usize) = (
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
                step.parse().map_err(|_| bad())?,
            );
            if step == 0 || a > b {
                return Err(bad());
            }
            Ok((a..=b).step_by(step).collect())
        }
        [list] => list.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect(),
        _ => Err(bad()),
    }
}

fn parse_vertex(token: &str, n: usize) -> Result<usize> {
    let token = token.trim();
    let id = match token.parse::<usize>() {
        Ok(id) => id,
        Err(_) => match token.as_bytes() {
            [c @ b'a'..=b'z'] => (c - b'a') as usize + 1,
            _ => return Err(Error::Input(format!("'{token}' is not a vertex"))),
        },
    };
    if id == 0 || id > n {
        return Err(Error::VertexOutOfRange { vertex: id, n });
    }
    Ok(id - 1)
}

fn discover(
    g: &Graph,
    region: &[String],
    boundary: Option<&[String]>,
    cfg: &SolveConfig,
    out: &mut dyn Write,
) -> Result<()> {
    let ids = |tokens: &[String]| -> Result<VertexSet> {
        let vs = tokens
            .iter()
            .map(|t| parse_vertex(t, g.n()))
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexSet::from_vertices(g.n(), vs))
    };
    let vertices = ids(region)?;
    let region = match boundary {
        Some(b) => Region::with_boundary(g, &vertices, &ids(b)?)?,
        None => Region::of(g, &vertices)?,
    };
    let width = region.width();
    let label = |i: usize| -> String {
        if width <= 26 {
            ((b'a' + i as u8) as char).to_string()
        } else {
            hash_label(i)
        }
    };
    // an explicit boundary stands for an environment the host does not model
    let env_pruning = cfg.env_pruning && !region.has_explicit_boundary();
    let table = branching_table(&region, env_pruning, DEFAULT_ENUMERATION_LIMIT)?;
    let candidates = build_candidates(&table, &region, cfg.measure)?;
    let result = minimize_gamma(&candidates, table.len(), cfg.solver_kind, cfg.seed)?;

    let w = |e| io_err(e);
    let names: Vec<String> = region.local_order().iter().map(|&v| (v + 1).to_string()).collect();
    let letters: Vec<String> = (0..width).map(label).collect();
    writeln!(
        out,
        "variables: {}",
        letters
            .iter()
            .zip(&names)
            .map(|(l, v)| format!("{l}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    )
    .map_err(w)?;
    let bnd: Vec<String> = region.boundary_positions().iter().map(|&i| label(i)).collect();
    writeln!(out, "boundary: {}", bnd.join(" ")).map_err(w)?;
    writeln!(out, "branching table ({} rows):", table.len()).map_err(w)?;
    for (j, row) in table.rows().iter().enumerate() {
        let configs: Vec<String> = row.iter().map(|&c| bits_to_string(c, width)).collect();
        writeln!(out, "  {}: {}", j + 1, configs.join(", ")).map_err(w)?;
    }
    writeln!(out, "candidate clauses ({}):", candidates.len()).map_err(w)?;
    for (i, c) in candidates.iter().enumerate() {
        let rows: Vec<String> = c.coverage.ones().map(|j| (j + 1).to_string()).collect();
        writeln!(
            out,
            "  c{}: J={{{}}} Δρ={} {}",
            i + 1,
            rows.join(", "),
            c.delta_rho,
            c.clause.render(width, &label)
        )
        .map_err(w)?;
    }
    write!(out, "{}", result.render(width, &label)).map_err(w)?;
    Ok(())
}
