//! The `twc` command line.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{kendall_tau_b, top_k_size};
use crate::centrality::Mode;
use crate::error::{Result, TwcError};
use crate::format::{format_sig, read_ranking, write_ranking};
use crate::linegraph;
use crate::pipeline::{self, Method, PipelineOptions, RunReport};
use crate::tempgraph::{ingest, GraphStats, IngestOptions, IngestWarnings, TemporalGraph, Timestamp};
use crate::walkalgebra::{ApproxOptions, ExactOptions};
use crate::weightfn::{WeightConfig, WeightFunction};

#[derive(Debug, Parser)]
#[command(name = "twc", version, about = "Temporal walk centrality for temporal graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank nodes and write a `rank<TAB>label<TAB>score` TSV.
    Compute(ComputeArgs),
    /// Kendall tau-b matrix between ranking TSVs, as CSV.
    Compare(CompareArgs),
    /// Write the directed line graph in DOT format.
    DlgExport(DlgExportArgs),
    /// Print graph statistics as JSON.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list `src dst t`, one per line; `-` reads stdin.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Add the reverse of every edge.
    #[arg(long)]
    pub undirected: bool,
    /// Transition time added to every edge's start time.
    #[arg(long, default_value_t = 1)]
    pub delta: Timestamp,
    /// Keep edges with `a <= t` and `t + delta <= b`.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub interval: Option<Vec<Timestamp>>,
}

impl GraphArgs {
    fn load(&self) -> Result<(TemporalGraph, IngestWarnings)> {
        let interval = self.interval.as_ref().map(|v| (v[0], v[1]));
        let opts = IngestOptions {
            undirected: self.undirected,
            delta: self.delta,
            interval,
        };
        if self.input.as_os_str() == "-" {
            ingest(io::stdin().lock(), &opts)
        } else {
            ingest(BufReader::new(File::open(&self.input)?), &opts)
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Walk weight for incoming and outgoing walks: `alpha:<v>`, `time`, `combined:<v>` or `one`.
    #[arg(long, default_value = "one")]
    pub phi: WeightFunction,
    /// Weight between arrival and departure at the scored node.
    #[arg(long = "phi-m", default_value = "one")]
    pub phi_m: WeightFunction,
    /// auto, stream, exact, approx, dag or oracle.
    #[arg(long, default_value = "auto")]
    pub method: Method,
    /// Stopping tolerance for the approx method.
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
    /// Longest walk enumerated by the oracle method.
    #[arg(long = "max-length")]
    pub max_length: Option<usize>,
    /// twc, katz, degree-in or degree-out.
    #[arg(long, default_value = "twc")]
    pub mode: Mode,
    /// Ranking TSV; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON run summary; defaults to `<output>.summary.json` when `--output` is set.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long, env = "TWC_THREADS", default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Ranking TSVs written by `compute`.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Correlate only the union of each file's top fraction of nodes.
    #[arg(long)]
    pub top: Option<f64>,
    /// Output CSV; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DlgExportArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value = "one")]
    pub phi: WeightFunction,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct StatsOutput {
    #[serde(flatten)]
    stats: GraphStats,
    self_loops_dropped: usize,
}

#[derive(Serialize)]
struct Summary<'a> {
    input: &'a Path,
    mode: Mode,
    phi: WeightFunction,
    phi_m: WeightFunction,
    delta: Timestamp,
    threads: usize,
    graph: StatsOutput,
    #[serde(flatten)]
    run: RunReport,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_compute(args: &ComputeArgs) -> Result<()> {
    if args.threads == 0 {
        return Err(TwcError::Config("--threads must be at least 1".into()));
    }
    if args.mode == Mode::Katz && !matches!(args.phi, WeightFunction::ConstantAlpha(_)) {
        return Err(TwcError::Config("katz mode needs --phi alpha:<v>".into()));
    }
    if args.epsilon.is_nan() || args.epsilon <= 0.0 {
        return Err(TwcError::Config("--epsilon must be positive".into()));
    }
    let (g, warnings) = args.graph.load()?;
    if warnings.self_loops_dropped > 0 {
        log::warn!("dropped {} self-loop edges", warnings.self_loops_dropped);
    }
    let config = WeightConfig::symmetric(args.phi, args.phi_m);
    let opts = PipelineOptions {
        method: args.method,
        exact: ExactOptions::default(),
        approx: ApproxOptions {
            epsilon: args.epsilon,
            ..ApproxOptions::default()
        },
        max_length: args.max_length,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| TwcError::Config(format!("thread pool: {e}")))?;
    let (result, report) = pool.install(|| pipeline::compute(&g, &config, args.mode, &opts))?;

    let mut out = open_output(args.output.as_deref())?;
    write_ranking(&mut out, &g, &result)?;
    out.flush()?;

    let summary_path = args.summary.clone().or_else(|| {
        args.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".summary.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = summary_path {
        let summary = Summary {
            input: &args.graph.input,
            mode: args.mode,
            phi: args.phi,
            phi_m: args.phi_m,
            delta: g.delta(),
            threads: args.threads,
            graph: StatsOutput {
                stats: g.stats(),
                self_loops_dropped: warnings.self_loops_dropped,
            },
            run: report,
        };
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, &summary).map_err(io::Error::from)?;
        writeln!(f)?;
        f.flush()?;
    }
    Ok(())
}

fn load_ranking(path: &Path) -> Result<Vec<(String, f64)>> {
    let rows = read_ranking(BufReader::new(File::open(path)?))?;
    let mut seen = BTreeSet::new();
    for (label, _) in &rows {
        if !seen.insert(label.as_str()) {
            return Err(TwcError::Parse {
                line: 0,
                message: format!("{}: duplicate label `{label}`", path.display()),
            });
        }
    }
    Ok(rows)
}

/// Pairwise tau-b over a shared label universe, optionally restricted to top-k unions.
pub fn correlation_matrix(rankings: &[Vec<(String, f64)>], top: Option<f64>) -> Result<Vec<Vec<f64>>> {
    let universes: Vec<BTreeSet<&str>> = rankings
        .iter()
        .map(|r| r.iter().map(|(l, _)| l.as_str()).collect())
        .collect();
    for (i, u) in universes.iter().enumerate().skip(1) {
        if *u != universes[0] {
            return Err(TwcError::UniverseMismatch(format!(
                "ranking {} covers a different node set than ranking 1",
                i + 1
            )));
        }
    }
    let tops: Vec<BTreeSet<&str>> = match top {
        Some(p) => {
            let k = top_k_size(universes[0].len(), p)?;
            rankings
                .iter()
                .map(|r| r.iter().take(k).map(|(l, _)| l.as_str()).collect())
                .collect()
        }
        None => universes.clone(),
    };
    let maps: Vec<HashMap<&str, f64>> = rankings
        .iter()
        .map(|r| r.iter().map(|(l, s)| (l.as_str(), *s)).collect())
        .collect();

    let n = rankings.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let support: BTreeSet<&str> = tops[i].union(&tops[j]).copied().collect();
            let x: Vec<f64> = support.iter().map(|l| maps[i][l]).collect();
            let y: Vec<f64> = support.iter().map(|l| maps[j][l]).collect();
            let tau = kendall_tau_b(&x, &y).tau;
            m[i][j] = tau;
            m[j][i] = tau;
        }
    }
    Ok(m)
}

fn run_compare(args: &CompareArgs) -> Result<()> {
    let rankings = args
        .inputs
        .iter()
        .map(|p| load_ranking(p))
        .collect::<Result<Vec<_>>>()?;
    let matrix = correlation_matrix(&rankings, args.top)?;
    let names: Vec<String> = args.inputs.iter().map(|p| p.display().to_string()).collect();

    let mut w = csv::Writer::from_writer(open_output(args.output.as_deref())?);
    let csv_err = |e: csv::Error| TwcError::Io(io::Error::other(e));
    w.write_record(std::iter::once("").chain(names.iter().map(String::as_str)))
        .map_err(csv_err)?;
    for (name, row) in names.iter().zip(&matrix) {
        let cells = std::iter::once(name.clone()).chain(row.iter().map(|&t| format_sig(t, 12)));
        w.write_record(cells).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn run_dlg_export(args: &DlgExportArgs) -> Result<()> {
    let (g, _) = args.graph.load()?;
    let dlg = linegraph::expand(&g, &args.phi);
    let mut out = open_output(args.output.as_deref())?;
    out.write_all(dlg.to_dot(g.labels()).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run_stats(args: &StatsArgs) -> Result<()> {
    let (g, warnings) = args.graph.load()?;
    let stats = StatsOutput {
        stats: g.stats(),
        self_loops_dropped: warnings.self_loops_dropped,
    };
    let mut out = open_output(args.output.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &stats).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Compare(a) => run_compare(a),
        Command::DlgExport(a) => run_dlg_export(a),
        Command::Stats(a) => run_stats(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("twc: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[(&str, f64)]) -> Vec<(String, f64)> {
        v.iter().map(|(l, s)| (l.to_string(), *s)).collect()
    }

    #[test]
    fn self_and_reverse() {
        let a = rows(&[("x", 3.0), ("y", 2.0), ("z", 1.0)]);
        let b = rows(&[("z", 3.0), ("y", 2.0), ("x", 1.0)]);
        assert_eq!(correlation_matrix(std::slice::from_ref(&a), None).unwrap(), vec![vec![1.0]]);
        let m = correlation_matrix(&[a, b], None).unwrap();
        assert_eq!(m[0][1], -1.0);
        assert_eq!(m[1][0], -1.0);
    }

    #[test]
    fn universe_mismatch() {
        let a = rows(&[("x", 1.0), ("y", 0.0)]);
        let b = rows(&[("x", 1.0), ("w", 0.0)]);
        assert!(matches!(correlation_matrix(&[a, b], None), Err(TwcError::UniverseMismatch(_))));
    }

    #[test]
    fn top_fraction_uses_union() {
        let a = rows(&[("p", 4.0), ("q", 3.0), ("r", 2.0), ("s", 1.0)]);
        let b = rows(&[("q", 4.0), ("p", 3.0), ("s", 2.0), ("r", 1.0)]);
        // top half: {p,q} in both; p,q swapped -> -1
        let m = correlation_matrix(&[a, b], Some(0.5)).unwrap();
        assert_eq!(m[0][1], -1.0);
    }

    #[test]
    fn argument_parsing() {
        assert!(Cli::try_parse_from(["twc", "compute"]).is_err());
        assert!(Cli::try_parse_from(["twc", "compute", "--input", "x", "--phi", "alpha:2"]).is_err());
        let cli = Cli::try_parse_from(["twc", "compute", "-i", "x", "--interval", "3", "5", "--method", "dag"]).unwrap();
        let Command::Compute(args) = cli.command else { panic!() };
        assert_eq!(args.graph.interval, Some(vec![3, 5]));
        assert_eq!(args.method, Method::Dag);
        assert_eq!(args.graph.delta, 1);
    }
}
