//! End-to-end computation: graph and weights in, scores out.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::centrality::{self, CentralityResult, Mode};
use crate::error::{Result, TwcError};
use crate::linegraph::{self, DirectedLineGraph};
use crate::oracle;
use crate::streamwalk::{self, Direction, PassStats, WalkWeightMatrix};
use crate::tempgraph::TemporalGraph;
use crate::walkalgebra::{self, ApproxOptions, ConvergenceReport, ExactOptions};
use crate::weightfn::{WeightConfig, WeightFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Stream for `delta > 0`, approx otherwise.
    Auto,
    Stream,
    Exact,
    Approx,
    Dag,
    Oracle,
}

impl Method {
    pub fn resolve(self, g: &TemporalGraph) -> Method {
        match self {
            Method::Auto if g.delta() > 0 => Method::Stream,
            Method::Auto => Method::Approx,
            m => m,
        }
    }
}

impl FromStr for Method {
    type Err = TwcError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Method::Auto,
            "stream" => Method::Stream,
            "exact" => Method::Exact,
            "approx" => Method::Approx,
            "dag" => Method::Dag,
            "oracle" => Method::Oracle,
            _ => return Err(TwcError::Config(format!("unknown method `{s}`"))),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Auto => "auto",
            Method::Stream => "stream",
            Method::Exact => "exact",
            Method::Approx => "approx",
            Method::Dag => "dag",
            Method::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

impl FromStr for Mode {
    type Err = TwcError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "twc" => Mode::Twc,
            "katz" => Mode::Katz,
            "degree-out" => Mode::DegreeOut,
            "degree-in" => Mode::DegreeIn,
            _ => return Err(TwcError::Config(format!("unknown mode `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub method: Method,
    pub exact: ExactOptions,
    pub approx: ApproxOptions,
    /// Walk length cutoff for the oracle; required when `delta = 0`.
    pub max_length: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            method: Method::Auto,
            exact: ExactOptions::default(),
            approx: ApproxOptions::default(),
            max_length: None,
        }
    }
}

impl PipelineOptions {
    pub fn with_method(method: Method) -> Self {
        PipelineOptions {
            method,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionReport {
    pub direction: Direction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<PassStats>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub method: Option<Method>,
    /// Phase name and wall time in seconds, in execution order.
    pub timings: Vec<(String, f64)>,
    pub directions: Vec<DirectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_graph: Option<LineGraphSize>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineGraphSize {
    pub nodes: usize,
    pub arcs: usize,
}

impl RunReport {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((phase.to_owned(), start.elapsed().as_secs_f64()));
        out
    }
}

fn validate(g: &TemporalGraph, method: Method, opts: &PipelineOptions) -> Result<()> {
    match method {
        Method::Stream if g.delta() == 0 => Err(TwcError::Config(
            "method stream needs delta > 0; use exact, approx or oracle for delta = 0".into(),
        )),
        Method::Oracle if g.delta() == 0 && opts.max_length.is_none() => {
            Err(TwcError::Config("method oracle with delta = 0 needs --max-length".into()))
        }
        _ => Ok(()),
    }
}

fn oracle_length(g: &TemporalGraph, opts: &PipelineOptions) -> usize {
    opts.max_length
        .or_else(|| oracle::strict_length_bound(g))
        .unwrap_or(1)
}

/// Line graphs keyed by weight function, so equal `phi_in`/`phi_out` share one expansion.
struct LineGraphs<'g> {
    g: &'g TemporalGraph,
    built: Vec<(WeightFunction, DirectedLineGraph)>,
}

impl<'g> LineGraphs<'g> {
    fn get(&mut self, phi: &WeightFunction, report: &mut RunReport) -> &DirectedLineGraph {
        if let Some(i) = self.built.iter().position(|(f, _)| f == phi) {
            return &self.built[i].1;
        }
        let dlg = report.time("expand", || linegraph::expand(self.g, phi));
        report.line_graph = Some(LineGraphSize {
            nodes: dlg.node_count(),
            arcs: dlg.arc_count(),
        });
        self.built.push((*phi, dlg));
        &self.built.last().unwrap().1
    }
}

fn walk_matrix(
    g: &TemporalGraph,
    direction: Direction,
    phi: &WeightFunction,
    method: Method,
    opts: &PipelineOptions,
    dlgs: &mut LineGraphs<'_>,
    report: &mut RunReport,
) -> Result<WalkWeightMatrix> {
    let phase = match direction {
        Direction::Incoming => "incoming",
        Direction::Outgoing => "outgoing",
    };
    let mut dir_report = DirectionReport {
        direction,
        convergence: None,
        stream: None,
    };
    let matrix = match method {
        Method::Stream => {
            let (m, stats) = report.time(phase, || match direction {
                Direction::Incoming => streamwalk::compute_incoming_instrumented(g, phi),
                Direction::Outgoing => streamwalk::compute_outgoing_instrumented(g, phi),
            })?;
            dir_report.stream = Some(stats);
            m
        }
        Method::Exact | Method::Approx | Method::Dag => {
            let dlg = dlgs.get(phi, report);
            let start = Instant::now();
            let counts = match method {
                Method::Exact => walkalgebra::exact_counts(dlg, direction, &opts.exact)?,
                Method::Dag => walkalgebra::dag_counts(dlg, direction)?,
                _ => {
                    let (c, conv) = walkalgebra::approx_counts(dlg, direction, &opts.approx)?;
                    dir_report.convergence = Some(conv);
                    c
                }
            };
            let m = walkalgebra::project(dlg, &counts)?;
            report.timings.push((phase.to_owned(), start.elapsed().as_secs_f64()));
            m
        }
        Method::Oracle => {
            let walks = report.time("enumerate", || oracle::enumerate_walks(g, oracle_length(g, opts)))?;
            walks.weight_matrix(g, direction, phi)
        }
        Method::Auto => unreachable!("resolved before dispatch"),
    };
    report.directions.push(dir_report);
    Ok(matrix)
}

/// The two walk weight matrices for `config`, using `opts.method`.
pub fn walk_matrices(
    g: &TemporalGraph,
    config: &WeightConfig,
    opts: &PipelineOptions,
) -> Result<(WalkWeightMatrix, WalkWeightMatrix, RunReport)> {
    let method = opts.method.resolve(g);
    validate(g, method, opts)?;
    let mut report = RunReport {
        method: Some(method),
        ..Default::default()
    };
    let mut dlgs = LineGraphs { g, built: Vec::new() };
    let win = walk_matrix(g, Direction::Incoming, &config.phi_in, method, opts, &mut dlgs, &mut report)?;
    let wout = walk_matrix(g, Direction::Outgoing, &config.phi_out, method, opts, &mut dlgs, &mut report)?;
    Ok((win, wout, report))
}

/// Scores for `mode`. Degree modes ignore the weights and the method.
pub fn compute(
    g: &TemporalGraph,
    config: &WeightConfig,
    mode: Mode,
    opts: &PipelineOptions,
) -> Result<(CentralityResult, RunReport)> {
    match mode {
        Mode::DegreeIn | Mode::DegreeOut => {
            let mut report = RunReport::default();
            let dir = if mode == Mode::DegreeIn {
                Direction::Incoming
            } else {
                Direction::Outgoing
            };
            let r = report.time("degree", || centrality::degree_mode(g, dir));
            Ok((r, report))
        }
        Mode::Katz => {
            let method = opts.method.resolve(g);
            validate(g, method, opts)?;
            let mut report = RunReport {
                method: Some(method),
                ..Default::default()
            };
            let mut dlgs = LineGraphs { g, built: Vec::new() };
            let wout = walk_matrix(g, Direction::Outgoing, &config.phi_out, method, opts, &mut dlgs, &mut report)?;
            let r = report.time("combine", || centrality::katz_mode(&wout));
            Ok((r, report))
        }
        Mode::Twc => {
            let method = opts.method.resolve(g);
            if method == Method::Oracle {
                validate(g, method, opts)?;
                let mut report = RunReport {
                    method: Some(method),
                    ..Default::default()
                };
                let walks = report.time("enumerate", || oracle::enumerate_walks(g, oracle_length(g, opts)))?;
                let r = report.time("combine", || oracle::oracle_centrality_from(g, &walks, config));
                return Ok((r, report));
            }
            let (win, wout, mut report) = walk_matrices(g, config, opts)?;
            let r = report.time("combine", || {
                if config.phi_m.is_one() {
                    centrality::combine_fast(&win, &wout)
                } else {
                    centrality::combine_general(&win, &wout, &config.phi_m)
                }
            })?;
            Ok((r, report))
        }
    }
}
