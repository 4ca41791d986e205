//! Temporal graph model and edge-list ingestion.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Result, TwcError};

pub type Timestamp = u64;

/// Dense node index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub t: Timestamp,
}

impl TemporalEdge {
    pub fn new(src: impl Into<NodeId>, dst: impl Into<NodeId>, t: Timestamp) -> Self {
        TemporalEdge {
            src: src.into(),
            dst: dst.into(),
            t,
        }
    }
}

/// Nodes, chronologically sorted edges and a global transition time `delta`.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    labels: Vec<String>,
    edges: Vec<TemporalEdge>,
    delta: Timestamp,
}

impl TemporalGraph {
    /// Builds a graph over nodes `0..node_count` labeled by their index.
    pub fn new(node_count: usize, edges: Vec<TemporalEdge>, delta: Timestamp) -> Result<Self> {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges, delta)
    }

    /// Builds a graph with explicit node labels. Edges are stably sorted by time.
    pub fn with_labels(
        labels: Vec<String>,
        mut edges: Vec<TemporalEdge>,
        delta: Timestamp,
    ) -> Result<Self> {
        let n = labels.len();
        if n > u32::MAX as usize {
            return Err(TwcError::Capacity(format!("{n} nodes exceed the u32 index space")));
        }
        for e in &edges {
            if e.src.index() >= n || e.dst.index() >= n {
                return Err(TwcError::Contract(format!(
                    "edge ({}, {}, {}) references a node outside 0..{n}",
                    e.src.0, e.dst.0, e.t
                )));
            }
            if e.src == e.dst {
                return Err(TwcError::Contract(format!("self-loop at node {} (t={})", e.src.0, e.t)));
            }
            if e.t.checked_add(delta).is_none() {
                return Err(TwcError::Contract(format!(
                    "arrival time {} + {delta} overflows",
                    e.t
                )));
            }
        }
        edges.sort_by_key(|e| e.t);
        Ok(TemporalGraph { labels, edges, delta })
    }

    pub fn empty(delta: Timestamp) -> Self {
        TemporalGraph {
            labels: Vec::new(),
            edges: Vec::new(),
            delta,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted non-decreasing by time, ties in input order.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn delta(&self) -> Timestamp {
        self.delta
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node.index()]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label).map(NodeId::from)
    }

    #[inline]
    pub fn arrival(&self, e: &TemporalEdge) -> Timestamp {
        e.t + self.delta
    }

    /// Same edges and labels under a different transition time.
    pub fn with_delta(&self, delta: Timestamp) -> Result<Self> {
        Self::with_labels(self.labels.clone(), self.edges.clone(), delta)
    }

    pub fn stats(&self) -> GraphStats {
        let mut support = HashSet::with_capacity(2 * self.edges.len());
        let mut arrivals: HashSet<(NodeId, Timestamp)> = HashSet::new();
        let mut starts: HashSet<(NodeId, Timestamp)> = HashSet::new();
        for e in &self.edges {
            support.insert(e.t);
            support.insert(e.t + self.delta);
            arrivals.insert((e.dst, e.t + self.delta));
            starts.insert((e.src, e.t));
        }
        let mut tau_in = vec![0usize; self.node_count()];
        let mut tau_out = vec![0usize; self.node_count()];
        for (v, _) in arrivals {
            tau_in[v.index()] += 1;
        }
        for (v, _) in starts {
            tau_out[v.index()] += 1;
        }
        GraphStats {
            n: self.node_count(),
            m: self.edge_count(),
            time_support: support.len(),
            tau_in_max: tau_in.into_iter().max().unwrap_or(0),
            tau_out_max: tau_out.into_iter().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    /// `|{t, t+delta}|` over all edges.
    pub time_support: usize,
    /// Largest number of distinct arrival times at a node.
    pub tau_in_max: usize,
    /// Largest number of distinct start times at a node.
    pub tau_out_max: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Each line yields a forward and a backward edge with the same timestamp.
    pub undirected: bool,
    pub delta: Timestamp,
    /// Keep only edges with `a <= t` and `t + delta <= b`.
    pub interval: Option<(Timestamp, Timestamp)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestWarnings {
    pub self_loops_dropped: usize,
}

/// Reads a whitespace-separated `src dst t` edge list.
///
/// Blank lines and lines starting with `#` are skipped. Labels are interned in
/// order of first appearance among retained edges.
pub fn ingest<R: BufRead>(source: R, opts: &IngestOptions) -> Result<(TemporalGraph, IngestWarnings)> {
    if let Some((a, b)) = opts.interval {
        if a > b {
            return Err(TwcError::Config(format!("interval start {a} exceeds end {b}")));
        }
    }

    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut edges = Vec::new();
    let mut warnings = IngestWarnings::default();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> NodeId {
        if let Some(&id) = index.get(label) {
            return id;
        }
        let id = NodeId::from(labels.len());
        labels.push(label.to_owned());
        index.insert(label.to_owned(), id);
        id
    };

    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(TwcError::Parse {
                line: line_no,
                message: format!("expected `src dst t`, found {} fields", fields.len()),
            });
        }
        let t = parse_timestamp(fields[2]).map_err(|message| TwcError::Parse { line: line_no, message })?;
        let arrival = t.checked_add(opts.delta).ok_or_else(|| TwcError::Parse {
            line: line_no,
            message: format!("arrival time {t} + {} overflows", opts.delta),
        })?;
        if fields[0] == fields[1] {
            warnings.self_loops_dropped += 1;
            continue;
        }
        if let Some((a, b)) = opts.interval {
            if t < a || arrival > b {
                continue;
            }
        }
        let src = intern(fields[0], &mut labels);
        let dst = intern(fields[1], &mut labels);
        edges.push(TemporalEdge { src, dst, t });
        if opts.undirected {
            edges.push(TemporalEdge { src: dst, dst: src, t });
        }
    }

    if warnings.self_loops_dropped > 0 {
        log::warn!("dropped {} self-loop line(s)", warnings.self_loops_dropped);
    }
    Ok((TemporalGraph::with_labels(labels, edges, opts.delta)?, warnings))
}

fn parse_timestamp(field: &str) -> std::result::Result<Timestamp, String> {
    if field.starts_with('-') {
        return Err(format!("negative timestamp `{field}`"));
    }
    field.parse::<Timestamp>().map_err(|_| {
        if field.parse::<f64>().is_ok() {
            format!("non-integer timestamp `{field}`")
        } else {
            format!("invalid timestamp `{field}`")
        }
    })
}
