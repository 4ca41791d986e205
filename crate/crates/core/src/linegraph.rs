//! Directed line graph expansion of a temporal graph.
//!
//! Every temporal edge becomes a node. There is an arc from `(u, v, t)` to
//! `(v, w, s)` whenever `t + delta <= s`, weighted `Φ(t + delta, s)`, so static
//! walks of length `l - 1` correspond one-to-one to temporal walks of length `l`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::tempgraph::{NodeId, TemporalEdge, TemporalGraph, Timestamp};
use crate::walkalgebra::SparseMatrix;
use crate::weightfn::WeightFunction;

#[derive(Debug, Clone)]
pub struct DirectedLineGraph {
    edges: Vec<TemporalEdge>,
    temporal_nodes: usize,
    delta: Timestamp,
    adjacency: SparseMatrix,
    x_out: BTreeMap<(NodeId, Timestamp), Vec<usize>>,
    x_in: BTreeMap<(NodeId, Timestamp), Vec<usize>>,
}

impl DirectedLineGraph {
    /// `m`, one node per temporal edge. Node `i` is `g.edges()[i]`.
    pub fn node_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arc_count(&self) -> usize {
        self.adjacency.nnz()
    }

    pub fn adjacency(&self) -> &SparseMatrix {
        &self.adjacency
    }

    pub fn temporal_edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn temporal_node_count(&self) -> usize {
        self.temporal_nodes
    }

    pub fn delta(&self) -> Timestamp {
        self.delta
    }

    /// Successors of line-graph node `x` with arc weights.
    pub fn successors(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (cols, vals) = self.adjacency.row(x);
        cols.iter().zip(vals).map(|(&c, &w)| (c as usize, w))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |x| self.successors(x).map(move |(y, w)| (x, y, w)))
    }

    /// Line-graph nodes for the edges leaving `v` at time `t`.
    pub fn x_out(&self, v: NodeId, t: Timestamp) -> &[usize] {
        self.x_out.get(&(v, t)).map_or(&[], Vec::as_slice)
    }

    /// Line-graph nodes for the edges arriving at `v` at time `t` (start time `t - delta`).
    pub fn x_in(&self, v: NodeId, t: Timestamp) -> &[usize] {
        self.x_in.get(&(v, t)).map_or(&[], Vec::as_slice)
    }

    pub fn x_out_buckets(&self) -> &BTreeMap<(NodeId, Timestamp), Vec<usize>> {
        &self.x_out
    }

    pub fn x_in_buckets(&self) -> &BTreeMap<(NodeId, Timestamp), Vec<usize>> {
        &self.x_in
    }

    pub fn is_acyclic(&self) -> bool {
        self.adjacency.is_acyclic()
    }

    /// Graphviz rendering with nodes named `n^t_{uv}`.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let name = |x: usize| {
            let e = &self.edges[x];
            format!("n^{}_{{{}{}}}", e.t, labels[e.src.index()], labels[e.dst.index()])
        };
        let mut out = String::from("digraph dlg {\n");
        for x in 0..self.node_count() {
            let _ = writeln!(out, "  {x} [label=\"{}\"];", name(x));
        }
        for (x, y, w) in self.arcs() {
            let _ = writeln!(out, "  {x} -> {y} [label=\"{w}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the weighted line graph.
///
/// Per middle node, incoming edges sorted by arrival and outgoing edges sorted
/// by start are merged, so each incoming edge's successors are a suffix of the
/// outgoing list found by a monotone pointer.
pub fn expand(g: &TemporalGraph, phi: &WeightFunction) -> DirectedLineGraph {
    let n = g.node_count();
    let m = g.edge_count();
    let delta = g.delta();
    let edges = g.edges();

    // Edge order is chronological, so both lists come out sorted.
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        incoming[e.dst.index()].push(i);
        outgoing[e.src.index()].push(i);
    }

    // First index in `outgoing[dst]` reachable from each edge.
    let mut first_successor = vec![0usize; m];
    let mut offsets = vec![0usize; m + 1];
    for v in 0..n {
        let outs = &outgoing[v];
        let mut p = 0;
        for &i in &incoming[v] {
            let arrival = edges[i].t + delta;
            while p < outs.len() && edges[outs[p]].t < arrival {
                p += 1;
            }
            first_successor[i] = p;
            offsets[i + 1] = outs.len() - p;
        }
    }
    for i in 0..m {
        offsets[i + 1] += offsets[i];
    }

    let arcs = offsets[m];
    let mut cols = Vec::with_capacity(arcs);
    let mut vals = Vec::with_capacity(arcs);
    for (i, e) in edges.iter().enumerate() {
        let arrival = e.t + delta;
        for &j in &outgoing[e.dst.index()][first_successor[i]..] {
            cols.push(j as u32);
            vals.push(phi.value(arrival, edges[j].t));
        }
    }

    let mut x_out: BTreeMap<(NodeId, Timestamp), Vec<usize>> = BTreeMap::new();
    let mut x_in: BTreeMap<(NodeId, Timestamp), Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        x_out.entry((e.src, e.t)).or_default().push(i);
        x_in.entry((e.dst, e.t + delta)).or_default().push(i);
    }

    DirectedLineGraph {
        edges: edges.to_vec(),
        temporal_nodes: n,
        delta,
        adjacency: SparseMatrix::from_csr(m, offsets, cols, vals),
        x_out,
        x_in,
    }
}
