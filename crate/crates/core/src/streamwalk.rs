//! Edge-stream computation of the walk weight matrices `W^in` and `W^out`.
//!
//! The forward pass visits edges in chronological order. When edge `(u, v, t)`
//! is processed, every entry of `W^in(u, ·)` keyed at or before `t` is final,
//! because it came from an edge that started at least `delta > 0` earlier.
//! Keys of `W^in` are arrival times, so they already include `delta`; the
//! test `t >= t'` therefore encodes `t_i + delta <= t_{i+1}`.
//!
//! The backward pass is the mirror image over start times.

use serde::Serialize;

use crate::error::{Result, TwcError};
use crate::tempgraph::{NodeId, TemporalGraph, Timestamp};
use crate::weightfn::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Incoming,
    Outgoing,
}

/// Per-node sparse map `time -> weight` with ascending keys.
///
/// Incoming matrices are keyed by arrival time `t + delta`, outgoing ones by
/// start time `t`. Every stored weight is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkWeightMatrix {
    direction: Direction,
    rows: Vec<Vec<(Timestamp, f64)>>,
}

impl WalkWeightMatrix {
    pub fn new(direction: Direction, node_count: usize) -> Self {
        WalkWeightMatrix {
            direction,
            rows: vec![Vec::new(); node_count],
        }
    }

    /// Builds a matrix from per-node rows, which must have strictly ascending keys.
    pub fn from_rows(direction: Direction, rows: Vec<Vec<(Timestamp, f64)>>) -> Result<Self> {
        for (v, row) in rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(TwcError::Contract(format!("row of node {v} is not strictly ascending")));
            }
        }
        Ok(WalkWeightMatrix { direction, rows })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, v: NodeId) -> &[(Timestamp, f64)] {
        &self.rows[v.index()]
    }

    pub fn rows(&self) -> &[Vec<(Timestamp, f64)>] {
        &self.rows
    }

    /// Entry at `(v, t)`, zero when absent.
    pub fn get(&self, v: NodeId, t: Timestamp) -> f64 {
        let row = self.row(v);
        match row.binary_search_by_key(&t, |&(k, _)| k) {
            Ok(i) => row[i].1,
            Err(_) => 0.0,
        }
    }

    /// Total weight of walks ending (incoming) or starting (outgoing) at `v`.
    pub fn total(&self, v: NodeId) -> f64 {
        self.row(v).iter().map(|&(_, w)| w).sum()
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Adds `w` at key `t`, which must not precede the row's last key.
    #[inline]
    fn push_ascending(row: &mut Vec<(Timestamp, f64)>, t: Timestamp, w: f64) {
        match row.last_mut() {
            Some(last) if last.0 == t => last.1 += w,
            _ => {
                debug_assert!(row.last().is_none_or(|l| l.0 < t));
                row.push((t, w));
            }
        }
    }

    pub(crate) fn accumulate_sorted(&mut self, v: NodeId, t: Timestamp, w: f64) {
        Self::push_ascending(&mut self.rows[v.index()], t, w);
    }
}

/// Instrumentation for one streaming pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PassStats {
    /// Matrix entries visited by the inner loop, summed over all edges.
    pub inner_iterations: u64,
}

fn require_strict(g: &TemporalGraph) -> Result<()> {
    if g.delta() == 0 {
        return Err(TwcError::Config(
            "the streaming backend needs delta > 0; use a line-graph backend for delta = 0".into(),
        ));
    }
    Ok(())
}

pub fn compute_incoming(g: &TemporalGraph, phi_in: &WeightFunction) -> Result<WalkWeightMatrix> {
    compute_incoming_instrumented(g, phi_in).map(|(m, _)| m)
}

pub fn compute_outgoing(g: &TemporalGraph, phi_out: &WeightFunction) -> Result<WalkWeightMatrix> {
    compute_outgoing_instrumented(g, phi_out).map(|(m, _)| m)
}

/// Forward pass over the edge stream.
pub fn compute_incoming_instrumented(
    g: &TemporalGraph,
    phi_in: &WeightFunction,
) -> Result<(WalkWeightMatrix, PassStats)> {
    require_strict(g)?;
    let delta = g.delta();
    let mut rows: Vec<Vec<(Timestamp, f64)>> = vec![Vec::new(); g.node_count()];
    let mut stats = PassStats::default();

    for e in g.edges() {
        let mut extended = 0.0;
        // Rows are ascending, so the admissible t' <= t form a prefix.
        for &(t_prev, w) in &rows[e.src.index()] {
            stats.inner_iterations += 1;
            if t_prev > e.t {
                break;
            }
            extended += w * phi_in.value(t_prev, e.t);
        }
        // Arrival times t + delta arrive in non-decreasing order.
        WalkWeightMatrix::push_ascending(&mut rows[e.dst.index()], e.t + delta, 1.0 + extended);
    }

    Ok((
        WalkWeightMatrix {
            direction: Direction::Incoming,
            rows,
        },
        stats,
    ))
}

/// Backward pass over the edge stream.
pub fn compute_outgoing_instrumented(
    g: &TemporalGraph,
    phi_out: &WeightFunction,
) -> Result<(WalkWeightMatrix, PassStats)> {
    require_strict(g)?;
    let delta = g.delta();
    // Built with descending keys, reversed at the end.
    let mut rows: Vec<Vec<(Timestamp, f64)>> = vec![Vec::new(); g.node_count()];
    let mut stats = PassStats::default();

    for e in g.edges().iter().rev() {
        let arrival = e.t + delta;
        let mut extended = 0.0;
        for &(t_next, w) in &rows[e.dst.index()] {
            stats.inner_iterations += 1;
            if t_next < arrival {
                break;
            }
            extended += w * phi_out.value(arrival, t_next);
        }
        let row = &mut rows[e.src.index()];
        match row.last_mut() {
            Some(last) if last.0 == e.t => last.1 += 1.0 + extended,
            _ => row.push((e.t, 1.0 + extended)),
        }
    }
    for row in &mut rows {
        row.reverse();
    }

    Ok((
        WalkWeightMatrix {
            direction: Direction::Outgoing,
            rows,
        },
        stats,
    ))
}
