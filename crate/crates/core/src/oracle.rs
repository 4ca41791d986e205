//! Brute-force temporal walk enumeration.
//!
//! Ground truth for the optimized backends on small graphs. Walks are
//! enumerated by depth-first extension and the centrality is evaluated as a
//! plain double sum; nothing here shares code with the streaming or
//! line-graph paths.

use std::collections::BTreeMap;

use crate::centrality::{CentralityResult, Mode};
use crate::error::{Result, TwcError};
use crate::streamwalk::{Direction, WalkWeightMatrix};
use crate::tempgraph::{NodeId, TemporalGraph, Timestamp};
use crate::weightfn::{WeightConfig, WeightFunction};

pub const DEFAULT_WALK_CAP: usize = 10_000_000;

/// A temporal walk as a sequence of edge indices into `g.edges()`.
pub type Walk = Vec<usize>;

#[derive(Debug, Clone)]
pub struct WalkEnumeration {
    pub max_length: usize,
    walks: Vec<Walk>,
    by_start: BTreeMap<(NodeId, Timestamp), Vec<usize>>,
    by_end: BTreeMap<(NodeId, Timestamp), Vec<usize>>,
}

impl WalkEnumeration {
    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    /// Walks whose first edge leaves `v` at `t`.
    pub fn starting_at(&self, v: NodeId, t: Timestamp) -> impl Iterator<Item = &Walk> {
        self.by_start.get(&(v, t)).into_iter().flatten().map(|&i| &self.walks[i])
    }

    /// Walks whose last edge arrives at `v` at `t`.
    pub fn ending_at(&self, v: NodeId, t: Timestamp) -> impl Iterator<Item = &Walk> {
        self.by_end.get(&(v, t)).into_iter().flatten().map(|&i| &self.walks[i])
    }

    pub fn start_keys(&self) -> impl Iterator<Item = (NodeId, Timestamp)> + '_ {
        self.by_start.keys().copied()
    }

    pub fn end_keys(&self) -> impl Iterator<Item = (NodeId, Timestamp)> + '_ {
        self.by_end.keys().copied()
    }

    /// The walks of length at most `max_length`.
    pub fn restricted_to(&self, max_length: usize) -> WalkEnumeration {
        let mut new_index = vec![usize::MAX; self.walks.len()];
        let mut walks = Vec::new();
        for (i, w) in self.walks.iter().enumerate() {
            if w.len() <= max_length {
                new_index[i] = walks.len();
                walks.push(w.clone());
            }
        }
        let remap = |m: &BTreeMap<(NodeId, Timestamp), Vec<usize>>| {
            m.iter()
                .filter_map(|(&k, ids)| {
                    let kept: Vec<usize> = ids.iter().map(|&i| new_index[i]).filter(|&i| i != usize::MAX).collect();
                    (!kept.is_empty()).then_some((k, kept))
                })
                .collect()
        };
        WalkEnumeration {
            max_length: max_length.min(self.max_length),
            by_start: remap(&self.by_start),
            by_end: remap(&self.by_end),
            walks,
        }
    }

    /// `Φ`-weight of a walk: product of `Φ(t_i + delta, t_{i+1})`.
    pub fn weight(&self, g: &TemporalGraph, walk: &[usize], phi: &WeightFunction) -> f64 {
        let e = g.edges();
        let mut w = 1.0;
        for pair in walk.windows(2) {
            let arrival = e[pair[0]].t + g.delta();
            w *= phi.eval(arrival, e[pair[1]].t).expect("enumerated walks respect time");
        }
        w
    }

    /// Per-(node, time) sums of walk weights, in matrix form.
    pub fn weight_matrix(&self, g: &TemporalGraph, direction: Direction, phi: &WeightFunction) -> WalkWeightMatrix {
        let buckets = match direction {
            Direction::Incoming => &self.by_end,
            Direction::Outgoing => &self.by_start,
        };
        let mut rows = vec![Vec::new(); g.node_count()];
        for (&(v, t), walks) in buckets {
            let total: f64 = walks.iter().map(|&i| self.weight(g, &self.walks[i], phi)).sum();
            rows[v.index()].push((t, total));
        }
        WalkWeightMatrix::from_rows(direction, rows).expect("BTreeMap keys are ascending")
    }
}

pub fn enumerate_walks(g: &TemporalGraph, max_length: usize) -> Result<WalkEnumeration> {
    enumerate_walks_capped(g, max_length, DEFAULT_WALK_CAP)
}

/// All temporal walks of length `1..=max_length`, failing once more than `cap` are found.
pub fn enumerate_walks_capped(g: &TemporalGraph, max_length: usize, cap: usize) -> Result<WalkEnumeration> {
    if max_length == 0 {
        return Err(TwcError::Config("walk enumeration needs max_length >= 1".into()));
    }
    let edges = g.edges();
    let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (i, e) in edges.iter().enumerate() {
        leaving[e.src.index()].push(i);
    }

    let mut walks: Vec<Walk> = Vec::new();
    let mut stack: Vec<Walk> = (0..edges.len()).rev().map(|i| vec![i]).collect();
    while let Some(walk) = stack.pop() {
        if walks.len() >= cap {
            return Err(TwcError::Capacity(format!(
                "more than {cap} walks of length <= {max_length}; lower --max-length"
            )));
        }
        if walk.len() < max_length {
            let last = edges[*walk.last().unwrap()];
            let arrival = last.t + g.delta();
            for &next in leaving[last.dst.index()].iter().rev() {
                if edges[next].t >= arrival {
                    let mut longer = walk.clone();
                    longer.push(next);
                    stack.push(longer);
                }
            }
        }
        walks.push(walk);
    }

    let mut by_start: BTreeMap<(NodeId, Timestamp), Vec<usize>> = BTreeMap::new();
    let mut by_end: BTreeMap<(NodeId, Timestamp), Vec<usize>> = BTreeMap::new();
    for (i, w) in walks.iter().enumerate() {
        let first = edges[w[0]];
        let last = edges[*w.last().unwrap()];
        by_start.entry((first.src, first.t)).or_default().push(i);
        by_end.entry((last.dst, last.t + g.delta())).or_default().push(i);
    }

    Ok(WalkEnumeration {
        max_length,
        walks,
        by_start,
        by_end,
    })
}

/// Walk length bound for strict walks: the number of distinct timestamps.
pub fn strict_length_bound(g: &TemporalGraph) -> Option<usize> {
    if g.delta() == 0 {
        return None;
    }
    let mut ts: Vec<Timestamp> = g.edges().iter().map(|e| e.t).collect();
    ts.dedup();
    Some(ts.len().max(1))
}

/// Centrality by explicit summation over enumerated walk pairs.
pub fn oracle_centrality(g: &TemporalGraph, config: &WeightConfig, max_length: usize) -> Result<CentralityResult> {
    let walks = enumerate_walks(g, max_length)?;
    Ok(oracle_centrality_from(g, &walks, config))
}

pub fn oracle_centrality_from(g: &TemporalGraph, walks: &WalkEnumeration, config: &WeightConfig) -> CentralityResult {
    let mut scores = vec![0.0; g.node_count()];
    let ends: Vec<_> = walks.end_keys().collect();
    let starts: Vec<_> = walks.start_keys().collect();
    for &(v, t1) in &ends {
        let w_in: f64 = walks.ending_at(v, t1).map(|w| walks.weight(g, w, &config.phi_in)).sum();
        for &(u, t2) in &starts {
            if u != v || t2 < t1 {
                continue;
            }
            let w_out: f64 = walks.starting_at(u, t2).map(|w| walks.weight(g, w, &config.phi_out)).sum();
            scores[v.index()] += w_in * w_out * config.phi_m.eval(t1, t2).expect("t1 <= t2");
        }
    }
    CentralityResult::from_scores(Mode::Twc, scores)
}
