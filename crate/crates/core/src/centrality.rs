//! Combining `W^in` and `W^out` into per-node scores.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, TwcError};
use crate::streamwalk::{Direction, WalkWeightMatrix};
use crate::tempgraph::{NodeId, TemporalGraph, Timestamp};
use crate::weightfn::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Twc,
    Katz,
    DegreeOut,
    DegreeIn,
}

/// Scores over a node universe, with a ranking by descending score and
/// ascending node id among ties.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityResult {
    pub mode: Mode,
    nodes: Vec<NodeId>,
    scores: Vec<f64>,
    ranking: Vec<usize>,
}

impl CentralityResult {
    /// Scores for nodes `0..scores.len()`.
    pub fn from_scores(mode: Mode, scores: Vec<f64>) -> Self {
        let nodes = (0..scores.len()).map(NodeId::from).collect();
        Self::build(mode, nodes, scores)
    }

    /// Scores for an arbitrary node subset.
    pub fn from_entries(mode: Mode, mut entries: Vec<(NodeId, f64)>) -> Result<Self> {
        entries.sort_by_key(|&(v, _)| v);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(TwcError::Contract("duplicate node in centrality entries".into()));
        }
        let (nodes, scores) = entries.into_iter().unzip();
        Ok(Self::build(mode, nodes, scores))
    }

    fn build(mode: Mode, nodes: Vec<NodeId>, scores: Vec<f64>) -> Self {
        let mut ranking: Vec<usize> = (0..nodes.len()).collect();
        ranking.sort_by(|&a, &b| {
            scores[b]
                .partial_cmp(&scores[a])
                .unwrap_or(Ordering::Equal)
                .then(nodes[a].cmp(&nodes[b]))
        });
        CentralityResult {
            mode,
            nodes,
            scores,
            ranking,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node universe in ascending id order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Scores parallel to [`Self::nodes`].
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn score(&self, v: NodeId) -> Option<f64> {
        self.nodes.binary_search(&v).ok().map(|i| self.scores[i])
    }

    /// Nodes from highest to lowest score.
    pub fn ranking(&self) -> Vec<NodeId> {
        self.ranking.iter().map(|&i| self.nodes[i]).collect()
    }

    /// `(rank, node, score)` in ranking order; equal scores share the smallest rank.
    pub fn ranked(&self) -> Vec<(usize, NodeId, f64)> {
        let mut out = Vec::with_capacity(self.len());
        let mut rank = 0;
        for (pos, &i) in self.ranking.iter().enumerate() {
            if pos == 0 || self.scores[i] != self.scores[self.ranking[pos - 1]] {
                rank = pos + 1;
            }
            out.push((rank, self.nodes[i], self.scores[i]));
        }
        out
    }

    /// The first `k` nodes of the ranking, as a result of their own.
    pub fn restrict_to_top(&self, k: usize) -> CentralityResult {
        let entries = self.ranking.iter().take(k).map(|&i| (self.nodes[i], self.scores[i])).collect();
        Self::from_entries(self.mode, entries).expect("ranking holds distinct nodes")
    }
}

/// Work counters for [`combine_fast_instrumented`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CombineStats {
    pub entries_touched: u64,
}

fn check_pair(win: &WalkWeightMatrix, wout: &WalkWeightMatrix) -> Result<()> {
    if win.direction() != Direction::Incoming || wout.direction() != Direction::Outgoing {
        return Err(TwcError::Contract("expected an incoming and an outgoing matrix".into()));
    }
    if win.node_count() != wout.node_count() {
        return Err(TwcError::Contract(format!(
            "matrices cover {} and {} nodes",
            win.node_count(),
            wout.node_count()
        )));
    }
    Ok(())
}

/// Scores for `Φ_m ≡ 1` in one merged pass per node.
pub fn combine_fast(win: &WalkWeightMatrix, wout: &WalkWeightMatrix) -> Result<CentralityResult> {
    combine_fast_instrumented(win, wout).map(|(r, _)| r)
}

pub fn combine_fast_instrumented(
    win: &WalkWeightMatrix,
    wout: &WalkWeightMatrix,
) -> Result<(CentralityResult, CombineStats)> {
    check_pair(win, wout)?;
    let per_node: Vec<(f64, u64)> = (0..win.node_count())
        .into_par_iter()
        .map(|v| merge_node(win.row(NodeId::from(v)), wout.row(NodeId::from(v))))
        .collect();
    let touched = per_node.iter().map(|&(_, t)| t).sum();
    let scores = per_node.into_iter().map(|(s, _)| s).collect();
    Ok((
        CentralityResult::from_scores(Mode::Twc, scores),
        CombineStats {
            entries_touched: touched,
        },
    ))
}

/// Walks the merged ascending keys; at equal keys the incoming entry is
/// added first so that `t1 == t2` pairs count.
fn merge_node(ins: &[(Timestamp, f64)], outs: &[(Timestamp, f64)]) -> (f64, u64) {
    let (mut i, mut j) = (0, 0);
    let mut in_sum = 0.0;
    let mut score = 0.0;
    let mut touched = 0;
    while j < outs.len() {
        if i < ins.len() && ins[i].0 <= outs[j].0 {
            in_sum += ins[i].1;
            i += 1;
        } else {
            score += outs[j].1 * in_sum;
            j += 1;
        }
        touched += 1;
    }
    // Incoming entries after the last start time cannot contribute.
    touched += (ins.len() - i) as u64;
    (score, touched)
}

/// Scores for arbitrary `Φ_m`, evaluating every admissible `(t1, t2)` pair.
pub fn combine_general(
    win: &WalkWeightMatrix,
    wout: &WalkWeightMatrix,
    phi_m: &WeightFunction,
) -> Result<CentralityResult> {
    check_pair(win, wout)?;
    let scores = (0..win.node_count())
        .into_par_iter()
        .map(|v| {
            let ins = win.row(NodeId::from(v));
            let mut score = 0.0;
            for &(t2, w_out) in wout.row(NodeId::from(v)) {
                // Ascending-t1 accumulation mirrors the running sum of the fast path.
                let mut weighted_in = 0.0;
                for &(t1, w_in) in ins.iter().take_while(|&&(t1, _)| t1 <= t2) {
                    weighted_in += w_in * phi_m.value(t1, t2);
                }
                score += w_out * weighted_in;
            }
            score
        })
        .collect();
    Ok(CentralityResult::from_scores(Mode::Twc, scores))
}

/// Temporal Katz scores: the total outgoing walk weight per node.
pub fn katz_mode(wout: &WalkWeightMatrix) -> CentralityResult {
    let scores = (0..wout.node_count()).map(|v| wout.total(NodeId::from(v))).collect();
    CentralityResult::from_scores(Mode::Katz, scores)
}

/// Number of temporal edges leaving (`Outgoing`) or entering (`Incoming`) each node.
pub fn degree_mode(g: &TemporalGraph, direction: Direction) -> CentralityResult {
    let mut deg = vec![0.0; g.node_count()];
    for e in g.edges() {
        let v = match direction {
            Direction::Outgoing => e.src,
            Direction::Incoming => e.dst,
        };
        deg[v.index()] += 1.0;
    }
    let mode = match direction {
        Direction::Outgoing => Mode::DegreeOut,
        Direction::Incoming => Mode::DegreeIn,
    };
    CentralityResult::from_scores(mode, deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streamwalk::{compute_incoming, compute_outgoing};
    use crate::tempgraph::tests::fig1;
    use crate::tempgraph::TemporalEdge;

    fn labeled(g: &TemporalGraph, r: &CentralityResult) -> Vec<(String, f64)> {
        r.ranking().into_iter().map(|v| (g.label(v).to_owned(), r.score(v).unwrap())).collect()
    }

    fn fig1_matrices() -> (TemporalGraph, WalkWeightMatrix, WalkWeightMatrix) {
        let g = fig1(1);
        let win = compute_incoming(&g, &WeightFunction::One).unwrap();
        let wout = compute_outgoing(&g, &WeightFunction::One).unwrap();
        (g, win, wout)
    }

    #[test]
    fn fig1_fast_scores_and_ranking() {
        let (g, win, wout) = fig1_matrices();
        let r = combine_fast(&win, &wout).unwrap();
        let got = labeled(&g, &r);
        let want = [("e", 10.0), ("c", 7.0), ("d", 6.0), ("b", 1.0), ("a", 0.0), ("f", 0.0), ("g", 0.0)];
        assert_eq!(got.len(), want.len());
        for ((l, s), (wl, ws)) in got.iter().zip(want) {
            assert_eq!((l.as_str(), *s), (wl, ws));
        }
        let ranks: Vec<usize> = r.ranked().iter().map(|x| x.0).collect();
        assert_eq!(ranks, vec![1, 2, 3, 4, 5, 5, 5]);
    }

    #[test]
    fn single_edge_scores_zero() {
        let g = TemporalGraph::new(2, vec![TemporalEdge::new(0usize, 1usize, 3)], 1).unwrap();
        let win = compute_incoming(&g, &WeightFunction::One).unwrap();
        let wout = compute_outgoing(&g, &WeightFunction::One).unwrap();
        assert_eq!(combine_fast(&win, &wout).unwrap().scores(), &[0.0, 0.0]);
        let k = katz_mode(&wout);
        assert_eq!(k.scores(), &[1.0, 0.0]);
    }

    #[test]
    fn general_matches_fast_for_unit_phi() {
        let (_, win, wout) = fig1_matrices();
        assert_eq!(
            combine_general(&win, &wout, &WeightFunction::One).unwrap(),
            combine_fast(&win, &wout).unwrap()
        );
    }

    #[test]
    fn general_with_waiting_weight() {
        let (g, win, wout) = fig1_matrices();
        let r = combine_general(&win, &wout, &WeightFunction::InverseWaiting).unwrap();
        // e: W^in(e,4)=2, W^in(e,5)=3, W^out(e,5)=2 -> 2*2*(1/2) + 3*2*1
        assert_eq!(r.score(g.node_by_label("e").unwrap()), Some(8.0));
        assert_eq!(r.score(g.node_by_label("b").unwrap()), Some(0.5));
        assert_eq!(r.score(g.node_by_label("a").unwrap()), Some(0.0));
    }

    #[test]
    fn phi_m_scaling_scales_scores() {
        let (_, win, wout) = fig1_matrices();
        let base = combine_general(&win, &wout, &WeightFunction::One).unwrap();
        let scaled = combine_general(&win, &wout, &WeightFunction::ConstantAlpha(0.25)).unwrap();
        for (a, b) in base.scores().iter().zip(scaled.scores()) {
            assert_eq!(a * 0.25, *b);
        }
        assert_eq!(base.ranking(), scaled.ranking());
    }

    #[test]
    fn fast_touches_each_entry_once() {
        let (_, win, wout) = fig1_matrices();
        let (_, stats) = combine_fast_instrumented(&win, &wout).unwrap();
        assert_eq!(stats.entries_touched, (win.nnz() + wout.nnz()) as u64);
    }

    #[test]
    fn mismatched_matrices_rejected() {
        let (_, win, wout) = fig1_matrices();
        let small = WalkWeightMatrix::new(Direction::Outgoing, 3);
        assert!(matches!(combine_fast(&win, &small), Err(TwcError::Contract(_))));
        assert!(matches!(combine_fast(&wout, &win), Err(TwcError::Contract(_))));
        assert!(combine_general(&win, &small, &WeightFunction::One).is_err());
    }

    #[test]
    fn katz_and_degree_on_fig1() {
        let (g, _, wout) = fig1_matrices();
        let k = katz_mode(&wout);
        assert_eq!(k.score(g.node_by_label("c").unwrap()), Some(7.0));
        assert_eq!(k.score(g.node_by_label("g").unwrap()), Some(0.0));

        let out = degree_mode(&g, Direction::Outgoing);
        assert_eq!(out.scores(), &[2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 0.0]);
        let inc = degree_mode(&g, Direction::Incoming);
        let top: Vec<&str> = inc
            .ranked()
            .into_iter()
            .filter(|x| x.0 == 1)
            .map(|x| g.label(x.1))
            .collect();
        assert_eq!(top, vec!["c", "e", "g"]);
        assert!(degree_mode(&TemporalGraph::empty(1), Direction::Incoming).is_empty());
    }

    #[test]
    fn node_with_no_incoming_walks_scores_zero() {
        let mut win = WalkWeightMatrix::new(Direction::Incoming, 1);
        let mut wout = WalkWeightMatrix::new(Direction::Outgoing, 1);
        wout.accumulate_sorted(NodeId(0), 4, 3.0);
        assert_eq!(combine_general(&win, &wout, &WeightFunction::InverseWaiting).unwrap().scores(), &[0.0]);
        // and an incoming walk arriving too late
        win.accumulate_sorted(NodeId(0), 5, 1.0);
        assert_eq!(combine_fast(&win, &wout).unwrap().scores(), &[0.0]);
    }

    #[test]
    fn ranking_ties_by_node_id() {
        let r = CentralityResult::from_scores(Mode::Twc, vec![1.0, 3.0, 1.0, 3.0]);
        assert_eq!(r.ranking(), vec![NodeId(1), NodeId(3), NodeId(0), NodeId(2)]);
        let ranks: Vec<usize> = r.ranked().iter().map(|x| x.0).collect();
        assert_eq!(ranks, vec![1, 1, 3, 3]);
        let top = r.restrict_to_top(3);
        assert_eq!(top.nodes(), &[NodeId(0), NodeId(1), NodeId(3)]);
    }
}
