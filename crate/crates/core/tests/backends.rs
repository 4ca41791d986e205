mod common;

use common::{arb_graph, arb_phi, fig1, rel_close};
use proptest::prelude::*;
use twc::centrality::{combine_fast_instrumented, combine_general};
use twc::linegraph::expand;
use twc::oracle::{enumerate_walks, strict_length_bound};
use twc::pipeline::{compute, walk_matrices};
use twc::streamwalk::{compute_incoming_instrumented, compute_outgoing_instrumented};
use twc::walkalgebra::{approx_counts, dag_counts, exact_counts, project, truncated_counts, ApproxOptions, ExactOptions};
use twc::{Direction, Method, Mode, NodeId, PipelineOptions, TemporalEdge, TemporalGraph, WalkWeightMatrix, WeightConfig, WeightFunction};

fn same_matrix(a: &WalkWeightMatrix, b: &WalkWeightMatrix, rel: f64) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.node_count(), b.node_count());
    for (ra, rb) in a.rows().iter().zip(b.rows()) {
        prop_assert_eq!(ra.len(), rb.len(), "{:?} vs {:?}", ra, rb);
        for (x, y) in ra.iter().zip(rb) {
            prop_assert_eq!(x.0, y.0);
            prop_assert!(rel_close(x.1, y.1, rel), "{:?} vs {:?}", x, y);
        }
    }
    Ok(())
}

fn shuffled(g: &TemporalGraph, seed: u64) -> TemporalGraph {
    let mut edges: Vec<TemporalEdge> = g.edges().to_vec();
    // deterministic Fisher-Yates with an LCG
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    for i in (1..edges.len()).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        edges.swap(i, (s >> 33) as usize % (i + 1));
    }
    TemporalGraph::with_labels(g.labels().to_vec(), edges, g.delta()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pipelines_agree_with_oracle(
        g in arb_graph(8, 20, 10, vec![1, 2]),
        phi in arb_phi(),
        phi_m in prop::sample::select(vec![WeightFunction::One, WeightFunction::InverseWaiting]),
    ) {
        let config = WeightConfig::symmetric(phi, phi_m);
        let (oracle, _) = compute(&g, &config, Mode::Twc, &PipelineOptions::with_method(Method::Oracle)).unwrap();
        for m in [Method::Stream, Method::Exact, Method::Approx, Method::Dag] {
            let mut opts = PipelineOptions::with_method(m);
            opts.approx.epsilon = 1e-12;
            let (r, _) = compute(&g, &config, Mode::Twc, &opts).unwrap();
            for (a, b) in r.scores().iter().zip(oracle.scores()) {
                prop_assert!(rel_close(*a, *b, 1e-8), "{}: {} vs oracle {}", m, a, b);
            }
        }
    }

    #[test]
    fn stream_matrices_match_enumeration(g in arb_graph(8, 20, 10, vec![1, 3]), phi in arb_phi()) {
        let walks = enumerate_walks(&g, strict_length_bound(&g).unwrap()).unwrap();
        let (win, _) = compute_incoming_instrumented(&g, &phi).unwrap();
        let (wout, _) = compute_outgoing_instrumented(&g, &phi).unwrap();
        same_matrix(&win, &walks.weight_matrix(&g, Direction::Incoming, &phi), 1e-12)?;
        same_matrix(&wout, &walks.weight_matrix(&g, Direction::Outgoing, &phi), 1e-12)?;
    }

    /// Every temporal walk of length k + 1 is a line-graph path of length k with the same weight.
    #[test]
    fn walks_are_line_graph_paths(g in arb_graph(7, 16, 8, vec![0, 1, 2]), phi in arb_phi()) {
        let dlg = expand(&g, &phi);
        let max_len = 4;
        let walks = enumerate_walks(&g, max_len).unwrap();
        let mut by_len = vec![0.0; max_len + 1];
        for w in walks.walks() {
            let mut path_weight = 1.0;
            for pair in w.windows(2) {
                let arc = dlg.successors(pair[0]).find(|&(y, _)| y == pair[1]);
                prop_assert!(arc.is_some(), "walk step {:?} missing from line graph", pair);
                path_weight *= arc.unwrap().1;
            }
            prop_assert!(rel_close(path_weight, walks.weight(&g, w, &phi), 1e-12));
            by_len[w.len()] += path_weight;
        }
        // sum_x (A^k 1)_x is the total weight of line-graph paths with k arcs
        let mut previous = 0.0;
        for (k, &want) in by_len.iter().enumerate().skip(1) {
            let total: f64 = truncated_counts(&dlg, Direction::Outgoing, k - 1).counts.iter().sum();
            prop_assert!(rel_close(total - previous, want, 1e-9), "length {}: {} vs {}", k, total - previous, want);
            previous = total;
        }
    }

    #[test]
    fn projection_matches_stream(g in arb_graph(10, 30, 20, vec![1, 2]), phi in arb_phi()) {
        let dlg = expand(&g, &phi);
        for dir in [Direction::Incoming, Direction::Outgoing] {
            let projected = project(&dlg, &dag_counts(&dlg, dir).unwrap()).unwrap();
            let (streamed, _) = match dir {
                Direction::Incoming => compute_incoming_instrumented(&g, &phi).unwrap(),
                Direction::Outgoing => compute_outgoing_instrumented(&g, &phi).unwrap(),
            };
            same_matrix(&projected, &streamed, 1e-10)?;
        }
    }

    /// Both matrices sum to the total weight of all walks.
    #[test]
    fn incoming_and_outgoing_totals_agree(g in arb_graph(10, 30, 20, vec![1, 2]), phi in arb_phi()) {
        let (win, _) = compute_incoming_instrumented(&g, &phi).unwrap();
        let (wout, _) = compute_outgoing_instrumented(&g, &phi).unwrap();
        let total = |m: &WalkWeightMatrix| -> f64 { m.rows().iter().flatten().map(|e| e.1).sum() };
        prop_assert!(rel_close(total(&win), total(&wout), 1e-10));
    }

    #[test]
    fn input_order_is_irrelevant(g in arb_graph(10, 30, 20, vec![1, 2]), seed in any::<u64>(), phi in arb_phi()) {
        let h = shuffled(&g, seed);
        let config = WeightConfig::symmetric(phi, WeightFunction::One);
        let opts = PipelineOptions::with_method(Method::Stream);
        let (a, _) = compute(&g, &config, Mode::Twc, &opts).unwrap();
        let (b, _) = compute(&h, &config, Mode::Twc, &opts).unwrap();
        for (x, y) in a.scores().iter().zip(b.scores()) {
            if phi.is_one() {
                prop_assert_eq!(x, y);
            } else {
                prop_assert!(rel_close(*x, *y, 1e-12));
            }
        }
    }

    #[test]
    fn work_counters_within_bounds(g in arb_graph(10, 30, 20, vec![1, 2, 5]), phi in arb_phi()) {
        let stats = g.stats();
        let m = g.edge_count() as u64;
        let (win, fwd) = compute_incoming_instrumented(&g, &phi).unwrap();
        let (wout, bwd) = compute_outgoing_instrumented(&g, &phi).unwrap();
        prop_assert!(fwd.inner_iterations <= m * stats.tau_in_max as u64);
        prop_assert!(bwd.inner_iterations <= m * stats.tau_out_max as u64);
        let (_, c) = combine_fast_instrumented(&win, &wout).unwrap();
        prop_assert_eq!(c.entries_touched, (win.nnz() + wout.nnz()) as u64);
    }

    #[test]
    fn general_combine_with_unit_weight_is_fast_combine(g in arb_graph(10, 30, 20, vec![1, 2]), phi in arb_phi()) {
        let (win, _) = compute_incoming_instrumented(&g, &phi).unwrap();
        let (wout, _) = compute_outgoing_instrumented(&g, &phi).unwrap();
        let (fast, _) = combine_fast_instrumented(&win, &wout).unwrap();
        let general = combine_general(&win, &wout, &WeightFunction::One).unwrap();
        prop_assert_eq!(fast.scores(), general.scores());
    }

    #[test]
    fn non_strict_exact_matches_approx(
        g in arb_graph(7, 16, 4, vec![0]),
        alpha in prop::sample::select(vec![0.01, 0.05, 0.1, 0.2]),
    ) {
        let dlg = expand(&g, &WeightFunction::ConstantAlpha(alpha));
        for dir in [Direction::Incoming, Direction::Outgoing] {
            let exact = match exact_counts(&dlg, dir, &ExactOptions::default()) {
                Ok(x) => x,
                // spectral radius too close to 1 for the guard
                Err(twc::TwcError::Divergence(_)) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            let opts = ApproxOptions { epsilon: 1e-12, ..ApproxOptions::default() };
            let (approx, _) = approx_counts(&dlg, dir, &opts).unwrap();
            for (a, b) in exact.counts.iter().zip(&approx.counts) {
                prop_assert!(rel_close(*a, *b, 1e-9), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn method_choice_does_not_change_walk_matrices(g in arb_graph(8, 20, 10, vec![1]), phi in arb_phi()) {
        let config = WeightConfig::symmetric(phi, WeightFunction::One);
        let (si, so, _) = walk_matrices(&g, &config, &PipelineOptions::with_method(Method::Stream)).unwrap();
        for m in [Method::Exact, Method::Dag, Method::Oracle] {
            let (i, o, _) = walk_matrices(&g, &config, &PipelineOptions::with_method(m)).unwrap();
            same_matrix(&si, &i, 1e-10)?;
            same_matrix(&so, &o, 1e-10)?;
        }
    }
}

#[test]
fn fig1_scores_match_enumeration_exactly() {
    let g = fig1(1);
    let config = WeightConfig::default();
    let (stream, _) = compute(&g, &config, Mode::Twc, &PipelineOptions::with_method(Method::Stream)).unwrap();
    let (oracle, _) = compute(&g, &config, Mode::Twc, &PipelineOptions::with_method(Method::Oracle)).unwrap();
    assert_eq!(stream.scores(), oracle.scores());
    let ranking: Vec<&str> = stream.ranking().into_iter().map(|v: NodeId| g.label(v)).collect();
    assert_eq!(&ranking[..4], &["e", "c", "d", "b"]);
}
