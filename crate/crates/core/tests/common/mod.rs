#![allow(dead_code)]

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;
use twc::tempgraph::{ingest, IngestOptions};
use twc::{TemporalEdge, TemporalGraph, Timestamp, WeightFunction};

pub const FIG1: &str = "a b 1\nb c 3\na c 2\nc d 3\nc e 3\nd e 4\ne f 5\nf g 2\ne g 5\n";

pub fn fig1(delta: Timestamp) -> TemporalGraph {
    let opts = IngestOptions {
        delta,
        ..Default::default()
    };
    ingest(FIG1.as_bytes(), &opts).unwrap().0
}

/// `m` uniformly random edges on `n >= 2` nodes with times in `0..=max_t`.
pub fn random_graph(rng: &mut StdRng, n: usize, m: usize, max_t: Timestamp, delta: Timestamp) -> TemporalGraph {
    let edges = (0..m)
        .map(|_| {
            let u = rng.random_range(0..n);
            let v = (u + rng.random_range(1..n)) % n;
            TemporalEdge::new(u, v, rng.random_range(0..=max_t))
        })
        .collect();
    TemporalGraph::new(n, edges, delta).unwrap()
}

pub fn arb_graph(max_n: usize, max_m: usize, max_t: Timestamp, deltas: Vec<Timestamp>) -> impl Strategy<Value = TemporalGraph> {
    (2..=max_n, prop::sample::select(deltas)).prop_flat_map(move |(n, delta)| {
        prop::collection::vec((0..n, 1..n, 0..=max_t), 0..=max_m).prop_map(move |raw| {
            let edges = raw
                .into_iter()
                .map(|(u, k, t)| TemporalEdge::new(u, (u + k) % n, t))
                .collect();
            TemporalGraph::new(n, edges, delta).unwrap()
        })
    })
}

pub fn arb_phi() -> impl Strategy<Value = WeightFunction> {
    prop::sample::select(vec![
        WeightFunction::One,
        WeightFunction::ConstantAlpha(0.5),
        WeightFunction::InverseWaiting,
    ])
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
