//! Weighted walk counting on a static weighted digraph.
//!
//! For a weighted adjacency matrix `A`, the weighted number of walks of every
//! length starting at `x` is `[(I - A)^{-1} 1]_x`, provided the Neumann series
//! converges. Three routes compute it: a dense LU solve, the truncated series
//! `sum_k A^k 1`, and one relaxation per arc in topological order when the
//! graph is acyclic. Incoming counts use `A^T`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, TwcError};
use crate::linegraph::DirectedLineGraph;
use crate::streamwalk::{Direction, WalkWeightMatrix};

/// Rows at or above this dimension are multiplied in parallel.
const PARALLEL_ROWS: usize = 4096;

/// Square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are kept as separate entries.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; dim + 1];
        for &(r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(TwcError::Contract(format!("entry ({r}, {c}) outside a {dim}x{dim} matrix")));
            }
            if v.is_nan() || v < 0.0 {
                return Err(TwcError::Contract(format!("negative or NaN entry {v} at ({r}, {c})")));
            }
            counts[r + 1] += 1;
        }
        for i in 0..dim {
            counts[i + 1] += counts[i];
        }
        let mut cursor = counts.clone();
        let mut cols = vec![0u32; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        for &(r, c, v) in triplets {
            let k = cursor[r];
            cols[k] = c as u32;
            vals[k] = v;
            cursor[r] += 1;
        }
        Ok(SparseMatrix {
            dim,
            offsets: counts,
            cols,
            vals,
        })
    }

    pub(crate) fn from_csr(dim: usize, offsets: Vec<usize>, cols: Vec<u32>, vals: Vec<f64>) -> Self {
        debug_assert_eq!(offsets.len(), dim + 1);
        debug_assert_eq!(cols.len(), vals.len());
        SparseMatrix {
            dim,
            offsets,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                triplets.push((c as usize, i, v));
            }
        }
        // Entries were validated on the way in.
        SparseMatrix::from_triplets(self.dim, &triplets).expect("transpose of a valid matrix")
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        let row_dot = |i: usize| -> f64 {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(|(&c, &v)| v * x[c as usize]).sum()
        };
        if self.dim >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row_dot(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row_dot(i);
            }
        }
    }

    /// Kahn order over the sparsity pattern, or `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.dim];
        for &c in &self.cols {
            indegree[c as usize] += 1;
        }
        let mut order: Vec<usize> = (0..self.dim).filter(|&i| indegree[i] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &c in self.row(u).0 {
                let c = c as usize;
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    order.push(c);
                }
            }
        }
        (order.len() == self.dim).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

/// Weighted count of walks of every length (including 0) from or to each node.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkCountVector {
    pub direction: Direction,
    pub counts: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub iterations: usize,
    /// `‖A^k 1‖₁` after the last iteration.
    pub final_residual: f64,
    pub spectral_radius_estimate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    /// Largest dimension for which a dense solve is attempted.
    pub max_dim: usize,
    /// The spectral radius estimate must stay below `1 - margin`.
    pub margin: f64,
    pub power_iterations: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            max_dim: 20_000,
            margin: 0.01,
            power_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOptions {
    /// Stop once `‖A^k 1‖₁ < epsilon`.
    pub epsilon: f64,
    /// Abort when the increment norm exceeds its initial value and has not
    /// reached a new minimum for this many iterations.
    pub divergence_window: usize,
    pub max_iterations: usize,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            epsilon: 1e-9,
            divergence_window: 64,
            max_iterations: 1_000_000,
        }
    }
}

fn oriented(dlg: &DirectedLineGraph, direction: Direction) -> std::borrow::Cow<'_, SparseMatrix> {
    match direction {
        Direction::Outgoing => std::borrow::Cow::Borrowed(dlg.adjacency()),
        Direction::Incoming => std::borrow::Cow::Owned(dlg.adjacency().transpose()),
    }
}

/// Solves `(I - A) x = 1` (or the transposed system) with a dense LU factorization.
pub fn exact_counts(dlg: &DirectedLineGraph, direction: Direction, opts: &ExactOptions) -> Result<WalkCountVector> {
    let a = oriented(dlg, direction);
    let n = a.dim();
    if n > opts.max_dim {
        return Err(TwcError::Capacity(format!(
            "the exact backend is limited to {} line-graph nodes, got {n}; use the approx or stream backend",
            opts.max_dim
        )));
    }
    let rho = estimate_spectral_radius(&a, opts.power_iterations);
    let limit = 1.0 - opts.margin;
    if rho >= limit {
        return Err(TwcError::Divergence(format!(
            "spectral radius estimate {rho:.6} is not below {limit:.6}"
        )));
    }
    if n == 0 {
        return Ok(WalkCountVector {
            direction,
            counts: Vec::new(),
        });
    }

    let mut m = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        let (cols, vals) = a.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            m[(i, c as usize)] -= v;
        }
    }
    let x = m
        .lu()
        .solve(&DVector::from_element(n, 1.0))
        .ok_or_else(|| TwcError::Divergence("I - A is singular".into()))?;
    Ok(WalkCountVector {
        direction,
        counts: x.iter().copied().collect(),
    })
}

/// Fixed-point iteration `v <- A v; r <- r + v` from `v = r = 1` until `‖v‖₁ < epsilon`.
pub fn approx_counts(
    dlg: &DirectedLineGraph,
    direction: Direction,
    opts: &ApproxOptions,
) -> Result<(WalkCountVector, ConvergenceReport)> {
    if opts.epsilon.is_nan() || opts.epsilon <= 0.0 {
        return Err(TwcError::Config(format!("epsilon must be positive, got {}", opts.epsilon)));
    }
    let a = oriented(dlg, direction);
    let n = a.dim();
    let mut v = vec![1.0; n];
    let mut r = v.clone();
    let mut next = vec![0.0; n];

    let initial = n as f64;
    let mut norm = initial;
    let mut best = initial;
    let mut best_at = 0usize;
    let mut iterations = 0usize;

    while norm >= opts.epsilon {
        if iterations >= opts.max_iterations {
            return Err(TwcError::Divergence(format!(
                "no convergence after {iterations} iterations (residual {norm:e})"
            )));
        }
        a.mul_vec(&v, &mut next);
        std::mem::swap(&mut v, &mut next);
        for (ri, vi) in r.iter_mut().zip(&v) {
            *ri += vi;
        }
        iterations += 1;
        norm = v.iter().sum();

        if !norm.is_finite() {
            return Err(TwcError::Divergence(format!("residual overflowed after {iterations} iterations")));
        }
        if norm < best {
            best = norm;
            best_at = iterations;
        } else if norm > initial && iterations - best_at >= opts.divergence_window {
            return Err(TwcError::Divergence(format!(
                "residual {norm:e} grew past its initial value {initial:e} and has not decreased for {} iterations",
                opts.divergence_window
            )));
        }
    }

    Ok((
        WalkCountVector { direction, counts: r },
        ConvergenceReport {
            iterations,
            final_residual: norm,
            spectral_radius_estimate: None,
        },
    ))
}

/// `sum_{l=0}^{iterations} A^l 1`, the state of [`approx_counts`] after a fixed number of steps.
pub fn truncated_counts(dlg: &DirectedLineGraph, direction: Direction, iterations: usize) -> WalkCountVector {
    let a = oriented(dlg, direction);
    let n = a.dim();
    let mut v = vec![1.0; n];
    let mut r = v.clone();
    let mut next = vec![0.0; n];
    for _ in 0..iterations {
        a.mul_vec(&v, &mut next);
        std::mem::swap(&mut v, &mut next);
        for (ri, vi) in r.iter_mut().zip(&v) {
            *ri += vi;
        }
    }
    WalkCountVector { direction, counts: r }
}

/// Exact counts on an acyclic line graph, relaxing every arc once.
pub fn dag_counts(dlg: &DirectedLineGraph, direction: Direction) -> Result<WalkCountVector> {
    let a = oriented(dlg, direction);
    let order = a
        .topological_order()
        .ok_or_else(|| TwcError::Contract("walk counting by topological order needs an acyclic graph".into()))?;
    let mut w = vec![1.0; a.dim()];
    for &u in order.iter().rev() {
        let (cols, vals) = a.row(u);
        let mut acc = 1.0;
        for (&c, &v) in cols.iter().zip(vals) {
            acc += v * w[c as usize];
        }
        w[u] = acc;
    }
    Ok(WalkCountVector { direction, counts: w })
}

/// Power-iteration estimate of the spectral radius of a non-negative matrix.
///
/// Returns 0 for acyclic (nilpotent) matrices. Otherwise starts from the
/// normalized all-ones vector and reports the geometric mean of the last ten
/// growth factors, which also settles on periodic matrices.
pub fn estimate_spectral_radius(a: &SparseMatrix, iters: usize) -> f64 {
    let n = a.dim();
    if n == 0 || a.nnz() == 0 || a.is_acyclic() {
        return 0.0;
    }
    let iters = iters.max(1);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut log_growth = Vec::with_capacity(iters);
    for _ in 0..iters {
        a.mul_vec(&x, &mut y);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        log_growth.push(norm.ln());
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
    }
    let tail = &log_growth[log_growth.len().saturating_sub(10)..];
    (tail.iter().sum::<f64>() / tail.len() as f64).exp()
}

/// Sums static counts into `W^out(v, t)` over `X_out(v, t)` or `W^in(v, t)` over `X_in(v, t)`.
///
/// Each line-graph node is itself a length-1 temporal walk, so the projection
/// counts temporal walks of length at least one.
pub fn project(dlg: &DirectedLineGraph, counts: &WalkCountVector) -> Result<WalkWeightMatrix> {
    if counts.counts.len() != dlg.node_count() {
        return Err(TwcError::Contract(format!(
            "{} walk counts for a line graph with {} nodes",
            counts.counts.len(),
            dlg.node_count()
        )));
    }
    let mut m = WalkWeightMatrix::new(counts.direction, dlg.temporal_node_count());
    // Line-graph nodes follow the chronological edge order, so keys arrive sorted.
    for (e, &w) in dlg.temporal_edges().iter().zip(&counts.counts) {
        match counts.direction {
            Direction::Outgoing => m.accumulate_sorted(e.src, e.t, w),
            Direction::Incoming => m.accumulate_sorted(e.dst, e.t + dlg.delta(), w),
        }
    }
    Ok(m)
}
