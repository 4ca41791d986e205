//! Ranking comparison and approximation quality.

use std::cmp::Ordering;

use serde::Serialize;

use crate::centrality::CentralityResult;
use crate::error::{Result, TwcError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankCorrelation {
    /// Kendall tau-b; NaN when either side is constant.
    pub tau: f64,
    pub n_pairs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    pub mean_relative_error: f64,
    /// Number of nodes with nonzero exact score.
    pub support: usize,
    /// Set when no node has a nonzero exact score.
    pub empty_support: bool,
}

fn same_universe(a: &CentralityResult, b: &CentralityResult) -> Result<()> {
    if a.nodes() != b.nodes() {
        return Err(TwcError::UniverseMismatch(format!(
            "{} vs {} nodes with differing membership",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Kendall tau-b between the score vectors of two results.
pub fn kendall_tau(a: &CentralityResult, b: &CentralityResult) -> Result<RankCorrelation> {
    same_universe(a, b)?;
    Ok(kendall_tau_b(a.scores(), b.scores()))
}

/// Tau-b by merge-sort inversion counting, `O(n log n)`.
///
/// Pairs are sorted by `(x, y)`; discordant pairs are then the inversions of
/// the `y` sequence, excluding pairs tied in `x`, which the sort already
/// ordered by `y`.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> RankCorrelation {
    assert_eq!(x.len(), y.len(), "score vectors differ in length");
    let n = x.len();
    let n0 = (n as u64) * (n as u64).saturating_sub(1) / 2;

    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|p, q| cmp_f64(p.0, q.0).then(cmp_f64(p.1, q.1)));

    let tied = |run: u64| run * run.saturating_sub(1) / 2;

    let (mut ties_x, mut ties_xy) = (0u64, 0u64);
    let (mut run_x, mut run_xy) = (1u64, 1u64);
    for i in 1..n {
        if pairs[i].0 == pairs[i - 1].0 {
            run_x += 1;
            if pairs[i].1 == pairs[i - 1].1 {
                run_xy += 1;
            } else {
                ties_xy += tied(run_xy);
                run_xy = 1;
            }
        } else {
            ties_x += tied(run_x);
            ties_xy += tied(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    if n > 0 {
        ties_x += tied(run_x);
        ties_xy += tied(run_xy);
    }

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);

    let mut ties_y = 0u64;
    let mut run_y = 1u64;
    for i in 1..n {
        if ys[i] == ys[i - 1] {
            run_y += 1;
        } else {
            ties_y += tied(run_y);
            run_y = 1;
        }
    }
    if n > 0 {
        ties_y += tied(run_y);
    }

    let numerator = n0 as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps as f64;
    let denominator = ((n0 - ties_x) as f64 * (n0 - ties_y) as f64).sqrt();
    let tau = if denominator == 0.0 {
        f64::NAN
    } else {
        (numerator / denominator).clamp(-1.0, 1.0)
    };
    RankCorrelation { tau, n_pairs: n0 }
}

/// Sorts `v` ascending, returning the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    let k = k + mid - i;
    buf[k..n].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Mean of `|C - Ĉ| / C` over nodes with `C != 0`.
pub fn mean_relative_error(exact: &CentralityResult, approx: &CentralityResult) -> Result<ErrorReport> {
    same_universe(exact, approx)?;
    let mut sum = 0.0;
    let mut support = 0;
    for (&c, &c_hat) in exact.scores().iter().zip(approx.scores()) {
        if c != 0.0 {
            sum += (c - c_hat).abs() / c.abs();
            support += 1;
        }
    }
    Ok(ErrorReport {
        mean_relative_error: if support == 0 { 0.0 } else { sum / support as f64 },
        support,
        empty_support: support == 0,
    })
}

/// Number of nodes kept by [`top_k`]: `ceil(n * fraction)`.
pub fn top_k_size(n: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(TwcError::Config(format!("top fraction must lie in (0, 1], got {fraction}")));
    }
    // Guard against products like 10 * 0.3 = 3.0000000000000004.
    let k = (n as f64 * fraction * (1.0 - 1e-12)).ceil() as usize;
    Ok(k.min(n))
}

/// Restriction to the `ceil(n * fraction)` highest-ranked nodes.
pub fn top_k(result: &CentralityResult, fraction: f64) -> Result<CentralityResult> {
    let k = top_k_size(result.len(), fraction)?;
    Ok(result.restrict_to_top(k))
}
