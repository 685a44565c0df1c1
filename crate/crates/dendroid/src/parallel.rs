//! Pair scoring spread over a thread pool.

use rayon::prelude::*;

use dendroid_core::scoring::{score_pair, score_pairs_with};
use dendroid_core::{Criterion, Dataset, QuadratureSpec, Result, ScoredEdge};

/// Same output as [`dendroid_core::scoring::score_all_pairs`], bit for bit,
/// with the per-pair estimates computed in parallel. When several pairs fail,
/// the error of the first failing pair in canonical order is returned.
pub fn score_all_pairs_parallel(
    dataset: &Dataset,
    criterion: Criterion,
    quad: &QuadratureSpec,
) -> Result<Vec<ScoredEdge>> {
    let n_vars = dataset.n_vars();
    let d_n = criterion.penalty_scale(dataset.n_rows());
    let pairs: Vec<(usize, usize)> = (0..n_vars)
        .flat_map(|i| (i + 1..n_vars).map(move |j| (i, j)))
        .collect();
    let estimates: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| score_pair(dataset, i, j, d_n, quad).map(|e| e.mi))
        .collect();
    let mut next = estimates.into_iter();
    score_pairs_with(dataset.schema().kinds(), d_n, |_, _| {
        next.next().expect("one estimate per pair")
    })
}
