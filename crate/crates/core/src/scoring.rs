//! Edge weights: raw mutual information or MI minus a parameter penalty.

use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{collect_pair_stats, mutual_information};
use crate::graph::ScoredEdge;
use crate::math::ln;
use crate::quadrature::QuadratureSpec;
use crate::schema::VariableKind;

/// How candidate edges are weighted.
///
/// Each criterion fixes a penalty scale `d_n` and an edge `{i, j}` is charged
/// `(a_i − 1)(a_j − 1)/2 · d_n`, where `a` is the cardinality of a discrete
/// variable and 2 for a Gaussian. `Mdl` (`d_n = ln n`) is the classic
/// description-length choice; `Aic` (`d_n = 2`) and `Custom` are members of
/// the general family of nonnegative `d_n` with `d_n / n → 0` and are offered
/// as conveniences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// No penalty: the Chow-Liu weighting.
    MaximumLikelihood,
    /// `d_n = ln n`.
    Mdl,
    /// `d_n = 2`.
    Aic,
    /// User-supplied `d_n ≥ 0`.
    Custom(f64),
}

impl Criterion {
    /// Custom penalty scale, checked to be finite and nonnegative.
    pub fn custom(d_n: f64) -> Result<Self> {
        if d_n.is_finite() && d_n >= 0.0 {
            Ok(Criterion::Custom(d_n))
        } else {
            Err(Error::InvalidPenalty(d_n))
        }
    }

    /// `d_n` for a sample of size `n`.
    pub fn penalty_scale(&self, n: usize) -> f64 {
        match *self {
            Criterion::MaximumLikelihood => 0.0,
            Criterion::Mdl => ln(n as f64),
            Criterion::Aic => 2.0,
            Criterion::Custom(d) => d,
        }
    }

    /// Whether edges are penalized at all.
    pub fn is_penalized(&self) -> bool {
        !matches!(self, Criterion::MaximumLikelihood)
    }
}

/// Penalty in nats for joining variables of the given kinds:
/// `(a_i − 1)(a_j − 1)/2 · d_n`.
pub fn penalty_weight(kind_i: &VariableKind, kind_j: &VariableKind, d_n: f64) -> f64 {
    let a = (kind_i.effective_arity() - 1) as f64;
    let b = (kind_j.effective_arity() - 1) as f64;
    0.5 * a * b * d_n
}

/// Number of parameters an edge adds: `(a_i − 1)(a_j − 1)`.
pub fn edge_parameters(kind_i: &VariableKind, kind_j: &VariableKind) -> usize {
    (kind_i.effective_arity() - 1) * (kind_j.effective_arity() - 1)
}

/// Score every pair `i < j` given a mutual-information oracle, in canonical
/// `(i, j)` order.
pub fn score_pairs_with(
    kinds: &[VariableKind],
    d_n: f64,
    mut mi: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<Vec<ScoredEdge>> {
    if !(d_n.is_finite() && d_n >= 0.0) {
        return Err(Error::InvalidPenalty(d_n));
    }
    let n = kinds.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let value = mi(i, j).map_err(|e| e.on_pair(i, j))?;
            let penalty = penalty_weight(&kinds[i], &kinds[j], d_n);
            out.push(ScoredEdge::new(i, j, value, penalty));
        }
    }
    Ok(out)
}

/// Estimate and score one pair.
pub fn score_pair(
    dataset: &Dataset,
    i: usize,
    j: usize,
    d_n: f64,
    quad: &QuadratureSpec,
) -> Result<ScoredEdge> {
    let stats = collect_pair_stats(dataset, i, j).map_err(|e| e.on_pair(i, j))?;
    let value = mutual_information(&stats, quad).map_err(|e| e.on_pair(i, j))?;
    let kinds = dataset.schema().kinds();
    Ok(ScoredEdge::new(i, j, value, penalty_weight(&kinds[i], &kinds[j], d_n)))
}

/// `N(N−1)/2` scored edges, ordered by `i` then `j`.
pub fn score_all_pairs(
    dataset: &Dataset,
    criterion: Criterion,
    quad: &QuadratureSpec,
) -> Result<Vec<ScoredEdge>> {
    let d_n = criterion.penalty_scale(dataset.n_rows());
    score_pairs_with(dataset.schema().kinds(), d_n, |i, j| {
        score_pair(dataset, i, j, d_n, quad).map(|e| e.mi)
    })
}
