#![allow(dead_code)]

use std::sync::LazyLock;

use dendroid_core::{Column, Dataset, QuadratureSpec, ScoredEdge, VariableKind, VariableSchema};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Default quadrature, built once per test binary.
pub static QUAD: LazyLock<QuadratureSpec> = LazyLock::new(QuadratureSpec::default);

/// `0` means Gaussian, anything else is a discrete cardinality.
pub fn kinds_from_codes(codes: &[usize]) -> Vec<VariableKind> {
    codes
        .iter()
        .map(|&c| {
            if c == 0 {
                VariableKind::Gaussian
            } else {
                VariableKind::discrete_with_cardinality(c)
            }
        })
        .collect()
}

/// Random data where each column leans on the previous one, so pairs carry
/// real dependence.
pub fn random_dataset(codes: &[usize], n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = kinds_from_codes(codes);
    let mut latent: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut columns = Vec::new();
    for kind in &kinds {
        let next: Vec<f64> = latent
            .iter()
            .map(|&z| {
                let e: f64 = StandardNormal.sample(&mut rng);
                0.7 * z + 0.7 * e
            })
            .collect();
        match kind {
            VariableKind::Gaussian => columns.push(Column::Gaussian(next.clone())),
            VariableKind::Discrete { labels } => {
                let a = labels.len() as f64;
                let col = next
                    .iter()
                    .map(|&v| {
                        let u = 0.5 * (1.0 + libm_erf(v / 2f64.sqrt()));
                        ((u * a) as usize).min(labels.len() - 1)
                    })
                    .collect();
                columns.push(Column::Discrete(col));
            }
        }
        latent = next;
    }
    let schema = VariableSchema::from_kinds(kinds).unwrap();
    Dataset::from_columns(schema, columns).unwrap()
}

fn libm_erf(x: f64) -> f64 {
    // Abramowitz-Stegun 7.1.26; accuracy is irrelevant here.
    let t = 1.0 / (1.0 + 0.327_591_1 * x.abs());
    let y = 1.0
        - (((((1.061_405_429 * t - 1.453_152_027) * t) + 1.421_413_741) * t - 0.284_496_736) * t
            + 0.254_829_592)
            * t
            * (-x * x).exp();
    if x >= 0.0 {
        y
    } else {
        -y
    }
}

/// All pairs of `n` vertices with the given scores (mi = score, no penalty)
/// in canonical order.
pub fn edges_from_weights(n: usize, weights: &[f64]) -> Vec<ScoredEdge> {
    let mut out = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            out.push(ScoredEdge::new(i, j, weights[k], 0.0));
            k += 1;
        }
    }
    out
}

/// Signed scores: `mi` is the positive part, the penalty absorbs the rest.
pub fn signed_edges(n: usize, scores: &[f64]) -> Vec<ScoredEdge> {
    let mut out = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let s = scores[k];
            out.push(ScoredEdge::new(i, j, s.max(0.0), (-s).max(0.0)));
            k += 1;
        }
    }
    out
}

pub fn total_score(edges: &[ScoredEdge], forest: &[(usize, usize)]) -> f64 {
    forest
        .iter()
        .map(|p| edges.iter().find(|e| e.pair() == *p).unwrap().score)
        .sum()
}

/// Plug-in entropy of each discrete column, in nats.
pub fn column_entropy(col: &[usize], a: usize) -> f64 {
    let n = col.len() as f64;
    let mut counts = vec![0usize; a];
    for &x in col {
        counts[x] += 1;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}
