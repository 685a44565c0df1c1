//! Brute-force references used to check the fast paths: exhaustive forest
//! search, exact Kullback-Leibler divergence of small discrete joints from
//! their tree projections, and Monte Carlo mutual information for mixed
//! factors.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimators::MixedFactor;
use crate::forest::{sort_by_score, UnionFind};
use crate::graph::{Forest, RootedForest, ScoredEdge};
use crate::math::{ln, sqrt};
use crate::model::{draw_categorical, draw_normal};

/// Largest vertex count accepted by [`brute_force_best_forest`].
pub const MAX_ENUMERATION_VERTICES: usize = 8;
/// Largest vertex count accepted by [`all_forests`] and [`SmallJoint`].
pub const MAX_SMALL_VERTICES: usize = 6;

fn acyclic(n_vertices: usize, edges: &[ScoredEdge], mask: u64) -> bool {
    let mut uf = UnionFind::new(n_vertices);
    (0..edges.len())
        .filter(|b| mask >> b & 1 == 1)
        .all(|b| uf.union(edges[b].i, edges[b].j))
}

/// Exhaustively find the edge subset with the largest total `score` among
/// all acyclic subsets (or, with `require_spanning_tree`, all spanning
/// trees).
///
/// Ties between equal totals go to the subset that the greedy builders would
/// produce: candidates are ranked by descending score then `(i, j)`, and the
/// subset whose membership vector is lexicographically largest in that
/// ranking wins.
pub fn brute_force_best_forest(
    n_vertices: usize,
    edges: &[ScoredEdge],
    require_spanning_tree: bool,
) -> Result<Forest> {
    if n_vertices > MAX_ENUMERATION_VERTICES {
        return Err(Error::TooLarge {
            size: n_vertices,
            limit: MAX_ENUMERATION_VERTICES,
        });
    }
    let mut ranked = edges.to_vec();
    sort_by_score(&mut ranked);
    let m = ranked.len();
    // Bit (m − 1 − r) stands for the candidate of rank r, so a larger mask
    // value prefers higher-ranked candidates.
    let by_bit: Vec<ScoredEdge> = (0..m).map(|b| ranked[m - 1 - b]).collect();
    let want = n_vertices.saturating_sub(1);

    let mut best: Option<(f64, u64)> = None;
    for mask in 0u64..(1u64 << m) {
        let size = mask.count_ones() as usize;
        if size > want || (require_spanning_tree && size != want) {
            continue;
        }
        if !acyclic(n_vertices, &by_bit, mask) {
            continue;
        }
        let total: f64 = (0..m)
            .rev()
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| by_bit[b].score)
            .sum();
        if best.is_none_or(|(t, _)| total >= t) {
            best = Some((total, mask));
        }
    }
    let (_, mask) = best.ok_or(Error::EmptyEdgeList)?;
    Forest::new(
        n_vertices,
        (0..m)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| by_bit[b].pair()),
    )
}

/// Every forest on `n_vertices` labelled vertices (or every spanning tree).
pub fn all_forests(n_vertices: usize, require_spanning_tree: bool) -> Result<Vec<Forest>> {
    if n_vertices > MAX_SMALL_VERTICES {
        return Err(Error::TooLarge {
            size: n_vertices,
            limit: MAX_SMALL_VERTICES,
        });
    }
    let mut pairs = Vec::new();
    for i in 0..n_vertices {
        for j in i + 1..n_vertices {
            pairs.push(ScoredEdge::new(i, j, 0.0, 0.0));
        }
    }
    let want = n_vertices.saturating_sub(1);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let size = mask.count_ones() as usize;
        if size > want || (require_spanning_tree && size != want) {
            continue;
        }
        if acyclic(n_vertices, &pairs, mask) {
            out.push(Forest::new(
                n_vertices,
                (0..pairs.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| pairs[b].pair()),
            )?);
        }
    }
    Ok(out)
}

/// Explicit joint probability table over at most six discrete variables.
///
/// Assignments are enumerated in mixed radix with the first variable
/// varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallJoint {
    cards: Vec<usize>,
    probs: Vec<f64>,
}

impl SmallJoint {
    /// Validate a table: nonnegative entries summing to one within `1e-12`.
    pub fn new(cards: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if cards.is_empty() || cards.len() > MAX_SMALL_VERTICES {
            return Err(Error::TooLarge {
                size: cards.len(),
                limit: MAX_SMALL_VERTICES,
            });
        }
        let size: usize = cards.iter().product();
        if cards.contains(&0) || probs.len() != size {
            return Err(Error::InvalidDistribution);
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution);
        }
        Ok(SmallJoint { cards, probs })
    }

    /// Normalize arbitrary nonnegative weights into a joint.
    pub fn from_weights(cards: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution);
        }
        Self::new(cards, weights.into_iter().map(|w| w / total).collect())
    }

    /// Number of variables.
    pub fn n_vars(&self) -> usize {
        self.cards.len()
    }

    /// Cardinalities.
    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    /// Probability table.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Assignment for a flat table index.
    pub fn assignment(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.cards.len()];
        for (slot, &c) in out.iter_mut().zip(&self.cards).rev() {
            *slot = index % c;
            index /= c;
        }
        out
    }

    /// Marginal of variable `i`.
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        let mut m = vec![0.0; self.cards[i]];
        for (k, &p) in self.probs.iter().enumerate() {
            m[self.assignment(k)[i]] += p;
        }
        m
    }

    /// Row-major pair marginal of `(i, j)`.
    pub fn pair_marginal(&self, i: usize, j: usize) -> Vec<f64> {
        let cj = self.cards[j];
        let mut m = vec![0.0; self.cards[i] * cj];
        for (k, &p) in self.probs.iter().enumerate() {
            let a = self.assignment(k);
            m[a[i] * cj + a[j]] += p;
        }
        m
    }

    /// Exact mutual information of variables `i` and `j` in nats.
    pub fn mutual_information(&self, i: usize, j: usize) -> f64 {
        let pi = self.marginal(i);
        let pj = self.marginal(j);
        let pij = self.pair_marginal(i, j);
        let cj = self.cards[j];
        let mut total = 0.0;
        for x in 0..self.cards[i] {
            for y in 0..cj {
                let p = pij[x * cj + y];
                if p > 0.0 {
                    total += p * ln(p / (pi[x] * pj[y]));
                }
            }
        }
        total
    }

    /// `D(P || Π_i P_i)`, the total correlation.
    pub fn total_correlation(&self) -> f64 {
        let margs: Vec<Vec<f64>> = (0..self.n_vars()).map(|i| self.marginal(i)).collect();
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| {
                let a = self.assignment(k);
                let q: f64 = a.iter().enumerate().map(|(v, &x)| margs[v][x]).product();
                p * ln(p / q)
            })
            .sum()
    }

    /// The tree projection of this joint along `rooted`:
    /// `Q(x) = Π_roots P(x_r) Π_children P(x_c | x_parent)`.
    pub fn dendroid_projection(&self, rooted: &RootedForest) -> Result<SmallJoint> {
        if rooted.n_vertices() != self.n_vars() {
            return Err(Error::SchemaMismatch);
        }
        let margs: Vec<Vec<f64>> = (0..self.n_vars()).map(|i| self.marginal(i)).collect();
        let pairs: Vec<Option<Vec<f64>>> = (0..self.n_vars())
            .map(|c| rooted.parent(c).map(|p| self.pair_marginal(c, p)))
            .collect();
        let q = (0..self.probs.len())
            .map(|k| {
                let a = self.assignment(k);
                let mut q = 1.0;
                for c in 0..self.n_vars() {
                    q *= match (rooted.parent(c), &pairs[c]) {
                        (Some(p), Some(pm)) => {
                            let pp = margs[p][a[p]];
                            if pp > 0.0 {
                                pm[a[c] * self.cards[p] + a[p]] / pp
                            } else {
                                0.0
                            }
                        }
                        _ => margs[c][a[c]],
                    };
                }
                q
            })
            .collect();
        Ok(SmallJoint {
            cards: self.cards.clone(),
            probs: q,
        })
    }

    /// `D(self || other)` by enumeration.
    pub fn kl_divergence(&self, other: &SmallJoint) -> Result<f64> {
        if self.cards != other.cards {
            return Err(Error::SchemaMismatch);
        }
        let mut total = 0.0;
        for (&p, &q) in self.probs.iter().zip(&other.probs) {
            if p > 0.0 {
                if !(q > 0.0) {
                    return Err(Error::UnsupportedSupport);
                }
                total += p * ln(p / q);
            }
        }
        Ok(total)
    }
}

/// `D(P || Q)` where `Q` is the Dendroid distribution with structure
/// `rooted` built from the marginals and pair marginals of `joint`.
pub fn exact_kl_dendroid(joint: &SmallJoint, rooted: &RootedForest) -> Result<f64> {
    let q = joint.dendroid_projection(rooted)?;
    joint.kl_divergence(&q)
}

/// Monte Carlo estimate of the per-sample mutual information of a mixed
/// factor and its standard error.
///
/// Draws `(y, x)` from the factor and averages
/// `ln f(x | y) − ln Σ_z P(z) f(x | z)`.
pub fn mc_mutual_information(factor: &MixedFactor, draws: usize, seed: u64) -> Result<(f64, f64)> {
    const MIN_DRAWS: usize = 10_000;
    if draws < MIN_DRAWS {
        return Err(Error::InvalidCount {
            count: draws,
            minimum: MIN_DRAWS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..draws {
        let y = draw_categorical(&mut rng, &factor.class_probs);
        let mu = factor.class_means[y].expect("drawn class has positive probability");
        let x = draw_normal(&mut rng, mu, factor.pooled_var);
        let v = factor.ln_conditional(x, y) - factor.ln_mixture(x);
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (draws - 1) as f64;
    Ok((mean, sqrt(var / draws as f64)))
}
