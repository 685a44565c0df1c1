//! Sufficient statistics and sample-scaled mutual information `I_n(i, j)`.
//!
//! Every estimator returns `n` times the plug-in mutual information of the
//! pair, in nats. That is the gain in maximized log-likelihood obtained by
//! joining the two variables with an edge, which is what the penalized scores
//! compare against `(k / 2) · d_n`.
//!
//! | pair                | model                                   | `I_n`                         |
//! |---------------------|-----------------------------------------|-------------------------------|
//! | discrete × discrete | relative frequencies                    | `Σ c·ln(n·c / (c_i·c_j))`     |
//! | Gaussian × Gaussian | bivariate normal, MLE moments           | `−(n/2)·ln(1 − ρ̂²)`          |
//! | Gaussian × discrete | `x | y ~ N(ĝ(y), φ̂)`, shared variance    | `n·Î`, Gauss–Hermite integral |

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{Column, Dataset};
use crate::error::{Error, Result};
use crate::math::{entropy, ln, ln_1p, log_sum_exp, normal_ln_pdf, sqrt};
use crate::quadrature::{GaussHermite, QuadratureSpec};

/// Joint and marginal counts of two discrete columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePair {
    /// Cardinality of the first variable.
    pub rows: usize,
    /// Cardinality of the second variable.
    pub cols: usize,
    /// Row-major `rows × cols` joint counts.
    pub joint: Vec<u64>,
    /// Marginal counts of the first variable.
    pub row_counts: Vec<u64>,
    /// Marginal counts of the second variable.
    pub col_counts: Vec<u64>,
    /// Sample size.
    pub n: u64,
}

impl DiscretePair {
    /// Build from a row-major joint count table, deriving the marginals.
    pub fn from_joint(rows: usize, cols: usize, joint: Vec<u64>) -> Self {
        assert_eq!(joint.len(), rows * cols, "joint table has wrong size");
        let mut row_counts = vec![0; rows];
        let mut col_counts = vec![0; cols];
        for x in 0..rows {
            for y in 0..cols {
                let c = joint[x * cols + y];
                row_counts[x] += c;
                col_counts[y] += c;
            }
        }
        let n = row_counts.iter().sum();
        DiscretePair {
            rows,
            cols,
            joint,
            row_counts,
            col_counts,
            n,
        }
    }

    /// Count of `(x, y)`.
    pub fn count(&self, x: usize, y: usize) -> u64 {
        self.joint[x * self.cols + y]
    }
}

/// Biased (divide-by-`n`) first and second moments of two Gaussian columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPair {
    /// Column of the first variable.
    pub i: usize,
    /// Column of the second variable.
    pub j: usize,
    /// Sample size.
    pub n: usize,
    /// Mean of the first column.
    pub mean_i: f64,
    /// Mean of the second column.
    pub mean_j: f64,
    /// Variance of the first column.
    pub var_i: f64,
    /// Variance of the second column.
    pub var_j: f64,
    /// Covariance.
    pub cov: f64,
}

impl GaussianPair {
    /// Sample correlation, clamped to `[-1, 1]`.
    pub fn rho(&self) -> f64 {
        (self.cov / sqrt(self.var_i * self.var_j)).clamp(-1.0, 1.0)
    }
}

/// A Gaussian variable whose mean depends on a discrete class:
/// `x | y ~ N(mean[y], variance)` with class probabilities `probs[y]`.
///
/// Classes with zero probability carry no mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedFactor {
    /// Class probabilities.
    pub class_probs: Vec<f64>,
    /// Per-class means, `None` for empty classes.
    pub class_means: Vec<Option<f64>>,
    /// Shared within-class variance.
    pub pooled_var: f64,
}

impl MixedFactor {
    /// Number of classes `α`.
    pub fn n_classes(&self) -> usize {
        self.class_probs.len()
    }

    /// `(probability, mean)` of every class with positive probability.
    pub fn active_classes(&self) -> impl Iterator<Item = (usize, f64, f64)> + Clone + '_ {
        self.class_probs
            .iter()
            .zip(&self.class_means)
            .enumerate()
            .filter_map(|(y, (&p, m))| match m {
                Some(m) if p > 0.0 => Some((y, p, *m)),
                _ => None,
            })
    }

    /// Entropy of the class distribution in nats.
    pub fn class_entropy(&self) -> f64 {
        entropy(&self.class_probs)
    }

    /// `ln f(x | y)`; `-inf` for an empty class.
    pub fn ln_conditional(&self, x: f64, y: usize) -> f64 {
        match self.class_means[y] {
            Some(m) => normal_ln_pdf(x, m, self.pooled_var),
            None => f64::NEG_INFINITY,
        }
    }

    /// `ln Σ_y P(y) f(x | y)`, the log density of the mixture.
    pub fn ln_mixture(&self, x: f64) -> f64 {
        log_sum_exp(
            self.active_classes()
                .map(|(_, p, m)| ln(p) + normal_ln_pdf(x, m, self.pooled_var)),
        )
    }

    /// Class posterior `P(y | x) ∝ P(y) f(x | y)`.
    pub fn posterior(&self, x: f64) -> Vec<f64> {
        let norm = self.ln_mixture(x);
        self.class_probs
            .iter()
            .zip(&self.class_means)
            .map(|(&p, m)| match m {
                Some(m) if p > 0.0 => crate::math::exp(ln(p) + normal_ln_pdf(x, *m, self.pooled_var) - norm),
                _ => 0.0,
            })
            .collect()
    }

    /// Mutual information (nats, per sample) between the class and the
    /// Gaussian under this model, integrated with the given rule.
    ///
    /// After the substitution `x = m_y + √(2φ)·t` the log ratio inside the
    /// integral becomes `−ln Σ_z P(z)·exp(−u_yz² − 2·u_yz·t)` with
    /// `u_yz = (m_y − m_z)/√(2φ)`, which is free of cancellation.
    pub fn mutual_information_with(&self, rule: &GaussHermite) -> f64 {
        let scale = sqrt(2.0 * self.pooled_var);
        let classes: Vec<(f64, f64)> = self.active_classes().map(|(_, p, m)| (p, m)).collect();
        let inv_sqrt_pi = 1.0 / sqrt(core::f64::consts::PI);
        let mut total = 0.0;
        for &(p_y, m_y) in &classes {
            let offsets: Vec<(f64, f64)> = classes
                .iter()
                .map(|&(p_z, m_z)| {
                    let u = (m_y - m_z) / scale;
                    (ln(p_z) - u * u, u)
                })
                .collect();
            let inner = rule.integrate(|t| {
                -log_sum_exp(offsets.iter().map(|&(c, u)| c - 2.0 * u * t))
            });
            total += p_y * inner * inv_sqrt_pi;
        }
        total
    }

    /// Mutual information per sample, doubling the quadrature order along
    /// `quad`'s ladder until two consecutive rules agree. Returns the finer
    /// of the agreeing pair, clamped to `[0, H(class)]`.
    pub fn mutual_information(&self, quad: &QuadratureSpec) -> Result<f64> {
        let h = self.class_entropy();
        if self.active_classes().count() <= 1 {
            return Ok(0.0);
        }
        let tol = quad.tolerance();
        let ladder = quad.ladder();
        let mut coarse = self.mutual_information_with(&ladder[0]);
        let mut fine = coarse;
        for rule in &ladder[1..] {
            fine = self.mutual_information_with(rule);
            let scale = fine.abs().max(h);
            let converged = coarse.is_finite()
                && fine.is_finite()
                && (coarse - fine).abs() <= tol * scale
                && fine <= h + tol * scale
                && fine >= -tol * scale;
            if converged {
                return Ok(fine.clamp(0.0, h));
            }
            coarse = fine;
        }
        let coarse = self.mutual_information_with(&ladder[ladder.len() - 2]);
        Err(Error::QuadratureFailure { coarse, fine })
    }
}

/// Per-class statistics of a Gaussian column (`gaussian`) against a discrete
/// column (`discrete`).
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPair {
    /// Column index of the Gaussian member.
    pub gaussian: usize,
    /// Column index of the discrete member.
    pub discrete: usize,
    /// True when the caller's `(i, j)` had the discrete column first.
    pub swapped: bool,
    /// `c_j(y)`.
    pub class_counts: Vec<u64>,
    /// `ĝ(y)`, `None` where `c_j(y) = 0`.
    pub class_means: Vec<Option<f64>>,
    /// `φ̂ = (1/n) Σ (x − ĝ(y))²`.
    pub pooled_var: f64,
    /// Overall mean of the Gaussian column.
    pub mean: f64,
    /// Overall (biased) variance of the Gaussian column.
    pub var: f64,
    /// Sample size.
    pub n: usize,
}

impl MixedPair {
    /// The fitted class-conditional model.
    pub fn factor(&self) -> MixedFactor {
        let n = self.n as f64;
        MixedFactor {
            class_probs: self.class_counts.iter().map(|&c| c as f64 / n).collect(),
            class_means: self.class_means.clone(),
            pooled_var: self.pooled_var,
        }
    }
}

/// Statistics for one pair, by kind combination.
#[derive(Debug, Clone, PartialEq)]
pub enum PairStats {
    /// Both discrete.
    Discrete(DiscretePair),
    /// Both Gaussian.
    Gaussian(GaussianPair),
    /// One of each; the Gaussian is recorded first.
    Mixed(MixedPair),
}

/// Biased mean and variance (two passes).
pub fn moments(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

fn gaussian_moments(values: &[f64], column: usize) -> Result<(f64, f64)> {
    let (mean, var) = moments(values);
    if !(var > 0.0) {
        return Err(Error::DegenerateGaussian { column });
    }
    Ok((mean, var))
}

/// Count table of two discrete columns.
pub fn discrete_counts(xs: &[usize], a: usize, ys: &[usize], b: usize) -> DiscretePair {
    let mut joint = vec![0u64; a * b];
    for (&x, &y) in xs.iter().zip(ys) {
        joint[x * b + y] += 1;
    }
    DiscretePair::from_joint(a, b, joint)
}

fn mixed_stats(
    xs: &[f64],
    gaussian: usize,
    ys: &[usize],
    classes: usize,
    discrete: usize,
    swapped: bool,
) -> Result<MixedPair> {
    let (mean, var) = gaussian_moments(xs, gaussian)?;
    let mut counts = vec![0u64; classes];
    let mut sums = vec![0.0; classes];
    for (&x, &y) in xs.iter().zip(ys) {
        counts[y] += 1;
        sums[y] += x;
    }
    let class_means: Vec<Option<f64>> = counts
        .iter()
        .zip(&sums)
        .map(|(&c, &s)| (c > 0).then(|| s / c as f64))
        .collect();
    let n = xs.len();
    let pooled_var = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let d = x - class_means[y].expect("observed class has a mean");
            d * d
        })
        .sum::<f64>()
        / n as f64;
    Ok(MixedPair {
        gaussian,
        discrete,
        swapped,
        class_counts: counts,
        class_means,
        pooled_var,
        mean,
        var,
        n,
    })
}

/// Gather the sufficient statistics of columns `i` and `j`.
///
/// Discrete and Gaussian pairs are recorded with the smaller vertex first and
/// mixed pairs with the Gaussian member first, so the statistics (and every
/// estimate derived from them) do not depend on argument order.
pub fn collect_pair_stats(dataset: &Dataset, i: usize, j: usize) -> Result<PairStats> {
    let n_vars = dataset.n_vars();
    for v in [i, j] {
        if v >= n_vars {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n_vertices: n_vars,
            });
        }
    }
    if i == j {
        return Err(Error::SameVertex(i));
    }
    let kinds = dataset.schema().kinds();
    let (lo, hi) = (i.min(j), i.max(j));
    match (dataset.column(i), dataset.column(j)) {
        (Column::Discrete(_), Column::Discrete(_)) | (Column::Gaussian(_), Column::Gaussian(_))
            if i > j =>
        {
            collect_pair_stats(dataset, lo, hi)
        }
        (Column::Discrete(xs), Column::Discrete(ys)) => {
            let a = kinds[i].effective_arity();
            let b = kinds[j].effective_arity();
            Ok(PairStats::Discrete(discrete_counts(xs, a, ys, b)))
        }
        (Column::Gaussian(xs), Column::Gaussian(ys)) => {
            let (mean_i, var_i) = gaussian_moments(xs, i)?;
            let (mean_j, var_j) = gaussian_moments(ys, j)?;
            let cov = xs
                .iter()
                .zip(ys)
                .map(|(x, y)| (x - mean_i) * (y - mean_j))
                .sum::<f64>()
                / xs.len() as f64;
            Ok(PairStats::Gaussian(GaussianPair {
                i,
                j,
                n: xs.len(),
                mean_i,
                mean_j,
                var_i,
                var_j,
                cov,
            }))
        }
        (Column::Gaussian(xs), Column::Discrete(ys)) => {
            let classes = kinds[j].effective_arity();
            mixed_stats(xs, i, ys, classes, j, false).map(PairStats::Mixed)
        }
        (Column::Discrete(ys), Column::Gaussian(xs)) => {
            let classes = kinds[i].effective_arity();
            mixed_stats(xs, j, ys, classes, i, true).map(PairStats::Mixed)
        }
    }
}

/// `I_n = Σ_{c>0} c(x,y)·ln(n·c(x,y) / (c(x)·c(y)))`, clamped at zero.
pub fn mi_discrete(stats: &DiscretePair) -> f64 {
    let n = stats.n as f64;
    let mut total = 0.0;
    for x in 0..stats.rows {
        let cx = stats.row_counts[x] as f64;
        for y in 0..stats.cols {
            let c = stats.count(x, y);
            if c == 0 {
                continue;
            }
            let c = c as f64;
            let cy = stats.col_counts[y] as f64;
            total += c * ln(n * c / (cx * cy));
        }
    }
    total.max(0.0)
}

/// `−(n/2)·ln(1 − ρ²)`; `+inf` when `|ρ| = 1`.
pub fn mi_gaussian_from_rho(rho: f64, n: usize) -> f64 {
    let r2 = rho * rho;
    if r2 >= 1.0 {
        return f64::INFINITY;
    }
    (-(n as f64) / 2.0 * ln_1p(-r2)).max(0.0)
}

/// Sample-scaled Gaussian mutual information from the pair's correlation.
pub fn mi_gaussian(stats: &GaussianPair) -> Result<f64> {
    if !(stats.var_i > 0.0) {
        return Err(Error::DegenerateGaussian { column: stats.i });
    }
    if !(stats.var_j > 0.0) {
        return Err(Error::DegenerateGaussian { column: stats.j });
    }
    Ok(mi_gaussian_from_rho(stats.rho(), stats.n))
}

/// Sample-scaled mutual information of a Gaussian/discrete pair: `n` times
/// the mutual information of the fitted class-conditional model.
pub fn mi_mixed(stats: &MixedPair, quad: &QuadratureSpec) -> Result<f64> {
    if !(stats.pooled_var > 0.0) {
        return Err(Error::DegenerateGaussian {
            column: stats.gaussian,
        });
    }
    if stats.class_counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyDataset);
    }
    let per_sample = stats.factor().mutual_information(quad)?;
    Ok(stats.n as f64 * per_sample)
}

/// Dispatch to the estimator matching the pair kind.
pub fn mutual_information(stats: &PairStats, quad: &QuadratureSpec) -> Result<f64> {
    match stats {
        PairStats::Discrete(d) => Ok(mi_discrete(d)),
        PairStats::Gaussian(g) => mi_gaussian(g),
        PairStats::Mixed(m) => mi_mixed(m, quad),
    }
}
