//! Fitted Dendroid distributions: likelihood, description length, sampling.
//!
//! A model stores one marginal per vertex and one pairwise factor per forest
//! edge, and evaluates densities in the undirected form
//!
//! ```text
//! ln Q(x) = Σ_v ln p_v(x_v) + Σ_{i,j} ln [ p_ij(x_i, x_j) / (p_i(x_i) p_j(x_j)) ]
//! ```
//!
//! which does not depend on how the forest is rooted. Discrete terms are
//! probability masses and Gaussian terms are densities.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::{Column, Dataset};
use crate::error::{Error, Result};
use crate::estimators::{collect_pair_stats, moments, MixedFactor, PairStats};
use crate::graph::{orient_forest, Forest};
use crate::math::{entropy, ln, normal_ln_pdf, sqrt};
use crate::schema::{VariableKind, VariableSchema};
use crate::scoring::{edge_parameters, Criterion};

const PROB_TOL: f64 = 1e-12;
const MOMENT_TOL: f64 = 1e-9;

/// Marginal distribution of one vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeMarginal {
    /// Category probabilities.
    Discrete {
        /// `P̂(x)`, one entry per category.
        probs: Vec<f64>,
    },
    /// Normal distribution.
    Gaussian {
        /// Mean.
        mean: f64,
        /// Variance (`> 0`).
        var: f64,
    },
}

impl NodeMarginal {
    fn ln_density(&self, cell: CellRef) -> f64 {
        match (self, cell) {
            (NodeMarginal::Discrete { probs }, CellRef::Category(x)) => ln_prob(probs[x]),
            (NodeMarginal::Gaussian { mean, var }, CellRef::Real(x)) => normal_ln_pdf(x, *mean, *var),
            _ => unreachable!("cells are checked against the schema"),
        }
    }

    /// Entropy in nats (differential entropy for a Gaussian).
    pub fn entropy(&self) -> f64 {
        match self {
            NodeMarginal::Discrete { probs } => entropy(probs),
            NodeMarginal::Gaussian { var, .. } => 0.5 * (1.0 + crate::math::LN_2PI + ln(*var)),
        }
    }
}

/// Pairwise model attached to an edge `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeFactor {
    /// Joint probability table, rows indexed by `i`, columns by `j`.
    Discrete {
        /// Cardinality of `i`.
        rows: usize,
        /// Cardinality of `j`.
        cols: usize,
        /// Row-major `P̂(x_i, x_j)`.
        table: Vec<f64>,
    },
    /// Bivariate normal.
    Gaussian {
        /// Correlation, `|rho| < 1`.
        rho: f64,
        /// Mean of `i`.
        mean_i: f64,
        /// Variance of `i`.
        var_i: f64,
        /// Mean of `j`.
        mean_j: f64,
        /// Variance of `j`.
        var_j: f64,
    },
    /// Class-conditional normal: the Gaussian endpoint given the discrete
    /// endpoint.
    Mixed {
        /// Vertex id of the Gaussian endpoint.
        gaussian: usize,
        /// Vertex id of the discrete endpoint.
        discrete: usize,
        /// Class probabilities, means and shared variance.
        factor: MixedFactor,
    },
}

/// A fitted edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedEdge {
    /// Smaller endpoint.
    pub i: usize,
    /// Larger endpoint.
    pub j: usize,
    /// Pairwise model.
    pub factor: EdgeFactor,
}

/// A forest-structured distribution over a schema.
#[derive(Debug, Clone, PartialEq)]
pub struct DendroidModel {
    schema: VariableSchema,
    forest: Forest,
    marginals: Vec<NodeMarginal>,
    edges: Vec<FittedEdge>,
    n: usize,
    parameter_count: usize,
}

#[derive(Clone, Copy)]
enum CellRef {
    Category(usize),
    Real(f64),
}

fn ln_prob(p: f64) -> f64 {
    if p > 0.0 {
        ln(p)
    } else {
        f64::NEG_INFINITY
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn check_probs(probs: &[f64], what: &str) -> Result<()> {
    let sum: f64 = probs.iter().sum();
    if probs.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > PROB_TOL * probs.len().max(1) as f64 {
        return Err(Error::InvalidModel(format!("{what} is not a probability vector")));
    }
    Ok(())
}

/// Number of free parameters of a forest model over `schema`.
pub fn parameter_count(schema: &VariableSchema, forest: &Forest) -> usize {
    let kinds = schema.kinds();
    let nodes: usize = kinds.iter().map(VariableKind::marginal_parameters).sum();
    let edges: usize = forest
        .edges()
        .iter()
        .map(|&(i, j)| edge_parameters(&kinds[i], &kinds[j]))
        .sum();
    nodes + edges
}

impl DendroidModel {
    /// Assemble a model from explicit parameters, checking consistency.
    ///
    /// `factors` are given in the order of `forest.edges()`. Discrete tables
    /// must marginalize to the node marginals within `1e-12`; Gaussian and
    /// mixed factors must reproduce the node means and variances within
    /// `1e-9` relative.
    pub fn from_parts(
        schema: VariableSchema,
        forest: Forest,
        marginals: Vec<NodeMarginal>,
        factors: Vec<EdgeFactor>,
        n: usize,
    ) -> Result<Self> {
        let n_vars = schema.len();
        if forest.n_vertices() != n_vars || marginals.len() != n_vars {
            return Err(Error::SchemaMismatch);
        }
        if factors.len() != forest.edges().len() {
            return Err(Error::InvalidModel(format!(
                "{} edges but {} factors",
                forest.edges().len(),
                factors.len()
            )));
        }
        for (v, (m, kind)) in marginals.iter().zip(schema.kinds()).enumerate() {
            match (m, kind) {
                (NodeMarginal::Discrete { probs }, VariableKind::Discrete { labels }) => {
                    if probs.len() != labels.len() {
                        return Err(Error::InvalidModel(format!("marginal {v} has wrong arity")));
                    }
                    check_probs(probs, "node marginal")?;
                }
                (NodeMarginal::Gaussian { mean, var }, VariableKind::Gaussian) => {
                    if !mean.is_finite() || !(*var > 0.0) || !var.is_finite() {
                        return Err(Error::DegenerateGaussian { column: v });
                    }
                }
                _ => return Err(Error::SchemaMismatch),
            }
        }
        let mut edges = Vec::with_capacity(factors.len());
        for (&(i, j), factor) in forest.edges().iter().zip(factors) {
            check_factor(&marginals, i, j, &factor)?;
            edges.push(FittedEdge { i, j, factor });
        }
        let parameter_count = parameter_count(&schema, &forest);
        Ok(DendroidModel {
            schema,
            forest,
            marginals,
            edges,
            n,
            parameter_count,
        })
    }

    /// Variable declarations.
    pub fn schema(&self) -> &VariableSchema {
        &self.schema
    }

    /// Structure.
    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    /// Node marginals in vertex order.
    pub fn marginals(&self) -> &[NodeMarginal] {
        &self.marginals
    }

    /// Edge factors in the order of `forest().edges()`.
    pub fn edges(&self) -> &[FittedEdge] {
        &self.edges
    }

    /// Sample size the model was fitted on.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Free parameters `k`: node parameters plus per-edge increments.
    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    /// Factor on edge `{a, b}`.
    pub fn factor(&self, a: usize, b: usize) -> Option<&EdgeFactor> {
        let key = (a.min(b), a.max(b));
        self.edges
            .iter()
            .find(|e| (e.i, e.j) == key)
            .map(|e| &e.factor)
    }

    fn ln_row(&self, cells: &[CellRef]) -> f64 {
        let mut total = 0.0;
        for (m, &c) in self.marginals.iter().zip(cells) {
            total += m.ln_density(c);
        }
        if total == f64::NEG_INFINITY {
            return total;
        }
        for e in &self.edges {
            let term = self.ln_edge_ratio(e, cells[e.i], cells[e.j]);
            if term == f64::NEG_INFINITY {
                return term;
            }
            total += term;
        }
        total
    }

    fn ln_edge_ratio(&self, e: &FittedEdge, a: CellRef, b: CellRef) -> f64 {
        match (&e.factor, a, b) {
            (EdgeFactor::Discrete { cols, table, .. }, CellRef::Category(x), CellRef::Category(y)) => {
                let p = table[x * cols + y];
                if p <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                ln(p) - self.marginals[e.i].ln_density(a) - self.marginals[e.j].ln_density(b)
            }
            (
                EdgeFactor::Gaussian {
                    rho,
                    mean_i,
                    var_i,
                    mean_j,
                    var_j,
                },
                CellRef::Real(x),
                CellRef::Real(y),
            ) => {
                let zi = (x - mean_i) / sqrt(*var_i);
                let zj = (y - mean_j) / sqrt(*var_j);
                let r2 = rho * rho;
                let one_minus = 1.0 - r2;
                -0.5 * crate::math::ln_1p(-r2)
                    - (r2 * zi * zi - 2.0 * rho * zi * zj + r2 * zj * zj) / (2.0 * one_minus)
            }
            (
                EdgeFactor::Mixed {
                    gaussian, factor, ..
                },
                _,
                _,
            ) => {
                let (x, y) = match (a, b) {
                    (CellRef::Real(x), CellRef::Category(y)) if *gaussian == e.i => (x, y),
                    (CellRef::Category(y), CellRef::Real(x)) if *gaussian == e.j => (x, y),
                    _ => unreachable!("cells are checked against the schema"),
                };
                let cond = factor.ln_conditional(x, y);
                if cond == f64::NEG_INFINITY {
                    return cond;
                }
                cond - self.marginals[*gaussian].ln_density(CellRef::Real(x))
            }
            _ => unreachable!("factor kinds are checked against the schema"),
        }
    }
}

fn check_factor(marginals: &[NodeMarginal], i: usize, j: usize, factor: &EdgeFactor) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidModel(format!("edge ({i}, {j}): {why}")));
    match (factor, &marginals[i], &marginals[j]) {
        (
            EdgeFactor::Discrete { rows, cols, table },
            NodeMarginal::Discrete { probs: pi },
            NodeMarginal::Discrete { probs: pj },
        ) => {
            if *rows != pi.len() || *cols != pj.len() || table.len() != rows * cols {
                return bad("table shape does not match the marginals");
            }
            check_probs(table, "joint table")?;
            for x in 0..*rows {
                let s: f64 = table[x * cols..(x + 1) * cols].iter().sum();
                if (s - pi[x]).abs() > PROB_TOL * (*cols as f64) {
                    return bad("row sums differ from the first marginal");
                }
            }
            for y in 0..*cols {
                let s: f64 = (0..*rows).map(|x| table[x * cols + y]).sum();
                if (s - pj[y]).abs() > PROB_TOL * (*rows as f64) {
                    return bad("column sums differ from the second marginal");
                }
            }
            Ok(())
        }
        (
            EdgeFactor::Gaussian {
                rho,
                mean_i,
                var_i,
                mean_j,
                var_j,
            },
            NodeMarginal::Gaussian { mean: mi, var: vi },
            NodeMarginal::Gaussian { mean: mj, var: vj },
        ) => {
            if !(rho.abs() < 1.0) {
                return Err(Error::SingularCorrelation { i, j });
            }
            if !close(*mean_i, *mi, MOMENT_TOL)
                || !close(*var_i, *vi, MOMENT_TOL)
                || !close(*mean_j, *mj, MOMENT_TOL)
                || !close(*var_j, *vj, MOMENT_TOL)
            {
                return bad("Gaussian factor moments differ from the marginals");
            }
            Ok(())
        }
        (
            EdgeFactor::Mixed {
                gaussian,
                discrete,
                factor,
            },
            _,
            _,
        ) => {
            if !((*gaussian, *discrete) == (i, j) || (*gaussian, *discrete) == (j, i)) {
                return bad("mixed factor endpoints do not match the edge");
            }
            let (NodeMarginal::Gaussian { mean, var }, NodeMarginal::Discrete { probs }) =
                (&marginals[*gaussian], &marginals[*discrete])
            else {
                return bad("mixed factor on a pair that is not Gaussian/discrete");
            };
            if factor.class_probs.len() != probs.len() || factor.class_means.len() != probs.len() {
                return bad("mixed factor arity");
            }
            if !(factor.pooled_var > 0.0) || !factor.pooled_var.is_finite() {
                return Err(Error::DegenerateGaussian { column: *gaussian });
            }
            for (y, (&p, m)) in factor.class_probs.iter().zip(&factor.class_means).enumerate() {
                if (p - probs[y]).abs() > PROB_TOL {
                    return bad("class probabilities differ from the discrete marginal");
                }
                if p > 0.0 && !m.is_some_and(f64::is_finite) {
                    return bad("observed class without a finite mean");
                }
            }
            let mix_mean: f64 = factor.active_classes().map(|(_, p, m)| p * m).sum();
            let mix_var: f64 = factor.pooled_var
                + factor
                    .active_classes()
                    .map(|(_, p, m)| p * (m - mix_mean) * (m - mix_mean))
                    .sum::<f64>();
            if !close(mix_mean, *mean, MOMENT_TOL * sqrt(*var).max(1.0)) || !close(mix_var, *var, MOMENT_TOL) {
                return bad("mixture moments differ from the Gaussian marginal");
            }
            Ok(())
        }
        _ => bad("factor kind does not match the endpoint kinds"),
    }
}

/// Maximum-likelihood parameters of a forest model.
pub fn fit(dataset: &Dataset, forest: &Forest) -> Result<DendroidModel> {
    let schema = dataset.schema().clone();
    if forest.n_vertices() != schema.len() {
        return Err(Error::SchemaMismatch);
    }
    let n = dataset.n_rows();
    let nf = n as f64;
    let mut marginals = Vec::with_capacity(schema.len());
    for (v, column) in dataset.columns().iter().enumerate() {
        marginals.push(match column {
            Column::Discrete(xs) => {
                let mut counts = vec![0u64; schema.kind(v).effective_arity()];
                for &x in xs {
                    counts[x] += 1;
                }
                NodeMarginal::Discrete {
                    probs: counts.iter().map(|&c| c as f64 / nf).collect(),
                }
            }
            Column::Gaussian(xs) => {
                let (mean, var) = moments(xs);
                if !(var > 0.0) {
                    return Err(Error::DegenerateGaussian { column: v });
                }
                NodeMarginal::Gaussian { mean, var }
            }
        });
    }
    let mut factors = Vec::with_capacity(forest.edges().len());
    for &(i, j) in forest.edges() {
        let factor = match collect_pair_stats(dataset, i, j)? {
            PairStats::Discrete(d) => EdgeFactor::Discrete {
                rows: d.rows,
                cols: d.cols,
                table: d.joint.iter().map(|&c| c as f64 / nf).collect(),
            },
            PairStats::Gaussian(g) => {
                let rho = g.rho();
                if rho.abs() >= 1.0 {
                    return Err(Error::SingularCorrelation { i, j });
                }
                EdgeFactor::Gaussian {
                    rho,
                    mean_i: g.mean_i,
                    var_i: g.var_i,
                    mean_j: g.mean_j,
                    var_j: g.var_j,
                }
            }
            PairStats::Mixed(m) => {
                if !(m.pooled_var > 0.0) {
                    return Err(Error::DegenerateGaussian { column: m.gaussian });
                }
                EdgeFactor::Mixed {
                    gaussian: m.gaussian,
                    discrete: m.discrete,
                    factor: m.factor(),
                }
            }
        };
        factors.push(factor);
    }
    DendroidModel::from_parts(schema, forest.clone(), marginals, factors, n)
}

fn row_cells(dataset: &Dataset, row: usize, out: &mut [CellRef]) {
    for (slot, column) in out.iter_mut().zip(dataset.columns()) {
        *slot = match column {
            Column::Discrete(v) => CellRef::Category(v[row]),
            Column::Gaussian(v) => CellRef::Real(v[row]),
        };
    }
}

/// `Σ_rows ln Q(x)`. Rows that hit a zero-probability cell make the result
/// `-inf`.
pub fn log_likelihood(model: &DendroidModel, dataset: &Dataset) -> Result<f64> {
    if dataset.schema() != model.schema() {
        return Err(Error::SchemaMismatch);
    }
    let mut cells = vec![CellRef::Category(0); dataset.n_vars()];
    let mut total = 0.0;
    for row in 0..dataset.n_rows() {
        row_cells(dataset, row, &mut cells);
        let v = model.ln_row(&cells);
        if v == f64::NEG_INFINITY {
            return Ok(v);
        }
        total += v;
    }
    Ok(total)
}

/// `−ln L + (k/2)·d_n`, with `d_n` taken from `criterion` at the dataset's
/// sample size. Structure-independent constants are omitted.
pub fn description_length(
    model: &DendroidModel,
    dataset: &Dataset,
    criterion: Criterion,
) -> Result<f64> {
    let ll = log_likelihood(model, dataset)?;
    let d_n = criterion.penalty_scale(dataset.n_rows());
    Ok(-ll + model.parameter_count() as f64 / 2.0 * d_n)
}

pub(crate) fn draw_categorical(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last = k;
            if u < acc {
                return k;
            }
        }
    }
    last
}

pub(crate) fn draw_normal(rng: &mut ChaCha8Rng, mean: f64, var: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mean + sqrt(var) * z
}

/// Draw `count` rows by ancestral sampling.
///
/// The forest is rooted with [`orient_forest`]; roots are drawn from their
/// marginals and every other vertex from its conditional given the parent.
/// A discrete child of a Gaussian parent is drawn from the class posterior
/// `P(y | x) ∝ P(y)·f(x | y)` of the mixed factor.
///
/// The generator is ChaCha8 seeded with `seed` through
/// `SeedableRng::seed_from_u64`; values are consumed row by row in the
/// topological vertex order, so output is reproducible for a given seed.
pub fn sample(model: &DendroidModel, count: usize, seed: u64) -> Result<Dataset> {
    if count == 0 {
        return Err(Error::InvalidCount { count, minimum: 1 });
    }
    let rooted = orient_forest(model.forest(), model.schema())?;
    let n_vars = model.schema().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns: Vec<Column> = model
        .schema()
        .kinds()
        .iter()
        .map(|k| match k {
            VariableKind::Discrete { .. } => Column::Discrete(Vec::with_capacity(count)),
            VariableKind::Gaussian => Column::Gaussian(Vec::with_capacity(count)),
        })
        .collect();
    let mut row = vec![CellRef::Category(0); n_vars];
    let mut weights = Vec::new();
    for _ in 0..count {
        for &v in rooted.topological_order() {
            row[v] = match rooted.parent(v) {
                None => match &model.marginals[v] {
                    NodeMarginal::Discrete { probs } => CellRef::Category(draw_categorical(&mut rng, probs)),
                    NodeMarginal::Gaussian { mean, var } => CellRef::Real(draw_normal(&mut rng, *mean, *var)),
                },
                Some(p) => {
                    let factor = model.factor(v, p).expect("forest edge has a factor");
                    draw_child(&mut rng, factor, v, p, row[p], &mut weights)
                }
            };
        }
        for (column, cell) in columns.iter_mut().zip(&row) {
            match (column, *cell) {
                (Column::Discrete(values), CellRef::Category(x)) => values.push(x),
                (Column::Gaussian(values), CellRef::Real(x)) => values.push(x),
                _ => unreachable!("sampled cells follow the schema"),
            }
        }
    }
    Dataset::from_columns(model.schema().clone(), columns)
}

fn draw_child(
    rng: &mut ChaCha8Rng,
    factor: &EdgeFactor,
    child: usize,
    parent: usize,
    parent_value: CellRef,
    weights: &mut Vec<f64>,
) -> CellRef {
    match (factor, parent_value) {
        (EdgeFactor::Discrete { rows, cols, table }, CellRef::Category(y)) => {
            weights.clear();
            if child < parent {
                // child indexes rows
                weights.extend((0..*rows).map(|x| table[x * cols + y]));
            } else {
                weights.extend(table[y * cols..(y + 1) * cols].iter().copied());
            }
            CellRef::Category(draw_categorical(rng, weights))
        }
        (
            EdgeFactor::Gaussian {
                rho,
                mean_i,
                var_i,
                mean_j,
                var_j,
            },
            CellRef::Real(x),
        ) => {
            let (mc, vc, mp, vp) = if child < parent {
                (*mean_i, *var_i, *mean_j, *var_j)
            } else {
                (*mean_j, *var_j, *mean_i, *var_i)
            };
            let mean = mc + rho * sqrt(vc / vp) * (x - mp);
            CellRef::Real(draw_normal(rng, mean, vc * (1.0 - rho * rho)))
        }
        (EdgeFactor::Mixed { factor, .. }, CellRef::Category(y)) => {
            let mean = factor.class_means[y].expect("sampled class has positive probability");
            CellRef::Real(draw_normal(rng, mean, factor.pooled_var))
        }
        (EdgeFactor::Mixed { factor, .. }, CellRef::Real(x)) => {
            let post = factor.posterior(x);
            CellRef::Category(draw_categorical(rng, &post))
        }
        _ => unreachable!("factor kinds are checked against the schema"),
    }
}
