//! Versioned JSON documents for fitted models.
//!
//! ```json
//! {
//!   "format": "dendroid-model",
//!   "version": 1,
//!   "n": 200,
//!   "parameter_count": 4,
//!   "variables": [{"name": "a", "kind": "discrete", "labels": ["x", "y"]}, ...],
//!   "marginals": [{"kind": "discrete", "probs": [0.5, 0.5]}, {"kind": "gaussian", "mean": 0.0, "var": 1.0}],
//!   "edges": [{"i": 0, "j": 1, "factor": {"kind": "mixed", "gaussian": 1, "discrete": 0,
//!              "class_probs": [0.5, 0.5], "class_means": [-1.0, 1.0], "pooled_var": 0.5}}]
//! }
//! ```
//!
//! Discrete tables are nested row-major (`table[x_i][x_j]`); a mixed factor's
//! `class_means` holds `null` for classes never observed. Floats are written
//! with enough digits to read back bit-for-bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dendroid_core::{
    DendroidModel, EdgeFactor, Forest, MixedFactor, NodeMarginal, VariableSchema,
};

use crate::error::Failure;
use crate::schema_file::{entries_to_schema, schema_to_entries, VariableEntry};

/// Value of the `format` field.
pub const MODEL_FORMAT: &str = "dendroid-model";
/// Current document version.
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format: String,
    version: u32,
    n: usize,
    parameter_count: usize,
    variables: Vec<VariableEntry>,
    marginals: Vec<MarginalDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum MarginalDoc {
    Discrete { probs: Vec<f64> },
    Gaussian { mean: f64, var: f64 },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    i: usize,
    j: usize,
    factor: FactorDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FactorDoc {
    Discrete {
        table: Vec<Vec<f64>>,
    },
    Gaussian {
        rho: f64,
        mean_i: f64,
        var_i: f64,
        mean_j: f64,
        var_j: f64,
    },
    Mixed {
        gaussian: usize,
        discrete: usize,
        class_probs: Vec<f64>,
        class_means: Vec<Option<f64>>,
        pooled_var: f64,
    },
}

fn to_doc(model: &DendroidModel) -> ModelDoc {
    let marginals = model
        .marginals()
        .iter()
        .map(|m| match m {
            NodeMarginal::Discrete { probs } => MarginalDoc::Discrete { probs: probs.clone() },
            NodeMarginal::Gaussian { mean, var } => MarginalDoc::Gaussian {
                mean: *mean,
                var: *var,
            },
        })
        .collect();
    let edges = model
        .edges()
        .iter()
        .map(|e| EdgeDoc {
            i: e.i,
            j: e.j,
            factor: match &e.factor {
                EdgeFactor::Discrete { cols, table, .. } => FactorDoc::Discrete {
                    table: table.chunks(*cols).map(<[f64]>::to_vec).collect(),
                },
                EdgeFactor::Gaussian {
                    rho,
                    mean_i,
                    var_i,
                    mean_j,
                    var_j,
                } => FactorDoc::Gaussian {
                    rho: *rho,
                    mean_i: *mean_i,
                    var_i: *var_i,
                    mean_j: *mean_j,
                    var_j: *var_j,
                },
                EdgeFactor::Mixed {
                    gaussian,
                    discrete,
                    factor,
                } => FactorDoc::Mixed {
                    gaussian: *gaussian,
                    discrete: *discrete,
                    class_probs: factor.class_probs.clone(),
                    class_means: factor.class_means.clone(),
                    pooled_var: factor.pooled_var,
                },
            },
        })
        .collect();
    ModelDoc {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        n: model.n(),
        parameter_count: model.parameter_count(),
        variables: schema_to_entries(model.schema()),
        marginals,
        edges,
    }
}

fn from_doc(doc: ModelDoc) -> Result<DendroidModel, String> {
    if doc.format != MODEL_FORMAT {
        return Err(format!("`format` is `{}`, expected `{MODEL_FORMAT}`", doc.format));
    }
    if doc.version != MODEL_VERSION {
        return Err(format!("unsupported model version {}", doc.version));
    }
    let schema: VariableSchema = entries_to_schema(&doc.variables)?;
    let forest = Forest::new(schema.len(), doc.edges.iter().map(|e| (e.i, e.j)))
        .map_err(|e| e.to_string())?;
    let marginals = doc
        .marginals
        .into_iter()
        .map(|m| match m {
            MarginalDoc::Discrete { probs } => NodeMarginal::Discrete { probs },
            MarginalDoc::Gaussian { mean, var } => NodeMarginal::Gaussian { mean, var },
        })
        .collect();
    // `Forest::new` sorts edges; factors must follow that order.
    let mut edges = doc.edges;
    edges.sort_by_key(|e| (e.i.min(e.j), e.i.max(e.j)));
    let mut factors = Vec::with_capacity(edges.len());
    for e in edges {
        if e.i >= e.j {
            return Err(format!("edge ({}, {}) must list the smaller vertex first", e.i, e.j));
        }
        factors.push(match e.factor {
            FactorDoc::Discrete { table } => {
                let rows = table.len();
                let cols = table.first().map_or(0, Vec::len);
                if table.iter().any(|r| r.len() != cols) {
                    return Err(format!("edge ({}, {}): table rows differ in length", e.i, e.j));
                }
                EdgeFactor::Discrete {
                    rows,
                    cols,
                    table: table.into_iter().flatten().collect(),
                }
            }
            FactorDoc::Gaussian {
                rho,
                mean_i,
                var_i,
                mean_j,
                var_j,
            } => EdgeFactor::Gaussian {
                rho,
                mean_i,
                var_i,
                mean_j,
                var_j,
            },
            FactorDoc::Mixed {
                gaussian,
                discrete,
                class_probs,
                class_means,
                pooled_var,
            } => EdgeFactor::Mixed {
                gaussian,
                discrete,
                factor: MixedFactor {
                    class_probs,
                    class_means,
                    pooled_var,
                },
            },
        });
    }
    let model = DendroidModel::from_parts(schema, forest, marginals, factors, doc.n)
        .map_err(|e| e.to_string())?;
    if model.parameter_count() != doc.parameter_count {
        return Err(format!(
            "`parameter_count` is {}, but the structure has {}",
            doc.parameter_count,
            model.parameter_count()
        ));
    }
    Ok(model)
}

/// Serialize a model as pretty-printed JSON (with a trailing newline).
pub fn model_to_json(model: &DendroidModel) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(model)).expect("model documents serialize");
    s.push('\n');
    s
}

/// Parse and validate a model document.
pub fn model_from_json(text: &str) -> Result<DendroidModel, String> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    from_doc(doc)
}

/// Read a model file.
pub fn read_model(path: &Path) -> Result<DendroidModel, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    model_from_json(&text).map_err(|msg| Failure::input(path, msg))
}
