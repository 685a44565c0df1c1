#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use dendroid::model_file::model_to_json;
use dendroid::schema_file::schema_to_entries;
use dendroid_core::{
    DendroidModel, EdgeFactor, Forest, MixedFactor, NodeMarginal, VariableKind, VariableSchema,
};

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the `dendroid` binary.
pub fn dendroid(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_dendroid"))
        .args(args)
        .output()
        .expect("binary runs");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

pub fn write_model(dir: &Path, name: &str, model: &DendroidModel) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, model_to_json(model)).unwrap();
    path
}

pub fn write_schema(dir: &Path, name: &str, schema: &VariableSchema) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&schema_to_entries(schema)).unwrap()).unwrap();
    path
}

fn gaussian_edge(rho: f64, a: (f64, f64), b: (f64, f64)) -> EdgeFactor {
    EdgeFactor::Gaussian {
        rho,
        mean_i: a.0,
        var_i: a.1,
        mean_j: b.0,
        var_j: b.1,
    }
}

/// Mixed factor and the matching Gaussian marginal `(mean, var)`.
pub fn mixed_edge(
    gaussian: usize,
    discrete: usize,
    probs: &[f64],
    means: &[f64],
    phi: f64,
) -> (EdgeFactor, (f64, f64)) {
    let mean: f64 = probs.iter().zip(means).map(|(p, m)| p * m).sum();
    let var = phi
        + probs
            .iter()
            .zip(means)
            .map(|(p, m)| p * (m - mean) * (m - mean))
            .sum::<f64>();
    let factor = EdgeFactor::Mixed {
        gaussian,
        discrete,
        factor: MixedFactor {
            class_probs: probs.to_vec(),
            class_means: means.iter().map(|&m| Some(m)).collect(),
            pooled_var: phi,
        },
    };
    (factor, (mean, var))
}

/// Gaussian star `X1 – {X2, X3, X4}` with correlations 0.95, 0.9, 0.5.
pub fn gaussian_star() -> DendroidModel {
    let schema = VariableSchema::from_kinds(vec![VariableKind::Gaussian; 4]).unwrap();
    let m = (0.0, 1.0);
    let marginals = vec![NodeMarginal::Gaussian { mean: 0.0, var: 1.0 }; 4];
    DendroidModel::from_parts(
        schema,
        Forest::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
        marginals,
        vec![gaussian_edge(0.95, m, m), gaussian_edge(0.9, m, m), gaussian_edge(0.5, m, m)],
        1,
    )
    .unwrap()
}

/// Six variables in two components: `d0 – g1 – g2 – d3` and `g4 – g5`.
pub fn recovery_model() -> DendroidModel {
    let schema = VariableSchema::new(vec![
        ("d0", VariableKind::discrete(["a", "b", "c"])),
        ("g1", VariableKind::Gaussian),
        ("g2", VariableKind::Gaussian),
        ("d3", VariableKind::discrete(["lo", "hi"])),
        ("g4", VariableKind::Gaussian),
        ("g5", VariableKind::Gaussian),
    ])
    .unwrap();
    // Class means 2 apart with unit within-class variance: separation 2·√φ.
    let (e01, g1) = mixed_edge(1, 0, &[0.3, 0.4, 0.3], &[-2.0, 0.0, 2.0], 1.0);
    let g2 = (1.0, 2.0);
    // Means 1 ± 1.2, φ = 2 − 1.44 = 0.56: separation 2.4 ≥ 2·√0.56.
    let (e23, g2_check) = mixed_edge(2, 3, &[0.5, 0.5], &[-0.2, 2.2], 0.56);
    assert!((g2_check.0 - g2.0).abs() < 1e-12 && (g2_check.1 - g2.1).abs() < 1e-12);
    let g4 = (0.0, 1.0);
    let g5 = (-1.0, 3.0);
    let marginals = vec![
        NodeMarginal::Discrete { probs: vec![0.3, 0.4, 0.3] },
        NodeMarginal::Gaussian { mean: g1.0, var: g1.1 },
        NodeMarginal::Gaussian { mean: g2.0, var: g2.1 },
        NodeMarginal::Discrete { probs: vec![0.5, 0.5] },
        NodeMarginal::Gaussian { mean: g4.0, var: g4.1 },
        NodeMarginal::Gaussian { mean: g5.0, var: g5.1 },
    ];
    DendroidModel::from_parts(
        schema,
        Forest::new(6, [(0, 1), (1, 2), (2, 3), (4, 5)]).unwrap(),
        marginals,
        vec![e01, gaussian_edge(0.6, g1, g2), e23, gaussian_edge(-0.7, g4, g5)],
        1,
    )
    .unwrap()
}

/// Independent variables: one discrete, two Gaussian.
pub fn edgeless_mixed() -> DendroidModel {
    let schema = VariableSchema::new(vec![
        ("a", VariableKind::discrete(["x", "y", "z"])),
        ("b", VariableKind::Gaussian),
        ("c", VariableKind::Gaussian),
    ])
    .unwrap();
    DendroidModel::from_parts(
        schema,
        Forest::empty(3),
        vec![
            NodeMarginal::Discrete { probs: vec![0.2, 0.3, 0.5] },
            NodeMarginal::Gaussian { mean: 0.0, var: 1.0 },
            NodeMarginal::Gaussian { mean: 5.0, var: 0.25 },
        ],
        vec![],
        1,
    )
    .unwrap()
}
