mod common;

use common::*;
use dendroid::csv_file::{parse_dataset, write_dataset};
use dendroid::model_file::{model_from_json, model_to_json};
use dendroid::parallel::score_all_pairs_parallel;
use dendroid_core::model::{description_length, fit, sample};
use dendroid_core::scoring::score_all_pairs;
use dendroid_core::{Criterion, Forest, QuadratureSpec, VariableKind, VariableSchema};
use tempfile::TempDir;

fn sampled(dir: &TempDir, model: &dendroid_core::DendroidModel, count: &str, seed: &str) -> (String, String) {
    let m = write_model(dir.path(), "truth.json", model);
    let data = dir.path().join(format!("data-{seed}.csv"));
    let out = dendroid(&["sample", "--model", p(&m), "--count", count, "--seed", seed, "--out", p(&data)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let schema = write_schema(dir.path(), "schema.json", model.schema());
    (p(&data).to_string(), p(&schema).to_string())
}

#[test]
fn learn_ml_recovers_star_as_dot() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &gaussian_star(), "2000", "1");
    let out = dendroid(&["learn", "--data", &data, "--schema", &schema, "--criterion", "ml", "--format", "dot"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let edges: Vec<&str> = out.stdout.lines().filter(|l| l.contains("--")).collect();
    assert_eq!(edges.len(), 3);
    for (line, other) in edges.iter().zip(["X2", "X3", "X4"]) {
        assert!(line.starts_with(&format!("  \"X1\" -- \"{other}\" [label=\"I=")), "{line}");
    }
    // The report names the rejected loops.
    assert!(out.stderr.contains("chow-liu: 3 of 6"));
    assert!(out.stderr.contains("rejected (loop)"));
}

#[test]
fn learn_mdl_on_independent_data_is_empty() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &edgeless_mixed(), "5000", "2");
    let forest = dir.path().join("forest.json");
    let out = dendroid(&["learn", "--data", &data, "--schema", &schema, "--out", p(&forest)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&forest).unwrap()).unwrap();
    assert_eq!(doc["edges"], serde_json::json!([]));
    assert_eq!(doc["candidates"].as_array().unwrap().len(), 3);
    assert!(out.stdout.contains("rejected (negative)"));
}

#[test]
fn both_formats_write_two_files() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &recovery_model(), "3000", "3");
    let stem = dir.path().join("forest");
    let out = dendroid(&["learn", "--data", &data, "--schema", &schema, "--format", "both", "--out", p(&stem)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let dot = std::fs::read_to_string(dir.path().join("forest.dot")).unwrap();
    for name in ["d0", "g1", "g2", "d3", "g4", "g5"] {
        assert!(dot.contains(&format!("  \"{name}\";")));
    }
    assert!(dir.path().join("forest.json").exists());
}

#[test]
fn missing_schema_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("no-such-schema.json");
    let out = dendroid(&["learn", "--data", "x.csv", "--schema", p(&missing)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(p(&missing)), "{}", out.stderr);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dendroid(&["learn"]).code, 2);
    assert_eq!(dendroid(&["score", "--schema", "s.json", "--data", "d.csv", "--criterion", "custom"]).code, 2);
    assert_eq!(dendroid(&["score", "--schema", "s.json", "--data", "d.csv", "--dn", "3"]).code, 2);
    assert_eq!(dendroid(&["score", "--schema", "s.json", "--data", "d.csv", "--quad-order", "7"]).code, 2);
    assert_eq!(dendroid(&["--help"]).code, 0);
}

#[test]
fn bad_cells_are_located() {
    let dir = TempDir::new().unwrap();
    let schema = dir.path().join("schema.json");
    std::fs::write(&schema, r#"[{"name":"a","kind":"discrete","labels":["x","y"]},{"name":"b","kind":"gaussian"}]"#).unwrap();
    let data = dir.path().join("data.csv");
    std::fs::write(&data, "a,b\nx,1.0\ny,2.5\nw,0.1\n").unwrap();
    let out = dendroid(&["learn", "--data", p(&data), "--schema", p(&schema)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 4: column `a`: unknown category `w`"), "{}", out.stderr);
}

#[test]
fn score_reproduces_golden_table_with_injected_mi() {
    let dir = TempDir::new().unwrap();
    let schema = VariableSchema::from_kinds([5, 2, 3, 4].map(VariableKind::discrete_with_cardinality)).unwrap();
    let schema = write_schema(dir.path(), "schema.json", &schema);
    let out = dendroid(&[
        "score", "--schema", p(&schema), "--criterion", "custom", "--dn", "2", "--inject-mi", "12,10,6,8,4,2",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout,
        "i,j,name_i,name_j,mi,penalty,score\n\
         0,1,X1,X2,12.0,4.0,8.0\n\
         0,2,X1,X3,10.0,8.0,2.0\n\
         0,3,X1,X4,6.0,12.0,-6.0\n\
         1,2,X2,X3,8.0,2.0,6.0\n\
         1,3,X2,X4,4.0,3.0,1.0\n\
         2,3,X3,X4,2.0,6.0,-4.0\n"
    );
    let json = dendroid(&[
        "score", "--schema", p(&schema), "--criterion", "custom", "--dn", "2", "--inject-mi", "12,10,6,8,4,2",
        "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    let scores: Vec<f64> = doc["pairs"].as_array().unwrap().iter().map(|r| r["score"].as_f64().unwrap()).collect();
    assert_eq!(scores, [8.0, 2.0, -6.0, 6.0, 1.0, -4.0]);
}

#[test]
fn score_two_columns_gives_one_row() {
    let dir = TempDir::new().unwrap();
    let schema = dir.path().join("schema.json");
    std::fs::write(&schema, r#"[{"name":"a","kind":"gaussian"},{"name":"b","kind":"gaussian"}]"#).unwrap();
    let data = dir.path().join("data.csv");
    std::fs::write(&data, "a,b\n1,2\n2,1\n3,5\n").unwrap();
    let out = dendroid(&["score", "--data", p(&data), "--schema", p(&schema)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 2);
}

#[test]
fn degenerate_column_is_named() {
    let dir = TempDir::new().unwrap();
    let schema = dir.path().join("schema.json");
    std::fs::write(&schema, r#"[{"name":"a","kind":"gaussian"},{"name":"flat","kind":"gaussian"}]"#).unwrap();
    let data = dir.path().join("data.csv");
    std::fs::write(&data, "a,flat\n1,2\n2,2\n3,2\n").unwrap();
    let out = dendroid(&["score", "--data", p(&data), "--schema", p(&schema)]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("`flat` has zero variance"), "{}", out.stderr);
}

#[test]
fn sample_is_reproducible_and_rejects_zero() {
    let dir = TempDir::new().unwrap();
    let schema = VariableSchema::new(vec![("coin", VariableKind::discrete(["h", "t"]))]).unwrap();
    let model = dendroid_core::DendroidModel::from_parts(
        schema,
        Forest::empty(1),
        vec![dendroid_core::NodeMarginal::Discrete { probs: vec![0.5, 0.5] }],
        vec![],
        1,
    )
    .unwrap();
    let m = write_model(dir.path(), "coin.json", &model);
    let a = dendroid(&["sample", "--model", p(&m), "--count", "50", "--seed", "9"]);
    let b = dendroid(&["sample", "--model", p(&m), "--count", "50", "--seed", "9"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.lines().count(), 51);
    let zero = dendroid(&["sample", "--model", p(&m), "--count", "0"]);
    assert_eq!(zero.code, 1);
    assert!(zero.stderr.contains("count"));
}

#[test]
fn sample_then_learn_recovers_structure() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &recovery_model(), "10000", "4");
    let forest = dir.path().join("forest.json");
    let out = dendroid(&["learn", "--data", &data, "--schema", &schema, "--out", p(&forest)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&forest).unwrap()).unwrap();
    let edges: Vec<(u64, u64)> = doc["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["i"].as_u64().unwrap(), e["j"].as_u64().unwrap()))
        .collect();
    assert_eq!(edges, [(0, 1), (1, 2), (2, 3), (4, 5)]);
}

#[test]
fn eval_reproduces_learned_description_length() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &recovery_model(), "1500", "5");
    let fitted = dir.path().join("fitted.json");
    let forest = dir.path().join("forest.json");
    let learn = dendroid(&["learn", "--data", &data, "--schema", &schema, "--out", p(&forest), "--model", p(&fitted)]);
    assert_eq!(learn.code, 0, "{}", learn.stderr);
    let learned = learn
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("description length: "))
        .and_then(|l| l.split(' ').next())
        .unwrap()
        .to_string();
    let eval = dendroid(&["eval", "--model", p(&fitted), "--data", &data]);
    assert_eq!(eval.code, 0, "{}", eval.stderr);
    let evaluated = eval.stdout.lines().find_map(|l| l.strip_prefix("description_length: ")).unwrap();
    assert_eq!(learned, evaluated);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&forest).unwrap()).unwrap();
    assert_eq!(doc["description_length"].as_f64().unwrap().to_string(), learned.parse::<f64>().unwrap().to_string());
}

#[test]
fn eval_under_ml_is_negative_log_likelihood() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &gaussian_star(), "300", "6");
    let fitted = dir.path().join("fitted.json");
    let forest = dir.path().join("forest.json");
    let learn = dendroid(&[
        "learn", "--data", &data, "--schema", &schema, "--criterion", "ml", "--out", p(&forest), "--model", p(&fitted),
    ]);
    assert_eq!(learn.code, 0);
    let eval = dendroid(&["eval", "--model", p(&fitted), "--data", &data, "--criterion", "ml"]);
    let field = |k: &str| -> f64 {
        eval.stdout.lines().find_map(|l| l.strip_prefix(k)).unwrap().parse().unwrap()
    };
    assert_eq!(field("description_length: "), -field("log_likelihood: "));
    assert_eq!(field("d_n: "), 0.0);
}

#[test]
fn eval_ranks_structures_like_the_library() {
    let dir = TempDir::new().unwrap();
    let truth = recovery_model();
    let ds = sample(&truth, 800, 7).unwrap();
    let data = dir.path().join("data.csv");
    let mut buf = Vec::new();
    write_dataset(&mut buf, &ds).unwrap();
    std::fs::write(&data, &buf).unwrap();
    for (k, forest) in [truth.forest().clone(), Forest::new(6, [(0, 1), (4, 5)]).unwrap()].iter().enumerate() {
        let model = fit(&ds, forest).unwrap();
        let path = write_model(dir.path(), &format!("m{k}.json"), &model);
        let eval = dendroid(&["eval", "--model", p(&path), "--data", p(&data)]);
        let reported: f64 = eval
            .stdout
            .lines()
            .find_map(|l| l.strip_prefix("description_length: "))
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(reported, description_length(&model, &ds, Criterion::Mdl).unwrap());
    }
}

#[test]
fn eval_reports_unseen_category_as_negative_infinity() {
    let dir = TempDir::new().unwrap();
    let schema = dir.path().join("schema.json");
    std::fs::write(&schema, r#"[{"name":"a","kind":"discrete","labels":["x","y","z"]},{"name":"b","kind":"gaussian"}]"#).unwrap();
    let train = dir.path().join("train.csv");
    std::fs::write(&train, "a,b\nx,1\ny,2\nx,0.5\ny,3\n").unwrap();
    let held_out = dir.path().join("held_out.csv");
    std::fs::write(&held_out, "a,b\nz,1\n").unwrap();
    let fitted = dir.path().join("fitted.json");
    let out = dendroid(&["learn", "--data", p(&train), "--schema", p(&schema), "--criterion", "ml", "--model", p(&fitted)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let eval = dendroid(&["eval", "--model", p(&fitted), "--data", p(&held_out)]);
    assert_eq!(eval.code, 0);
    assert!(eval.stdout.contains("log_likelihood: -inf"), "{}", eval.stdout);
    assert!(eval.stdout.contains("description_length: inf"), "{}", eval.stdout);
}

#[test]
fn oracle_subcommand_agrees() {
    let dir = TempDir::new().unwrap();
    let (data, schema) = sampled(&dir, &recovery_model(), "500", "8");
    let out = dendroid(&["oracle", "--data", &data, "--schema", &schema]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("agree: yes"));
}

#[test]
fn csv_round_trip_is_lossless() {
    let model = recovery_model();
    let ds = sample(&model, 300, 12).unwrap();
    let mut first = Vec::new();
    write_dataset(&mut first, &ds).unwrap();
    let back = parse_dataset(first.as_slice(), model.schema()).unwrap();
    assert_eq!(back, ds);
    let mut second = Vec::new();
    write_dataset(&mut second, &back).unwrap();
    assert_eq!(first, second);
}

#[test]
fn model_json_round_trips_exactly() {
    let ds = sample(&recovery_model(), 700, 13).unwrap();
    let model = fit(&ds, recovery_model().forest()).unwrap();
    let text = model_to_json(&model);
    let back = model_from_json(&text).unwrap();
    assert_eq!(back, model);
    assert_eq!(model_to_json(&back), text);
    assert!(model_from_json(&text.replace("\"version\": 1", "\"version\": 9")).is_err());
    assert!(model_from_json(&text.replace("\"parameter_count\": ", "\"parameter_count\": 1")).is_err());
}

#[test]
fn parallel_scoring_is_bit_identical() {
    let ds = sample(&recovery_model(), 2000, 14).unwrap();
    let quad = QuadratureSpec::default();
    for criterion in [Criterion::MaximumLikelihood, Criterion::Mdl, Criterion::Aic] {
        let seq = score_all_pairs(&ds, criterion, &quad).unwrap();
        let par = score_all_pairs_parallel(&ds, criterion, &quad).unwrap();
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.pair(), b.pair());
            assert_eq!(a.mi.to_bits(), b.mi.to_bits());
            assert_eq!(a.score.to_bits(), b.score.to_bits());
        }
    }
}
