mod common;

use common::*;
use dendroid_core::estimators::{
    collect_pair_stats, discrete_counts, mi_discrete, mi_gaussian_from_rho, mutual_information,
};
use dendroid_core::forest::{build_forest_suzuki, build_tree_chow_liu};
use dendroid_core::model::{fit, log_likelihood, parameter_count};
use dendroid_core::oracle::{all_forests, brute_force_best_forest};
use dendroid_core::scoring::{penalty_weight, score_all_pairs, score_pairs_with};
use dendroid_core::{
    orient_forest, Column, Criterion, DendroidModel, EdgeFactor, Forest, MixedFactor, PairStats,
    UnionFind, VariableKind, VariableSchema,
};
use proptest::prelude::*;

fn weights(max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (Just(n), prop::collection::vec(-10.0f64..10.0, m))
    })
}

fn kind_codes(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(prop_oneof![Just(0usize), 2usize..=4], 2..=max_n)
}

fn replay_is_acyclic(forest: &Forest) -> bool {
    let mut uf = UnionFind::new(forest.n_vertices());
    forest.edges().iter().all(|&(a, b)| uf.union(a, b))
}

fn random_forest(n: usize, scores: &[f64]) -> Forest {
    build_forest_suzuki(n, &signed_edges(n, scores)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn builders_emit_valid_forests((n, w) in weights(7)) {
        let edges = signed_edges(n, &w);
        let cl = build_tree_chow_liu(n, &edges).unwrap();
        let sz = build_forest_suzuki(n, &edges).unwrap();
        prop_assert!(replay_is_acyclic(&cl));
        prop_assert!(replay_is_acyclic(&sz));
        prop_assert_eq!(cl.edges().len(), n - 1);
        prop_assert!(sz.edges().len() < n);
        let admitted_nonnegative = sz
            .edges()
            .iter()
            .all(|p| edges.iter().find(|e| e.pair() == *p).unwrap().score >= 0.0);
        prop_assert!(admitted_nonnegative);
    }

    #[test]
    fn orientation_preserves_edges((n, w) in weights(7), codes in prop::collection::vec(prop_oneof![Just(0usize), Just(2usize)], 7)) {
        let forest = random_forest(n, &w);
        let schema = VariableSchema::from_kinds(kinds_from_codes(&codes[..n])).unwrap();
        let rooted = orient_forest(&forest, &schema).unwrap();
        prop_assert_eq!(rooted.to_forest(), forest.clone());
        let mut uf = UnionFind::new(n);
        for &(a, b) in forest.edges() {
            uf.union(a, b);
        }
        prop_assert_eq!(rooted.roots().count(), uf.components());
        // Any component holding a discrete vertex is rooted at one.
        for r in rooted.roots() {
            let has_discrete = (0..n).any(|v| uf.connected(v, r) && schema.kind(v).is_discrete());
            prop_assert!(!has_discrete || schema.kind(r).is_discrete());
        }
    }

    #[test]
    fn mi_is_symmetric_and_nonnegative(codes in kind_codes(5), n in 10usize..60, seed in any::<u64>()) {
        let ds = random_dataset(&codes, n, seed);
        let quad = &*QUAD;
        for i in 0..codes.len() {
            for j in 0..codes.len() {
                if i == j {
                    continue;
                }
                let a = mutual_information(&collect_pair_stats(&ds, i, j).unwrap(), quad).unwrap();
                let b = mutual_information(&collect_pair_stats(&ds, j, i).unwrap(), quad).unwrap();
                prop_assert!(a >= 0.0);
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn mi_discrete_matches_double_loop(a in 2usize..5, b in 2usize..5, cells in prop::collection::vec(0u64..20, 16)) {
        let mut joint: Vec<u64> = cells[..a * b].to_vec();
        if joint.iter().all(|&c| c == 0) {
            joint[0] = 1;
        }
        let stats = dendroid_core::DiscretePair::from_joint(a, b, joint.clone());
        let n: u64 = joint.iter().sum();
        let nf = n as f64;
        let mut kl = 0.0;
        for x in 0..a {
            let px: f64 = (0..b).map(|y| joint[x * b + y]).sum::<u64>() as f64 / nf;
            for y in 0..b {
                let py: f64 = (0..a).map(|x2| joint[x2 * b + y]).sum::<u64>() as f64 / nf;
                let pxy = joint[x * b + y] as f64 / nf;
                if pxy > 0.0 {
                    kl += pxy * (pxy / (px * py)).ln();
                }
            }
        }
        let expected = (nf * kl).max(0.0);
        let got = mi_discrete(&stats);
        prop_assert!((got - expected).abs() <= 1e-12 * expected.max(1.0), "{} vs {}", got, expected);
    }

    #[test]
    fn mi_gaussian_increases_with_rho(r1 in 0.0f64..0.999, r2 in 0.0f64..0.999, n in 1usize..1000) {
        prop_assume!(r1 != r2);
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(mi_gaussian_from_rho(lo, n) < mi_gaussian_from_rho(hi, n));
        prop_assert_eq!(mi_gaussian_from_rho(-hi, n), mi_gaussian_from_rho(hi, n));
    }

    #[test]
    fn penalty_symmetric_and_scores_monotone(codes in kind_codes(5), n in 10usize..40, seed in any::<u64>(), d1 in 0.0f64..10.0, d2 in 0.0f64..10.0) {
        let ds = random_dataset(&codes, n, seed);
        let kinds = ds.schema().kinds();
        for a in kinds {
            for b in kinds {
                prop_assert_eq!(penalty_weight(a, b, d1), penalty_weight(b, a, d1));
            }
        }
        let quad = &*QUAD;
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let s_lo = score_all_pairs(&ds, Criterion::custom(lo).unwrap(), quad).unwrap();
        let s_hi = score_all_pairs(&ds, Criterion::custom(hi).unwrap(), quad).unwrap();
        let s_ml = score_all_pairs(&ds, Criterion::MaximumLikelihood, quad).unwrap();
        for ((a, b), m) in s_lo.iter().zip(&s_hi).zip(&s_ml) {
            prop_assert!(a.score >= b.score);
            prop_assert_eq!(m.score, m.mi);
            prop_assert_eq!(a.score, a.mi - a.penalty);
        }
    }

    #[test]
    fn suzuki_without_penalty_is_chow_liu((n, w) in weights(7)) {
        let positive: Vec<f64> = w.iter().map(|x| x.abs() + 1e-3).collect();
        let edges = edges_from_weights(n, &positive);
        prop_assert_eq!(build_forest_suzuki(n, &edges).unwrap(), build_tree_chow_liu(n, &edges).unwrap());
    }

    #[test]
    fn greedy_matches_brute_force((n, w) in weights(6)) {
        let edges = signed_edges(n, &w);
        let sz = build_forest_suzuki(n, &edges).unwrap();
        let bf = brute_force_best_forest(n, &edges, false).unwrap();
        prop_assert_eq!(&sz, &bf);
        let positive = edges_from_weights(n, &w.iter().map(|x| x + 10.0).collect::<Vec<_>>());
        let cl = build_tree_chow_liu(n, &positive).unwrap();
        let bt = brute_force_best_forest(n, &positive, true).unwrap();
        prop_assert_eq!(cl, bt);
    }

    #[test]
    fn suzuki_forest_extends_to_a_maximum_spanning_tree((n, w) in weights(5)) {
        let edges = signed_edges(n, &w);
        let sz = build_forest_suzuki(n, &edges).unwrap();
        let trees = all_forests(n, true).unwrap();
        let best = trees.iter().map(|t| total_score(&edges, t.edges())).fold(f64::NEG_INFINITY, f64::max);
        let found = trees.iter().any(|t| {
            (total_score(&edges, t.edges()) - best).abs() <= 1e-9
                && sz.edges().iter().all(|&(a, b)| t.contains(a, b))
        });
        let _ = &found;
        prop_assert!(found);
    }

    #[test]
    fn likelihood_decomposes(codes in prop::collection::vec(2usize..=4, 2..=5), n in 5usize..60, seed in any::<u64>(), w in prop::collection::vec(-1.0f64..1.0, 10)) {
        let ds = random_dataset(&codes, n, seed);
        let nv = codes.len();
        let forest = random_forest(nv, &w[..nv * (nv - 1) / 2]);
        let model = fit(&ds, &forest).unwrap();
        let ll = log_likelihood(&model, &ds).unwrap();
        let quad = &*QUAD;
        let mut expected = 0.0;
        for (v, &a) in codes.iter().enumerate() {
            let Column::Discrete(col) = ds.column(v) else { unreachable!() };
            expected -= n as f64 * column_entropy(col, a);
        }
        for &(i, j) in forest.edges() {
            expected += mutual_information(&collect_pair_stats(&ds, i, j).unwrap(), quad).unwrap();
        }
        prop_assert!((ll - expected).abs() <= 1e-9 * expected.abs().max(1.0), "{} vs {}", ll, expected);
        if forest.edges().is_empty() {
            prop_assert_eq!(model.parameter_count(), codes.iter().map(|a| a - 1).sum::<usize>());
        }
    }

    #[test]
    fn fitted_factors_are_consistent(codes in kind_codes(5), n in 10usize..60, seed in any::<u64>(), w in prop::collection::vec(-1.0f64..1.0, 10)) {
        let ds = random_dataset(&codes, n, seed);
        let nv = codes.len();
        let forest = random_forest(nv, &w[..nv * (nv - 1) / 2]);
        let model = fit(&ds, &forest).unwrap();
        let rebuilt = DendroidModel::from_parts(
            model.schema().clone(),
            model.forest().clone(),
            model.marginals().to_vec(),
            model.edges().iter().map(|e| e.factor.clone()).collect(),
            model.n(),
        );
        prop_assert_eq!(rebuilt.as_ref(), Ok(&model));
        prop_assert_eq!(model.parameter_count(), parameter_count(ds.schema(), &forest));
        let edgeless = fit(&ds, &Forest::empty(nv)).unwrap();
        prop_assert_eq!(
            edgeless.parameter_count(),
            ds.schema().kinds().iter().map(VariableKind::marginal_parameters).sum::<usize>()
        );
    }

    #[test]
    fn quadrature_is_self_consistent(
        probs in prop::collection::vec(0.05f64..1.0, 2..=5),
        means in prop::collection::vec(-5.0f64..5.0, 5),
        var in 0.1f64..4.0,
    ) {
        let total: f64 = probs.iter().sum();
        let factor = MixedFactor {
            class_probs: probs.iter().map(|p| p / total).collect(),
            class_means: means[..probs.len()].iter().map(|&m| Some(m)).collect(),
            pooled_var: var,
        };
        let quad = &*QUAD;
        let value = factor.mutual_information(quad).unwrap();
        let fine = factor.mutual_information_with(quad.ladder().last().unwrap());
        prop_assert!(value >= 0.0 && value <= factor.class_entropy());
        prop_assert!((value - fine).abs() <= 1e-8 * fine.abs().max(factor.class_entropy()));
    }
}

#[test]
fn orientation_prefers_discrete_root_on_ties() {
    // g0 - g1 with an isolated discrete vertex: no discrete-parent edges are
    // possible, so the lowest id roots the pair.
    let schema = VariableSchema::from_kinds(kinds_from_codes(&[0, 0, 2])).unwrap();
    let forest = Forest::new(3, [(0, 1)]).unwrap();
    let rooted = orient_forest(&forest, &schema).unwrap();
    assert_eq!(rooted.parents(), &[None, Some(0), None]);
    // d0 - d1 - g2: both discrete roots give one counted edge, the lower id wins.
    let schema = VariableSchema::from_kinds(kinds_from_codes(&[2, 2, 0])).unwrap();
    let forest = Forest::new(3, [(0, 1), (1, 2)]).unwrap();
    let rooted = orient_forest(&forest, &schema).unwrap();
    assert_eq!(rooted.parents(), &[None, Some(0), Some(1)]);
}

#[test]
fn scoring_reports_offending_pair() {
    let schema = VariableSchema::from_kinds(kinds_from_codes(&[2, 0, 0])).unwrap();
    let ds = dendroid_core::Dataset::from_columns(
        schema,
        vec![
            Column::Discrete(vec![0, 1, 0, 1]),
            Column::Gaussian(vec![1.0, 2.0, 3.0, 4.0]),
            Column::Gaussian(vec![5.0; 4]),
        ],
    )
    .unwrap();
    let err = score_all_pairs(&ds, Criterion::Mdl, &QUAD).unwrap_err();
    assert!(matches!(err, dendroid_core::Error::Pair { i: 0, j: 2, .. }));
    assert_eq!(err.root_cause(), &dendroid_core::Error::DegenerateGaussian { column: 2 });
}

#[test]
fn independent_gaussians_score_zero_under_ml() {
    let kinds = vec![VariableKind::Gaussian; 4];
    let scored = score_pairs_with(&kinds, 0.0, |_, _| Ok(0.0)).unwrap();
    assert_eq!(scored.len(), 6);
    assert!(scored.iter().all(|e| e.score == 0.0));
}

#[test]
fn discrete_counts_feed_pair_stats() {
    let stats = discrete_counts(&[0, 0, 1, 1], 2, &[0, 0, 1, 1], 2);
    assert_eq!(stats.joint, vec![2, 0, 0, 2]);
    let ds = random_dataset(&[2, 3], 30, 7);
    assert!(matches!(collect_pair_stats(&ds, 0, 1).unwrap(), PairStats::Discrete(_)));
    let _ = EdgeFactor::Discrete { rows: 1, cols: 1, table: vec![1.0] };
}
