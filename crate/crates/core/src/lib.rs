//! Tree- and forest-structured Markov networks over mixed discrete and
//! Gaussian variables.
//!
//! The crate learns a Dendroid distribution (a distribution that factorizes
//! along a forest) from samples, fits its parameters, evaluates likelihood and
//! description length, and draws synthetic data from it.
//!
//! The pipeline is:
//!
//! 1. [`dataset::validate_dataset`] turns raw records into a typed [`Dataset`].
//! 2. [`scoring::score_all_pairs`] estimates the sample-scaled mutual
//!    information `I_n(i, j)` of every pair of columns and subtracts a
//!    parameter-count penalty chosen by a [`Criterion`].
//! 3. [`forest::build_tree_chow_liu`] (no penalty, always a spanning tree) or
//!    [`forest::build_forest_suzuki`] (stop admitting edges once the best
//!    remaining score is negative) selects the structure.
//! 4. [`model::fit`] estimates node marginals and pairwise factors, and the
//!    resulting [`DendroidModel`] can be scored or sampled.
//!
//! All information quantities are in nats.
//!
//! The crate is `no_std` (it needs `alloc`). Floating point special functions
//! come from `libm`, so results do not depend on the platform's math library.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod estimators;
pub mod forest;
pub mod graph;
pub mod math;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod schema;
pub mod scoring;

pub use dataset::{Column, Dataset};
pub use error::{Error, Result};
pub use estimators::{DiscretePair, GaussianPair, MixedFactor, MixedPair, PairStats};
pub use forest::{EdgeDecision, KruskalTrace, Rejection, UnionFind};
pub use graph::{orient_forest, Forest, RootedForest, ScoredEdge};
pub use model::{DendroidModel, EdgeFactor, NodeMarginal};
pub use quadrature::{GaussHermite, QuadratureSpec};
pub use schema::{VariableKind, VariableSchema};
pub use scoring::Criterion;
