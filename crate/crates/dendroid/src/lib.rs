//! File formats and command-line front end for `dendroid-core`.
//!
//! * [`schema_file`]: JSON variable declarations.
//! * [`csv_file`]: CSV datasets matched to a schema by header name.
//! * [`model_file`]: versioned JSON for fitted models.
//! * [`output`]: forest and score-table artifacts (JSON, CSV, DOT).
//! * [`parallel`]: pair scoring on a thread pool, bit-identical to the
//!   sequential scorer.
//! * [`cli`]: the `dendroid` binary.

pub mod cli;
pub mod csv_file;
pub mod error;
pub mod model_file;
pub mod output;
pub mod parallel;
pub mod schema_file;

pub use error::Failure;
