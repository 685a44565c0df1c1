//! Error type shared by every module.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

/// Convenience alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong while validating, estimating, learning or
/// fitting.
///
/// Row and column indices are 0-based; front ends translate them into line
/// numbers and names.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// The schema declares no variables.
    EmptySchema,
    /// A variable name is empty.
    EmptyName,
    /// Two variables share a name.
    DuplicateVariable(String),
    /// A discrete variable has fewer than two categories.
    InvalidCardinality {
        /// Offending variable.
        variable: String,
        /// Declared number of categories.
        cardinality: usize,
    },
    /// A discrete variable lists the same category twice.
    DuplicateLabel {
        /// Offending variable.
        variable: String,
        /// Repeated label.
        label: String,
    },
    /// A cell holds a category that the schema does not declare.
    UnknownCategory {
        /// Row index.
        row: usize,
        /// Column index.
        column: usize,
        /// The unrecognised text.
        value: String,
    },
    /// A Gaussian cell could not be parsed as a number.
    InvalidNumber {
        /// Row index.
        row: usize,
        /// Column index.
        column: usize,
        /// The unparseable text.
        value: String,
    },
    /// A Gaussian cell is NaN or infinite.
    NonFiniteValue {
        /// Row index.
        row: usize,
        /// Column index.
        column: usize,
    },
    /// A row has the wrong number of cells.
    ArityMismatch {
        /// Row index.
        row: usize,
        /// Number of schema variables.
        expected: usize,
        /// Number of cells found.
        found: usize,
    },
    /// A dataset without rows.
    EmptyDataset,
    /// Typed columns of unequal length.
    RaggedColumns {
        /// First column whose length differs from column 0.
        column: usize,
    },
    /// A pair statistic was requested for a vertex with itself.
    SameVertex(usize),
    /// A vertex index is not below the number of variables.
    VertexOutOfRange {
        /// Offending vertex.
        vertex: usize,
        /// Number of vertices.
        n_vertices: usize,
    },
    /// A Gaussian column (or the residual of a mixed pair) has zero variance.
    DegenerateGaussian {
        /// Column whose variance vanished.
        column: usize,
    },
    /// A pairwise Gaussian factor has |rho| = 1 and cannot be fitted.
    SingularCorrelation {
        /// First vertex.
        i: usize,
        /// Second vertex.
        j: usize,
    },
    /// Doubling the quadrature order moved the mixed-pair estimate by more
    /// than the configured tolerance, or the estimate left `[0, H]`.
    QuadratureFailure {
        /// Estimate at the configured order.
        coarse: f64,
        /// Estimate at twice the configured order.
        fine: f64,
    },
    /// Quadrature order must be even and at least 8.
    InvalidQuadratureOrder(usize),
    /// Quadrature tolerance must be finite and positive.
    InvalidTolerance(f64),
    /// A penalty scale `d_n` must be finite and nonnegative.
    InvalidPenalty(f64),
    /// An estimator failed on a specific pair.
    Pair {
        /// First vertex.
        i: usize,
        /// Second vertex.
        j: usize,
        /// Underlying failure.
        source: Box<Error>,
    },
    /// A structure builder was given no candidate edges for two or more
    /// vertices.
    EmptyEdgeList,
    /// An edge connects a vertex with itself.
    SelfLoop(usize),
    /// The same undirected pair appears twice.
    DuplicateEdge {
        /// First vertex.
        i: usize,
        /// Second vertex.
        j: usize,
    },
    /// An edge closes a cycle.
    CyclicInput {
        /// First vertex.
        i: usize,
        /// Second vertex.
        j: usize,
    },
    /// Dataset and model disagree on variables.
    SchemaMismatch,
    /// A count argument must be at least one (or at least the stated
    /// minimum).
    InvalidCount {
        /// Requested count.
        count: usize,
        /// Smallest accepted value.
        minimum: usize,
    },
    /// Exhaustive enumeration refused an instance that is too big.
    TooLarge {
        /// Requested size.
        size: usize,
        /// Largest accepted size.
        limit: usize,
    },
    /// A reference distribution assigns zero probability where the data
    /// distribution does not.
    UnsupportedSupport,
    /// A probability table is negative somewhere or does not sum to one.
    InvalidDistribution,
    /// Model components are inconsistent with each other.
    InvalidModel(String),
}

impl Error {
    /// Attach a pair to an estimator failure.
    pub fn on_pair(self, i: usize, j: usize) -> Error {
        match self {
            already @ Error::Pair { .. } => already,
            other => Error::Pair {
                i,
                j,
                source: Box::new(other),
            },
        }
    }

    /// Innermost error, stripping [`Error::Pair`] wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Pair { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySchema => write!(f, "schema declares no variables"),
            Error::EmptyName => write!(f, "variable name is empty"),
            Error::DuplicateVariable(name) => write!(f, "duplicate variable name `{name}`"),
            Error::InvalidCardinality {
                variable,
                cardinality,
            } => write!(
                f,
                "discrete variable `{variable}` needs at least 2 categories, found {cardinality}"
            ),
            Error::DuplicateLabel { variable, label } => {
                write!(f, "variable `{variable}` lists category `{label}` twice")
            }
            Error::UnknownCategory { row, column, value } => write!(
                f,
                "row {row}, column {column}: unknown category `{value}`"
            ),
            Error::InvalidNumber { row, column, value } => {
                write!(f, "row {row}, column {column}: `{value}` is not a number")
            }
            Error::NonFiniteValue { row, column } => {
                write!(f, "row {row}, column {column}: value is not finite")
            }
            Error::ArityMismatch {
                row,
                expected,
                found,
            } => write!(f, "row {row}: expected {expected} cells, found {found}"),
            Error::EmptyDataset => write!(f, "dataset has no rows"),
            Error::RaggedColumns { column } => {
                write!(f, "column {column} has a different length than column 0")
            }
            Error::SameVertex(v) => write!(f, "pair statistics need two distinct vertices, got {v} twice"),
            Error::VertexOutOfRange { vertex, n_vertices } => {
                write!(f, "vertex {vertex} out of range for {n_vertices} vertices")
            }
            Error::DegenerateGaussian { column } => {
                write!(f, "column {column} has zero sample variance")
            }
            Error::SingularCorrelation { i, j } => {
                write!(f, "columns {i} and {j} are perfectly correlated")
            }
            Error::QuadratureFailure { coarse, fine } => write!(
                f,
                "quadrature did not converge (order n: {coarse}, order 2n: {fine})"
            ),
            Error::InvalidQuadratureOrder(order) => {
                write!(f, "quadrature order must be even and in [8, 512], got {order}")
            }
            Error::InvalidTolerance(tol) => write!(f, "invalid quadrature tolerance {tol}"),
            Error::InvalidPenalty(d) => write!(f, "penalty scale must be finite and >= 0, got {d}"),
            Error::Pair { i, j, source } => write!(f, "pair ({i}, {j}): {source}"),
            Error::EmptyEdgeList => write!(f, "no candidate edges supplied"),
            Error::SelfLoop(v) => write!(f, "self-loop on vertex {v}"),
            Error::DuplicateEdge { i, j } => write!(f, "edge ({i}, {j}) appears twice"),
            Error::CyclicInput { i, j } => write!(f, "edge ({i}, {j}) closes a cycle"),
            Error::SchemaMismatch => write!(f, "dataset schema does not match the model"),
            Error::InvalidCount { count, minimum } => {
                write!(f, "count must be at least {minimum}, got {count}")
            }
            Error::TooLarge { size, limit } => {
                write!(f, "instance of size {size} exceeds enumeration limit {limit}")
            }
            Error::UnsupportedSupport => {
                write!(f, "reference distribution vanishes where the data distribution does not")
            }
            Error::InvalidDistribution => write!(f, "probability table is invalid"),
            Error::InvalidModel(why) => write!(f, "invalid model: {why}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Pair { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
