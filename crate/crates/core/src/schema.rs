//! Variable declarations.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// What values a column takes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VariableKind {
    /// Finitely many categories, stored as dense indices in label order.
    Discrete {
        /// Category names; the index of a label is its stored value.
        labels: Vec<String>,
    },
    /// Real-valued, modelled as a normal distribution.
    Gaussian,
}

impl VariableKind {
    /// A discrete kind with the given category names.
    pub fn discrete<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VariableKind::Discrete {
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    /// A discrete kind with labels `"0"`, `"1"`, … `"α-1"`.
    pub fn discrete_with_cardinality(cardinality: usize) -> Self {
        VariableKind::Discrete {
            labels: (0..cardinality).map(|k| k.to_string()).collect(),
        }
    }

    /// Number of categories, or `None` for a Gaussian.
    pub fn cardinality(&self) -> Option<usize> {
        match self {
            VariableKind::Discrete { labels } => Some(labels.len()),
            VariableKind::Gaussian => None,
        }
    }

    /// Whether this is a discrete kind.
    pub fn is_discrete(&self) -> bool {
        matches!(self, VariableKind::Discrete { .. })
    }

    /// Whether this is a Gaussian kind.
    pub fn is_gaussian(&self) -> bool {
        matches!(self, VariableKind::Gaussian)
    }

    /// The `α` that enters parameter counting: the cardinality for a discrete
    /// variable, 2 for a Gaussian.
    pub fn effective_arity(&self) -> usize {
        self.cardinality().unwrap_or(2)
    }

    /// Free parameters of the node's marginal: `α − 1` for discrete, mean and
    /// variance for Gaussian.
    pub fn marginal_parameters(&self) -> usize {
        match self {
            VariableKind::Discrete { labels } => labels.len() - 1,
            VariableKind::Gaussian => 2,
        }
    }

    /// Index of `label`, if this kind is discrete and declares it.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        match self {
            VariableKind::Discrete { labels } => labels.iter().position(|l| l == label),
            VariableKind::Gaussian => None,
        }
    }

    /// Category labels, empty for a Gaussian.
    pub fn labels(&self) -> &[String] {
        match self {
            VariableKind::Discrete { labels } => labels,
            VariableKind::Gaussian => &[],
        }
    }
}

/// An ordered, validated list of named variables. Vertex `i` of every graph
/// is variable `i` of the schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSchema {
    names: Vec<String>,
    kinds: Vec<VariableKind>,
}

impl VariableSchema {
    /// Build a schema, checking names and category lists.
    pub fn new<I, S>(variables: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, VariableKind)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut kinds = Vec::new();
        for (name, kind) in variables {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if names.contains(&name) {
                return Err(Error::DuplicateVariable(name));
            }
            if let VariableKind::Discrete { labels } = &kind {
                if labels.len() < 2 {
                    return Err(Error::InvalidCardinality {
                        variable: name,
                        cardinality: labels.len(),
                    });
                }
                for (k, label) in labels.iter().enumerate() {
                    if labels[..k].contains(label) {
                        return Err(Error::DuplicateLabel {
                            variable: name,
                            label: label.clone(),
                        });
                    }
                }
            }
            names.push(name);
            kinds.push(kind);
        }
        if names.is_empty() {
            return Err(Error::EmptySchema);
        }
        Ok(VariableSchema { names, kinds })
    }

    /// Schema of anonymous variables named `X1`, `X2`, … with the given
    /// kinds.
    pub fn from_kinds(kinds: impl IntoIterator<Item = VariableKind>) -> Result<Self> {
        Self::new(
            kinds
                .into_iter()
                .enumerate()
                .map(|(k, kind)| (format!("X{}", k + 1), kind)),
        )
    }

    /// Number of variables `N`.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false: a schema has at least one variable.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Variable names in order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Variable kinds in order.
    pub fn kinds(&self) -> &[VariableKind] {
        &self.kinds
    }

    /// Name of variable `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Kind of variable `i`.
    pub fn kind(&self, i: usize) -> &VariableKind {
        &self.kinds[i]
    }

    /// Position of the variable called `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `(name, kind)` pairs in order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &VariableKind)> {
        self.names.iter().map(String::as_str).zip(self.kinds.iter())
    }
}
