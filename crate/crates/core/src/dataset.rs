//! Validated samples.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::schema::{VariableKind, VariableSchema};

/// One column of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    /// Category indices in `[0, α)`.
    Discrete(Vec<usize>),
    /// Finite reals.
    Gaussian(Vec<f64>),
}

impl Column {
    /// Number of entries.
    pub fn len(&self) -> usize {
        match self {
            Column::Discrete(v) => v.len(),
            Column::Gaussian(v) => v.len(),
        }
    }

    /// Whether the column has no entries.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A single cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// Category index.
    Category(usize),
    /// Real value.
    Real(f64),
}

/// `n ≥ 1` rows of values checked against a schema, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: VariableSchema,
    columns: Vec<Column>,
    n: usize,
}

impl Dataset {
    /// Assemble a dataset from typed columns, checking every invariant.
    pub fn from_columns(schema: VariableSchema, columns: Vec<Column>) -> Result<Self> {
        if columns.len() != schema.len() {
            return Err(Error::ArityMismatch {
                row: 0,
                expected: schema.len(),
                found: columns.len(),
            });
        }
        let n = columns.first().map_or(0, Column::len);
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        for (c, (column, kind)) in columns.iter().zip(schema.kinds()).enumerate() {
            if column.len() != n {
                return Err(Error::RaggedColumns { column: c });
            }
            match (column, kind) {
                (Column::Discrete(values), VariableKind::Discrete { labels }) => {
                    if let Some(row) = values.iter().position(|&v| v >= labels.len()) {
                        return Err(Error::UnknownCategory {
                            row,
                            column: c,
                            value: values[row].to_string(),
                        });
                    }
                }
                (Column::Gaussian(values), VariableKind::Gaussian) => {
                    if let Some(row) = values.iter().position(|v| !v.is_finite()) {
                        return Err(Error::NonFiniteValue { row, column: c });
                    }
                }
                _ => return Err(Error::SchemaMismatch),
            }
        }
        Ok(Dataset { schema, columns, n })
    }

    /// The schema rows were validated against.
    pub fn schema(&self) -> &VariableSchema {
        &self.schema
    }

    /// Number of rows `n`.
    pub fn n_rows(&self) -> usize {
        self.n
    }

    /// Number of variables `N`.
    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    /// Column `i`.
    pub fn column(&self, i: usize) -> &Column {
        &self.columns[i]
    }

    /// All columns in schema order.
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Cell at `(row, column)`.
    pub fn cell(&self, row: usize, column: usize) -> Cell {
        match &self.columns[column] {
            Column::Discrete(v) => Cell::Category(v[row]),
            Column::Gaussian(v) => Cell::Real(v[row]),
        }
    }
}

/// Validate raw textual records against `schema`.
///
/// Discrete cells are matched against the schema labels (after trimming
/// surrounding whitespace) and stored as the label's position. Gaussian cells
/// are parsed as `f64` and must be finite.
pub fn validate_dataset<R, S>(
    schema: &VariableSchema,
    raw_rows: impl IntoIterator<Item = R>,
) -> Result<Dataset>
where
    R: AsRef<[S]>,
    S: AsRef<str>,
{
    let mut columns: Vec<Column> = schema
        .kinds()
        .iter()
        .map(|k| match k {
            VariableKind::Discrete { .. } => Column::Discrete(Vec::new()),
            VariableKind::Gaussian => Column::Gaussian(Vec::new()),
        })
        .collect();

    let mut n = 0;
    for (row, record) in raw_rows.into_iter().enumerate() {
        let cells = record.as_ref();
        if cells.len() != schema.len() {
            return Err(Error::ArityMismatch {
                row,
                expected: schema.len(),
                found: cells.len(),
            });
        }
        for (column, (cell, kind)) in cells.iter().zip(schema.kinds()).enumerate() {
            let text = cell.as_ref().trim();
            match (&mut columns[column], kind) {
                (Column::Discrete(values), kind) => {
                    let index = kind.label_index(text).ok_or_else(|| Error::UnknownCategory {
                        row,
                        column,
                        value: text.to_string(),
                    })?;
                    values.push(index);
                }
                (Column::Gaussian(values), _) => {
                    let value: f64 = text.parse().map_err(|_| Error::InvalidNumber {
                        row,
                        column,
                        value: text.to_string(),
                    })?;
                    if !value.is_finite() {
                        return Err(Error::NonFiniteValue { row, column });
                    }
                    values.push(value);
                }
            }
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(Dataset {
        schema: schema.clone(),
        columns,
        n,
    })
}
