//! CSV data files. The header row names the columns; columns are matched to
//! schema variables by name, so their order in the file is free.

use std::io::{Read, Write};
use std::path::Path;

use dendroid_core::dataset::{validate_dataset, Cell};
use dendroid_core::{Dataset, VariableKind, VariableSchema};

use crate::error::{describe_row_error, Failure};

/// Parse CSV text against `schema`. Errors carry 1-based line numbers.
pub fn parse_dataset<R: Read>(reader: R, schema: &VariableSchema) -> Result<Dataset, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| e.to_string())?.clone();
    let mut source_of = Vec::with_capacity(schema.len());
    for name in schema.names() {
        let hits: Vec<usize> = header
            .iter()
            .enumerate()
            .filter(|(_, h)| h.trim() == name)
            .map(|(k, _)| k)
            .collect();
        match hits.as_slice() {
            [k] => source_of.push(*k),
            [] => return Err(format!("line 1: header has no column `{name}`")),
            _ => return Err(format!("line 1: header names column `{name}` more than once")),
        }
    }
    if let Some(extra) = header.iter().find(|h| schema.index_of(h.trim()).is_none()) {
        return Err(format!("line 1: column `{extra}` is not in the schema"));
    }

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(rows.len() as u64 + 2, |p| p.line());
        if record.len() != header.len() {
            return Err(format!(
                "line {line}: expected {} cells, found {}",
                header.len(),
                record.len()
            ));
        }
        rows.push(source_of.iter().map(|&k| record[k].to_string()).collect());
        lines.push(line);
    }
    validate_dataset(schema, &rows).map_err(|e| describe_row_error(&e, schema, &lines))
}

/// Read a CSV file against `schema`.
pub fn read_dataset(path: &Path, schema: &VariableSchema) -> Result<Dataset, Failure> {
    let file = std::fs::File::open(path).map_err(|e| Failure::io(path, e))?;
    parse_dataset(std::io::BufReader::new(file), schema).map_err(|msg| Failure::input(path, msg))
}

/// Write `dataset` as CSV in schema column order. Reals use the shortest
/// decimal that parses back to the same `f64`.
pub fn write_dataset<W: Write>(writer: W, dataset: &Dataset) -> std::io::Result<()> {
    let schema = dataset.schema();
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(schema.names())?;
    let mut record = Vec::with_capacity(schema.len());
    for row in 0..dataset.n_rows() {
        record.clear();
        for (v, kind) in schema.kinds().iter().enumerate() {
            record.push(match (dataset.cell(row, v), kind) {
                (Cell::Category(x), VariableKind::Discrete { labels }) => labels[x].clone(),
                (Cell::Real(x), _) => format!("{x:?}"),
                _ => unreachable!("cells follow the schema"),
            });
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()
}
