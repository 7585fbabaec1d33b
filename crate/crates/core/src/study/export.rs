use std::cmp::Ordering;
use std::path::Path;

use crate::engine::ObjectiveVector;
use crate::error::{Error, Result};

/// A front ready for export: column names plus one row per solution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoTable {
    pub header: Vec<String>,
    pub rows: Vec<ParetoRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRow {
    /// Minimised objectives; only used for ordering.
    pub objectives: Vec<f64>,
    /// Rendered cells in header order.
    pub cells: Vec<String>,
}

impl ParetoTable {
    pub fn new(header: &[&str]) -> Self {
        ParetoTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Rows ordered lexicographically by objectives (then by cells), with
    /// duplicates removed.
    pub fn sorted(&self) -> Vec<&ParetoRow> {
        let mut rows: Vec<&ParetoRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            a.objectives
                .iter()
                .zip(&b.objectives)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.cells.cmp(&b.cells))
        });
        rows.dedup_by(|a, b| a.cells == b.cells);
        rows
    }
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn export_pareto_csv(table: &ParetoTable, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(&table.header).map_err(|e| csv_err(path, e))?;
    for row in table.sorted() {
        if row.cells.len() != table.header.len() {
            return Err(Error::Usage(format!(
                "row has {} cells for {} columns",
                row.cells.len(),
                table.header.len()
            )));
        }
        w.write_record(&row.cells).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Whether a column is minimised or maximised in an exported front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Reads the named objective columns of an exported front, as minimised
/// vectors, and checks that no row dominates another.
pub fn load_pareto_csv(path: &Path, columns: &[(&str, Sense)]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    let idx = columns
        .iter()
        .map(|(name, sense)| {
            header
                .iter()
                .position(|h| h == *name)
                .map(|i| (i, *sense))
                .ok_or_else(|| Error::parse(path, format!("missing column {name:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let row = idx
            .iter()
            .map(|&(i, sense)| {
                let v: f64 = rec
                    .get(i)
                    .unwrap_or("")
                    .parse()
                    .map_err(|_| Error::parse(path, format!("row {}: column {i} is not a number", k + 1)))?;
                Ok(if sense == Sense::Max { -v } else { v })
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(row);
    }
    check_mutually_nondominated(&out).map_err(|e| match e {
        Error::Usage(m) => Error::parse(path, m),
        other => other,
    })?;
    Ok(out)
}

/// `Err` naming the first pair where one row dominates another.
pub fn check_mutually_nondominated(rows: &[Vec<f64>]) -> Result<()> {
    let ovs: Vec<ObjectiveVector> = rows.iter().cloned().map(ObjectiveVector).collect();
    for (i, a) in ovs.iter().enumerate() {
        for (j, b) in ovs.iter().enumerate() {
            if i != j && crate::engine::dominates(a, b)? {
                return Err(Error::Usage(format!("front row {} dominates row {}", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

pub(crate) fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_err(path, e))
}

pub(crate) fn csv_err(path: &Path, e: csv::Error) -> Error {
    crate::geo::csv_error(path, e)
}
