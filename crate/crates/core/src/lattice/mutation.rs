use std::path::Path;

use rand::{Rng, RngCore};

use super::domain::LinkedDomain;
use crate::error::{Error, Result};

/// Finite set of feasible allele vectors for one linked group, sampled ahead
/// of a run. Entries flagged `preempted` were inserted by hand.
#[derive(Debug, Clone, PartialEq)]
pub struct MutationPool {
    names: Vec<String>,
    entries: Vec<Vec<f64>>,
    preempted: Vec<bool>,
}

impl MutationPool {
    /// Validates that the pool is nonempty, rectangular and feasible under
    /// `domain`.
    pub fn new<D: LinkedDomain + ?Sized>(
        names: Vec<String>,
        entries: Vec<Vec<f64>>,
        preempted: Vec<bool>,
        domain: &D,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Config("mutation pool is empty".into()));
        }
        if preempted.len() != entries.len() {
            return Err(Error::Usage("one preempted flag per pool entry".into()));
        }
        if names.len() != domain.dim() {
            return Err(Error::Config(format!(
                "pool names {} genes, domain has {}",
                names.len(),
                domain.dim()
            )));
        }
        for (k, e) in entries.iter().enumerate() {
            if e.len() != domain.dim() {
                return Err(Error::Config(format!("pool entry {k} has wrong dimension")));
            }
            if !domain.is_feasible(e) {
                return Err(Error::Config(format!("pool entry {k} {e:?} is infeasible")));
            }
        }
        Ok(MutationPool {
            names,
            entries,
            preempted,
        })
    }

    /// `size` rejection-sampled feasible entries followed by the `preempted`
    /// rows.
    pub fn generate<D: LinkedDomain + ?Sized>(
        names: Vec<String>,
        domain: &D,
        size: usize,
        preempted: &[Vec<f64>],
        rng: &mut dyn RngCore,
        max_attempts: usize,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(size + preempted.len());
        let mut attempts = 0usize;
        while entries.len() < size {
            if attempts >= max_attempts {
                return Err(Error::Config(format!(
                    "found only {} feasible pool entries in {max_attempts} draws",
                    entries.len()
                )));
            }
            attempts += 1;
            let x = domain.sample_uniform(rng);
            if domain.is_feasible(&x) {
                entries.push(x);
            }
        }
        let mut flags = vec![false; entries.len()];
        entries.extend(preempted.iter().cloned());
        flags.resize(entries.len(), true);
        Self::new(names, entries, flags, domain)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn is_preempted(&self, index: usize) -> bool {
        self.preempted[index]
    }

    pub fn preempted_entries(&self) -> impl Iterator<Item = &[f64]> {
        self.entries
            .iter()
            .zip(&self.preempted)
            .filter(|(_, &p)| p)
            .map(|(e, _)| e.as_slice())
    }

    /// Reads the CSV pool format: a header naming the genes plus a
    /// `preempted` column, one entry per row.
    pub fn read_csv<D: LinkedDomain + ?Sized>(path: &Path, domain: &D) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        let flag_col = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case("preempted"));
        let gene_cols: Vec<usize> = (0..headers.len()).filter(|&i| Some(i) != flag_col).collect();
        let names = gene_cols.iter().map(|&i| headers[i].to_string()).collect();
        let mut entries = Vec::new();
        let mut flags = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let row = gene_cols
                .iter()
                .map(|&i| {
                    record[i].parse::<f64>().map_err(|_| {
                        Error::parse(path, format!("row {}: bad number {:?}", line + 2, &record[i]))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            let flag = match flag_col.map(|i| record[i].to_ascii_lowercase()) {
                None => false,
                Some(s) => match s.as_str() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" | "" => false,
                    other => {
                        return Err(Error::parse(
                            path,
                            format!("row {}: bad preempted flag {other:?}", line + 2),
                        ))
                    }
                },
            };
            entries.push(row);
            flags.push(flag);
        }
        Self::new(names, entries, flags, domain)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        let mut header: Vec<&str> = self.names.iter().map(String::as_str).collect();
        header.push("preempted");
        writer.write_record(&header).map_err(|e| csv_error(path, e))?;
        for (e, p) in self.entries.iter().zip(&self.preempted) {
            let mut row: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            row.push(p.to_string());
            writer.write_record(&row).map_err(|e| csv_error(path, e))?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::parse(path, e.to_string())
    }
}

/// Replacement alleles drawn uniformly from the pool. Preempted entries carry
/// the same weight as every other entry.
pub fn mutate_advance_sampling<R: Rng + ?Sized>(pool: &MutationPool, rng: &mut R) -> Vec<f64> {
    pool.entries[rng.random_range(0..pool.entries.len())].clone()
}

/// First feasible uniform draw from the domain, or `group` unchanged after
/// `max_attempts` failures.
pub fn mutate_realtime_resample<D: LinkedDomain + ?Sized>(
    group: &[f64],
    domain: &D,
    rng: &mut dyn RngCore,
    max_attempts: usize,
) -> Vec<f64> {
    realtime_resample_counted(group, domain, rng, max_attempts).0
}

/// [`mutate_realtime_resample`] that also reports how many draws were made.
pub fn realtime_resample_counted<D: LinkedDomain + ?Sized>(
    group: &[f64],
    domain: &D,
    rng: &mut dyn RngCore,
    max_attempts: usize,
) -> (Vec<f64>, usize) {
    for attempt in 1..=max_attempts {
        let x = domain.sample_uniform(rng);
        if domain.is_feasible(&x) {
            return (x, attempt);
        }
    }
    (group.to_vec(), max_attempts)
}
