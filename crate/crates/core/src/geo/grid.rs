use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::GeoPoint;
use crate::error::{Error, Result};

/// Added to artificial luminance, mcd/m^2.
pub const NATURAL_SKY_LUMINANCE: f64 = 0.236;

/// Regular lat-lon grid of values; row `r` sits at `lat0 + r * dlat`,
/// column `c` at `lon0 + c * dlon`.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedField {
    pub lat0: f64,
    pub lon0: f64,
    pub dlat: f64,
    pub dlon: f64,
    values: Vec<f64>,
    nrows: usize,
    ncols: usize,
}

impl GriddedField {
    /// `rows[r][c]` is the value at row `r`, column `c`.
    pub fn new(lat0: f64, lon0: f64, dlat: f64, dlon: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        if !(dlat > 0.0 && dlon > 0.0) || !lat0.is_finite() || !lon0.is_finite() {
            return Err(Error::Config(format!("grid spacing must be positive, got dlat={dlat}, dlon={dlon}")));
        }
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows < 2 || ncols < 2 {
            return Err(Error::Config(format!("grid needs at least 2x2 nodes, got {nrows}x{ncols}")));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != ncols) {
            return Err(Error::Config(format!("grid row {r} has {} values, expected {ncols}", rows[r].len())));
        }
        Ok(GriddedField {
            lat0,
            lon0,
            dlat,
            dlon,
            values: rows.into_iter().flatten().collect(),
            nrows,
            ncols,
        })
    }

    /// Grid with `values(lat, lon)` sampled at every node.
    pub fn from_fn(
        lat0: f64,
        lon0: f64,
        dlat: f64,
        dlon: f64,
        nrows: usize,
        ncols: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let rows = (0..nrows)
            .map(|r| {
                (0..ncols)
                    .map(|c| f(lat0 + r as f64 * dlat, lon0 + c as f64 * dlon))
                    .collect()
            })
            .collect();
        Self::new(lat0, lon0, dlat, dlon, rows)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn node(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    pub fn same_grid(&self, other: &GriddedField) -> bool {
        (self.lat0, self.lon0, self.dlat, self.dlon, self.nrows, self.ncols)
            == (other.lat0, other.lon0, other.dlat, other.dlon, other.nrows, other.ncols)
    }

    /// Bilinear interpolation; exact at nodes. A longitude outside the grid
    /// is retried one turn east and west before giving up.
    pub fn interpolate(&self, p: GeoPoint) -> Result<f64> {
        let Some((r, tr)) = cell(p.lat, self.lat0, self.dlat, self.nrows) else {
            return Err(self.out_of_range(p));
        };
        let (c, tc) = [p.lon, p.lon + 360.0, p.lon - 360.0]
            .into_iter()
            .find_map(|lon| cell(lon, self.lon0, self.dlon, self.ncols))
            .ok_or_else(|| self.out_of_range(p))?;
        let v00 = self.node(r, c);
        let v01 = self.node(r, c + 1);
        let v10 = self.node(r + 1, c);
        let v11 = self.node(r + 1, c + 1);
        let lower = v00 + tc * (v01 - v00);
        let upper = v10 + tc * (v11 - v10);
        Ok(lower + tr * (upper - lower))
    }

    fn out_of_range(&self, p: GeoPoint) -> Error {
        Error::Range(format!(
            "({}, {}) outside grid lat [{}, {}] lon [{}, {}]",
            p.lat,
            p.lon,
            self.lat0,
            self.lat0 + (self.nrows - 1) as f64 * self.dlat,
            self.lon0,
            self.lon0 + (self.ncols - 1) as f64 * self.dlon
        ))
    }

    /// Grid CSV: header `lat0,lon0,dlat,dlon,nrows,ncols`, then one line of
    /// header values, then `nrows` lines of `ncols` values. A file whose
    /// first line already holds the numbers is accepted too.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file)
            .lines()
            .enumerate()
            .map(|(n, l)| l.map(|l| (n + 1, l)).map_err(|e| Error::io(path, e)))
            .filter(|l| !matches!(l, Ok((_, s)) if s.trim().is_empty()));
        let next = |lines: &mut dyn Iterator<Item = Result<(usize, String)>>| -> Result<(usize, String)> {
            lines
                .next()
                .unwrap_or_else(|| Err(Error::parse(path, "unexpected end of file")))
        };
        let (mut n, mut line) = next(&mut lines)?;
        if line.trim_start().starts_with(|c: char| c.is_ascii_alphabetic()) {
            (n, line) = next(&mut lines)?;
        }
        let head = parse_row(&line, n, path)?;
        if head.len() != 6 {
            return Err(Error::parse(path, format!("line {n}: expected 6 header values")));
        }
        let dim = |v: f64, name: &str| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::parse(path, format!("{name} must be a nonnegative integer, got {v}")))
            }
        };
        let nrows = dim(head[4], "nrows")?;
        let ncols = dim(head[5], "ncols")?;
        let mut rows = Vec::with_capacity(nrows);
        for _ in 0..nrows {
            let (n, line) = next(&mut lines)?;
            let row = parse_row(&line, n, path)?;
            if row.len() != ncols {
                return Err(Error::parse(path, format!("line {n}: expected {ncols} values, got {}", row.len())));
            }
            rows.push(row);
        }
        if let Some(extra) = lines.next() {
            let (n, _) = extra?;
            return Err(Error::parse(path, format!("line {n}: more than {nrows} data rows")));
        }
        Self::new(head[0], head[1], head[2], head[3], rows).map_err(|e| match e {
            Error::Config(m) => Error::parse(path, m),
            other => other,
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let io = |e| Error::io(path, e);
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        writeln!(w, "lat0,lon0,dlat,dlon,nrows,ncols").map_err(io)?;
        writeln!(w, "{},{},{},{},{},{}", self.lat0, self.lon0, self.dlat, self.dlon, self.nrows, self.ncols).map_err(io)?;
        for row in self.values.chunks(self.ncols) {
            let line: Vec<String> = row.iter().map(f64::to_string).collect();
            writeln!(w, "{}", line.join(",")).map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

/// Lower node index and fraction of `x` along an axis of `n` nodes, or
/// `None` outside.
fn cell(x: f64, x0: f64, dx: f64, n: usize) -> Option<(usize, f64)> {
    let f = (x - x0) / dx;
    let last = (n - 1) as f64;
    const SLACK: f64 = 1e-9;
    if !(f >= -SLACK && f <= last + SLACK) {
        return None;
    }
    let f = f.clamp(0.0, last);
    let i = (f.floor() as usize).min(n - 2);
    Some((i, f - i as f64))
}

fn parse_row(line: &str, n: usize, path: &Path) -> Result<Vec<f64>> {
    line.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::parse(path, format!("line {n}: bad number {s:?}")))
        })
        .collect()
}

/// Sky brightness in mag/arcsec^2 from artificial luminance `l` in mcd/m^2,
/// after adding the natural sky floor.
pub fn luminance_to_brightness(l: f64) -> Result<f64> {
    if !(l >= 0.0) || !l.is_finite() {
        return Err(Error::Domain(format!("luminance must be finite and nonnegative, got {l}")));
    }
    Ok(-2.5 * ((l + NATURAL_SKY_LUMINANCE) / 1.08e8).log10())
}

/// Mean of twelve monthly fields at `p`.
pub fn mean_cloud_cover(monthly: &[GriddedField], p: GeoPoint) -> Result<f64> {
    if monthly.len() != 12 {
        return Err(Error::Usage(format!("expected 12 monthly fields, got {}", monthly.len())));
    }
    let mut sum = 0.0;
    for f in monthly {
        sum += f.interpolate(p)?;
    }
    Ok(sum / 12.0)
}
