use std::path::Path;

use super::{haversine_angle, GeoPoint};
use crate::error::{Error, Result};

/// Named sites: ground stations, universities.
#[derive(Debug, Clone, PartialEq)]
pub struct StationList {
    pub entries: Vec<(String, GeoPoint)>,
}

impl StationList {
    pub fn new(entries: Vec<(String, GeoPoint)>) -> Self {
        StationList { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = GeoPoint> + '_ {
        self.entries.iter().map(|(_, p)| *p)
    }

    /// CSV with header `name,lat,lon`.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::parse(path, format!("missing column {name:?}")))
        };
        let (ni, lai, loi) = (col("name")?, col("lat")?, col("lon")?);
        let mut entries = Vec::new();
        for (k, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| csv_error(path, e))?;
            let num = |i: usize| -> Result<f64> {
                let s = rec.get(i).unwrap_or("");
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(path, format!("record {}: bad number {s:?}", k + 1)))
            };
            let lat = num(lai)?;
            if !(-90.0..=90.0).contains(&lat) {
                return Err(Error::parse(path, format!("record {}: latitude {lat} out of range", k + 1)));
            }
            let name = rec.get(ni).unwrap_or("").to_string();
            entries.push((name, GeoPoint::new(lat, num(loi)?)));
        }
        Ok(StationList { entries })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        w.write_record(["name", "lat", "lon"]).map_err(|e| csv_error(path, e))?;
        for (name, p) in &self.entries {
            w.write_record([name.clone(), p.lat.to_string(), p.lon.to_string()])
                .map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::parse(path, e.to_string())
    }
}

/// Smallest central angle (radians) from `p` to any station.
pub fn min_station_angle(p: GeoPoint, stations: &StationList) -> Result<f64> {
    if stations.is_empty() {
        return Err(Error::Usage("station list is empty".into()));
    }
    Ok(stations
        .points()
        .map(|s| haversine_angle(p, s))
        .fold(f64::INFINITY, f64::min))
}
