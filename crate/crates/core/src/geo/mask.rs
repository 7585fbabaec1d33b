use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{haversine_angle, GeoPoint};
use crate::error::{Error, Result};

/// Land as a set of polygon rings in the lon-lat plane.
///
/// Rings may straddle the antimeridian; each ring is unwrapped to a
/// continuous longitude range before point tests.
#[derive(Debug, Clone, PartialEq)]
pub struct LandMask {
    rings: Vec<Vec<GeoPoint>>,
    boundary: Vec<GeoPoint>,
    unwrapped: Vec<Ring>,
}

#[derive(Debug, Clone, PartialEq)]
struct Ring {
    /// `(lon, lat)` with longitudes continuous along the ring.
    xy: Vec<(f64, f64)>,
    lon_min: f64,
    lon_max: f64,
    lat_min: f64,
    lat_max: f64,
}

impl Ring {
    fn new(ring: &[GeoPoint]) -> Self {
        let mut xy = Vec::with_capacity(ring.len());
        let mut prev = ring[0].lon;
        for p in ring {
            let mut x = p.lon;
            while x - prev > 180.0 {
                x -= 360.0;
            }
            while x - prev < -180.0 {
                x += 360.0;
            }
            xy.push((x, p.lat));
            prev = x;
        }
        let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| {
            xy.iter().map(pick).fold(init, f)
        };
        Ring {
            lon_min: fold(f64::min, f64::INFINITY, |p| p.0),
            lon_max: fold(f64::max, f64::NEG_INFINITY, |p| p.0),
            lat_min: fold(f64::min, f64::INFINITY, |p| p.1),
            lat_max: fold(f64::max, f64::NEG_INFINITY, |p| p.1),
            xy,
        }
    }

    /// Even-odd test; points on an edge count as inside.
    fn contains(&self, p: GeoPoint) -> bool {
        if p.lat < self.lat_min || p.lat > self.lat_max {
            return false;
        }
        let centre = 0.5 * (self.lon_min + self.lon_max);
        let mut x = p.lon;
        while x - centre > 180.0 {
            x -= 360.0;
        }
        while x - centre < -180.0 {
            x += 360.0;
        }
        if x < self.lon_min || x > self.lon_max {
            return false;
        }
        let y = p.lat;
        let n = self.xy.len();
        let mut inside = false;
        for i in 0..n {
            let (x1, y1) = self.xy[i];
            let (x2, y2) = self.xy[(i + 1) % n];
            if on_segment(x, y, x1, y1, x2, y2) {
                return true;
            }
            if (y1 > y) != (y2 > y) {
                let xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1);
                if x < xc {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn on_segment(x: f64, y: f64, x1: f64, y1: f64, x2: f64, y2: f64) -> bool {
    const EPS: f64 = 1e-12;
    let cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
    let scale = (x2 - x1).abs().max((y2 - y1).abs()).max(1.0);
    cross.abs() <= EPS * scale
        && x >= x1.min(x2) - EPS
        && x <= x1.max(x2) + EPS
        && y >= y1.min(y2) - EPS
        && y <= y1.max(y2) + EPS
}

impl LandMask {
    pub fn new(rings: Vec<Vec<GeoPoint>>) -> Result<Self> {
        if rings.is_empty() {
            return Err(Error::Config("land mask has no rings".into()));
        }
        if let Some(k) = rings.iter().position(|r| r.len() < 3) {
            return Err(Error::Config(format!("ring {k} has fewer than 3 vertices")));
        }
        let rings: Vec<Vec<GeoPoint>> = rings
            .into_iter()
            .map(|r| r.into_iter().map(GeoPoint::wrapped).collect())
            .collect();
        let boundary = rings.iter().flatten().copied().collect();
        let unwrapped = rings.iter().map(|r| Ring::new(r)).collect();
        Ok(LandMask {
            rings,
            boundary,
            unwrapped,
        })
    }

    pub fn rings(&self) -> &[Vec<GeoPoint>] {
        &self.rings
    }

    /// Every ring vertex, ring by ring.
    pub fn boundary_points(&self) -> &[GeoPoint] {
        &self.boundary
    }

    pub fn contains(&self, p: GeoPoint) -> bool {
        self.unwrapped.iter().any(|r| r.contains(p))
    }

    /// `p` itself when on land, otherwise the boundary vertex at the
    /// smallest central angle (first one on ties).
    pub fn repair_to_boundary(&self, p: GeoPoint) -> GeoPoint {
        if self.contains(p) {
            return p;
        }
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, q) in self.boundary.iter().enumerate() {
            let d = haversine_angle(p, *q);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        self.boundary[best]
    }

    /// `(lat_min, lat_max, lon_min, lon_max)` over all vertices, in wrapped
    /// coordinates.
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.boundary {
            b.0 = b.0.min(p.lat);
            b.1 = b.1.max(p.lat);
            b.2 = b.2.min(p.lon);
            b.3 = b.3.max(p.lon);
        }
        b
    }

    /// Polygon file: one `lon,lat` pair per line, blank lines between
    /// rings, `#` comments.
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse { message, .. } | Error::Config(message) => Error::parse(path, message),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rings = Vec::new();
        let mut ring = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if !ring.is_empty() {
                    rings.push(std::mem::take(&mut ring));
                }
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let (Some(lon), Some(lat), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::parse("<polygon>", format!("line {}: expected lon,lat", n + 1)));
            };
            let num = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse("<polygon>", format!("line {}: bad number {s:?}", n + 1)))
            };
            let (lon, lat) = (num(lon)?, num(lat)?);
            if !(-90.0..=90.0).contains(&lat) {
                return Err(Error::parse("<polygon>", format!("line {}: latitude {lat} out of range", n + 1)));
            }
            ring.push(GeoPoint::new(lat, lon));
        }
        if !ring.is_empty() {
            rings.push(ring);
        }
        Self::new(rings)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for (k, ring) in self.rings.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            for p in ring {
                let _ = writeln!(out, "{},{}", p.lon, p.lat);
            }
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}
