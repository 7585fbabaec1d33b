//! Synthetic stand-ins for coastline, sky-brightness and cloud data.
//!
//! The checked-in files under `data/synthetic` are the output of
//! [`write_synthetic_fixtures`].

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geo::{haversine_angle, GeoPoint, GriddedField, LandMask, StationList};

/// `(lat_min, lat_max, lon_min, lon_max)` of the rectangular land masses.
pub const CONTINENTS: [(f64, f64, f64, f64); 3] = [
    (10.0, 50.0, -120.0, -60.0),
    (-30.0, 30.0, 0.0, 60.0),
    // island
    (-25.0, -19.0, 140.0, 146.0),
];

/// Light sources: `(lat, lon, peak luminance mcd/m^2, width degrees)`.
pub const CITIES: [(f64, f64, f64, f64); 7] = [
    (40.0, -75.0, 40.0, 4.0),
    (30.0, -95.0, 25.0, 5.0),
    (45.0, -115.0, 8.0, 3.0),
    (5.0, 10.0, 30.0, 4.0),
    (-20.0, 40.0, 20.0, 6.0),
    (25.0, 50.0, 15.0, 3.0),
    (-20.0, 145.0, 2.0, 2.0),
];

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Axis-aligned rectangle with vertices every degree along each edge.
fn rectangle(lat0: f64, lat1: f64, lon0: f64, lon1: f64) -> Vec<GeoPoint> {
    let steps = |a: f64, b: f64| (b - a).abs().round().max(1.0) as usize;
    let mut ring = Vec::new();
    let (nx, ny) = (steps(lon0, lon1), steps(lat0, lat1));
    for i in 0..nx {
        ring.push(GeoPoint::new(lat0, lon0 + (lon1 - lon0) * i as f64 / nx as f64));
    }
    for i in 0..ny {
        ring.push(GeoPoint::new(lat0 + (lat1 - lat0) * i as f64 / ny as f64, lon1));
    }
    for i in 0..nx {
        ring.push(GeoPoint::new(lat1, lon1 - (lon1 - lon0) * i as f64 / nx as f64));
    }
    for i in 0..ny {
        ring.push(GeoPoint::new(lat1 - (lat1 - lat0) * i as f64 / ny as f64, lon0));
    }
    ring
}

pub fn synthetic_mask() -> LandMask {
    let rings = CONTINENTS
        .iter()
        .map(|&(a, b, c, d)| rectangle(a, b, c, d))
        .collect();
    LandMask::new(rings).expect("rectangles have four corners")
}

/// Artificial luminance (mcd/m^2) on a global 5 degree grid: Gaussian
/// bumps around [`CITIES`].
pub fn synthetic_luminance() -> GriddedField {
    GriddedField::from_fn(-90.0, -180.0, 5.0, 5.0, 37, 73, |lat, lon| {
        let p = GeoPoint::new(lat, lon);
        let l: f64 = CITIES
            .iter()
            .map(|&(clat, clon, peak, width)| {
                let d = haversine_angle(p, GeoPoint::new(clat, clon)).to_degrees();
                peak * (-0.5 * (d / width).powi(2)).exp()
            })
            .sum();
        round6(l)
    })
    .expect("static grid")
}

/// Cloud fraction for `month` (1..=12): a latitude sinusoid whose phase
/// advances through the year.
pub fn synthetic_cloud(month: usize) -> GriddedField {
    let phase = std::f64::consts::TAU * (month as f64 - 1.0) / 12.0;
    GriddedField::from_fn(-90.0, -180.0, 5.0, 5.0, 37, 73, move |lat, lon| {
        let f = lat.to_radians();
        let v = 0.5 + 0.3 * (3.0 * f + phase).sin() + 0.05 * (lon.to_radians() * 2.0).cos();
        round6(v.clamp(0.0, 1.0))
    })
    .expect("static grid")
}

pub fn synthetic_universities() -> StationList {
    StationList::new(vec![
        ("Northgate".into(), GeoPoint::new(40.0, -75.0)),
        ("Lakeside".into(), GeoPoint::new(35.0, -110.0)),
        ("Equatoria".into(), GeoPoint::new(0.0, 20.0)),
        ("Southreach".into(), GeoPoint::new(-25.0, 50.0)),
    ])
}

/// Writes `land_mask.txt`, `brightness.csv`, `cloud_01.csv`..`cloud_12.csv`
/// and `stations.csv` into `dir`.
pub fn write_synthetic_fixtures(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    synthetic_mask().write(&dir.join("land_mask.txt"))?;
    synthetic_luminance().write_csv(&dir.join("brightness.csv"))?;
    for m in 1..=12 {
        synthetic_cloud(m).write_csv(&dir.join(format!("cloud_{m:02}.csv")))?;
    }
    synthetic_universities().write_csv(&dir.join("stations.csv"))
}
