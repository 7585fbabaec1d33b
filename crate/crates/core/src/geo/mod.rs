//! Spherical geometry on the unit sphere, land masks, gridded fields and
//! ground-station lists.
//!
//! Angles are degrees at API boundaries (points, grids, files) and radians
//! for central angles and sampling scales.

mod domain;
mod grid;
mod mask;
mod stations;

pub use domain::LatLonDomain;
pub use grid::{luminance_to_brightness, mean_cloud_cover, GriddedField, NATURAL_SKY_LUMINANCE};
pub use mask::LandMask;
pub use stations::{min_station_angle, StationList};
pub(crate) use stations::csv_error;

use crate::lattice::WrapRule;

/// A point on the sphere in degrees. Constructors clamp latitude to
/// `[-90, 90]` and wrap longitude to `(-180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Self {
        GeoPoint {
            lat: WrapRule::LATITUDE.apply(lat),
            lon: WrapRule::LONGITUDE.apply(lon),
        }
    }

    /// `[lat, lon]`, the allele order of a lat-lon gene group.
    pub fn to_alleles(self) -> [f64; 2] {
        [self.lat, self.lon]
    }

    pub fn from_alleles(alleles: &[f64]) -> Self {
        GeoPoint::new(alleles[0], alleles[1])
    }

    pub fn wrapped(self) -> Self {
        GeoPoint::new(self.lat, self.lon)
    }
}

/// `1 - cos(x)`, evaluated as `2 sin^2(x/2)` to keep precision near zero.
pub fn versine(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

fn haversine(x: f64) -> f64 {
    0.5 * versine(x)
}

/// Haversine of the central angle between two points.
pub fn hav(p1: GeoPoint, p2: GeoPoint) -> f64 {
    let (f1, f2) = (p1.lat.to_radians(), p2.lat.to_radians());
    let dl = (p2.lon - p1.lon).to_radians();
    0.5 * (versine(f2 - f1) + f1.cos() * f2.cos() * versine(dl))
}

/// Central angle between two points, radians in `[0, pi]`.
pub fn haversine_angle(p1: GeoPoint, p2: GeoPoint) -> f64 {
    2.0 * hav(p1, p2).clamp(0.0, 1.0).sqrt().asin()
}

/// Which guards fired while placing a sampled point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SampleDiagnostic {
    /// Offspring latitude ran past a pole and was clamped.
    pub lat_clamped: bool,
    /// Cosine product vanished; the longitude step was set to zero.
    pub pole_guard: bool,
    /// No longitude step reaches the requested angle; the nearest one was
    /// used.
    pub lon_clamped: bool,
}

impl SampleDiagnostic {
    pub fn exact(&self) -> bool {
        !(self.lat_clamped || self.pole_guard || self.lon_clamped)
    }
}

/// Point at central angle `gamma` (radians) from `parent`, heading along the
/// unit 2-vector `s`: the latitude moves by `gamma * s[0]` and the longitude
/// step is solved from the haversine formula, taking the sign of `s[1]`.
pub fn sample_point_latlon(parent: GeoPoint, gamma: f64, s: [f64; 2]) -> GeoPoint {
    sample_point_latlon_diagnosed(parent, gamma, s).0
}

pub fn sample_point_latlon_diagnosed(
    parent: GeoPoint,
    gamma: f64,
    s: [f64; 2],
) -> (GeoPoint, SampleDiagnostic) {
    let mut diag = SampleDiagnostic::default();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let phi_p = parent.lat.to_radians();
    let mut phi_o = phi_p + gamma * s[0];
    if phi_o.abs() > half_pi {
        phi_o = phi_o.clamp(-half_pi, half_pi);
        diag.lat_clamped = true;
    }
    let cc = phi_o.cos() * phi_p.cos();
    let dlam = if cc.abs() < 1e-12 {
        diag.pole_guard = true;
        0.0
    } else {
        let h = (haversine(gamma) - haversine(phi_o - phi_p)) / cc;
        if !(0.0..=1.0).contains(&h) {
            // Tiny negative values are rounding, not a failed solve.
            diag.lon_clamped = !(-1e-15..=1.0).contains(&h);
        }
        2.0 * h.clamp(0.0, 1.0).sqrt().asin()
    };
    let sign = if s[1] < 0.0 { -1.0 } else { 1.0 };
    let p = GeoPoint::new(phi_o.to_degrees(), parent.lon + sign * dlam.to_degrees());
    (p, diag)
}
