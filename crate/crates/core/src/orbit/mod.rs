//! Circular-orbit ground tracks, station access and Hohmann transfer cost.
//!
//! Units: km, km/s, hours for the scenario clock, degrees for angles.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geo::{haversine_angle, GeoPoint, StationList};
use crate::lattice::WrapRule;

/// Earth gravitational parameter, km^3/s^2.
pub const MU: f64 = 398_600.435_507;
/// Equatorial radius, km.
pub const R_EARTH: f64 = 6378.137;
/// Circular parking orbit radius, km.
pub const A_PARK: f64 = R_EARTH + 200.0;
/// Subtracted from the horizon angle, degrees.
pub const LIMB_CUT_DEG: f64 = 10.0;
/// Length of the day the ground track is referenced to, hours.
pub const ROTATION_PERIOD_H: f64 = 24.0;
/// Below this altitude the apparent disk vanishes, km.
pub const MIN_ALTITUDE: f64 = 99.0;

/// Admissible `(altitude, inclination)` bands, km and degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub h_min: f64,
    pub h_max: f64,
    pub inc_min: f64,
    pub inc_max: f64,
    /// Whether the inclination limits themselves are admissible.
    pub inc_inclusive: bool,
}

impl Band {
    const fn new(h_min: f64, h_max: f64, inc_min: f64, inc_max: f64, inc_inclusive: bool) -> Self {
        Band {
            h_min,
            h_max,
            inc_min,
            inc_max,
            inc_inclusive,
        }
    }

    pub fn contains(&self, h: f64, inc: f64) -> bool {
        let inc_ok = if self.inc_inclusive {
            inc >= self.inc_min && inc <= self.inc_max
        } else {
            inc > self.inc_min && inc < self.inc_max
        };
        h > self.h_min && h < self.h_max && inc_ok
    }
}

/// LEO, the 4, 3 and 2 revolutions-per-day bands, and GEO.
pub const BANDS: [Band; 5] = [
    Band::new(350.0, 2000.0, 45.0, 60.0, true),
    Band::new(10185.0, 10585.0, 45.0, 60.0, false),
    Band::new(13729.0, 14129.0, 45.0, 60.0, false),
    Band::new(20032.0, 20432.0, 45.0, 60.0, false),
    // Lower limit only matters for the inclusive test; GEO allows i <= 15.
    Band::new(35000.0, 36500.0, f64::NEG_INFINITY, 15.0, true),
];

/// Selectable altitude range, km.
pub const ALTITUDE_RANGE: (f64, f64) = (350.0, 36500.0);

/// Physical constants in one place, for callers that want to pass them
/// around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub mu: f64,
    pub r_earth: f64,
    pub a_park: f64,
    pub limb_cut: f64,
    pub rotation_period: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            mu: MU,
            r_earth: R_EARTH,
            a_park: A_PARK,
            limb_cut: LIMB_CUT_DEG,
            rotation_period: ROTATION_PERIOD_H,
        }
    }
}

/// Circular orbit: semi-major axis (km), inclination and ascending-node
/// longitude (degrees).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitElements {
    pub a: f64,
    pub inc: f64,
    pub raan: f64,
}

impl OrbitElements {
    pub fn new(a: f64, inc: f64, raan: f64) -> Result<Self> {
        if !(a > R_EARTH) {
            return Err(Error::Domain(format!("semi-major axis {a} km is inside the Earth")));
        }
        if !(0.0..=90.0).contains(&inc) {
            return Err(Error::Domain(format!("inclination {inc} outside [0, 90]")));
        }
        if !raan.is_finite() {
            return Err(Error::Domain("non-finite ascending node".into()));
        }
        Ok(OrbitElements {
            a,
            inc,
            raan: WrapRule::LONGITUDE.apply(raan),
        })
    }

    pub fn altitude(&self) -> f64 {
        self.a - R_EARTH
    }

    pub fn period(&self) -> f64 {
        period_hours(self.a)
    }

    pub fn sub_point(&self, t: f64) -> GeoPoint {
        let period = self.period();
        GeoPoint::new(latitude_at(self, period, t), longitude_at(self, period, t))
    }
}

fn period_hours(a: f64) -> f64 {
    TAU * (a * a * a / MU).sqrt() / 3600.0
}

/// Orbital period in hours.
pub fn orbit_period(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("semi-major axis must be positive, got {a}")));
    }
    Ok(period_hours(a))
}

/// Semi-major axis (km) of the circular orbit with period `hours`.
pub fn semi_major_axis_for_period(hours: f64) -> Result<f64> {
    if !(hours > 0.0) {
        return Err(Error::Domain(format!("period must be positive, got {hours}")));
    }
    let n = hours * 3600.0 / TAU;
    Ok((MU * n * n).cbrt())
}

fn latitude_at(e: &OrbitElements, period: f64, t: f64) -> f64 {
    e.inc * (TAU * t / period).sin()
}

fn longitude_at(e: &OrbitElements, period: f64, t: f64) -> f64 {
    WrapRule::LONGITUDE.apply(360.0 * (t / period - t / ROTATION_PERIOD_H) + e.raan)
}

/// Sub-satellite latitude `t` hours after the ascending node.
pub fn sat_latitude(e: &OrbitElements, t: f64) -> f64 {
    latitude_at(e, e.period(), t)
}

/// Sub-satellite longitude `t` hours after the ascending node, in
/// `(-180, 180]`.
pub fn sat_longitude(e: &OrbitElements, t: f64) -> f64 {
    longitude_at(e, e.period(), t)
}

/// Half-angle of the visible cap minus the limb cut, degrees, without the
/// altitude guard. Negative below roughly 98 km.
pub fn apparent_disk_radius_raw(h: f64) -> f64 {
    (R_EARTH / (R_EARTH + h)).acos().to_degrees() - LIMB_CUT_DEG
}

/// Angular radius (degrees) of the ground a satellite at altitude `h` km
/// can serve.
pub fn apparent_disk_radius(h: f64) -> Result<f64> {
    if !(h > MIN_ALTITUDE) {
        return Err(Error::Domain(format!("altitude {h} km is at or below the {MIN_ALTITUDE} km model floor")));
    }
    Ok(apparent_disk_radius_raw(h))
}

/// Whether a station sees a satellite over `sub_point` with disk radius
/// `psi` degrees.
pub fn instantaneous_access(station: GeoPoint, sub_point: GeoPoint, psi: f64) -> bool {
    haversine_angle(station, sub_point).to_degrees() < psi
}

/// Time grid and the stations whose access is scored.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub stations: StationList,
    pub duration_hours: f64,
    pub step_minutes: f64,
}

impl Scenario {
    pub fn new(stations: StationList, duration_hours: f64, step_minutes: f64) -> Result<Self> {
        if !(duration_hours > 0.0 && step_minutes > 0.0) {
            return Err(Error::Config("scenario duration and step must be positive".into()));
        }
        let steps = duration_hours * 60.0 / step_minutes;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::Config(format!(
                "step of {step_minutes} min does not divide {duration_hours} h"
            )));
        }
        if stations.is_empty() {
            return Err(Error::Config("scenario has no stations".into()));
        }
        Ok(Scenario {
            stations,
            duration_hours,
            step_minutes,
        })
    }

    /// One week at one-minute steps.
    pub fn week(stations: StationList) -> Result<Self> {
        Self::new(stations, 168.0, 1.0)
    }

    pub fn steps(&self) -> usize {
        (self.duration_hours * 60.0 / self.step_minutes).round() as usize
    }

    /// Sample time of step `k`, hours.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step_minutes / 60.0
    }
}

/// One to three satellites.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub orbits: Vec<OrbitElements>,
}

impl Constellation {
    pub const MAX_SATELLITES: usize = 3;

    pub fn new(orbits: Vec<OrbitElements>) -> Result<Self> {
        if orbits.is_empty() || orbits.len() > Self::MAX_SATELLITES {
            return Err(Error::Domain(format!(
                "constellation needs 1 to {} satellites, got {}",
                Self::MAX_SATELLITES,
                orbits.len()
            )));
        }
        Ok(Constellation { orbits })
    }
}

fn unit_vector(p: GeoPoint) -> [f64; 3] {
    let (sf, cf) = p.lat.to_radians().sin_cos();
    let (sl, cl) = p.lon.to_radians().sin_cos();
    [cf * cl, cf * sl, sf]
}

/// Fraction of (station, time step) samples in view of at least one
/// satellite. Satellites too low to have a disk see nothing.
pub fn total_access(c: &Constellation, s: &Scenario) -> f64 {
    struct Sat {
        e: OrbitElements,
        period: f64,
        cos_psi: f64,
    }
    let sats: Vec<Sat> = c
        .orbits
        .iter()
        .filter_map(|e| {
            let psi = apparent_disk_radius(e.altitude()).ok()?;
            Some(Sat {
                e: *e,
                period: e.period(),
                cos_psi: psi.to_radians().cos(),
            })
        })
        .collect();
    let stations: Vec<[f64; 3]> = s.stations.points().map(unit_vector).collect();
    let steps = s.steps();
    if sats.is_empty() || stations.is_empty() || steps == 0 {
        return 0.0;
    }
    let mut seen = vec![false; stations.len()];
    let mut hits = 0usize;
    for k in 0..steps {
        let t = s.time(k);
        seen.fill(false);
        for sat in &sats {
            let sub = GeoPoint {
                lat: latitude_at(&sat.e, sat.period, t),
                lon: longitude_at(&sat.e, sat.period, t),
            };
            let u = unit_vector(sub);
            for (flag, v) in seen.iter_mut().zip(&stations) {
                // angle < psi  <=>  cos(angle) > cos(psi)
                if !*flag && u[0] * v[0] + u[1] * v[1] + u[2] * v[2] > sat.cos_psi {
                    *flag = true;
                }
            }
        }
        hits += seen.iter().filter(|&&f| f).count();
    }
    hits as f64 / (stations.len() * steps) as f64
}

/// Cost (km/s) of a Hohmann transfer from the parking orbit to radius `a`.
pub fn hohmann_delta_v(a: f64) -> Result<f64> {
    if !(a >= A_PARK) {
        return Err(Error::Domain(format!("target radius {a} km is below the parking orbit")));
    }
    let at = 0.5 * (A_PARK + a);
    Ok((2.0 * MU / A_PARK - MU / at).sqrt() - (MU / A_PARK).sqrt() + (MU / a).sqrt()
        - (2.0 * MU / a - MU / at).sqrt())
}

pub fn total_delta_v(c: &Constellation) -> Result<f64> {
    c.orbits.iter().map(|e| hohmann_delta_v(e.a)).sum()
}

/// Whether altitude `h` (km) and inclination `inc` (degrees) fall in an
/// admissible band.
pub fn is_feasible_orbit(h: f64, inc: f64) -> bool {
    BANDS.iter().any(|b| b.contains(h, inc))
}

/// Whether altitude `h` lies in some band for at least one inclination.
pub fn is_feasible_altitude(h: f64) -> bool {
    BANDS.iter().any(|b| h > b.h_min && h < b.h_max)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;
    use crate::rng::seeded;

    fn stations() -> StationList {
        StationList::new(vec![
            ("Blacksburg".into(), GeoPoint::new(37.226754, -80.432546)),
            ("Geneva".into(), GeoPoint::new(46.308158, 6.134166)),
            ("Winton".into(), GeoPoint::new(-22.485683, 143.167884)),
        ])
    }

    #[test]
    fn period_examples() {
        // Kepler's third law in seconds, computed independently.
        let kepler = |a: f64| 2.0 * std::f64::consts::PI * (a.powi(3) / MU).sqrt() / 3600.0;
        assert!((orbit_period(42164.0).unwrap() - 23.934).abs() < 0.01);
        assert!((orbit_period(42164.0).unwrap() - kepler(42164.0)).abs() < 1e-12);
        let a12 = semi_major_axis_for_period(12.0).unwrap();
        // 26562 km is the half sidereal day; twelve solar hours sit 48 km
        // higher, still mid-band.
        assert!((a12 - 26562.0).abs() / 26562.0 < 2.5e-3);
        assert!(is_feasible_orbit(a12 - R_EARTH, 55.0));
        assert!((orbit_period(a12).unwrap() - 12.0).abs() < 1e-9);
        let r = orbit_period(4.0 * 9000.0).unwrap() / orbit_period(9000.0).unwrap();
        assert!((r - 8.0).abs() < 1e-9 * 8.0);
        assert!(orbit_period(0.0).is_err());
    }

    #[test]
    fn ground_track_examples() {
        let e = OrbitElements::new(26000.0, 50.0, 30.0).unwrap();
        let t = e.period();
        assert_eq!(sat_latitude(&e, 0.0), 0.0);
        assert!((sat_latitude(&e, t / 4.0) - 50.0).abs() < 1e-12);
        assert!(sat_latitude(&e, t / 2.0).abs() < 1e-12);
        assert_eq!(sat_longitude(&e, 0.0), 30.0);

        let geo = OrbitElements::new(semi_major_axis_for_period(24.0).unwrap(), 0.0, -35.0).unwrap();
        for t in [1.0, 7.3, 100.0, 167.9] {
            assert!((sat_longitude(&geo, t) + 35.0).abs() < 1e-9);
        }
        let half = OrbitElements::new(semi_major_axis_for_period(12.0).unwrap(), 0.0, 0.0).unwrap();
        assert!((sat_longitude(&half, 12.0) - 180.0).abs() < 1e-9);
    }

    #[test]
    fn disk_examples() {
        assert!((2.0 * apparent_disk_radius(350.0).unwrap() - 17.1).abs() < 0.05);
        assert!((apparent_disk_radius(35786.0).unwrap() - 71.0).abs() < 0.5);
        let low = apparent_disk_radius(100.0).unwrap();
        assert!(low > 0.0 && low < 0.1);
        assert!(apparent_disk_radius(99.0).is_err());
        let mut prev = 0.0;
        for k in 1..100 {
            let psi = apparent_disk_radius(100.0 + 400.0 * k as f64).unwrap();
            assert!(psi > prev);
            prev = psi;
        }
    }

    #[test]
    fn access_indicator() {
        let s = GeoPoint::new(10.0, 20.0);
        assert!(instantaneous_access(s, s, 1.0));
        assert!(!instantaneous_access(s, GeoPoint::new(-10.0, -160.0), 179.9));
        let q = GeoPoint::new(25.0, 31.0);
        let exact = haversine_angle(s, q).to_degrees();
        assert!(!instantaneous_access(s, q, exact));
        assert!(instantaneous_access(s, q, exact * (1.0 + 1e-12)));
    }

    /// Direct transcription of the double sum using the indicator.
    fn naive_access(c: &Constellation, s: &Scenario) -> f64 {
        let mut hits = 0;
        for (_, st) in &s.stations.entries {
            for k in 0..s.steps() {
                let t = s.time(k);
                let any = c.orbits.iter().any(|e| {
                    apparent_disk_radius(e.altitude())
                        .map(|psi| instantaneous_access(*st, e.sub_point(t), psi))
                        .unwrap_or(false)
                });
                hits += any as usize;
            }
        }
        hits as f64 / (s.stations.len() * s.steps()) as f64
    }

    #[test]
    fn total_access_matches_naive_sum() {
        let sc = Scenario::new(stations(), 24.0, 5.0).unwrap();
        let mut rng = seeded(21);
        for _ in 0..20 {
            let n = rng.random_range(1..=3);
            let orbits = (0..n)
                .map(|_| {
                    OrbitElements::new(
                        R_EARTH + rng.random_range(400.0..36000.0),
                        rng.random_range(0.0..90.0),
                        rng.random_range(-180.0..180.0),
                    )
                    .unwrap()
                })
                .collect();
            let c = Constellation::new(orbits).unwrap();
            assert_eq!(total_access(&c, &sc), naive_access(&c, &sc));
        }
    }

    #[test]
    fn access_edge_cases() {
        let sc = Scenario::new(stations(), 24.0, 1.0).unwrap();
        assert_eq!(sc.steps(), 1440);
        assert_eq!(Scenario::week(stations()).unwrap().steps(), 10080);
        let low = Constellation::new(vec![OrbitElements::new(R_EARTH + 50.0, 50.0, 0.0).unwrap()]).unwrap();
        assert_eq!(total_access(&low, &sc), 0.0);
        let e = OrbitElements::new(R_EARTH + 1000.0, 50.0, 10.0).unwrap();
        let one = Constellation::new(vec![e]).unwrap();
        let two = Constellation::new(vec![e, e]).unwrap();
        assert_eq!(total_access(&one, &sc), total_access(&two, &sc));
        assert!(Scenario::new(stations(), 1.0, 7.0).is_err());
        assert!(Constellation::new(vec![e; 4]).is_err());
    }

    #[test]
    fn delta_v_examples() {
        assert!(hohmann_delta_v(A_PARK).unwrap().abs() < 1e-12);
        assert!((3.0 * hohmann_delta_v(42164.0).unwrap() - 11.796).abs() < 0.006);
        let a6 = semi_major_axis_for_period(6.0).unwrap();
        assert!((hohmann_delta_v(a6).unwrap() - 2.74).abs() < 0.05);
        assert!(hohmann_delta_v(A_PARK - 1.0).is_err());
        let mut prev = -1.0;
        for k in 0..1000 {
            let a = A_PARK + (50000.0 - A_PARK) * k as f64 / 999.0;
            let dv = hohmann_delta_v(a).unwrap();
            assert!(dv > prev);
            prev = dv;
        }
        let park = OrbitElements::new(A_PARK, 0.0, 0.0).unwrap();
        assert!(total_delta_v(&Constellation::new(vec![park; 3]).unwrap()).unwrap().abs() < 1e-12);
        let geo = OrbitElements::new(42164.0, 0.0, 0.0).unwrap();
        let total = total_delta_v(&Constellation::new(vec![geo; 3]).unwrap()).unwrap();
        assert!((total - 11.796).abs() < 0.006);
    }

    #[test]
    fn band_examples() {
        assert!(is_feasible_orbit(1000.0, 50.0));
        assert!(!is_feasible_orbit(5000.0, 50.0));
        assert!(is_feasible_orbit(35786.0, 0.0));
        assert!(is_feasible_orbit(1000.0, 45.0));
        assert!(!is_feasible_orbit(10385.0, 45.0));
        assert!(is_feasible_orbit(35786.0, 15.0));
        assert!(!is_feasible_orbit(35786.0, 15.1));
        assert!(!is_feasible_orbit(350.0, 50.0));
    }

    #[test]
    fn band_measure() {
        let mut rng = seeded(2);
        let (lo, hi) = ALTITUDE_RANGE;
        let n = 100_000;
        let hits = (0..n).filter(|_| is_feasible_altitude(rng.random_range(lo..hi))).count();
        let exact: f64 = BANDS.iter().map(|b| b.h_max - b.h_min).sum::<f64>() / (hi - lo);
        assert!((hits as f64 / n as f64 - exact).abs() < 0.005);
        assert!((exact - 0.12).abs() < 0.02);
    }

    proptest! {
        #[test]
        fn ground_track_bounds(a in 6800.0f64..45000.0, inc in 0.0f64..=90.0, raan in -180.0f64..=180.0, t in 0.0f64..500.0) {
            let e = OrbitElements::new(a, inc, raan).unwrap();
            prop_assert!(sat_latitude(&e, t).abs() <= inc);
            let lon = sat_longitude(&e, t);
            prop_assert!(lon > -180.0 && lon <= 180.0);
        }

        #[test]
        fn adding_a_satellite_never_hurts(
            a1 in 6800.0f64..43000.0, i1 in 0.0f64..90.0, r1 in -180.0f64..180.0,
            a2 in 6800.0f64..43000.0, i2 in 0.0f64..90.0, r2 in -180.0f64..180.0,
        ) {
            let sc = Scenario::new(stations(), 12.0, 10.0).unwrap();
            let e1 = OrbitElements::new(a1, i1, r1).unwrap();
            let e2 = OrbitElements::new(a2, i2, r2).unwrap();
            let one = total_access(&Constellation::new(vec![e1]).unwrap(), &sc);
            let two = total_access(&Constellation::new(vec![e1, e2]).unwrap(), &sc);
            prop_assert!(two >= one);
        }
    }
}
