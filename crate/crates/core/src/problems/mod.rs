//! Ready-made optimisation problems over the geo and orbit domains.

use std::sync::Arc;

use rand::RngCore;

use crate::engine::{Chromosome, GeneLayout, LengthClass, LinkedGeneGroup, Problem};
use crate::error::{Error, Result};
use crate::geo::{
    haversine_angle, luminance_to_brightness, mean_cloud_cover, min_station_angle, GeoPoint, GriddedField,
    LandMask, LatLonDomain, StationList,
};
use crate::lattice::{mutate_advance_sampling, BoxDomain, LinkedDomain, MutationPool, WrapRule};
use crate::orbit::{
    hohmann_delta_v, is_feasible_orbit, total_access, Constellation, OrbitElements, Scenario, ALTITUDE_RANGE,
    R_EARTH,
};

fn latlon_layout(domain: LatLonDomain) -> GeneLayout {
    let group = LinkedGeneGroup::new(vec![0, 1], Arc::new(domain)).expect("two distinct genes");
    GeneLayout::fixed(2, vec![group]).expect("group covers the slot")
}

fn point_of(c: &Chromosome) -> GeoPoint {
    GeoPoint::from_alleles(&c.genes)
}

/// Single-objective search for a known point on land: fitness is the
/// central angle (radians) to `optimum`.
pub struct GeoSearch {
    layout: GeneLayout,
    pub optimum: GeoPoint,
}

impl GeoSearch {
    pub fn new(mask: Arc<LandMask>, optimum: GeoPoint) -> Self {
        GeoSearch {
            layout: latlon_layout(LatLonDomain::land(mask)),
            optimum,
        }
    }
}

impl Problem for GeoSearch {
    fn layout(&self) -> &GeneLayout {
        &self.layout
    }

    fn num_objectives(&self) -> usize {
        1
    }

    fn evaluate(&self, c: &Chromosome) -> Result<Vec<f64>> {
        Ok(vec![haversine_angle(point_of(c), self.optimum)])
    }
}

/// Observatory siting on land: darkest sky, fewest clouds, closest to a
/// station.
///
/// Objectives, all minimised: negated sky brightness in mag/arcsec^2 (a
/// larger magnitude is a darker sky), mean monthly cloud fraction, and
/// central angle in radians to the nearest station.
pub struct AstroProblem {
    layout: GeneLayout,
    luminance: GriddedField,
    clouds: Vec<GriddedField>,
    stations: StationList,
}

impl AstroProblem {
    pub const OBJECTIVES: [&'static str; 3] = ["neg_sky_brightness", "cloud_cover", "station_angle"];

    pub fn new(
        mask: Arc<LandMask>,
        luminance: GriddedField,
        clouds: Vec<GriddedField>,
        stations: StationList,
    ) -> Result<Self> {
        if clouds.len() != 12 {
            return Err(Error::Config(format!("expected 12 monthly cloud grids, got {}", clouds.len())));
        }
        if clouds.iter().any(|c| !c.same_grid(&clouds[0])) {
            return Err(Error::Config("monthly cloud grids differ in extent".into()));
        }
        if stations.is_empty() {
            return Err(Error::Config("station list is empty".into()));
        }
        Ok(AstroProblem {
            layout: latlon_layout(LatLonDomain::land(mask)),
            luminance,
            clouds,
            stations,
        })
    }

    pub fn objectives_at(&self, p: GeoPoint) -> Result<[f64; 3]> {
        let m = luminance_to_brightness(self.luminance.interpolate(p)?)?;
        Ok([
            -m,
            mean_cloud_cover(&self.clouds, p)?,
            min_station_angle(p, &self.stations)?,
        ])
    }
}

impl Problem for AstroProblem {
    fn layout(&self) -> &GeneLayout {
        &self.layout
    }

    fn num_objectives(&self) -> usize {
        3
    }

    fn evaluate(&self, c: &Chromosome) -> Result<Vec<f64>> {
        Ok(self.objectives_at(point_of(c))?.to_vec())
    }
}

/// `[a, inc]` restricted to the admissible altitude/inclination bands.
#[derive(Debug, Clone, Default)]
pub struct OrbitBandDomain {
    pool: Option<Arc<MutationPool>>,
}

impl OrbitBandDomain {
    /// Inclination sampling range, degrees.
    pub const INC_RANGE: (f64, f64) = (0.0, 60.0);

    pub fn new() -> Self {
        OrbitBandDomain { pool: None }
    }

    pub fn with_pool(pool: Arc<MutationPool>) -> Self {
        OrbitBandDomain { pool: Some(pool) }
    }

    /// `size` random admissible `(a, inc)` rows plus the `preempted` ones.
    pub fn generate_pool(
        size: usize,
        preempted: &[Vec<f64>],
        rng: &mut dyn RngCore,
    ) -> Result<MutationPool> {
        MutationPool::generate(
            vec!["a".into(), "inc".into()],
            &OrbitBandDomain::new(),
            size,
            preempted,
            rng,
            size.saturating_mul(1000).max(10_000),
        )
    }
}

/// Hand-picked `(a, inc)` rows: LEO, the 4, 3 and 2 revolutions-per-day
/// orbits, and GEO.
pub fn preempted_orbits() -> Vec<Vec<f64>> {
    vec![
        vec![6828.0, 53.0],
        vec![16763.0, 52.0],
        vec![20307.0, 57.0],
        vec![26560.0, 55.0],
        vec![42164.0, 0.0],
    ]
}

impl LinkedDomain for OrbitBandDomain {
    fn dim(&self) -> usize {
        2
    }

    fn is_feasible(&self, x: &[f64]) -> bool {
        let (a, inc) = (x[0], x[1]);
        (0.0..=90.0).contains(&inc) && is_feasible_orbit(a - R_EARTH, inc)
    }

    fn gene_bounds(&self, gene: usize) -> (f64, f64) {
        if gene == 0 {
            (R_EARTH + ALTITUDE_RANGE.0, R_EARTH + ALTITUDE_RANGE.1)
        } else {
            Self::INC_RANGE
        }
    }

    fn pool(&self) -> Option<&MutationPool> {
        self.pool.as_deref()
    }
}

/// Variable-length constellation design: one to three satellites, each
/// slot `[a, inc, raan]`. Objectives: negated total access fraction and
/// total transfer cost in km/s.
pub struct OrbitDesign {
    layout: GeneLayout,
    scenario: Scenario,
    pool: Option<Arc<MutationPool>>,
}

impl OrbitDesign {
    pub const SLOT_WIDTH: usize = 3;

    pub fn new(scenario: Scenario, pool: Option<Arc<MutationPool>>) -> Result<Self> {
        let bands = match &pool {
            Some(p) => OrbitBandDomain::with_pool(p.clone()),
            None => OrbitBandDomain::new(),
        };
        let raan = BoxDomain::unconstrained(vec![(-180.0, 180.0)]).with_wrap(vec![WrapRule::LONGITUDE]);
        let groups = vec![
            LinkedGeneGroup::new(vec![0, 1], Arc::new(bands))?,
            LinkedGeneGroup::new(vec![2], Arc::new(raan))?,
        ];
        let layout = GeneLayout::new(
            Self::SLOT_WIDTH,
            groups,
            LengthClass::Variable {
                min_slots: 1,
                max_slots: Constellation::MAX_SATELLITES,
            },
        )?;
        Ok(OrbitDesign {
            layout,
            scenario,
            pool,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn decode(&self, c: &Chromosome) -> Result<Constellation> {
        let orbits = c
            .active_slots()
            .map(|s| {
                let g = c.slot(s);
                OrbitElements::new(g[0], g[1], g[2])
            })
            .collect::<Result<Vec<_>>>()?;
        Constellation::new(orbits)
    }
}

impl Problem for OrbitDesign {
    fn layout(&self) -> &GeneLayout {
        &self.layout
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, c: &Chromosome) -> Result<Vec<f64>> {
        let constellation = self.decode(c)?;
        let dv = constellation
            .orbits
            .iter()
            .map(|o| hohmann_delta_v(o.a))
            .sum::<Result<f64>>()?;
        Ok(vec![-total_access(&constellation, &self.scenario), dv])
    }

    /// Draws `(a, inc)` from the pool when there is one, so the population
    /// starts on exactly the pool's support.
    fn initialize(&self, rng: &mut dyn RngCore, max_attempts: usize) -> Result<Chromosome> {
        let mut c = self.layout.random_feasible(rng, max_attempts)?;
        if let Some(pool) = &self.pool {
            for s in 0..c.slot_count() {
                let row = mutate_advance_sampling(pool, rng);
                self.layout.groups()[0].scatter(c.slot_mut(s), &row);
            }
        }
        Ok(c)
    }
}
