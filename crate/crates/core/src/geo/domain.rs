use std::sync::Arc;

use super::{haversine_angle, sample_point_latlon, GeoPoint, LandMask};
use crate::lattice::{LinkedDomain, MutationPool, WrapRule};

/// A `[lat, lon]` gene group on the sphere, optionally restricted to land.
///
/// Separation is the central angle in radians (same value for both genes),
/// and Gaussian-lattice nodes are placed at that angle from the centre
/// point, so lattice shells are true circles on the sphere.
#[derive(Debug, Clone)]
pub struct LatLonDomain {
    mask: Option<Arc<LandMask>>,
    bounds: [(f64, f64); 2],
    pool: Option<Arc<MutationPool>>,
}

impl LatLonDomain {
    /// The whole sphere.
    pub fn globe() -> Self {
        LatLonDomain {
            mask: None,
            bounds: [(-90.0, 90.0), (-180.0, 180.0)],
            pool: None,
        }
    }

    /// Land only; sampling is confined to the mask's bounding box.
    pub fn land(mask: Arc<LandMask>) -> Self {
        let (la0, la1, lo0, lo1) = mask.bbox();
        LatLonDomain {
            mask: Some(mask),
            bounds: [(la0, la1), (lo0, lo1)],
            pool: None,
        }
    }

    pub fn with_pool(mut self, pool: Arc<MutationPool>) -> Self {
        self.pool = Some(pool);
        self
    }

    pub fn mask(&self) -> Option<&LandMask> {
        self.mask.as_deref()
    }
}

impl LinkedDomain for LatLonDomain {
    fn dim(&self) -> usize {
        2
    }

    fn is_feasible(&self, alleles: &[f64]) -> bool {
        let (lat, lon) = (alleles[0], alleles[1]);
        if !((-90.0..=90.0).contains(&lat) && lon > -180.0 && lon <= 180.0) {
            return false;
        }
        self.mask
            .as_ref()
            .is_none_or(|m| m.contains(GeoPoint { lat, lon }))
    }

    fn wrap_rule(&self, gene: usize) -> WrapRule {
        if gene == 0 {
            WrapRule::LATITUDE
        } else {
            WrapRule::LONGITUDE
        }
    }

    fn gene_bounds(&self, gene: usize) -> (f64, f64) {
        self.bounds[gene]
    }

    fn separation(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let d = haversine_angle(GeoPoint::from_alleles(a), GeoPoint::from_alleles(b));
        vec![d, d]
    }

    fn sample_point(&self, center: &[f64], gamma: &[f64], s: &[f64]) -> Vec<f64> {
        let p = sample_point_latlon(GeoPoint::from_alleles(center), gamma[0], [s[0], s[1]]);
        p.to_alleles().to_vec()
    }

    fn repair(&self, alleles: &[f64]) -> Option<Vec<f64>> {
        let mask = self.mask.as_ref()?;
        Some(mask.repair_to_boundary(GeoPoint::from_alleles(alleles)).to_alleles().to_vec())
    }

    fn pool(&self) -> Option<&MutationPool> {
        self.pool.as_deref()
    }
}
