use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::mutation::MutationPool;
use super::wrap::WrapRule;

/// The value space of one linked gene group: its feasibility predicate plus
/// the geometry the lattice operators need to move around in it.
///
/// Implementations must be pure: the same alleles always give the same
/// answer, and nothing is mutated, so a domain can be shared across threads.
pub trait LinkedDomain: Send + Sync {
    /// Number of genes in the group.
    fn dim(&self) -> usize;

    fn is_feasible(&self, alleles: &[f64]) -> bool;

    fn wrap_rule(&self, _gene: usize) -> WrapRule {
        WrapRule::None
    }

    /// Sampling bounds of a single gene, used by initialisation and by the
    /// per-gene baseline operators.
    fn gene_bounds(&self, gene: usize) -> (f64, f64);

    /// Per-gene parent separation `|A - B|` feeding the Gaussian lattice
    /// scale. Domains with an isotropic metric return the same distance in
    /// every entry.
    fn separation(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.wrap_rule(i).difference(a[i], b[i]).abs())
            .collect()
    }

    /// Point at scale `gamma` along unit direction `s` from `center`.
    fn sample_point(&self, center: &[f64], gamma: &[f64], s: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.wrap_rule(i).apply(center[i] + gamma[i] * s[i]))
            .collect()
    }

    /// Uniform draw over the search box. May be infeasible.
    fn sample_uniform(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let (lo, hi) = self.gene_bounds(i);
                self.wrap_rule(i).apply(lo + (hi - lo) * rng.random::<f64>())
            })
            .collect()
    }

    /// Nearest feasible replacement, when the domain knows one.
    fn repair(&self, _alleles: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// Precomputed feasible alleles for advance-sampling mutation.
    fn pool(&self) -> Option<&MutationPool> {
        None
    }
}

pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Axis-aligned search box with an arbitrary feasibility predicate.
#[derive(Clone)]
pub struct BoxDomain {
    pub bounds: Vec<(f64, f64)>,
    pub wrap: Vec<WrapRule>,
    pub predicate: Predicate,
    pub pool: Option<Arc<MutationPool>>,
}

impl BoxDomain {
    pub fn new(bounds: Vec<(f64, f64)>, predicate: Predicate) -> Self {
        let wrap = vec![WrapRule::None; bounds.len()];
        BoxDomain {
            bounds,
            wrap,
            predicate,
            pool: None,
        }
    }

    /// Every point of the box is feasible.
    pub fn unconstrained(bounds: Vec<(f64, f64)>) -> Self {
        Self::new(bounds, Arc::new(|_| true))
    }

    pub fn with_wrap(mut self, wrap: Vec<WrapRule>) -> Self {
        assert_eq!(wrap.len(), self.bounds.len());
        self.wrap = wrap;
        self
    }

    pub fn with_pool(mut self, pool: Arc<MutationPool>) -> Self {
        self.pool = Some(pool);
        self
    }
}

impl fmt::Debug for BoxDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoxDomain")
            .field("bounds", &self.bounds)
            .field("wrap", &self.wrap)
            .field("pool", &self.pool.as_ref().map(|p| p.len()))
            .finish_non_exhaustive()
    }
}

impl LinkedDomain for BoxDomain {
    fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn is_feasible(&self, alleles: &[f64]) -> bool {
        (self.predicate)(alleles)
    }

    fn wrap_rule(&self, gene: usize) -> WrapRule {
        self.wrap[gene]
    }

    fn gene_bounds(&self, gene: usize) -> (f64, f64) {
        self.bounds[gene]
    }

    fn pool(&self) -> Option<&MutationPool> {
        self.pool.as_deref()
    }
}
