//! Lattice-quantised crossover and constraint-consistent mutation.
//!
//! Crossover of a linked gene group builds a finite *lattice* of candidate
//! allele vectors from two parents, visits the nodes in random order and
//! returns the first feasible one. Every lattice contains at least one parent
//! verbatim, so a pair of feasible parents always yields a feasible child.

mod domain;
mod hypersphere;
mod mutation;
mod probit;
mod wrap;

pub use domain::{BoxDomain, LinkedDomain, Predicate};
pub use hypersphere::{construct_unit_hypersphere, UnitHypersphere};
pub use mutation::{
    mutate_advance_sampling, mutate_realtime_resample, realtime_resample_counted, MutationPool,
};
pub use probit::probit;
pub use wrap::WrapRule;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest lattice the uniform builder will materialise.
pub const MAX_LATTICE_NODES: usize = 1 << 22;

/// Which parents are guaranteed to appear verbatim among the nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOrigin {
    BothParents,
    ParentA,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub nodes: Vec<Vec<f64>>,
    /// Indices of nodes that reproduce a parent exactly.
    pub anchors: Vec<usize>,
    pub origin: LatticeOrigin,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes.first().map_or(0, Vec::len)
    }
}

/// Lattice construction scheme and its node-count parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// `n_p` evenly spaced levels per gene between the parents.
    Uniform { n_p: usize },
    /// `n_q` quantile shells of `n_p` nodes each, centred on parent A.
    Gauss { n_p: usize, n_q: usize },
}

impl LatticeKind {
    pub fn build<D, R>(&self, a: &[f64], b: &[f64], domain: &D, rng: &mut R) -> Result<Lattice>
    where
        D: LinkedDomain + ?Sized,
        R: Rng + ?Sized,
    {
        match *self {
            LatticeKind::Uniform { n_p } => {
                let wrap: Vec<WrapRule> = (0..a.len()).map(|i| domain.wrap_rule(i)).collect();
                build_uniform_lattice(a, b, n_p, &wrap)
            }
            LatticeKind::Gauss { n_p, n_q } => build_gauss_lattice(a, b, n_p, n_q, domain, rng),
        }
    }
}

/// Full Cartesian grid of `n_p` levels per gene between `a` and `b`.
///
/// Level 1 of every gene is `a`, level `n_p` is `b`; interior levels are
/// linear interpolations along the gene's wrap rule, so periodic genes
/// interpolate along the short arc.
pub fn build_uniform_lattice(
    a: &[f64],
    b: &[f64],
    n_p: usize,
    wrap: &[WrapRule],
) -> Result<Lattice> {
    if n_p < 2 {
        return Err(Error::Config(format!("uniform lattice needs n_p >= 2, got {n_p}")));
    }
    check_dims(a, b)?;
    if wrap.len() != a.len() {
        return Err(Error::Usage("one wrap rule per gene required".into()));
    }
    let dim = a.len();
    let count = u32::try_from(dim)
        .ok()
        .and_then(|d| n_p.checked_pow(d))
        .filter(|&c| c <= MAX_LATTICE_NODES)
        .ok_or_else(|| {
            Error::Config(format!("uniform lattice of {n_p}^{dim} nodes is too large"))
        })?;

    let levels: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let rule = wrap[i];
            let step = rule.difference(a[i], b[i]);
            (0..n_p)
                .map(|j| match j {
                    0 => a[i],
                    j if j == n_p - 1 => b[i],
                    j => rule.apply(a[i] + (j as f64 / (n_p - 1) as f64) * step),
                })
                .collect()
        })
        .collect();

    let mut nodes = Vec::with_capacity(count);
    let mut digits = vec![0usize; dim];
    for _ in 0..count {
        nodes.push((0..dim).map(|i| levels[i][digits[i]]).collect());
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < n_p {
                break;
            }
            *d = 0;
        }
    }
    Ok(Lattice {
        nodes,
        anchors: vec![0, count - 1],
        origin: LatticeOrigin::BothParents,
    })
}

/// Gaussian lattice around parent `a`.
///
/// For quantile index `i = 1..=n_q` the shell scale is
/// `gamma = separation(a, b) / 3 * |probit(i / (n_q + 1))|`, and `n_p` nodes
/// are placed with `domain.sample_point(a, gamma, s)` for the unit directions
/// `s`. Shells below the median use the reflected directions `-s`, which is
/// the same as a signed scale. Parent `a` is appended as the last node; `b`
/// only sets the scale.
pub fn build_gauss_lattice<D, R>(
    a: &[f64],
    b: &[f64],
    n_p: usize,
    n_q: usize,
    domain: &D,
    rng: &mut R,
) -> Result<Lattice>
where
    D: LinkedDomain + ?Sized,
    R: Rng + ?Sized,
{
    if n_p == 0 || n_q == 0 {
        return Err(Error::Config(format!(
            "gaussian lattice needs n_p >= 1 and n_q >= 1, got n_p={n_p}, n_q={n_q}"
        )));
    }
    check_dims(a, b)?;
    let sigma3 = domain.separation(a, b);
    let sphere = construct_unit_hypersphere(n_p, a.len(), rng);
    let mut nodes = Vec::with_capacity(n_p * n_q + 1);
    for i in 1..=n_q {
        let z = probit(i as f64 / (n_q + 1) as f64)?;
        let gamma: Vec<f64> = sigma3.iter().map(|d| d / 3.0 * z.abs()).collect();
        let sign = if z < 0.0 { -1.0 } else { 1.0 };
        for s in &sphere.points {
            let dir: Vec<f64> = s.iter().map(|x| sign * x).collect();
            nodes.push(domain.sample_point(a, &gamma, &dir));
        }
    }
    nodes.push(a.to_vec());
    let anchor = nodes.len() - 1;
    Ok(Lattice {
        nodes,
        anchors: vec![anchor],
        origin: LatticeOrigin::ParentA,
    })
}

/// One offspring for parent `a`: the first feasible node of a uniformly
/// shuffled traversal of the lattice built from `(a, b)`.
///
/// Call again with the parents swapped for the second offspring.
pub fn lattice_crossover<D, R>(
    a: &[f64],
    b: &[f64],
    kind: &LatticeKind,
    domain: &D,
    rng: &mut R,
) -> Result<Vec<f64>>
where
    D: LinkedDomain + ?Sized,
    R: Rng + ?Sized,
{
    if !domain.is_feasible(a) || !domain.is_feasible(b) {
        return Err(Error::Usage(
            "lattice crossover requires feasible parents".into(),
        ));
    }
    if a == b {
        return Ok(a.to_vec());
    }
    let lattice = kind.build(a, b, domain, rng)?;
    let mut order: Vec<usize> = (0..lattice.len()).collect();
    order.shuffle(rng);
    let mut nodes = lattice.nodes;
    // The anchor guarantees a hit; falling through would mean the domain
    // disagrees with itself about parent A.
    let pick = order
        .into_iter()
        .find(|&k| domain.is_feasible(&nodes[k]))
        .map(|k| std::mem::take(&mut nodes[k]))
        .unwrap_or_else(|| a.to_vec());
    Ok(pick)
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Usage(format!(
            "parent allele vectors must be nonempty and equal length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::rng::seeded;

    fn free_line() -> BoxDomain {
        BoxDomain::unconstrained(vec![(-100.0, 100.0)])
    }

    #[test]
    fn uniform_three_levels_include_midpoint() {
        let l = build_uniform_lattice(&[0.0], &[10.0], 3, &[WrapRule::None]).unwrap();
        let flat: Vec<f64> = l.nodes.iter().map(|n| n[0]).collect();
        assert_eq!(flat, vec![0.0, 5.0, 10.0]);
    }

    #[test]
    fn uniform_node_count_is_power() {
        let l = build_uniform_lattice(&[0.0; 3], &[1.0; 3], 10, &[WrapRule::None; 3]).unwrap();
        assert_eq!(l.len(), 1000);
        assert_eq!(l.nodes[l.anchors[0]], vec![0.0; 3]);
        assert_eq!(l.nodes[l.anchors[1]], vec![1.0; 3]);
    }

    #[test]
    fn uniform_longitude_crosses_antimeridian() {
        let l = build_uniform_lattice(&[170.0], &[-170.0], 3, &[WrapRule::LONGITUDE]).unwrap();
        let flat: Vec<f64> = l.nodes.iter().map(|n| n[0]).collect();
        // Shortest-arc oracle: step of +20 degrees, midpoint at +180.
        let step = 20.0;
        let oracle: Vec<f64> = (0..3)
            .map(|j| WrapRule::LONGITUDE.apply(170.0 + step * j as f64 / 2.0))
            .collect();
        assert_eq!(flat, oracle);
        assert_eq!(flat, vec![170.0, 180.0, -170.0]);
    }

    #[test]
    fn uniform_rejects_single_level() {
        assert!(matches!(
            build_uniform_lattice(&[0.0], &[1.0], 1, &[WrapRule::None]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn crossover_of_identical_parents_is_identity() {
        let d = free_line();
        let kind = LatticeKind::Uniform { n_p: 5 };
        let child = lattice_crossover(&[3.0], &[3.0], &kind, &d, &mut seeded(1)).unwrap();
        assert_eq!(child, vec![3.0]);
    }

    #[test]
    fn unconstrained_uniform_crossover_lands_on_levels() {
        let d = free_line();
        let kind = LatticeKind::Uniform { n_p: 3 };
        let mut rng = seeded(2);
        for _ in 0..100 {
            let c = lattice_crossover(&[0.0], &[10.0], &kind, &d, &mut rng).unwrap();
            assert!([0.0, 5.0, 10.0].contains(&c[0]));
        }
    }

    #[test]
    fn only_parents_feasible_returns_parent() {
        let pred: Predicate = Arc::new(|x: &[f64]| x[0] == 0.0 || x[0] == 10.0);
        let d = BoxDomain::new(vec![(0.0, 10.0)], pred);
        let mut rng = seeded(3);
        for kind in [
            LatticeKind::Uniform { n_p: 7 },
            LatticeKind::Gauss { n_p: 4, n_q: 5 },
        ] {
            for _ in 0..50 {
                let c = lattice_crossover(&[0.0], &[10.0], &kind, &d, &mut rng).unwrap();
                assert!(c == vec![0.0] || c == vec![10.0]);
            }
        }
        // Gaussian lattice never contains parent B.
        let c = lattice_crossover(&[0.0], &[10.0], &LatticeKind::Gauss { n_p: 4, n_q: 5 }, &d, &mut rng)
            .unwrap();
        assert_eq!(c, vec![0.0]);
    }

    #[test]
    fn infeasible_parent_is_usage_error() {
        let pred: Predicate = Arc::new(|x: &[f64]| x[0] >= 0.0);
        let d = BoxDomain::new(vec![(-1.0, 1.0)], pred);
        let r = lattice_crossover(&[-0.5], &[0.5], &LatticeKind::Uniform { n_p: 3 }, &d, &mut seeded(0));
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn gauss_lattice_counts_and_center() {
        let d = BoxDomain::unconstrained(vec![(-10.0, 10.0); 2]);
        let l = build_gauss_lattice(&[1.0, 2.0], &[4.0, -1.0], 12, 10, &d, &mut seeded(0)).unwrap();
        assert_eq!(l.len(), 121);
        assert_eq!(l.nodes[l.anchors[0]], vec![1.0, 2.0]);
        assert_eq!(l.origin, LatticeOrigin::ParentA);
        assert!(!l.nodes.contains(&vec![4.0, -1.0]));
    }

    #[test]
    fn gauss_middle_quantile_collapses_onto_parent() {
        let d = BoxDomain::unconstrained(vec![(-10.0, 10.0); 2]);
        let (n_p, n_q) = (6, 5);
        let l = build_gauss_lattice(&[1.0, 2.0], &[4.0, -1.0], n_p, n_q, &d, &mut seeded(0)).unwrap();
        // i = 3 gives q = 3/6 = 0.5.
        for node in &l.nodes[2 * n_p..3 * n_p] {
            assert_eq!(node, &vec![1.0, 2.0]);
        }
    }

    #[test]
    fn gauss_scalar_radius_follows_quantile() {
        let d = free_line();
        // Separation 3, so gamma = |probit(q)|; q = 0.8413447... gives 1.
        let (n_p, n_q) = (2, 3);
        let l = build_gauss_lattice(&[0.0], &[3.0], n_p, n_q, &d, &mut seeded(0)).unwrap();
        for i in 1..=n_q {
            let expect = probit(i as f64 / 4.0).unwrap().abs();
            for node in &l.nodes[(i - 1) * n_p..i * n_p] {
                assert!((node[0].abs() - expect).abs() < 1e-12);
            }
        }
        let q1 = 0.841_344_746_068_542_9;
        let g = probit(q1).unwrap() * 3.0 / 3.0;
        assert!((g - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_component_collapses() {
        let d = BoxDomain::unconstrained(vec![(-10.0, 10.0); 2]);
        let l = build_gauss_lattice(&[1.0, 2.0], &[1.0, 5.0], 8, 4, &d, &mut seeded(0)).unwrap();
        assert!(l.nodes.iter().all(|n| n[0] == 1.0));
    }
}
