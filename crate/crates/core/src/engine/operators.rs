//! Offspring production for each operator family.

use rand::{Rng, RngCore};

use super::chromosome::{Chromosome, GeneLayout, LinkedGeneGroup};
use super::{GaConfig, OperatorChoice};
use crate::error::{Error, Result};
use crate::lattice::{lattice_crossover, mutate_advance_sampling, mutate_realtime_resample, LatticeKind};

pub(crate) struct Breeder<'a> {
    layout: &'a GeneLayout,
    config: &'a GaConfig,
    lattice: Option<LatticeKind>,
}

impl<'a> Breeder<'a> {
    pub(crate) fn new(layout: &'a GeneLayout, config: &'a GaConfig) -> Self {
        let lattice = config.operator.lattice_kind(config.n_p, config.n_q);
        Breeder {
            layout,
            config,
            lattice,
        }
    }

    /// Two children from two parents: crossover with the configured
    /// probability, then mutation of each child.
    pub(crate) fn offspring_pair<R: Rng>(
        &self,
        p1: &Chromosome,
        p2: &Chromosome,
        rng: &mut R,
    ) -> Result<(Chromosome, Chromosome)> {
        let mut c1 = p1.clone();
        let mut c2 = p2.clone();
        if rng.random_bool(self.config.crossover_probability) {
            for s in 0..p1.slot_count() {
                if !(p1.active[s] && p2.active[s]) {
                    continue;
                }
                for g in self.layout.groups() {
                    let a = g.gather(p1.slot(s));
                    let b = g.gather(p2.slot(s));
                    let (x1, x2) = self.crossover_group(g, &a, &b, rng)?;
                    g.scatter(c1.slot_mut(s), &x1);
                    g.scatter(c2.slot_mut(s), &x2);
                }
            }
        }
        self.mutate(&mut c1, rng)?;
        self.mutate(&mut c2, rng)?;
        Ok((c1, c2))
    }

    fn crossover_group<R: Rng>(
        &self,
        g: &LinkedGeneGroup,
        a: &[f64],
        b: &[f64],
        rng: &mut R,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        match &self.lattice {
            Some(kind) => Ok((
                lattice_crossover(a, b, kind, g.domain.as_ref(), rng)?,
                lattice_crossover(b, a, kind, g.domain.as_ref(), rng)?,
            )),
            None => Ok(scattered(a, b, rng)),
        }
    }

    fn mutate<R: Rng>(&self, c: &mut Chromosome, rng: &mut R) -> Result<()> {
        let (min, max) = (self.layout.min_slots(), self.layout.max_slots());
        if min < max && self.config.slot_toggle_probability > 0.0 {
            for s in 0..c.slot_count() {
                if !rng.random_bool(self.config.slot_toggle_probability) {
                    continue;
                }
                let count = c.active_count();
                if c.active[s] && count > min {
                    c.active[s] = false;
                } else if !c.active[s] && count < max {
                    c.active[s] = true;
                    for g in self.layout.groups() {
                        self.mutate_group(g, c.slot_mut(s), rng);
                    }
                }
            }
        }
        let active: Vec<usize> = c.active_slots().collect();
        for &s in &active {
            for g in self.layout.groups() {
                if rng.random_bool(self.config.mutation_probability) {
                    self.mutate_group(g, c.slot_mut(s), rng);
                }
            }
        }
        if self.config.operator == OperatorChoice::RepairBaseline {
            for &s in &active {
                for g in self.layout.groups() {
                    let alleles = g.gather(c.slot(s));
                    if g.domain.is_feasible(&alleles) {
                        continue;
                    }
                    let fixed = g.domain.repair(&alleles).ok_or_else(|| {
                        Error::Config(format!(
                            "repair baseline needs a repair rule for group {:?}",
                            g.indices
                        ))
                    })?;
                    g.scatter(c.slot_mut(s), &fixed);
                }
            }
        }
        Ok(())
    }

    fn mutate_group<R: Rng>(&self, g: &LinkedGeneGroup, slot: &mut [f64], rng: &mut R) {
        let current = g.gather(slot);
        let next = if self.lattice.is_some() {
            match g.domain.pool() {
                Some(pool) => mutate_advance_sampling(pool, rng),
                None => mutate_realtime_resample(
                    &current,
                    g.domain.as_ref(),
                    rng as &mut dyn RngCore,
                    self.config.resample_attempts,
                ),
            }
        } else {
            // Traditional mutation: one gene of the group, resampled alone.
            let k = rng.random_range(0..current.len());
            let (lo, hi) = g.domain.gene_bounds(k);
            let mut next = current;
            next[k] = g.domain.wrap_rule(k).apply(lo + (hi - lo) * rng.random::<f64>());
            next
        };
        g.scatter(slot, &next);
    }
}

/// Traditional per-gene crossover: every gene goes to either child with
/// equal odds, the other child taking the other parent's allele.
fn scattered<R: Rng>(a: &[f64], b: &[f64], rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    for i in 0..a.len() {
        if rng.random_bool(0.5) {
            std::mem::swap(&mut x[i], &mut y[i]);
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::engine::LengthClass;
    use crate::lattice::{BoxDomain, LinkedDomain};
    use crate::rng::seeded;

    fn ring_domain() -> Arc<dyn LinkedDomain> {
        // Annulus 1 <= r <= 2 in the plane.
        Arc::new(BoxDomain::new(
            vec![(-2.0, 2.0); 2],
            Arc::new(|x: &[f64]| (1.0..=2.0).contains(&x[0].hypot(x[1]))),
        ))
    }

    fn layout(length: LengthClass) -> GeneLayout {
        let free: Arc<dyn LinkedDomain> = Arc::new(BoxDomain::unconstrained(vec![(0.0, 1.0)]));
        GeneLayout::new(
            3,
            vec![
                LinkedGeneGroup::new(vec![0, 1], ring_domain()).unwrap(),
                LinkedGeneGroup::new(vec![2], free).unwrap(),
            ],
            length,
        )
        .unwrap()
    }

    #[test]
    fn scattered_swaps_whole_alleles() {
        let mut rng = seeded(1);
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [5.0, 6.0, 7.0, 8.0];
        for _ in 0..50 {
            let (x, y) = scattered(&a, &b, &mut rng);
            for i in 0..4 {
                assert!((x[i] == a[i] && y[i] == b[i]) || (x[i] == b[i] && y[i] == a[i]));
            }
        }
    }

    #[test]
    fn lattice_operators_keep_offspring_feasible() {
        let layout = layout(LengthClass::Variable {
            min_slots: 1,
            max_slots: 3,
        });
        for op in [OperatorChoice::UniformLattice, OperatorChoice::GaussLattice] {
            let cfg = GaConfig {
                operator: op,
                mutation_probability: 0.5,
                slot_toggle_probability: 0.3,
                ..GaConfig::default()
            };
            let breeder = Breeder::new(&layout, &cfg);
            let mut rng = seeded(7);
            for _ in 0..200 {
                let p1 = layout.random_feasible(&mut rng, 1000).unwrap();
                let p2 = layout.random_feasible(&mut rng, 1000).unwrap();
                let (c1, c2) = breeder.offspring_pair(&p1, &p2, &mut rng).unwrap();
                for c in [&c1, &c2] {
                    assert!(layout.is_feasible(c), "{op}");
                    assert!((1..=3).contains(&c.active_count()));
                }
            }
        }
    }

    #[test]
    fn repair_baseline_without_repair_rule_is_a_config_error() {
        let layout = layout(LengthClass::Fixed);
        let cfg = GaConfig {
            operator: OperatorChoice::RepairBaseline,
            mutation_probability: 1.0,
            crossover_probability: 1.0,
            ..GaConfig::default()
        };
        let breeder = Breeder::new(&layout, &cfg);
        let mut rng = seeded(3);
        let mut saw_error = false;
        for _ in 0..200 {
            let p1 = layout.random_feasible(&mut rng, 1000).unwrap();
            let p2 = layout.random_feasible(&mut rng, 1000).unwrap();
            if let Err(e) = breeder.offspring_pair(&p1, &p2, &mut rng) {
                assert!(matches!(e, Error::Config(_)));
                saw_error = true;
                break;
            }
        }
        assert!(saw_error);
    }
}
