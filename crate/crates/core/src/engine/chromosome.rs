use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::lattice::LinkedDomain;

/// Genes recombined and mutated jointly because a constraint (or epistasis)
/// couples them.
#[derive(Clone)]
pub struct LinkedGeneGroup {
    /// Offsets within a slot.
    pub indices: Vec<usize>,
    pub domain: Arc<dyn LinkedDomain>,
}

impl LinkedGeneGroup {
    pub fn new(indices: Vec<usize>, domain: Arc<dyn LinkedDomain>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Config("linked gene group needs at least one gene".into()));
        }
        if indices.len() != domain.dim() {
            return Err(Error::Config(format!(
                "group of {} genes given a {}-dimensional domain",
                indices.len(),
                domain.dim()
            )));
        }
        Ok(LinkedGeneGroup { indices, domain })
    }

    pub fn gather(&self, slot: &[f64]) -> Vec<f64> {
        self.indices.iter().map(|&i| slot[i]).collect()
    }

    pub fn scatter(&self, slot: &mut [f64], alleles: &[f64]) {
        for (&i, &v) in self.indices.iter().zip(alleles) {
            slot[i] = v;
        }
    }
}

impl fmt::Debug for LinkedGeneGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinkedGeneGroup")
            .field("indices", &self.indices)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthClass {
    Fixed,
    /// Between `min_slots` and `max_slots` slots are active at once.
    Variable { min_slots: usize, max_slots: usize },
}

/// Shape shared by every chromosome of a problem: a number of equally wide
/// slots, each partitioned into linked gene groups.
#[derive(Debug, Clone)]
pub struct GeneLayout {
    slot_width: usize,
    groups: Vec<LinkedGeneGroup>,
    length: LengthClass,
}

impl GeneLayout {
    /// `groups` must partition `0..slot_width`.
    pub fn new(slot_width: usize, groups: Vec<LinkedGeneGroup>, length: LengthClass) -> Result<Self> {
        let mut seen = vec![false; slot_width];
        for g in &groups {
            for &i in &g.indices {
                if i >= slot_width {
                    return Err(Error::Config(format!("gene index {i} outside slot of {slot_width}")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Config(format!("gene {i} appears in two linked groups")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Config(format!("gene {i} belongs to no group")));
        }
        if let LengthClass::Variable { min_slots, max_slots } = length {
            if min_slots == 0 || min_slots > max_slots {
                return Err(Error::Config(format!(
                    "invalid slot range {min_slots}..={max_slots}"
                )));
            }
        }
        Ok(GeneLayout {
            slot_width,
            groups,
            length,
        })
    }

    pub fn fixed(slot_width: usize, groups: Vec<LinkedGeneGroup>) -> Result<Self> {
        Self::new(slot_width, groups, LengthClass::Fixed)
    }

    pub fn slot_width(&self) -> usize {
        self.slot_width
    }

    pub fn groups(&self) -> &[LinkedGeneGroup] {
        &self.groups
    }

    pub fn length(&self) -> LengthClass {
        self.length
    }

    pub fn max_slots(&self) -> usize {
        match self.length {
            LengthClass::Fixed => 1,
            LengthClass::Variable { max_slots, .. } => max_slots,
        }
    }

    pub fn min_slots(&self) -> usize {
        match self.length {
            LengthClass::Fixed => 1,
            LengthClass::Variable { min_slots, .. } => min_slots,
        }
    }

    /// Every group of every active slot satisfies its predicate.
    pub fn is_feasible(&self, c: &Chromosome) -> bool {
        c.active_slots()
            .all(|s| self.groups.iter().all(|g| g.domain.is_feasible(&g.gather(c.slot(s)))))
    }

    /// Random chromosome whose every slot (active or not) is feasible,
    /// drawn by rejection sampling with at most `max_attempts` draws per
    /// group.
    pub fn random_feasible(&self, rng: &mut dyn RngCore, max_attempts: usize) -> Result<Chromosome> {
        let slots = self.max_slots();
        let mut genes = vec![0.0; slots * self.slot_width];
        for s in 0..slots {
            let slot = &mut genes[s * self.slot_width..(s + 1) * self.slot_width];
            for g in &self.groups {
                let alleles = (0..max_attempts)
                    .map(|_| g.domain.sample_uniform(rng))
                    .find(|x| g.domain.is_feasible(x))
                    .ok_or_else(|| {
                        Error::Initialization(format!(
                            "no feasible sample for group {:?} in {max_attempts} draws",
                            g.indices
                        ))
                    })?;
                g.scatter(slot, &alleles);
            }
        }
        let n_active = rng.random_range(self.min_slots()..=slots);
        let mut active = vec![false; slots];
        let mut order: Vec<usize> = (0..slots).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
        for &s in &order[..n_active] {
            active[s] = true;
        }
        Chromosome::new(genes, active, self.slot_width)
    }
}

/// Flat gene vector split into equally wide slots, each with an activity
/// flag. Fixed-length chromosomes have a single, always active slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    pub active: Vec<bool>,
    slot_width: usize,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>, active: Vec<bool>, slot_width: usize) -> Result<Self> {
        if slot_width == 0 || genes.len() != active.len() * slot_width {
            return Err(Error::Usage(format!(
                "{} genes do not fill {} slots of width {slot_width}",
                genes.len(),
                active.len()
            )));
        }
        Ok(Chromosome {
            genes,
            active,
            slot_width,
        })
    }

    /// Single-slot chromosome.
    pub fn fixed(genes: Vec<f64>) -> Self {
        let width = genes.len();
        Chromosome {
            genes,
            active: vec![true],
            slot_width: width,
        }
    }

    pub fn slot_width(&self) -> usize {
        self.slot_width
    }

    pub fn slot_count(&self) -> usize {
        self.active.len()
    }

    pub fn slot(&self, s: usize) -> &[f64] {
        &self.genes[s * self.slot_width..(s + 1) * self.slot_width]
    }

    pub fn slot_mut(&mut self, s: usize) -> &mut [f64] {
        &mut self.genes[s * self.slot_width..(s + 1) * self.slot_width]
    }

    pub fn active_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().enumerate().filter(|(_, &a)| a).map(|(s, _)| s)
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }
}
