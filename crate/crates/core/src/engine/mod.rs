//! NSGA-II engine: elitist (mu + lambda) survival on nondominated rank and
//! crowding distance, with crossover and mutation delegated to the operator
//! family chosen in [`GaConfig`].

mod chromosome;
mod objectives;
mod operators;
mod selection;
mod sort;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

pub use chromosome::{Chromosome, GeneLayout, LengthClass, LinkedGeneGroup};
pub use objectives::{dominates, ObjectiveVector};
pub use selection::tournament_select;
pub use sort::{crowding_distance, crowding_distances, fast_nondominated_sort, nondominated_fronts};

use crate::error::{Error, Result};
use crate::lattice::LatticeKind;
use crate::par::{self, Execution};
use crate::rng::{label, substream};

/// Crossover/mutation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorChoice {
    UniformLattice,
    GaussLattice,
    /// Per-gene crossover and mutation, infeasible groups repaired.
    RepairBaseline,
    /// Per-gene crossover and mutation, infeasible offspring get the worst
    /// objective vector.
    DeathPenalty,
}

impl OperatorChoice {
    pub const ALL: [OperatorChoice; 4] = [
        OperatorChoice::UniformLattice,
        OperatorChoice::GaussLattice,
        OperatorChoice::RepairBaseline,
        OperatorChoice::DeathPenalty,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorChoice::UniformLattice => "uniform_lattice",
            OperatorChoice::GaussLattice => "gauss_lattice",
            OperatorChoice::RepairBaseline => "repair_baseline",
            OperatorChoice::DeathPenalty => "death_penalty",
        }
    }

    /// Whether the operator never lets an infeasible individual into the
    /// population.
    pub fn is_constraint_consistent(self) -> bool {
        self != OperatorChoice::DeathPenalty
    }

    pub fn lattice_kind(self, n_p: usize, n_q: usize) -> Option<LatticeKind> {
        match self {
            OperatorChoice::UniformLattice => Some(LatticeKind::Uniform { n_p }),
            OperatorChoice::GaussLattice => Some(LatticeKind::Gauss { n_p, n_q }),
            _ => None,
        }
    }
}

impl fmt::Display for OperatorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|op| op.as_str() == norm)
            .or(match norm.as_str() {
                "uniform" => Some(OperatorChoice::UniformLattice),
                "gauss" | "gaussian" | "gaussian_lattice" => Some(OperatorChoice::GaussLattice),
                "repair" => Some(OperatorChoice::RepairBaseline),
                "penalty" | "death" => Some(OperatorChoice::DeathPenalty),
                _ => None,
            })
            .ok_or_else(|| Error::Config(format!("unknown operator {s:?}")))
    }
}

/// Engine parameters. The defaults are engineering choices, not tuned values.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_generations: usize,
    /// Stop after this many generations without any per-objective
    /// improvement of the nondominated front.
    pub stall_generations: usize,
    /// Probability that a selected pair is recombined.
    pub crossover_probability: f64,
    /// Probability that each linked group of each active slot mutates.
    pub mutation_probability: f64,
    /// Per-slot probability of switching a slot on or off (variable-length
    /// layouts only).
    pub slot_toggle_probability: f64,
    pub seed: u64,
    pub operator: OperatorChoice,
    /// Nodes per level (uniform) or per quantile shell (Gaussian).
    pub n_p: usize,
    /// Quantile shells of the Gaussian lattice.
    pub n_q: usize,
    /// Draw limit of realtime resampling before it gives up.
    pub resample_attempts: usize,
    /// Draw limit per group when sampling the initial population.
    pub init_attempts: usize,
    pub execution: Execution,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            max_generations: 100,
            stall_generations: 50,
            crossover_probability: 0.9,
            mutation_probability: 0.1,
            slot_toggle_probability: 0.1,
            seed: 0,
            operator: OperatorChoice::GaussLattice,
            n_p: 12,
            n_q: 10,
            resample_attempts: 1000,
            init_attempts: 100_000,
            execution: Execution::Parallel,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("population_size", self.population_size),
            ("max_generations", self.max_generations),
            ("stall_generations", self.stall_generations),
            ("n_q", self.n_q),
            ("resample_attempts", self.resample_attempts),
            ("init_attempts", self.init_attempts),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.n_p < 2 {
            return Err(Error::Config(format!("n_p must be at least 2, got {}", self.n_p)));
        }
        let probs = [
            ("crossover_probability", self.crossover_probability),
            ("mutation_probability", self.mutation_probability),
            ("slot_toggle_probability", self.slot_toggle_probability),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// An optimisation problem: gene layout plus a pure objective function.
pub trait Problem: Sync {
    fn layout(&self) -> &GeneLayout;

    fn num_objectives(&self) -> usize;

    /// Objectives (all minimised) of a feasible chromosome.
    fn evaluate(&self, chromosome: &Chromosome) -> Result<Vec<f64>>;

    /// Random feasible chromosome for the initial population.
    fn initialize(&self, rng: &mut dyn RngCore, max_attempts: usize) -> Result<Chromosome> {
        self.layout().random_feasible(rng, max_attempts)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub objectives: Option<ObjectiveVector>,
    pub rank: usize,
    pub crowding: f64,
    /// Killed by the death penalty.
    pub penalized: bool,
}

impl Individual {
    pub fn new(chromosome: Chromosome) -> Self {
        Individual {
            chromosome,
            objectives: None,
            rank: 0,
            crowding: 0.0,
            penalized: false,
        }
    }

    pub fn objectives(&self) -> &ObjectiveVector {
        self.objectives.as_ref().expect("individual not evaluated")
    }
}

/// Per-generation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Best value of each objective over the nondominated front.
    pub front_best: Vec<f64>,
    /// Median of each objective over the non-penalised population.
    pub median: Vec<f64>,
    pub front_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Rank-0, non-penalised members of the final population.
    pub front: Vec<Individual>,
    pub population: Vec<Individual>,
    /// Entry 0 describes the initial population.
    pub trace: Vec<GenerationRecord>,
    pub generations: usize,
    pub converged: bool,
    /// Last generation that improved some objective of the front (0 if none
    /// did).
    pub last_improvement: usize,
    pub evaluations: usize,
}

pub fn run<P: Problem + ?Sized>(problem: &P, config: &GaConfig) -> Result<RunResult> {
    run_with_observer(problem, config, |_, _| {})
}

/// [`run`] that hands every generation's surviving population to `observer`
/// (generation 0 is the initial population).
pub fn run_with_observer<P, F>(problem: &P, config: &GaConfig, mut observer: F) -> Result<RunResult>
where
    P: Problem + ?Sized,
    F: FnMut(usize, &[Individual]),
{
    config.validate()?;
    let layout = problem.layout();
    let arity = problem.num_objectives();
    let n = config.population_size;
    let exec = config.execution;

    let initial = par::map_range(exec, n, |k| {
        let mut rng = substream(config.seed, &[label::INIT, k as u64]);
        problem.initialize(&mut rng, config.init_attempts)
    });
    let mut population = Vec::with_capacity(n);
    for c in initial {
        let c = c.map_err(|e| match e {
            Error::Initialization(m) => Error::Initialization(m),
            other => Error::Initialization(other.to_string()),
        })?;
        if !layout.is_feasible(&c) {
            return Err(Error::Initialization("initializer returned an infeasible chromosome".into()));
        }
        population.push(Individual::new(c));
    }
    let mut evaluations = evaluate_all(problem, &mut population, arity, exec)?;
    rank_and_crowd(&mut population);

    let mut trace = vec![record(0, &population, arity)];
    observer(0, &population);

    let breeder = operators::Breeder::new(layout, config);
    let mut best = trace[0].front_best.clone();
    let mut stall = 0usize;
    let mut last_improvement = 0usize;
    let mut converged = false;
    let mut generations = 0usize;

    for generation in 1..=config.max_generations {
        let mut sel_rng = substream(config.seed, &[label::SELECTION, generation as u64]);
        let pairs = n.div_ceil(2);
        let mut parents = Vec::with_capacity(pairs);
        for _ in 0..pairs {
            let a = tournament_select(&population, &mut sel_rng)?;
            let b = tournament_select(&population, &mut sel_rng)?;
            parents.push((a, b));
        }
        let children = par::map_indexed(exec, &parents, |k, &(a, b)| {
            let mut rng = substream(config.seed, &[label::OFFSPRING, generation as u64, k as u64]);
            breeder.offspring_pair(&population[a].chromosome, &population[b].chromosome, &mut rng)
        });
        let mut offspring = Vec::with_capacity(2 * pairs);
        for pair in children {
            let (c1, c2) = pair?;
            offspring.push(Individual::new(c1));
            offspring.push(Individual::new(c2));
        }
        offspring.truncate(n);

        for child in &mut offspring {
            if !layout.is_feasible(&child.chromosome) {
                if config.operator.is_constraint_consistent() {
                    return Err(Error::ConstraintViolation(format!(
                        "{} produced an infeasible offspring in generation {generation}",
                        config.operator
                    )));
                }
                child.penalized = true;
                child.objectives = Some(ObjectiveVector::worst(arity));
            }
        }
        evaluations += evaluate_all(problem, &mut offspring, arity, exec)?;

        population.extend(offspring);
        population = survive(population, n);
        generations = generation;

        let rec = record(generation, &population, arity);
        let improved = rec.front_best.iter().zip(&best).any(|(new, old)| new < old);
        best = rec.front_best.clone();
        trace.push(rec);
        observer(generation, &population);

        if improved {
            stall = 0;
            last_improvement = generation;
        } else {
            stall += 1;
            if stall >= config.stall_generations {
                converged = true;
                break;
            }
        }
    }

    let front = population
        .iter()
        .filter(|i| i.rank == 0 && !i.penalized)
        .cloned()
        .collect();
    Ok(RunResult {
        front,
        population,
        trace,
        generations,
        converged,
        last_improvement,
        evaluations,
    })
}

/// Evaluates every individual lacking objectives; returns how many were
/// evaluated.
fn evaluate_all<P: Problem + ?Sized>(
    problem: &P,
    population: &mut [Individual],
    arity: usize,
    exec: Execution,
) -> Result<usize> {
    let pending: Vec<usize> = (0..population.len())
        .filter(|&i| population[i].objectives.is_none())
        .collect();
    let results = par::map(exec, &pending, |&i| problem.evaluate(&population[i].chromosome));
    for (&i, r) in pending.iter().zip(results) {
        let values = r?;
        if values.len() != arity {
            return Err(Error::Usage(format!(
                "problem returned {} objectives, declared {arity}",
                values.len()
            )));
        }
        population[i].objectives = Some(ObjectiveVector(values));
    }
    Ok(pending.len())
}

fn rank_and_crowd(population: &mut [Individual]) -> Vec<Vec<usize>> {
    let fronts = fast_nondominated_sort(population);
    for f in &fronts {
        crowding_distance(population, f);
    }
    fronts
}

/// Best `n` of the merged population by rank, then crowding distance.
fn survive(mut merged: Vec<Individual>, n: usize) -> Vec<Individual> {
    let fronts = rank_and_crowd(&mut merged);
    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for front in fronts {
        if keep.len() + front.len() <= n {
            keep.extend(front);
            continue;
        }
        let mut front = front;
        front.sort_by(|&a, &b| merged[b].crowding.total_cmp(&merged[a].crowding).then(a.cmp(&b)));
        keep.extend(front.into_iter().take(n - keep.len()));
        break;
    }
    let mut slots: Vec<Option<Individual>> = merged.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| slots[i].take().expect("index kept twice"))
        .collect()
}

fn record(generation: usize, population: &[Individual], arity: usize) -> GenerationRecord {
    let front: Vec<&Individual> = population
        .iter()
        .filter(|i| i.rank == 0 && !i.penalized)
        .collect();
    let front_best = (0..arity)
        .map(|m| {
            front
                .iter()
                .map(|i| i.objectives()[m])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let median = (0..arity)
        .map(|m| {
            let mut v: Vec<f64> = population
                .iter()
                .filter(|i| !i.penalized)
                .map(|i| i.objectives()[m])
                .collect();
            if v.is_empty() {
                return f64::INFINITY;
            }
            v.sort_by(f64::total_cmp);
            let mid = v.len() / 2;
            if v.len() % 2 == 1 {
                v[mid]
            } else {
                0.5 * (v[mid - 1] + v[mid])
            }
        })
        .collect();
    GenerationRecord {
        generation,
        front_best,
        median,
        front_size: front.len(),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::{BoxDomain, LinkedDomain};

    struct Sphere {
        layout: GeneLayout,
    }

    impl Sphere {
        fn new(dim: usize) -> Self {
            let domain: Arc<dyn LinkedDomain> = Arc::new(BoxDomain::unconstrained(vec![(-5.0, 5.0); dim]));
            let group = LinkedGeneGroup::new((0..dim).collect(), domain).unwrap();
            Sphere {
                layout: GeneLayout::fixed(dim, vec![group]).unwrap(),
            }
        }
    }

    impl Problem for Sphere {
        fn layout(&self) -> &GeneLayout {
            &self.layout
        }
        fn num_objectives(&self) -> usize {
            1
        }
        fn evaluate(&self, c: &Chromosome) -> Result<Vec<f64>> {
            Ok(vec![c.genes.iter().map(|x| x * x).sum()])
        }
    }

    fn cfg(op: OperatorChoice) -> GaConfig {
        GaConfig {
            population_size: 40,
            max_generations: 50,
            stall_generations: 50,
            operator: op,
            seed: 9,
            ..GaConfig::default()
        }
    }

    #[test]
    fn sphere_trace_is_monotone() {
        for op in OperatorChoice::ALL {
            let r = run(&Sphere::new(2), &cfg(op)).unwrap();
            let bests: Vec<f64> = r.trace.iter().map(|t| t.front_best[0]).collect();
            assert!(bests.windows(2).all(|w| w[1] <= w[0]), "{op}: {bests:?}");
            assert!(bests.last().unwrap() < &bests[0]);
            assert_eq!(r.trace.len(), r.generations + 1);
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let p = Sphere::new(3);
        let a = run(&p, &cfg(OperatorChoice::GaussLattice)).unwrap();
        let b = run(&p, &cfg(OperatorChoice::GaussLattice)).unwrap();
        assert_eq!(a, b);
        let seq = GaConfig {
            execution: Execution::Sequential,
            ..cfg(OperatorChoice::GaussLattice)
        };
        assert_eq!(a, run(&p, &seq).unwrap());
    }

    #[test]
    fn stall_window_stops_the_run() {
        let cfg = GaConfig {
            stall_generations: 3,
            max_generations: 1000,
            mutation_probability: 0.0,
            crossover_probability: 0.0,
            ..cfg(OperatorChoice::UniformLattice)
        };
        let r = run(&Sphere::new(2), &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.generations, 3);
        assert_eq!(r.last_improvement, 0);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad = GaConfig {
            n_p: 1,
            ..GaConfig::default()
        };
        assert!(matches!(run(&Sphere::new(1), &bad), Err(Error::Config(_))));
        let bad = GaConfig {
            crossover_probability: 1.5,
            ..GaConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn infeasible_initializer_is_initialization_error() {
        struct Empty(GeneLayout);
        impl Problem for Empty {
            fn layout(&self) -> &GeneLayout {
                &self.0
            }
            fn num_objectives(&self) -> usize {
                1
            }
            fn evaluate(&self, _: &Chromosome) -> Result<Vec<f64>> {
                Ok(vec![0.0])
            }
        }
        let domain: Arc<dyn LinkedDomain> =
            Arc::new(BoxDomain::new(vec![(0.0, 1.0)], Arc::new(|_: &[f64]| false)));
        let layout = GeneLayout::fixed(1, vec![LinkedGeneGroup::new(vec![0], domain).unwrap()]).unwrap();
        let cfg = GaConfig {
            init_attempts: 50,
            ..GaConfig::default()
        };
        assert!(matches!(run(&Empty(layout), &cfg), Err(Error::Initialization(_))));
    }

    #[test]
    fn operator_names_round_trip() {
        for op in OperatorChoice::ALL {
            assert_eq!(op.as_str().parse::<OperatorChoice>().unwrap(), op);
        }
        assert_eq!("gauss-lattice".parse::<OperatorChoice>().unwrap(), OperatorChoice::GaussLattice);
        assert!("sbx".parse::<OperatorChoice>().is_err());
    }
}
