use std::path::Path;
use std::sync::Arc;

use rand::Rng;

use super::export::{csv_err, fmt_f64, writer};
use crate::engine::{run, GaConfig, OperatorChoice};
use crate::error::{Error, Result};
use crate::geo::{GeoPoint, LandMask};
use crate::par::{self, Execution};
use crate::problems::GeoSearch;
use crate::rng::{derive_seed, label, substream};

/// Draws for one optimum before the mask is declared empty.
pub const OPTIMUM_ATTEMPTS: usize = 1_000_000;

/// One GA run of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct McRun {
    pub optimum_index: usize,
    pub run_index: usize,
    pub optimum: GeoPoint,
    /// Best central angle (radians) after the last generation.
    pub final_best: f64,
    pub generations: usize,
    /// Last generation that improved the best angle.
    pub convergence_generation: usize,
    pub evaluations: usize,
    /// Best angle per generation, index 0 being the initial population.
    pub best_trace: Vec<f64>,
}

/// Per-run outcomes plus fitness percentile bands across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub operator: OperatorChoice,
    pub runs: Vec<McRun>,
    /// `[p5, p50, p95]` for generations `0..=max_generations`. Runs that
    /// stopped early contribute their final value.
    pub bands: Vec<[f64; 3]>,
}

impl MonteCarloReport {
    pub fn final_best(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.final_best).collect()
    }

    pub fn convergence_generations(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.convergence_generation as f64).collect()
    }

    pub fn median_final_best(&self) -> f64 {
        percentile(&self.final_best(), 50.0)
    }

    /// Sample variance of the convergence generation.
    pub fn convergence_variance(&self) -> f64 {
        sample_variance(&self.convergence_generations())
    }
}

/// Linear-interpolated percentile (`q` in `[0, 100]`) of unsorted data.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
}

/// Uniform point of the mask's bounding box that lies on land.
pub fn sample_land_point<R: Rng + ?Sized>(mask: &LandMask, rng: &mut R, max_attempts: usize) -> Result<GeoPoint> {
    let (la0, la1, lo0, lo1) = mask.bbox();
    for _ in 0..max_attempts {
        let p = GeoPoint::new(rng.random_range(la0..=la1), rng.random_range(lo0..=lo1));
        if mask.contains(p) {
            return Ok(p);
        }
    }
    Err(Error::Initialization(format!("no land point found in {max_attempts} draws")))
}

/// Runs `runs_per_optimum` GA runs for each of `n_optima` random land
/// optima, with fitness the central angle to the optimum.
///
/// Runs are independent: run `r` of optimum `k` is seeded from
/// `(ga.seed, k, r)`, so the report does not depend on scheduling. Runs
/// execute in parallel under `ga.execution`; each run is sequential inside.
pub fn run_monte_carlo_geo(
    mask: Arc<LandMask>,
    ga: &GaConfig,
    n_optima: usize,
    runs_per_optimum: usize,
) -> Result<MonteCarloReport> {
    ga.validate()?;
    if n_optima == 0 || runs_per_optimum == 0 {
        return Err(Error::Config("n_optima and runs_per_optimum must be positive".into()));
    }
    let optima = (0..n_optima)
        .map(|k| sample_land_point(&mask, &mut substream(ga.seed, &[label::OPTIMA, k as u64]), OPTIMUM_ATTEMPTS))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..n_optima)
        .flat_map(|k| (0..runs_per_optimum).map(move |r| (k, r)))
        .collect();
    let results = par::map(ga.execution, &jobs, |&(k, r)| {
        let problem = GeoSearch::new(mask.clone(), optima[k]);
        let cfg = GaConfig {
            seed: derive_seed(ga.seed, &[label::RUN, k as u64, r as u64]),
            execution: Execution::Sequential,
            ..ga.clone()
        };
        let res = run(&problem, &cfg)?;
        Ok(McRun {
            optimum_index: k,
            run_index: r,
            optimum: optima[k],
            final_best: res.trace.last().map_or(f64::INFINITY, |t| t.front_best[0]),
            generations: res.generations,
            convergence_generation: res.last_improvement,
            evaluations: res.evaluations,
            best_trace: res.trace.iter().map(|t| t.front_best[0]).collect(),
        })
    });
    let runs = results.into_iter().collect::<Result<Vec<McRun>>>()?;
    let bands = (0..=ga.max_generations)
        .map(|g| {
            let at: Vec<f64> = runs
                .iter()
                .map(|r| r.best_trace[g.min(r.best_trace.len() - 1)])
                .collect();
            [percentile(&at, 5.0), percentile(&at, 50.0), percentile(&at, 95.0)]
        })
        .collect();
    Ok(MonteCarloReport {
        operator: ga.operator,
        runs,
        bands,
    })
}

/// `generation,p5,p50,p95`, fitness in radians.
pub fn export_trace_csv(report: &MonteCarloReport, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["generation", "p5", "p50", "p95"]).map_err(|e| csv_err(path, e))?;
    for (g, b) in report.bands.iter().enumerate() {
        w.write_record([g.to_string(), fmt_f64(b[0]), fmt_f64(b[1]), fmt_f64(b[2])])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn export_runs_csv(report: &MonteCarloReport, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "optimum",
        "run",
        "opt_lat",
        "opt_lon",
        "final_best",
        "generations",
        "convergence_generation",
        "evaluations",
    ])
    .map_err(|e| csv_err(path, e))?;
    for r in &report.runs {
        w.write_record([
            r.optimum_index.to_string(),
            r.run_index.to_string(),
            fmt_f64(r.optimum.lat),
            fmt_f64(r.optimum.lon),
            fmt_f64(r.final_best),
            r.generations.to_string(),
            r.convergence_generation.to_string(),
            r.evaluations.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
