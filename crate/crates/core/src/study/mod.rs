//! Study drivers behind the command-line front end: configuration, the
//! geographic Monte Carlo study, the astro and orbit runs, and CSV export.

mod config;
mod export;
pub mod fixtures;
mod montecarlo;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub use config::{ProblemKind, RunConfig, KEYS};
pub use export::{
    check_mutually_nondominated, export_pareto_csv, fmt_f64, load_pareto_csv, ParetoRow, ParetoTable, Sense,
};
pub use montecarlo::{
    export_runs_csv, export_trace_csv, percentile, run_monte_carlo_geo, sample_land_point, sample_variance,
    McRun, MonteCarloReport,
};

use export::{csv_err, writer};

use crate::engine::{run, Individual, RunResult};
use crate::error::{Error, Result};
use crate::geo::{GeoPoint, GriddedField, LandMask, StationList};
use crate::lattice::MutationPool;
use crate::orbit::{total_access, Scenario};
use crate::problems::{preempted_orbits, AstroProblem, OrbitBandDomain, OrbitDesign};
use crate::rng::{label, substream};

/// Result of a single multi-objective study run.
#[derive(Debug, Clone)]
pub struct StudyOutput {
    pub result: RunResult,
    pub front: ParetoTable,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

pub const ASTRO_HEADER: [&str; 5] = ["lat", "lon", "sky_brightness", "cloud_cover", "station_angle"];
pub const ASTRO_OBJECTIVES: [(&str, Sense); 3] = [
    ("sky_brightness", Sense::Max),
    ("cloud_cover", Sense::Min),
    ("station_angle", Sense::Min),
];
pub const ORBIT_HEADER: [&str; 12] = [
    "n_sats", "a1", "inc1", "raan1", "a2", "inc2", "raan2", "a3", "inc3", "raan3", "access", "delta_v",
];
pub const ORBIT_OBJECTIVES: [(&str, Sense); 2] = [("access", Sense::Max), ("delta_v", Sense::Min)];

pub fn load_mask(path: &Path) -> Result<Arc<LandMask>> {
    config::require_file(path)?;
    Ok(Arc::new(LandMask::read(path)?))
}

pub fn load_astro_problem(cfg: &RunConfig) -> Result<AstroProblem> {
    let mask = load_mask(&cfg.mask)?;
    config::require_file(&cfg.brightness)?;
    let luminance = GriddedField::read_csv(&cfg.brightness)?;
    let clouds = cfg
        .cloud_paths()
        .iter()
        .map(|p| {
            config::require_file(p)?;
            GriddedField::read_csv(p)
        })
        .collect::<Result<Vec<_>>>()?;
    config::require_file(&cfg.stations)?;
    let stations = StationList::read_csv(&cfg.stations)?;
    AstroProblem::new(mask, luminance, clouds, stations)
}

/// Loads the orbit problem. The mutation pool is read from `cfg.pool` when
/// that file exists, otherwise generated from the run seed; the second
/// value is `true` when it was generated.
pub fn load_orbit_problem(cfg: &RunConfig) -> Result<(OrbitDesign, Arc<MutationPool>, bool)> {
    config::require_file(&cfg.ground_stations)?;
    let stations = StationList::read_csv(&cfg.ground_stations)?;
    let scenario = Scenario::new(stations, cfg.duration_hours, cfg.step_minutes)?;
    let (pool, generated) = match &cfg.pool {
        Some(p) if p.is_file() => (MutationPool::read_csv(p, &OrbitBandDomain::new())?, false),
        _ => {
            let mut rng = substream(cfg.ga.seed, &[label::POOL]);
            (OrbitBandDomain::generate_pool(cfg.pool_size, &preempted_orbits(), &mut rng)?, true)
        }
    };
    let pool = Arc::new(pool);
    Ok((OrbitDesign::new(scenario, Some(pool.clone()))?, pool, generated))
}

fn prepare_out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let path = cfg.out_dir.join("config.txt");
    fs::write(&path, cfg.to_text()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Monte Carlo study from a configuration; writes `trace.csv`, `runs.csv`
/// and `config.txt` to the output directory.
pub fn run_geo_mc(cfg: &RunConfig) -> Result<(MonteCarloReport, Vec<PathBuf>)> {
    cfg.validate()?;
    let mask = load_mask(&cfg.mask)?;
    let report = run_monte_carlo_geo(mask, &cfg.ga, cfg.n_optima, cfg.runs_per_optimum)?;
    let mut files = vec![prepare_out_dir(cfg)?];
    let trace = cfg.out_dir.join("trace.csv");
    export_trace_csv(&report, &trace)?;
    let runs = cfg.out_dir.join("runs.csv");
    export_runs_csv(&report, &runs)?;
    files.extend([trace, runs]);
    Ok((report, files))
}

pub fn astro_front_table(problem: &AstroProblem, front: &[Individual]) -> Result<ParetoTable> {
    let mut t = ParetoTable::new(&ASTRO_HEADER);
    for ind in front {
        let p = GeoPoint::from_alleles(&ind.chromosome.genes);
        let o = problem.objectives_at(p)?;
        t.rows.push(ParetoRow {
            objectives: o.to_vec(),
            cells: [p.lat, p.lon, -o[0], o[1], o[2]].map(fmt_f64).to_vec(),
        });
    }
    Ok(t)
}

pub fn orbit_front_table(problem: &OrbitDesign, front: &[Individual]) -> Result<ParetoTable> {
    let mut t = ParetoTable::new(&ORBIT_HEADER);
    for ind in front {
        let c = &ind.chromosome;
        let constellation = problem.decode(c)?;
        let access = total_access(&constellation, problem.scenario());
        let dv = ind.objectives()[1];
        let mut cells = vec![constellation.orbits.len().to_string()];
        for s in 0..c.slot_count() {
            if c.active[s] {
                cells.extend(c.slot(s).iter().map(|x| fmt_f64(*x)));
            } else {
                cells.extend(std::iter::repeat_n(String::new(), OrbitDesign::SLOT_WIDTH));
            }
        }
        cells.push(fmt_f64(access));
        cells.push(fmt_f64(dv));
        t.rows.push(ParetoRow {
            objectives: vec![-access, dv],
            cells,
        });
    }
    Ok(t)
}

/// `generation,front_size,best_<objective>...` per generation, objectives
/// in minimised form.
pub fn export_history_csv(result: &RunResult, objective_names: &[&str], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["generation".to_string(), "front_size".to_string()];
    header.extend(objective_names.iter().map(|n| format!("best_{n}")));
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for rec in &result.trace {
        let mut row = vec![rec.generation.to_string(), rec.front_size.to_string()];
        row.extend(rec.front_best.iter().map(|x| fmt_f64(*x)));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Three-objective observatory siting; writes `pareto.csv`, `history.csv`
/// and `config.txt`.
pub fn run_astro(cfg: &RunConfig) -> Result<StudyOutput> {
    cfg.validate()?;
    let problem = load_astro_problem(cfg)?;
    let result = run(&problem, &cfg.ga)?;
    let front = astro_front_table(&problem, &result.front)?;
    let mut files = vec![prepare_out_dir(cfg)?];
    let pareto = cfg.out_dir.join("pareto.csv");
    export_pareto_csv(&front, &pareto)?;
    let history = cfg.out_dir.join("history.csv");
    export_history_csv(&result, &AstroProblem::OBJECTIVES, &history)?;
    files.extend([pareto, history]);
    Ok(StudyOutput { result, front, files })
}

/// Constellation design; writes `pareto.csv`, `history.csv`, `config.txt`
/// and, when the pool was generated, `pool.csv`.
pub fn run_orbit(cfg: &RunConfig) -> Result<StudyOutput> {
    cfg.validate()?;
    let (problem, pool, generated) = load_orbit_problem(cfg)?;
    let result = run(&problem, &cfg.ga)?;
    let front = orbit_front_table(&problem, &result.front)?;
    let mut files = vec![prepare_out_dir(cfg)?];
    let pareto = cfg.out_dir.join("pareto.csv");
    export_pareto_csv(&front, &pareto)?;
    let history = cfg.out_dir.join("history.csv");
    export_history_csv(&result, &["neg_access", "delta_v"], &history)?;
    files.extend([pareto, history]);
    if generated {
        let path = cfg.out_dir.join("pool.csv");
        pool.write_csv(&path)?;
        files.push(path);
    }
    Ok(StudyOutput { result, front, files })
}
