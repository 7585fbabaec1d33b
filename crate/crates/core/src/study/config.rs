use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::engine::{GaConfig, OperatorChoice};
use crate::error::{Error, Result};
use crate::par::Execution;

/// Which study a configuration drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    GeoMc,
    Astro,
    Orbit,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::GeoMc => "geo_mc",
            ProblemKind::Astro => "astro",
            ProblemKind::Orbit => "orbit",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "geo_mc" => Ok(ProblemKind::GeoMc),
            "astro" => Ok(ProblemKind::Astro),
            "orbit" => Ok(ProblemKind::Orbit),
            _ => Err(Error::Config(format!("unknown problem {s:?}"))),
        }
    }
}

/// Everything a study run needs. Loaded from flat `key = value` text; every
/// key can also be set with [`RunConfig::set`], which is what the CLI flags
/// use.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub ga: GaConfig,
    pub mask: PathBuf,
    /// Artificial luminance grid, mcd/m^2.
    pub brightness: PathBuf,
    /// Monthly cloud grids; `{month}` is replaced by `01`..`12`.
    pub clouds: String,
    /// Sites for the astro proximity objective.
    pub stations: PathBuf,
    /// Ground stations for orbit access.
    pub ground_stations: PathBuf,
    /// Orbit mutation pool; generated when unset or missing.
    pub pool: Option<PathBuf>,
    pub pool_size: usize,
    pub n_optima: usize,
    pub runs_per_optimum: usize,
    pub out_dir: PathBuf,
    pub duration_hours: f64,
    pub step_minutes: f64,
}

pub const KEYS: &[&str] = &[
    "problem",
    "population_size",
    "max_generations",
    "stall_generations",
    "crossover_probability",
    "mutation_probability",
    "slot_toggle_probability",
    "resample_attempts",
    "init_attempts",
    "seed",
    "operator",
    "n_p",
    "n_q",
    "parallel",
    "mask",
    "brightness",
    "clouds",
    "stations",
    "ground_stations",
    "pool",
    "pool_size",
    "n_optima",
    "runs_per_optimum",
    "out_dir",
    "duration_hours",
    "step_minutes",
];

impl RunConfig {
    /// Defaults for `problem`. The orbit study uses 20 quantile shells, the
    /// others 10.
    pub fn new(problem: ProblemKind) -> Self {
        let ga = GaConfig {
            population_size: 100,
            max_generations: 100,
            stall_generations: 50,
            operator: OperatorChoice::GaussLattice,
            n_p: 12,
            n_q: if problem == ProblemKind::Orbit { 20 } else { 10 },
            ..GaConfig::default()
        };
        let data = Path::new("data");
        let synthetic = data.join("synthetic");
        RunConfig {
            problem,
            ga,
            mask: synthetic.join("land_mask.txt"),
            brightness: synthetic.join("brightness.csv"),
            clouds: synthetic.join("cloud_{month}.csv").to_string_lossy().into_owned(),
            stations: synthetic.join("stations.csv"),
            ground_stations: data.join("ground_stations.csv"),
            pool: None,
            pool_size: 1000,
            n_optima: 50,
            runs_per_optimum: 2,
            out_dir: PathBuf::from("out").join(problem.as_str()),
            duration_hours: 168.0,
            step_minutes: 1.0,
        }
    }

    /// Sets one key. Hyphens in `key` are read as underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let ga = &mut self.ga;
        match key.as_str() {
            "problem" => self.problem = value.parse()?,
            "population_size" => ga.population_size = parse(&key, value)?,
            "max_generations" => ga.max_generations = parse(&key, value)?,
            "stall_generations" => ga.stall_generations = parse(&key, value)?,
            "crossover_probability" => ga.crossover_probability = parse(&key, value)?,
            "mutation_probability" => ga.mutation_probability = parse(&key, value)?,
            "slot_toggle_probability" => ga.slot_toggle_probability = parse(&key, value)?,
            "resample_attempts" => ga.resample_attempts = parse(&key, value)?,
            "init_attempts" => ga.init_attempts = parse(&key, value)?,
            "seed" => ga.seed = parse(&key, value)?,
            "operator" => ga.operator = value.parse()?,
            "n_p" => ga.n_p = parse(&key, value)?,
            "n_q" => ga.n_q = parse(&key, value)?,
            "parallel" => {
                ga.execution = if parse::<bool>(&key, value)? {
                    Execution::Parallel
                } else {
                    Execution::Sequential
                }
            }
            "mask" => self.mask = value.into(),
            "brightness" => self.brightness = value.into(),
            "clouds" => self.clouds = value.into(),
            "stations" => self.stations = value.into(),
            "ground_stations" => self.ground_stations = value.into(),
            "pool" => self.pool = (!value.is_empty()).then(|| value.into()),
            "pool_size" => self.pool_size = parse(&key, value)?,
            "n_optima" => self.n_optima = parse(&key, value)?,
            "runs_per_optimum" => self.runs_per_optimum = parse(&key, value)?,
            "out_dir" => self.out_dir = value.into(),
            "duration_hours" => self.duration_hours = parse(&key, value)?,
            "step_minutes" => self.step_minutes = parse(&key, value)?,
            _ => return Err(Error::Config(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("line {}: {}", n + 1, inner(e))))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text).map_err(|e| Error::parse(path, inner(e)))
    }

    /// Monthly cloud grid paths, January first.
    pub fn cloud_paths(&self) -> Vec<PathBuf> {
        (1..=12)
            .map(|m| PathBuf::from(self.clouds.replace("{month}", &format!("{m:02}"))))
            .collect()
    }

    /// Checks parameters and that the data files the problem reads exist.
    pub fn validate(&self) -> Result<()> {
        self.ga.validate()?;
        if self.n_optima == 0 || self.runs_per_optimum == 0 {
            return Err(Error::Config("n_optima and runs_per_optimum must be positive".into()));
        }
        if self.pool_size == 0 {
            return Err(Error::Config("pool_size must be positive".into()));
        }
        let mut files = vec![];
        match self.problem {
            ProblemKind::GeoMc => files.push(self.mask.clone()),
            ProblemKind::Astro => {
                files.extend([self.mask.clone(), self.brightness.clone(), self.stations.clone()]);
                files.extend(self.cloud_paths());
            }
            ProblemKind::Orbit => files.push(self.ground_stations.clone()),
        }
        for f in files {
            require_file(&f)?;
        }
        Ok(())
    }

    /// Canonical text form; feeding it back to [`RunConfig::apply_text`]
    /// reproduces the configuration.
    pub fn to_text(&self) -> String {
        let g = &self.ga;
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("problem", &self.problem);
        kv("population_size", &g.population_size);
        kv("max_generations", &g.max_generations);
        kv("stall_generations", &g.stall_generations);
        kv("crossover_probability", &g.crossover_probability);
        kv("mutation_probability", &g.mutation_probability);
        kv("slot_toggle_probability", &g.slot_toggle_probability);
        kv("resample_attempts", &g.resample_attempts);
        kv("init_attempts", &g.init_attempts);
        kv("seed", &g.seed);
        kv("operator", &g.operator);
        kv("n_p", &g.n_p);
        kv("n_q", &g.n_q);
        kv("parallel", &g.execution.is_parallel());
        kv("mask", &self.mask.display());
        kv("brightness", &self.brightness.display());
        kv("clouds", &self.clouds);
        kv("stations", &self.stations.display());
        kv("ground_stations", &self.ground_stations.display());
        kv("pool", &self.pool.as_ref().map(|p| p.display().to_string()).unwrap_or_default());
        kv("pool_size", &self.pool_size);
        kv("n_optima", &self.n_optima);
        kv("runs_per_optimum", &self.runs_per_optimum);
        kv("out_dir", &self.out_dir.display());
        kv("duration_hours", &self.duration_hours);
        kv("step_minutes", &self.step_minutes);
        s
    }
}

pub(crate) fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Config(format!("missing data file {}", path.display())))
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

fn inner(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}
