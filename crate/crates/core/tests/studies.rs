use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use lattice_ga::geo::{GeoPoint, GriddedField, LandMask, StationList};
use lattice_ga::orbit::{is_feasible_orbit, R_EARTH};
use lattice_ga::problems::AstroProblem;
use lattice_ga::study::fixtures::{synthetic_mask, write_synthetic_fixtures};
use lattice_ga::study::{
    self, check_mutually_nondominated, export_pareto_csv, load_pareto_csv, ParetoTable, ProblemKind, RunConfig,
    ASTRO_OBJECTIVES, ORBIT_HEADER, ORBIT_OBJECTIVES,
};
use lattice_ga::{run, Error, GaConfig, ObjectiveVector, OperatorChoice};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn synthetic_config(problem: ProblemKind, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(problem);
    let syn = data_dir().join("synthetic");
    cfg.mask = syn.join("land_mask.txt");
    cfg.brightness = syn.join("brightness.csv");
    cfg.clouds = syn.join("cloud_{month}.csv").to_string_lossy().into_owned();
    cfg.stations = syn.join("stations.csv");
    cfg.ground_stations = data_dir().join("ground_stations.csv");
    cfg.out_dir = out.to_path_buf();
    cfg
}

fn small_orbit(out: &Path, op: OperatorChoice, seed: u64) -> RunConfig {
    let mut cfg = synthetic_config(ProblemKind::Orbit, out);
    cfg.ga.operator = op;
    cfg.ga.seed = seed;
    cfg.ga.population_size = 40;
    cfg.ga.max_generations = 40;
    cfg.duration_hours = 24.0;
    cfg.step_minutes = 5.0;
    cfg.pool_size = 300;
    cfg
}

#[test]
fn checked_in_fixtures_match_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_fixtures(dir.path()).unwrap();
    let mut names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 15);
    for name in names {
        let fresh = fs::read(dir.path().join(&name)).unwrap();
        let stored = fs::read(data_dir().join("synthetic").join(&name)).unwrap();
        assert!(fresh == stored, "{name:?} differs from the regenerated file");
    }
}

/// Bright, cloudy square continent with one dark clear basin around a
/// station at (20, 20), plus a second station out in the bright region.
fn basin_problem() -> AstroProblem {
    let ring = vec![
        GeoPoint::new(0.0, 0.0),
        GeoPoint::new(0.0, 40.0),
        GeoPoint::new(40.0, 40.0),
        GeoPoint::new(40.0, 0.0),
    ];
    let mask = Arc::new(LandMask::new(vec![ring]).unwrap());
    let basin = |lat: f64, lon: f64| (-((lat - 20.0).powi(2) + (lon - 20.0).powi(2)) / 8.0).exp();
    let lum = GriddedField::from_fn(-10.0, -10.0, 1.0, 1.0, 61, 61, |la, lo| 200.0 * (1.0 - basin(la, lo))).unwrap();
    let clouds = (0..12)
        .map(|m| {
            GriddedField::from_fn(-10.0, -10.0, 1.0, 1.0, 61, 61, move |la, lo| {
                0.8 - 0.7 * basin(la, lo) + 0.01 * m as f64
            })
            .unwrap()
        })
        .collect();
    let stations = StationList::new(vec![
        ("basin".into(), GeoPoint::new(20.0, 20.0)),
        ("city".into(), GeoPoint::new(5.0, 35.0)),
    ]);
    AstroProblem::new(mask, lum, clouds, stations).unwrap()
}

fn in_basin(p: GeoPoint) -> bool {
    (p.lat - 20.0).hypot(p.lon - 20.0) <= 3.0
}

#[test]
fn astro_front_reaches_the_dark_basin() {
    let problem = basin_problem();
    // Grid-scan oracle: nondominated points of a 0.5 degree scan of the
    // continent.
    let scan: Vec<(GeoPoint, ObjectiveVector)> = (0..=80)
        .flat_map(|i| (0..=80).map(move |j| GeoPoint::new(0.5 * i as f64, 0.5 * j as f64)))
        .map(|p| (p, ObjectiveVector(problem.objectives_at(p).unwrap().to_vec())))
        .collect();
    let scan_front: Vec<GeoPoint> = scan
        .iter()
        .filter(|(_, o)| !scan.iter().any(|(_, q)| lattice_ga::dominates(q, o).unwrap()))
        .map(|(p, _)| *p)
        .collect();
    assert!(scan_front.iter().any(|&p| in_basin(p)));

    let ga = GaConfig {
        population_size: 60,
        max_generations: 40,
        seed: 17,
        ..GaConfig::default()
    };
    let r = run(&problem, &ga).unwrap();
    let pts: Vec<GeoPoint> = r
        .front
        .iter()
        .map(|i| GeoPoint::from_alleles(&i.chromosome.genes))
        .collect();
    assert!(pts.iter().any(|&p| in_basin(p)), "no front point in the basin: {pts:?}");
}

#[test]
fn astro_run_stays_on_land_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = synthetic_config(ProblemKind::Astro, &dir.path().join("a"));
    cfg.ga.population_size = 30;
    cfg.ga.max_generations = 15;
    let first = study::run_astro(&cfg).unwrap();
    let mask = synthetic_mask();
    for ind in &first.result.front {
        assert!(mask.contains(GeoPoint::from_alleles(&ind.chromosome.genes)));
    }
    let rows = load_pareto_csv(&cfg.out_dir.join("pareto.csv"), &ASTRO_OBJECTIVES).unwrap();
    assert_eq!(rows.len(), first.front.sorted().len());

    let again_dir = dir.path().join("b");
    cfg.out_dir = again_dir.clone();
    study::run_astro(&cfg).unwrap();
    for name in ["pareto.csv", "history.csv"] {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(again_dir.join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn astro_missing_grid_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = synthetic_config(ProblemKind::Astro, dir.path());
    cfg.brightness = dir.path().join("nope.csv");
    assert!(matches!(study::run_astro(&cfg), Err(Error::Config(_))));
}

#[test]
fn orbit_header_pool_file_and_inactive_slots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_orbit(&dir.path().join("gen"), OperatorChoice::GaussLattice, 3);
    let out = study::run_orbit(&cfg).unwrap();
    let pool_path = cfg.out_dir.join("pool.csv");
    assert!(out.files.contains(&pool_path));

    let text = fs::read_to_string(cfg.out_dir.join("pareto.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), ORBIT_HEADER.join(","));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 12);
        let n: usize = cells[0].parse().unwrap();
        let filled = (0..3).filter(|s| !cells[1 + 3 * s].is_empty()).count();
        assert_eq!(n, filled);
        for s in 0..3 {
            if let Ok(a) = cells[1 + 3 * s].parse::<f64>() {
                let inc: f64 = cells[2 + 3 * s].parse().unwrap();
                assert!(is_feasible_orbit(a - R_EARTH, inc));
            }
        }
    }

    // Feeding the written pool back in reproduces the run without
    // regenerating it.
    let mut reuse = small_orbit(&dir.path().join("reuse"), OperatorChoice::GaussLattice, 3);
    reuse.pool = Some(pool_path);
    let again = study::run_orbit(&reuse).unwrap();
    assert!(!again.files.iter().any(|f| f.ends_with("pool.csv")));
    assert_eq!(
        fs::read(cfg.out_dir.join("pareto.csv")).unwrap(),
        fs::read(reuse.out_dir.join("pareto.csv")).unwrap()
    );
}

#[test]
fn empty_orbit_pool_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let pool = dir.path().join("pool.csv");
    fs::write(&pool, "a,inc,preempted\n").unwrap();
    let mut cfg = small_orbit(dir.path(), OperatorChoice::GaussLattice, 1);
    cfg.pool = Some(pool);
    assert!(matches!(study::run_orbit(&cfg), Err(Error::Config(_))));
}

/// Post-hoc scan of an exported orbit front: within some 1 km/s delta-v
/// bracket holding both kinds of solution, a multi-satellite row has more
/// access than every single-satellite row.
#[test]
fn multi_satellite_rows_outperform_single_satellite_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_orbit(dir.path(), OperatorChoice::GaussLattice, 21);
    study::run_orbit(&cfg).unwrap();
    let text = fs::read_to_string(cfg.out_dir.join("pareto.csv")).unwrap();
    let rows: Vec<(usize, f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[10].parse().unwrap(), c[11].parse().unwrap())
        })
        .collect();
    let bracket = |dv: f64| dv.floor() as i64;
    let found = rows.iter().filter(|r| r.0 > 1).any(|&(_, acc, dv)| {
        let singles: Vec<f64> = rows
            .iter()
            .filter(|r| r.0 == 1 && bracket(r.2) == bracket(dv))
            .map(|r| r.1)
            .collect();
        !singles.is_empty() && singles.iter().all(|&s| acc > s)
    });
    assert!(found, "{rows:?}");
}

#[test]
fn death_penalty_orbit_front_is_feasible_and_nondominated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_orbit(dir.path(), OperatorChoice::DeathPenalty, 4);
    let out = study::run_orbit(&cfg).unwrap();
    for ind in &out.result.front {
        assert!(!ind.penalized);
        for s in ind.chromosome.active_slots() {
            let g = ind.chromosome.slot(s);
            assert!(is_feasible_orbit(g[0] - R_EARTH, g[1]));
        }
    }
    let rows = load_pareto_csv(&cfg.out_dir.join("pareto.csv"), &ORBIT_OBJECTIVES).unwrap();
    check_mutually_nondominated(&rows).unwrap();
}

#[test]
fn geo_mc_writes_monotone_bands_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = synthetic_config(ProblemKind::GeoMc, &dir.path().join("a"));
    cfg.n_optima = 3;
    cfg.runs_per_optimum = 2;
    cfg.ga.population_size = 30;
    cfg.ga.max_generations = 20;
    let (report, _) = study::run_geo_mc(&cfg).unwrap();
    assert_eq!(report.runs.len(), 6);
    assert_eq!(report.bands.len(), 21);
    for b in &report.bands {
        assert!(b[0] <= b[1] && b[1] <= b[2]);
    }
    let trace = fs::read_to_string(cfg.out_dir.join("trace.csv")).unwrap();
    assert!(trace.starts_with("generation,p5,p50,p95\n"));

    cfg.out_dir = dir.path().join("b");
    study::run_geo_mc(&cfg).unwrap();
    for name in ["trace.csv", "runs.csv"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(name)).unwrap(),
            fs::read(dir.path().join("b").join(name)).unwrap()
        );
    }
}

#[test]
fn empty_front_exports_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    export_pareto_csv(&ParetoTable::new(&ORBIT_HEADER), &path).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), format!("{}\n", ORBIT_HEADER.join(",")));
}
