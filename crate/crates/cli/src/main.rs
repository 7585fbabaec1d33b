use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Arg, ArgMatches, Command};
use lattice_ga::study::{self, fixtures, ProblemKind, RunConfig, KEYS};

fn run_command(name: &'static str, about: &'static str) -> Command {
    let mut cmd = Command::new(name).about(about).arg(
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .help("Flat `key = value` configuration file"),
    );
    // Every configuration key is also a flag; flags win over the file.
    for &key in KEYS.iter().filter(|k| **k != "problem") {
        let mut arg = Arg::new(key).long(key).value_name("VALUE");
        let hyphen = key.replace('_', "-");
        if hyphen != key {
            arg = arg.alias(hyphen);
        }
        if key == "operator" {
            arg = arg.help("uniform_lattice, gauss_lattice, repair_baseline or death_penalty");
        }
        cmd = cmd.arg(arg);
    }
    cmd
}

fn cli() -> Command {
    Command::new("lattice-ga")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Lattice-operator genetic algorithm studies")
        .subcommand_required(true)
        .subcommand(run_command(
            "geo-mc",
            "Monte Carlo study on the land mask: distance-to-optimum runs",
        ))
        .subcommand(run_command(
            "astro",
            "Observatory siting: sky brightness, cloud cover, station proximity",
        ))
        .subcommand(run_command(
            "orbit",
            "Constellation design: station access against transfer cost",
        ))
        .subcommand(
            Command::new("fixtures")
                .about("Write the synthetic mask, grids and stations")
                .arg(Arg::new("dir").long("dir").default_value("data/synthetic")),
        )
}

fn resolve(kind: ProblemKind, m: &ArgMatches) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(kind);
    if let Some(path) = m.get_one::<String>("config") {
        cfg.apply_file(path.as_ref())?;
        cfg.problem = kind;
    }
    for &key in KEYS.iter().filter(|k| **k != "problem") {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    match run(cli().get_matches()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(matches: ArgMatches) -> Result<()> {
    match matches.subcommand() {
        Some(("geo-mc", m)) => {
            let cfg = resolve(ProblemKind::GeoMc, m)?;
            let (report, files) = study::run_geo_mc(&cfg)?;
            println!(
                "{}: {} runs, median final angle {:.3e} rad, convergence-generation variance {:.1}",
                report.operator,
                report.runs.len(),
                report.median_final_best(),
                report.convergence_variance()
            );
            list(&files);
        }
        Some(("astro", m)) => summary(&study::run_astro(&resolve(ProblemKind::Astro, m)?)?),
        Some(("orbit", m)) => summary(&study::run_orbit(&resolve(ProblemKind::Orbit, m)?)?),
        Some(("fixtures", m)) => {
            let dir = PathBuf::from(m.get_one::<String>("dir").expect("has default"));
            fixtures::write_synthetic_fixtures(&dir)?;
            println!("wrote fixtures to {}", dir.display());
        }
        _ => unreachable!("subcommand_required"),
    }
    Ok(())
}

fn summary(out: &study::StudyOutput) {
    println!(
        "{} generations, {} evaluations, {} front rows{}",
        out.result.generations,
        out.result.evaluations,
        out.front.sorted().len(),
        if out.result.converged { " (stalled)" } else { "" }
    );
    list(&out.files);
}

fn list(files: &[PathBuf]) {
    for f in files {
        println!("  {}", f.display());
    }
}
