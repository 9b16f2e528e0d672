use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use plcone::evolver::{run_experiment, ExperimentConfig};
use plcone::io::{export, ExportFormat, ExportObject, OffMesh};
use plcone::verify::{claim_ids, constants_report, sig12, Profile, Verdict, Verifier, VerifyOptions};

/// Exit status for usage and runtime errors, distinct from verdicts.
const ERROR_EXIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "plcone", version, about = "Checks and stress tests for piecewise-linear minimal cone candidates in R^4")]
struct Cli {
    /// Seed for Monte Carlo estimates and gradient probes.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples for volume estimates.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Directory for reports, traces and meshes.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Tolerances for quoted decimals: `published` or `strict`.
    #[arg(long, global = true, default_value = "published")]
    tolerance_profile: String,
    /// Record wall-clock time in reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the constants table.
    Constants,
    /// Check one registered claim, or `all`.
    Verify { claim: String },
    /// List the registered claims.
    Claims,
    /// Run a descent experiment from a config file.
    Evolve { config: PathBuf },
    /// Write an object as a mesh or JSON file.
    Export { object: String, format: String },
}

impl Cli {
    fn options(&self) -> Result<VerifyOptions> {
        let d = VerifyOptions::default();
        Ok(VerifyOptions {
            seed: self.seed.unwrap_or(d.seed),
            samples: self.samples.unwrap_or(d.samples),
            profile: self.tolerance_profile.parse::<Profile>()?,
            timings: self.timings,
        })
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let p = dir.join(name);
    fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
    Ok(p)
}

fn constants(cli: &Cli) -> Result<Verdict> {
    let r = constants_report(&cli.options()?);
    for row in &r.rows {
        let expect = match (row.expected, row.tolerance) {
            (Some(e), Some(t)) => format!("{e} ± {t}"),
            (Some(e), None) => format!("{:?} {e}", row.relation),
            _ => String::new(),
        };
        let mark = if row.pass { "pass" } else { "FAIL" };
        println!("{:<42} {:>18}  {:<24} {mark}", row.name, row.value, expect);
    }
    let p = write(&cli.out_dir, "constants.json", &r.to_json())?;
    println!("{} -> {}", r.verdict, p.display());
    Ok(r.verdict)
}

fn verify(cli: &Cli, claim: &str) -> Result<Verdict> {
    let v = Verifier::new(cli.options()?);
    if claim == "all" {
        let s = v.run_all();
        for r in &s.reports {
            println!("{:<16} {}", r.claim, r.verdict);
        }
        let p = write(&cli.out_dir, "verify-all.json", &s.to_json())?;
        println!("overall {} -> {}", s.verdict, p.display());
        return Ok(s.verdict);
    }
    let r = v.run(claim)?;
    for row in r.rows.iter().filter(|r| !r.pass) {
        println!("  failed: {} = {}", row.name, row.value);
    }
    let p = write(&cli.out_dir, &format!("verify-{claim}.json"), &r.to_json())?;
    println!("{:<16} {} -> {}", r.claim, r.verdict, p.display());
    Ok(r.verdict)
}

#[derive(Serialize)]
struct RunRow {
    refine_level: u32,
    tets: usize,
    max_edge: f64,
    start_mass: f64,
    final_mass: f64,
    relative_decrease: f64,
    steps: usize,
    status: String,
    monotone: bool,
}

#[derive(Serialize)]
struct EvolveReport {
    schema_version: u32,
    name: String,
    partition: String,
    seed: u64,
    config: ExperimentConfig,
    cone_mass: f64,
    popped_mass: Option<f64>,
    hull_inradius: f64,
    gradient_max_relative_error: f64,
    runs: Vec<RunRow>,
}

fn evolve(cli: &Cli, path: &Path) -> Result<Verdict> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = ExperimentConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let r = run_experiment(&cfg).with_context(|| format!("running {}", cfg.name))?;
    let dir = &cli.out_dir;
    let n = cfg.name.clone();
    write(dir, &format!("{n}-initial.off"), &OffMesh::from_complex(&r.cone).to_text())?;
    if let Some(p) = &r.popped {
        write(dir, &format!("{n}-popped.off"), &OffMesh::from_complex(p).to_text())?;
    }
    let mut runs = Vec::new();
    for run in &r.runs {
        let k = run.refine_level;
        write(dir, &format!("{n}-trace-L{k}.csv"), &run.trace.to_csv())?;
        write(dir, &format!("{n}-final-L{k}.off"), &OffMesh::from_complex(&run.final_complex).to_text())?;
        runs.push(RunRow {
            refine_level: k,
            tets: run.tets,
            max_edge: sig12(run.max_edge),
            start_mass: sig12(run.start_mass),
            final_mass: sig12(run.final_mass),
            relative_decrease: sig12(run.trace.relative_decrease()),
            steps: run.trace.records.len() - 1,
            status: format!("{:?}", run.trace.status),
            monotone: run.trace.is_monotone(),
        });
    }
    let report = EvolveReport {
        schema_version: plcone::verify::SCHEMA_VERSION,
        name: n.clone(),
        partition: cfg.label.to_string(),
        seed: cfg.seed,
        cone_mass: sig12(r.cone_mass),
        popped_mass: r.popped_mass.map(sig12),
        hull_inradius: sig12(r.hull_inradius),
        gradient_max_relative_error: sig12(r.gradient_check.max_relative_error),
        runs,
        config: cfg,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    let p = write(dir, &format!("{n}-report.json"), &json)?;
    println!("cone mass    {}", report.cone_mass);
    if let Some(m) = report.popped_mass {
        println!("popped mass  {m}");
    }
    for run in &report.runs {
        println!(
            "level {}: {} tets, {} steps, final mass {} ({:.4}% decrease)",
            run.refine_level,
            run.tets,
            run.steps,
            run.final_mass,
            100.0 * run.relative_decrease
        );
    }
    println!("report -> {}", p.display());
    Ok(Verdict::Pass)
}

fn export_cmd(cli: &Cli, object: &str, format: &str) -> Result<Verdict> {
    let o: ExportObject = object.parse()?;
    let f: ExportFormat = format.parse()?;
    let text = export(o, f)?;
    let p = write(&cli.out_dir, &format!("{o}.{}", f.extension()), &text)?;
    println!("{}", p.display());
    Ok(Verdict::Pass)
}

fn run(cli: &Cli) -> Result<Verdict> {
    match &cli.command {
        Command::Constants => constants(cli),
        Command::Verify { claim } => verify(cli, claim),
        Command::Claims => {
            for id in claim_ids() {
                println!("{id}");
            }
            Ok(Verdict::Pass)
        }
        Command::Evolve { config } => evolve(cli, config),
        Command::Export { object, format } => export_cmd(cli, object, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ERROR_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
