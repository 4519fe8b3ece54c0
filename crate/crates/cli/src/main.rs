//! `maxgraph`: verify, mesh and catalog singly periodic maximal graphs.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or a
//! computation breaks down, 2 for usage and configuration errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxgraph::catalog::catalog;
use maxgraph::mesh::{export_obj, export_ply, write_atomic};
use maxgraph::report::{
    parse_grid_counts, run_minimal, run_verification, RunConfig, RunOptions, TolLevel,
    VerificationReport,
};
use maxgraph::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "maxgraph",
    version,
    about = "Singly periodic maximal graphs with cone-like singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full check suite on a configuration.
    Verify(VerifyArgs),
    /// Build a mesh (OBJ, or PLY when the output ends in .ply) and verify it.
    Mesh(MeshArgs),
    /// List the cone-direction classes for a number of cones.
    Catalog(CatalogArgs),
    /// Measure the period vectors of the minimal counterparts.
    MinimalMeasure(MinimalArgs),
}

#[derive(Args)]
struct Common {
    /// Parameter file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Sample counts as RADIALxANGULAR, e.g. 200x100.
    #[arg(long, value_name = "RxA")]
    grid: Option<String>,
    /// Tolerance ladder: strict, default or loose.
    #[arg(long, value_name = "LEVEL")]
    tol: Option<String>,
    /// Make the end at z = 0 horizontal, re-solving one coordinate.
    #[arg(long)]
    require_horizontal_ends: bool,
    /// Print the JSON report on standard output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    common: Common,
    /// Mesh file; the report goes next to it as <out>.report.json.
    #[arg(long)]
    out: PathBuf,
    /// Number of period translates appended to the fundamental piece.
    #[arg(long, default_value_t = 0)]
    copies: usize,
}

#[derive(Args)]
struct CatalogArgs {
    /// Total number of cone points.
    #[arg(long)]
    cones: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for symmetry with the other commands; output is always JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MinimalArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_name = "LEVEL")]
    tol: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OrderingViolation(_)
            | Error::LengthMismatch(_)
            | Error::SignDomain(_)
            | Error::InvalidGrid(_)
            | Error::InvalidInput(_)
            | Error::Json(_)
            | Error::Io(_) => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load(common: &Common) -> Result<(RunConfig, RunOptions), Failure> {
    let config = RunConfig::load(&common.config)
        .map_err(|e| Failure::Usage(format!("{}: {e}", common.config.display())))?;
    let tol_level = common
        .tol
        .as_deref()
        .map(str::parse::<TolLevel>)
        .transpose()?;
    let grid_counts = common.grid.as_deref().map(parse_grid_counts).transpose()?;
    Ok((
        config,
        RunOptions {
            tol_level,
            grid_counts,
            require_horizontal_ends: common.require_horizontal_ends,
            copies: 0,
        },
    ))
}

fn summarize(report: &VerificationReport) {
    for c in &report.checks {
        eprintln!(
            "{:<22} {}  value={:.3e} tol={:.1e}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.value,
            c.tolerance
        );
    }
    eprintln!("overall: {}", if report.passed { "pass" } else { "FAIL" });
}

fn emit(text: &str, out: Option<&Path>, json: bool) -> Result<(), Failure> {
    if let Some(path) = out {
        write_atomic(path, text.as_bytes())?;
    }
    if json {
        print!("{text}");
    }
    Ok(())
}

fn verdict(report: &VerificationReport) -> Result<(), Failure> {
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Check(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let (config, options) = load(&args.common)?;
    let (report, _) = run_verification(&config, &options, "verify")?;
    summarize(&report);
    emit(&to_json(&report), args.out.as_deref(), args.common.json)?;
    verdict(&report)
}

fn mesh(args: &MeshArgs) -> Result<(), Failure> {
    let (config, mut options) = load(&args.common)?;
    options.copies = args.copies;
    let (mut report, mesh) = run_verification(&config, &options, "mesh")?;
    let Some(mesh) = mesh else {
        summarize(&report);
        let why = report
            .check("graph")
            .map(|c| c.details.to_string())
            .unwrap_or_default();
        return Err(Failure::Check(format!("mesh could not be built: {why}")));
    };
    let is_ply = args
        .out
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("ply"));
    if is_ply {
        export_ply(&mesh, &args.out)?;
    } else {
        export_obj(&mesh, &args.out)?;
    }
    if let Some(m) = report.mesh.as_mut() {
        m.output = Some(args.out.display().to_string());
    }
    summarize(&report);
    let mut report_path = args.out.clone().into_os_string();
    report_path.push(".report.json");
    emit(
        &to_json(&report),
        Some(Path::new(&report_path)),
        args.common.json,
    )?;
    verdict(&report)
}

fn catalog_cmd(args: &CatalogArgs) -> Result<(), Failure> {
    if args.cones == 0 {
        return Err(Failure::Usage("--cones must be at least 1".into()));
    }
    let text = to_json(&catalog(args.cones));
    emit(&text, args.out.as_deref(), args.out.is_none() || args.json)
}

fn minimal(args: &MinimalArgs) -> Result<(), Failure> {
    let config = RunConfig::load(&args.config)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    let level = args
        .tol
        .as_deref()
        .map(str::parse::<TolLevel>)
        .transpose()?;
    let report = run_minimal(&config, level)?;
    for lattice in &report.lattices {
        for l in &lattice.measured_loops {
            eprintln!(
                "{:?} {:<48} ({:+.9}, {:+.9}, {:+.9})",
                lattice.orientation, l.description, l.vector[0], l.vector[1], l.vector[2]
            );
        }
    }
    if let Some(note) = &report.normalization_note {
        eprintln!("normalization: {note}");
    }
    emit(&to_json(&report), args.out.as_deref(), args.json)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "contractible loop residual {:e} above {:e}",
            report.contractible_residual, report.tolerance
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Mesh(a) => mesh(a),
        Command::Catalog(a) => catalog_cmd(a),
        Command::MinimalMeasure(a) => minimal(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("maxgraph: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("maxgraph: {msg}");
            ExitCode::from(2)
        }
    }
}
