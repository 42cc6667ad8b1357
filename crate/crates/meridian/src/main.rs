//! Command-line front end: build surfaces from declarative configs, run
//! classification and oracle verification, solve the profile ODEs, export
//! meshes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use meridian::classify::{classify, Tolerances, Verdict};
use meridian::config::SurfaceConfig;
use meridian::error::Error;
use meridian::gaussmap::{laplacian_closed, laplacian_fd, FD_BASE_STEP};
use meridian::mesh::{export_mesh, Projection};
use meridian::odes::{solve_first_kind, solve_second_kind, StepControl};
use meridian::surface::{sample_grid, MeridianSurface};

#[derive(Parser)]
#[command(name = "meridian", version, about = "Meridian surfaces in E^4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a surface against the pointwise 1-type cases.
    Classify(ClassifyArgs),
    /// Compare the closed-form Gauss map Laplacian against the
    /// finite-difference oracle.
    Verify(VerifyArgs),
    /// Solve a profile ODE and write the samples as CSV.
    SolveOde(SolveOdeArgs),
    /// Export a triangulated mesh of the surface projected to E^3.
    ExportMesh(ExportMeshArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the config grid, as NxM.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 1e-5)]
    tol_residual: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_drift: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_condition: f64,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Closed,
    Fd,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = VerifyMode::Both)]
    mode: VerifyMode,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OdeKindArg {
    First,
    Second,
}

#[derive(Args)]
struct SolveOdeArgs {
    #[arg(long, value_enum)]
    kind: OdeKindArg,
    #[arg(long)]
    f0: f64,
    #[arg(long)]
    df0: f64,
    #[arg(long)]
    d2f0: f64,
    /// Third derivative at the left end (second kind only).
    #[arg(long, default_value_t = 0.0)]
    d3f0: f64,
    /// Integration span as A:B.
    #[arg(long)]
    span: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportMeshArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    grid: Option<String>,
    /// drop:K (1-indexed axis) or ortho:a11,a12,...,a34 (12 numbers, row major).
    #[arg(long, default_value = "drop:4")]
    projection: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid_arg(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Config(format!("grid '{s}' is not of the form NxM"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_projection(s: &str) -> Result<Projection, Error> {
    if let Some(axis) = s.strip_prefix("drop:") {
        let k: usize = axis
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad drop axis '{axis}'")))?;
        if !(1..=4).contains(&k) {
            return Err(Error::Config(format!("drop axis must be 1..4, got {k}")));
        }
        return Ok(Projection::DropAxis(k - 1));
    }
    if let Some(rest) = s.strip_prefix("ortho:") {
        let nums: Vec<f64> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad matrix entry '{t}'")))
            })
            .collect::<Result<_, Error>>()?;
        if nums.len() != 12 {
            return Err(Error::Config(format!(
                "ortho projection needs 12 entries, got {}",
                nums.len()
            )));
        }
        let mut m = [[0.0; 4]; 3];
        for i in 0..3 {
            m[i].copy_from_slice(&nums[i * 4..i * 4 + 4]);
        }
        return Ok(Projection::Orthographic(m));
    }
    Err(Error::Config(format!(
        "projection '{s}' is neither drop:K nor ortho:..."
    )))
}

fn load_surface(
    path: &Path,
    grid_override: &Option<String>,
) -> Result<(MeridianSurface, (usize, usize)), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config '{}': {e}", path.display())))?;
    let config = SurfaceConfig::parse(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let surface = config.build(base)?;
    let grid = match grid_override {
        Some(s) => parse_grid_arg(s)?,
        None => config.grid,
    };
    Ok((surface, grid))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_classify(args: &ClassifyArgs) -> Result<ExitCode, Error> {
    let (surface, (nu, nv)) = load_surface(&args.config, &args.grid)?;
    let tol = Tolerances {
        condition_tol: args.tol_condition,
        residual_tol: args.tol_residual,
        drift_tol: args.tol_drift,
    };
    let report = classify(&surface, nu, nv, &tol)?;
    emit(&args.out, &report.to_text())?;
    Ok(if report.verdict == Verdict::NotPointwise1Type {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let (surface, (nu, nv)) = load_surface(&args.config, &args.grid)?;
    if nu < 8 || nv < 8 {
        return Err(Error::GridTooSmall { min: 8, nu, nv });
    }
    let ((u0, u1), (v0, v1)) = surface.domain();
    let margin = (2.5 * FD_BASE_STEP).max(0.02 * (u1 - u0).min(v1 - v0));
    let grid = sample_grid((u0, u1), (v0, v1), nu, nv, margin);
    let mut out = String::new();
    let mut max_rel = 0.0_f64;
    let mut sum_rel = 0.0_f64;
    for &(u, v) in &grid {
        match args.mode {
            VerifyMode::Closed => {
                let d = laplacian_closed(&surface, u, v)?.ambient;
                out.push_str(&format!(
                    "{:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e}\n",
                    u, v, d.0[0], d.0[1], d.0[2], d.0[3], d.0[4], d.0[5]
                ));
            }
            VerifyMode::Fd => {
                let d = laplacian_fd(&surface, u, v, FD_BASE_STEP)?;
                out.push_str(&format!(
                    "{:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e}\n",
                    u, v, d.0[0], d.0[1], d.0[2], d.0[3], d.0[4], d.0[5]
                ));
            }
            VerifyMode::Both => {
                let closed = laplacian_closed(&surface, u, v)?.ambient;
                let fd = laplacian_fd(&surface, u, v, FD_BASE_STEP)?;
                let rel = (fd - closed).norm() / closed.norm().max(1.0);
                max_rel = max_rel.max(rel);
                sum_rel += rel;
            }
        }
    }
    if args.mode == VerifyMode::Both {
        out.push_str(&format!("max_discrepancy = {max_rel:.17e}\n"));
        out.push_str(&format!(
            "mean_discrepancy = {:.17e}\n",
            sum_rel / grid.len() as f64
        ));
        emit(&args.out, &out)?;
        return Ok(if max_rel <= 1e-5 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        });
    }
    emit(&args.out, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_solve_ode(args: &SolveOdeArgs) -> Result<ExitCode, Error> {
    let (a, b) = args
        .span
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("span '{}' is not of the form A:B", args.span)))?;
    let parse = |s: &str| -> Result<f64, Error> {
        s.trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad span bound '{s}'")))
    };
    let span = (parse(a)?, parse(b)?);
    let ctrl = StepControl {
        tol: args.tol,
        ..StepControl::default()
    };
    let sol = match args.kind {
        OdeKindArg::First => solve_first_kind(args.f0, args.df0, args.d2f0, span, &ctrl)?,
        OdeKindArg::Second => {
            solve_second_kind(args.f0, args.df0, args.d2f0, args.d3f0, span, &ctrl)?
        }
    };
    if let Some(reason) = sol.halt {
        eprintln!(
            "warning: integration halted at u = {:.17e} ({:?}); partial solution written",
            sol.u_end(),
            reason
        );
    }
    emit(&args.out, &sol.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn run_export_mesh(args: &ExportMeshArgs) -> Result<ExitCode, Error> {
    let (surface, (nu, nv)) = load_surface(&args.config, &args.grid)?;
    let projection = parse_projection(&args.projection)?;
    if let Some(warning) = projection.degeneracy_warning() {
        eprintln!("warning: {warning}");
    }
    let text = export_mesh(&surface, nu, nv, &projection)?;
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Verify(args) => run_verify(args),
        Command::SolveOde(args) => run_solve_ode(args),
        Command::ExportMesh(args) => run_export_mesh(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
