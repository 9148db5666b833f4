use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minsurf_core::grid::{Domain, Grid};
use minsurf_core::kernel::named_theta;
use minsurf_core::mesh::{self, MorphSpec, Variant};
use minsurf_core::surface::{classify, classify_conjugate};
use minsurf_core::verify::{self, curvature_lines, VerificationReport, VerifyConfig};
use minsurf_core::{AssociatedParam, Error, QuadratureSpec, ShapeParam};

/// Minimal surfaces with planar curvature lines.
#[derive(Parser, Debug)]
#[command(name = "minsurf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one surface and write a mesh or CSV.
    Generate(GenerateArgs),
    /// Run the residual suite and write a JSON report.
    Verify(VerifyArgs),
    /// Print the surface type for a θ.
    Classify(ClassifyArgs),
    /// Write a θ sweep as numbered OBJ frames.
    Morph(MorphArgs),
    /// Compare the Weierstrass integral with the closed form.
    CompareWeierstrass(CompareArgs),
}

#[derive(Args, Debug)]
struct ThetaArgs {
    /// Family parameter in radians, within [-π/4, 3π/4].
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta_name")]
    theta: Option<f64>,
    /// plane-left | catenoid | enneper | catenoid2 | plane-right
    #[arg(long)]
    theta_name: Option<String>,
}

impl ThetaArgs {
    fn shape(&self) -> Result<ShapeParam, String> {
        let theta = match (&self.theta, &self.theta_name) {
            (Some(t), None) => *t,
            (None, Some(name)) => named_theta(name).ok_or_else(|| {
                format!("unknown --theta-name {name:?}; expected plane-left|catenoid|enneper|catenoid2|plane-right")
            })?,
            _ => return Err("one of --theta or --theta-name is required".into()),
        };
        ShapeParam::new(theta).map_err(|e| e.to_string())
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    u_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v_max: Option<f64>,
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long)]
    nv: Option<usize>,
}

impl GridArgs {
    fn grid(&self, domain: Domain, n: usize) -> Result<Grid, String> {
        let d = Domain::new(
            self.u_min.unwrap_or(domain.u_min),
            self.u_max.unwrap_or(domain.u_max),
            self.v_min.unwrap_or(domain.v_min),
            self.v_max.unwrap_or(domain.v_max),
        );
        Grid::new(d, self.nu.unwrap_or(n), self.nv.unwrap_or(n)).map_err(|e| e.to_string())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Obj,
    Ply,
    Csv,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    theta: ThetaArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// plain | tilde | conjugate | associated:<re>,<im>
    #[arg(long, default_value = "tilde")]
    variant: String,
    #[arg(long, value_enum, default_value = "obj")]
    format: Format,
    #[arg(long)]
    out: PathBuf,
    /// With --format csv: write this many curvature lines per family instead of the grid.
    #[arg(long)]
    lines: Option<usize>,
    /// Uniform scale applied to positions before export.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    theta: ThetaArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Tolerance override, repeatable: <record-name>=<value>.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    theta: ThetaArgs,
    /// plain or conjugate
    #[arg(long, default_value = "plain")]
    variant: String,
}

#[derive(Args, Debug)]
struct MorphArgs {
    #[arg(long, allow_negative_numbers = true)]
    theta_start: f64,
    #[arg(long, allow_negative_numbers = true)]
    theta_end: f64,
    #[arg(long)]
    frames: usize,
    #[command(flatten)]
    grid: GridArgs,
    /// tilde or conjugate
    #[arg(long, default_value = "tilde")]
    variant: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    theta: ThetaArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// plain | conjugate | associated:<re>,<im>
    #[arg(long, default_value = "plain")]
    variant: String,
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_tols(items: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--tol expects NAME=VALUE, got {item:?}")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Failure::Usage(format!("--tol value is not a number: {value:?}")))?;
        out.insert(name.to_string(), value);
    }
    Ok(out)
}

fn emit_report(
    mut report: VerificationReport,
    tols: &[String],
    path: Option<&Path>,
) -> Result<(), Failure> {
    report.apply_overrides(&parse_tols(tols)?)?;
    let json = report.to_json();
    match path {
        Some(p) => write_file(p, &(json + "\n"))?,
        None => println!("{json}"),
    }
    for r in report.records.iter().filter(|r| !r.passed) {
        eprintln!(
            "FAIL {} value {:e} > tolerance {:e}",
            r.name, r.value, r.tolerance
        );
    }
    if report.overall {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn generate(a: &GenerateArgs) -> Result<(), Failure> {
    let p = a.theta.shape()?;
    let variant: Variant = a.variant.parse()?;
    let grid = a
        .grid
        .grid(Domain::mesh_default(), mesh::DEFAULT_RESOLUTION)?;
    let wrap = |e: Error| match e {
        Error::Io(io) => Failure::Usage(format!("cannot write {}: {io}", a.out.display())),
        e => e.into(),
    };
    if let Some(n) = a.lines {
        if a.format != Format::Csv {
            return Err(Failure::Usage("--lines requires --format csv".into()));
        }
        if n < 2 {
            return Err(Failure::Usage(
                "--lines needs at least 2 lines per family".into(),
            ));
        }
        let samples = grid.nu.max(grid.nv);
        let lines = curvature_lines(&grid.domain, n, samples);
        return mesh::export_lines_csv(&p, variant, &lines, &a.out).map_err(wrap);
    }
    let m = mesh::sample_grid(&p, variant, &grid)?.scaled(a.scale)?;
    match a.format {
        Format::Obj => mesh::export_obj(&m, &a.out),
        Format::Ply => mesh::export_ply(&m, &a.out),
        Format::Csv => mesh::export_grid_csv(&m, &a.out),
    }
    .map_err(wrap)
}

fn run_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let p = a.theta.shape()?;
    let cfg = VerifyConfig {
        grid: a.grid.grid(Domain::unit_square(), 21)?,
        ..VerifyConfig::default()
    };
    emit_report(verify::verify(&p, &cfg)?, &a.tol, a.report.as_deref())
}

fn run_classify(a: &ClassifyArgs) -> Result<(), Failure> {
    let theta = a.theta.shape()?.theta();
    let name = match a.variant.as_str() {
        "plain" | "tilde" => classify(theta)?.name(),
        "conjugate" => classify_conjugate(theta)?.name(),
        v => {
            return Err(Failure::Usage(format!(
                "classify supports plain|conjugate, got {v:?}"
            )))
        }
    };
    println!("{name}");
    Ok(())
}

fn run_morph(a: &MorphArgs) -> Result<(), Failure> {
    let conjugate = match a.variant.as_str() {
        "tilde" => false,
        "conjugate" => true,
        v => {
            return Err(Failure::Usage(format!(
                "morph supports tilde|conjugate, got {v:?}"
            )))
        }
    };
    let spec = MorphSpec {
        theta_start: a.theta_start,
        theta_end: a.theta_end,
        frames: a.frames,
        grid: a
            .grid
            .grid(Domain::mesh_default(), mesh::DEFAULT_RESOLUTION)?,
        conjugate,
    };
    let out = mesh::morph_frames(&spec, &a.out).map_err(|e| match e {
        Error::Io(io) => Failure::Usage(format!("cannot write into {}: {io}", a.out.display())),
        e => e.into(),
    })?;
    for (i, (th, f)) in out.thetas.iter().zip(&out.files).enumerate() {
        let sup = out
            .adjacent_sup
            .get(i)
            .map_or(String::new(), |d| format!(" sup_to_next {d:.6e}"));
        println!("{} theta {th:.16e}{sup}", f.display());
    }
    Ok(())
}

fn run_compare(a: &CompareArgs) -> Result<(), Failure> {
    let p = a.theta.shape()?;
    let lam = match a.variant.parse::<Variant>()? {
        Variant::Plain => AssociatedParam::identity(),
        Variant::Conjugate => AssociatedParam::conjugate(),
        Variant::Associated(l) => l,
        Variant::Tilde => {
            return Err(Failure::Usage(
                "compare-weierstrass has no tilde variant".into(),
            ))
        }
    };
    let grid = a.grid.grid(Domain::unit_square(), 10)?;
    let q = QuadratureSpec::default();
    let records = vec![
        verify::check_weierstrass_oracle(&p, &lam, &grid, &q)?,
        verify::check_path_independence(&p, &grid, &q)?,
    ];
    emit_report(
        VerificationReport::new(p, records),
        &a.tol,
        a.report.as_deref(),
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => run_verify(a),
        Command::Classify(a) => run_classify(a),
        Command::Morph(a) => run_morph(a),
        Command::CompareWeierstrass(a) => run_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
