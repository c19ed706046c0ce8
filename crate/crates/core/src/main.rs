use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trimix::eigensolver::SolverOptions;
use trimix::geometry::{apex_triangle, regular_polygon, trapezium_fixture, unit_square, Polygon};
use trimix::verifier::{
    cmd_bounds, cmd_conjecture, cmd_order, cmd_plot, cmd_polygon_lb, cmd_rhombus, cmd_trapezium, BoundsGrid,
    ConjectureGrid, Format, PlotDomain, PlotSpec, RunOptions, VerificationReport,
};
use trimix::{Error, Result};

#[derive(Parser)]
#[command(name = "trimix", version, about = "Mixed Dirichlet-Neumann Laplace eigenvalues on polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Number of refinement levels used for extrapolation.
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Number of eigenpairs to compute where a command allows it.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Relative eigensolver residual tolerance.
    #[arg(long, global = true, default_value_t = trimix::eigensolver::DEFAULT_TOL)]
    tol: f64,
    /// Write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format for --out: json, csv or svg.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Exit nonzero when any check is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ordering chain for the right triangle (0,0), (1,0), (0,b).
    Order {
        #[arg(long, default_value_t = 0.5)]
        b: f64,
    },
    /// Ordering scan over a grid of scalene triangles.
    Conjecture {
        #[arg(long, default_value_t = 10)]
        nx: usize,
        #[arg(long, default_value_t = 10)]
        ny: usize,
    },
    /// Symmetry classes and ordering of rhombus modes.
    Rhombus {
        /// Smallest angle of the rhombus in radians.
        #[arg(long, default_value_t = 1.2)]
        angle: f64,
    },
    /// Dirichlet on the long sloped side versus the short top side.
    Trapezium,
    /// Explicit bounds over the default parameter grids.
    Bounds,
    /// Second Neumann eigenvalue versus n consecutive Dirichlet sides.
    PolygonLb {
        /// square, trapezium, regular:N or triangle:X,Y.
        #[arg(long, default_value = "regular:5")]
        polygon: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Eigenfunction picture; use --format svg.
    Plot {
        /// right:B, rhombus:ANGLE, trapezium, obtuse:H, acute:H, triangle:X,Y or regular:N.
        #[arg(long, default_value = "right:0.5")]
        domain: String,
        /// One D or N per side, for example NDN.
        #[arg(long)]
        bc: Option<String>,
        /// Zero-based eigenvalue index.
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, default_value_t = 5)]
        level: usize,
    },
}

fn split(spec: &str) -> (&str, &str) {
    spec.split_once(':').unwrap_or((spec, ""))
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}

fn pair(s: &str) -> Result<(f64, f64)> {
    let (x, y) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected X,Y, got `{s}`")))?;
    Ok((number(x)?, number(y)?))
}

fn parse_polygon(spec: &str) -> Result<(String, Polygon)> {
    let (kind, arg) = split(spec);
    let p = match kind {
        "square" => unit_square(),
        "trapezium" => trapezium_fixture(),
        "regular" => regular_polygon(number(arg)?)?,
        "triangle" => {
            let (x, y) = pair(arg)?;
            apex_triangle(x, y)?.to_polygon()
        }
        _ => return Err(Error::Parse(format!("unknown polygon `{spec}`"))),
    };
    Ok((spec.to_string(), p))
}

fn parse_domain(spec: &str) -> Result<PlotDomain> {
    let (kind, arg) = split(spec);
    Ok(match kind {
        "right" => PlotDomain::RightTriangle(number(arg)?),
        "rhombus" => PlotDomain::Rhombus(number(arg)?),
        "trapezium" => PlotDomain::Trapezium,
        "obtuse" => PlotDomain::ObtuseIsosceles(number(arg)?),
        "acute" => PlotDomain::AcuteIsosceles(number(arg)?),
        "triangle" => {
            let (x, y) = pair(arg)?;
            PlotDomain::Apex(x, y)
        }
        "regular" => PlotDomain::RegularPolygon(number(arg)?),
        _ => return Err(Error::Parse(format!("unknown domain `{spec}`"))),
    })
}

fn run(cli: Cli) -> Result<VerificationReport> {
    let c = &cli.common;
    let opts = RunOptions {
        levels: c.levels,
        k: c.k,
        solver: SolverOptions::with_tol(c.tol),
        with_mode: c.format.eq_ignore_ascii_case("svg"),
        ..RunOptions::default()
    };
    match cli.command {
        Command::Order { b } => cmd_order(b, &opts),
        Command::Conjecture { nx, ny } => cmd_conjecture(&ConjectureGrid { nx, ny, ..ConjectureGrid::default() }, &opts),
        Command::Rhombus { angle } => cmd_rhombus(angle, &opts),
        Command::Trapezium => cmd_trapezium(&opts),
        Command::Bounds => cmd_bounds(&BoundsGrid::default(), &opts),
        Command::PolygonLb { polygon, n } => {
            let (name, p) = parse_polygon(&polygon)?;
            cmd_polygon_lb(&p, &name, n, &opts)
        }
        Command::Plot { domain, bc, index, level } => cmd_plot(
            &PlotSpec {
                domain: parse_domain(&domain)?,
                bc,
                index,
                level,
            },
            &opts,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = match cli.common.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (out, strict) = (cli.common.out.clone(), cli.common.strict);
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", report.summary());
    if let Some(t) = report.elapsed_seconds {
        println!("elapsed {t:.2}s");
    }
    if let Some(path) = out {
        if let Err(e) = report.export(format, &path) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let counts = report.counts();
    if counts.violated > 0 || (strict && counts.inconclusive > 0) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
