//! Command line front end for planar cone quantiles, cone distribution
//! values, and halfspace depth. Reads two-column CSV point clouds, writes
//! JSON, CSV, or SVG, and never leaves partial output behind on failure.

mod error;
mod io;
mod json;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conequant::depth::{
    cdf_field_with, cone_depth_with, tukey_depth, tukey_region_with,
};
use conequant::quantile::cone_quantile_with;
use conequant::{Cone, Tolerance, Vec2};

use error::CliError;

#[derive(Parser)]
#[command(
    name = "conequant",
    version,
    about = "Cone quantiles, cone distribution values, and halfspace depth \
             for planar point clouds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower quantile set as a polyhedron, one JSON object per level
    Quantile(QuantileArgs),
    /// Distribution value, depth, and a minimizing direction at a point
    Cdf(QueryArgs),
    /// Integer cone depth at a point
    Depth(QueryArgs),
    /// Classical halfspace depth at a point
    TukeyDepth(TukeyQueryArgs),
    /// Halfspace depth region at one level (may be empty)
    TukeyRegion(TukeyRegionArgs),
    /// Distribution values on a rectangular grid, as CSV
    Grid(GridArgs),
    /// SVG figure: points, quantile boundaries, depth labels
    Plot(PlotArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input CSV file, one "x,y" row per point, optional header row
    #[arg(short = 'i', long = "input", value_name = "FILE")]
    input: PathBuf,
    /// Output file; stdout when omitted
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    output: Option<PathBuf>,
    /// Output format; defaults to the command's native format
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<Format>,
}

#[derive(Args)]
struct QuantileArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Ordering cone: "orthant" or "b1x,b1y;b2x,b2y"
    #[arg(long, value_name = "SPEC", default_value = "orthant", allow_hyphen_values = true)]
    cone: String,
    /// Quantile level in (0,1]; repeat for several levels
    #[arg(short = 'p', value_name = "LEVEL", required = true)]
    p: Vec<f64>,
    /// Tie tolerance override
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Ordering cone: "orthant" or "b1x,b1y;b2x,b2y"
    #[arg(long, value_name = "SPEC", default_value = "orthant", allow_hyphen_values = true)]
    cone: String,
    /// Query point "x,y"
    #[arg(short = 'z', value_name = "X,Y", allow_hyphen_values = true)]
    z: String,
    /// Tie tolerance override
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

#[derive(Args)]
struct TukeyQueryArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Query point "x,y"
    #[arg(short = 'z', value_name = "X,Y", allow_hyphen_values = true)]
    z: String,
}

#[derive(Args)]
struct TukeyRegionArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Depth level in (0,1]
    #[arg(short = 'p', value_name = "LEVEL")]
    p: f64,
    /// Tie tolerance override
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Ordering cone: "orthant" or "b1x,b1y;b2x,b2y"
    #[arg(long, value_name = "SPEC", default_value = "orthant", allow_hyphen_values = true)]
    cone: String,
    /// Evaluation window "xmin,xmax,ymin,ymax"
    #[arg(long, value_name = "XMIN,XMAX,YMIN,YMAX", allow_hyphen_values = true)]
    bounds: String,
    /// Grid columns; a single column samples the window midpoint
    #[arg(long, value_name = "N", default_value_t = 50)]
    nx: usize,
    /// Grid rows; a single row samples the window midpoint
    #[arg(long, value_name = "N", default_value_t = 50)]
    ny: usize,
    /// Tie tolerance override
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Ordering cone: "orthant" or "b1x,b1y;b2x,b2y"
    #[arg(long, value_name = "SPEC", default_value = "orthant", allow_hyphen_values = true)]
    cone: String,
    /// Quantile level to draw; repeatable
    #[arg(short = 'p', value_name = "LEVEL")]
    p: Vec<f64>,
    /// World window "xmin,xmax,ymin,ymax"; defaults to the data box
    #[arg(long, value_name = "XMIN,XMAX,YMIN,YMAX", allow_hyphen_values = true)]
    bounds: Option<String>,
    /// Tie tolerance override
    #[arg(long, value_name = "EPS")]
    eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

/// One fully resolved invocation: every flag parsed and validated, ready
/// for a command function.
struct RunConfig {
    input: PathBuf,
    cone: Option<Cone>,
    p_levels: Vec<f64>,
    z: Option<Vec2>,
    bounds: Option<[f64; 4]>,
    nx: usize,
    ny: usize,
    eps: Option<f64>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

impl RunConfig {
    fn tolerance(&self) -> Tolerance {
        match self.eps {
            Some(e) => Tolerance::with_eps(e),
            None => Tolerance::default(),
        }
    }

    fn require_format(&self, native: Format) -> Result<(), CliError> {
        match self.format {
            None => Ok(()),
            Some(f) if f == native => Ok(()),
            Some(f) => Err(CliError::Usage(format!(
                "this command emits {native:?} output, not {f:?}"
            ))),
        }
    }
}

fn parse_point(s: &str, what: &str) -> Result<Vec2, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let parsed = if parts.len() == 2 {
        match (parts[0].trim().parse::<f64>(), parts[1].trim().parse::<f64>()) {
            (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => Some(Vec2::new(x, y)),
            _ => None,
        }
    } else {
        None
    };
    parsed.ok_or_else(|| {
        CliError::Usage(format!("{what} must be two finite numbers \"x,y\", got {s:?}"))
    })
}

fn parse_cone(spec: &str) -> Result<Cone, CliError> {
    if spec == "orthant" {
        return Ok(Cone::orthant());
    }
    let parts: Vec<&str> = spec.split(';').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "cone spec must be \"orthant\" or \"b1x,b1y;b2x,b2y\", got {spec:?}"
        )));
    }
    let b1 = parse_point(parts[0], "cone generator")?;
    let b2 = parse_point(parts[1], "cone generator")?;
    Ok(Cone::new(b1, b2)?)
}

fn parse_bounds(s: &str) -> Result<[f64; 4], CliError> {
    let fields: Vec<f64> = s
        .split(',')
        .map(|f| f.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bounds must be four numbers, got {s:?}")))?;
    let [xmin, xmax, ymin, ymax] = fields[..] else {
        return Err(CliError::Usage(format!(
            "bounds must be \"xmin,xmax,ymin,ymax\", got {s:?}"
        )));
    };
    if !(xmin <= xmax && ymin <= ymax) || fields.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("bounds are not an ordered window: {s:?}")));
    }
    Ok([xmin, xmax, ymin, ymax])
}

fn validate_eps(eps: Option<f64>) -> Result<Option<f64>, CliError> {
    match eps {
        Some(e) if !(e.is_finite() && e > 0.0) => Err(CliError::Usage(format!(
            "eps must be a positive finite number, got {e}"
        ))),
        other => Ok(other),
    }
}

/// Sorted ascending, for layered output.
fn sorted_levels(ps: &[f64]) -> Vec<f64> {
    let mut ps = ps.to_vec();
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ps
}

fn cmd_quantile(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Json)?;
    let data = io::parse_csv(&cfg.input)?;
    let cone = cfg.cone.expect("quantile always carries a cone");
    let tol = cfg.tolerance();
    let mut results = Vec::new();
    for &p in &cfg.p_levels {
        let (q, trace) = cone_quantile_with(&data, &cone, p, tol)?;
        results.push(json::quantile_json(&q, &trace));
    }
    let text = if results.len() == 1 {
        serde_json::to_string_pretty(&results[0]).expect("serializable")
    } else {
        serde_json::to_string_pretty(&results).expect("serializable")
    };
    Ok(text + "\n")
}

fn cmd_cdf(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Json)?;
    let data = io::parse_csv(&cfg.input)?;
    let cone = cfg.cone.expect("cdf always carries a cone");
    let z = cfg.z.expect("cdf always carries a query point");
    let r = cone_depth_with(z, &data, &cone, cfg.tolerance())?;
    Ok(serde_json::to_string_pretty(&json::cdf_json(&r)).expect("serializable") + "\n")
}

fn cmd_depth(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Json)?;
    let data = io::parse_csv(&cfg.input)?;
    let cone = cfg.cone.expect("depth always carries a cone");
    let z = cfg.z.expect("depth always carries a query point");
    let r = cone_depth_with(z, &data, &cone, cfg.tolerance())?;
    Ok(serde_json::to_string_pretty(&json::DepthJson { k: r.k }).expect("serializable") + "\n")
}

fn cmd_tukey_depth(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Json)?;
    let data = io::parse_csv(&cfg.input)?;
    let z = cfg.z.expect("tukey-depth always carries a query point");
    let out = json::TukeyDepthJson { depth: tukey_depth(z, &data) };
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}

fn cmd_tukey_region(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Json)?;
    let data = io::parse_csv(&cfg.input)?;
    let p = cfg.p_levels[0];
    let region = tukey_region_with(&data, p, cfg.tolerance())?;
    let out = json::region_json(p, &region);
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}

fn grid_coord(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        (lo + hi) / 2.0
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

fn cmd_grid(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Csv)?;
    if cfg.nx == 0 || cfg.ny == 0 {
        return Err(CliError::Usage("grid resolution must be at least 1".into()));
    }
    let data = io::parse_csv(&cfg.input)?;
    let cone = cfg.cone.expect("grid always carries a cone");
    let [xmin, xmax, ymin, ymax] = cfg.bounds.expect("grid always carries bounds");
    let mut queries = Vec::with_capacity(cfg.nx * cfg.ny);
    for iy in 0..cfg.ny {
        let y = grid_coord(ymin, ymax, cfg.ny, iy);
        for ix in 0..cfg.nx {
            queries.push(Vec2::new(grid_coord(xmin, xmax, cfg.nx, ix), y));
        }
    }
    let field = cdf_field_with(&data, &cone, &queries, cfg.tolerance());
    let mut out = String::from("x,y,F\n");
    for (q, f) in queries.iter().zip(&field) {
        out.push_str(&format!("{},{},{}\n", q.x, q.y, f));
    }
    Ok(out)
}

fn cmd_plot(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_format(Format::Svg)?;
    let data = io::parse_csv(&cfg.input)?;
    let cone = cfg.cone.expect("plot always carries a cone");
    let tol = cfg.tolerance();
    let mut levels = Vec::new();
    for &p in &cfg.p_levels {
        let (q, _) = cone_quantile_with(&data, &cone, p, tol)?;
        levels.push((p, q));
    }
    let depths = if data.len() <= 50 {
        let mut ks = Vec::with_capacity(data.len());
        for &x in data.points() {
            ks.push(cone_depth_with(x, &data, &cone, tol)?.k);
        }
        Some(ks)
    } else {
        None
    };
    Ok(svg::plot(&data, &levels, depths.as_deref(), cfg.bounds))
}

type CmdFn = fn(&RunConfig) -> Result<String, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, cmd): (RunConfig, CmdFn) = match cli.cmd {
        Command::Quantile(a) => (
            RunConfig {
                input: a.io.input,
                cone: Some(parse_cone(&a.cone)?),
                p_levels: sorted_levels(&a.p),
                z: None,
                bounds: None,
                nx: 0,
                ny: 0,
                eps: validate_eps(a.eps)?,
                output: a.io.output,
                format: a.io.format,
            },
            cmd_quantile,
        ),
        Command::Cdf(a) => (query_config(a)?, cmd_cdf),
        Command::Depth(a) => (query_config(a)?, cmd_depth),
        Command::TukeyDepth(a) => (
            RunConfig {
                input: a.io.input,
                cone: None,
                p_levels: Vec::new(),
                z: Some(parse_point(&a.z, "query point")?),
                bounds: None,
                nx: 0,
                ny: 0,
                eps: None,
                output: a.io.output,
                format: a.io.format,
            },
            cmd_tukey_depth,
        ),
        Command::TukeyRegion(a) => (
            RunConfig {
                input: a.io.input,
                cone: None,
                p_levels: vec![a.p],
                z: None,
                bounds: None,
                nx: 0,
                ny: 0,
                eps: validate_eps(a.eps)?,
                output: a.io.output,
                format: a.io.format,
            },
            cmd_tukey_region,
        ),
        Command::Grid(a) => (
            RunConfig {
                input: a.io.input,
                cone: Some(parse_cone(&a.cone)?),
                p_levels: Vec::new(),
                z: None,
                bounds: Some(parse_bounds(&a.bounds)?),
                nx: a.nx,
                ny: a.ny,
                eps: validate_eps(a.eps)?,
                output: a.io.output,
                format: a.io.format,
            },
            cmd_grid,
        ),
        Command::Plot(a) => (
            RunConfig {
                input: a.io.input,
                cone: Some(parse_cone(&a.cone)?),
                p_levels: sorted_levels(&a.p),
                z: None,
                bounds: match a.bounds {
                    Some(b) => Some(parse_bounds(&b)?),
                    None => None,
                },
                nx: 0,
                ny: 0,
                eps: validate_eps(a.eps)?,
                output: a.io.output,
                format: a.io.format,
            },
            cmd_plot,
        ),
    };
    let text = cmd(&cfg)?;
    io::write_output(cfg.output.as_deref(), &text)
}

fn query_config(a: QueryArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        input: a.io.input,
        cone: Some(parse_cone(&a.cone)?),
        p_levels: Vec::new(),
        z: Some(parse_point(&a.z, "query point")?),
        bounds: None,
        nx: 0,
        ny: 0,
        eps: validate_eps(a.eps)?,
        output: a.io.output,
        format: a.io.format,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
