use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pqbezier::audit::{
    any_failed, default_params, format_table, identity_audit, to_json, uniform_grid,
};
use pqbezier::basis::basis_row;
use pqbezier::curve::uniform_parameters;
use pqbezier::export::{export_csv, export_mesh, export_scene_csv};
use pqbezier::render::{render_basis_svg, render_curve_svg, RenderOptions};
use pqbezier::scene::{format_number, parse_scene, serialize_scene, SceneDocument, SceneError};
use pqbezier::{PQParams, Variant};

use crate::service::{DEFAULT_AUDIT_GRID, DEFAULT_AUDIT_N_MAX, DEFAULT_SAMPLES};

pub const DEFAULT_PORT: u16 = 8787;

#[derive(Debug, Parser)]
#[command(
    name = "pqbezier",
    version,
    about = "(p,q)-Bernstein bases, Bézier curves and tensor-product surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate (or plot) the basis functions of degree n.
    Basis(BasisArgs),
    /// Validate a scene, print warnings and optionally rewrite it canonically.
    Check(CheckArgs),
    /// Evaluate a curve at t or a surface at (u, v).
    Eval(EvalArgs),
    /// Sample a curve (CSV) or a surface (CSV or OBJ mesh).
    Sample(SampleArgs),
    /// Degree-elevate a scene and print the new scene.
    Elevate(ElevateArgs),
    /// Render a scene to SVG.
    Render(RenderArgs),
    /// Check the corrected basis identities numerically; exits 1 on any failure.
    Audit(AuditArgs),
    /// Run the HTTP/JSON service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SceneArg {
    /// Scene file (JSON), or `-` for stdin.
    #[arg(long)]
    pub scene: PathBuf,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(short, long)]
    pub n: usize,
    #[arg(short, long)]
    pub p: f64,
    #[arg(short, long)]
    pub q: f64,
    /// Print the row at a single parameter instead of a table.
    #[arg(short, long, conflicts_with = "svg")]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    /// Write an SVG plot to this file instead of printing a table.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: SceneArg,
    /// Print the canonical form of the scene.
    #[arg(long)]
    pub canonical: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: SceneArg,
    #[arg(short, long, conflicts_with_all = ["u", "v"])]
    pub t: Option<f64>,
    #[arg(short, long, requires = "v")]
    pub u: Option<f64>,
    #[arg(short, long, requires = "u")]
    pub v: Option<f64>,
    /// Also print every de Casteljau level.
    #[arg(long)]
    pub tableau: bool,
    #[arg(long, default_value = "a")]
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleFormat {
    Csv,
    Obj,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub input: SceneArg,
    /// Samples along the curve or along u (default: scene value, else 101).
    #[arg(long)]
    pub count: Option<usize>,
    /// Samples along v for surfaces (default: scene value, else 101).
    #[arg(long)]
    pub count_v: Option<usize>,
    #[arg(long, value_enum, default_value_t = SampleFormat::Csv)]
    pub format: SampleFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ElevateArgs {
    #[command(flatten)]
    pub input: SceneArg,
    #[arg(long, default_value_t = 1)]
    pub times: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub input: SceneArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 640)]
    pub width: u32,
    #[arg(long, default_value_t = 480)]
    pub height: u32,
    #[arg(long, default_value_t = 1.5)]
    pub stroke: f64,
    /// Overlay the de Casteljau tableau at this parameter.
    #[arg(long)]
    pub tableau: Option<f64>,
    #[arg(long, default_value = "a")]
    pub variant: Variant,
    #[arg(long)]
    pub no_polygon: bool,
    /// Add a panel with the basis functions.
    #[arg(long)]
    pub basis: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = DEFAULT_AUDIT_N_MAX)]
    pub n_max: usize,
    /// Number of t-values in [0, 1].
    #[arg(long, default_value_t = DEFAULT_AUDIT_GRID)]
    pub grid: usize,
    /// Parameter pairs as `p,q`; repeatable. Defaults to a built-in set.
    #[arg(long = "params", value_parser = parse_pair)]
    pub params: Vec<PQParams>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "PQBEZIER_PORT", default_value_t = DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
}

fn parse_pair(s: &str) -> Result<PQParams, String> {
    let (p, q) = s.split_once(',').ok_or("expected `p,q`")?;
    let p: f64 = p.trim().parse().map_err(|e| format!("p: {e}"))?;
    let q: f64 = q.trim().parse().map_err(|e| format!("q: {e}"))?;
    PQParams::new(p, q).map_err(|e| e.to_string())
}

/// A scene that failed validation; rendered as `error[code]: message`.
#[derive(Debug)]
pub struct SceneFileError {
    pub source_name: String,
    pub error: SceneError,
}

impl std::fmt::Display for SceneFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "error[{}]: {}: {}",
            self.error.code(),
            self.source_name,
            self.error
        )
    }
}

impl std::error::Error for SceneFileError {}

fn load_scene(path: &Path) -> anyhow::Result<SceneDocument> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let doc = parse_scene(&text).map_err(|error| SceneFileError {
        source_name: path.display().to_string(),
        error,
    })?;
    for warning in doc.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(doc)
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout"),
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|&x| format_number(x))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs a command and returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Basis(args) => basis(args),
        Command::Check(args) => {
            let doc = load_scene(&args.input.scene)?;
            if args.canonical {
                emit(None, &serialize_scene(&doc))?;
            } else {
                println!("ok: {} scene", doc.kind());
            }
            Ok(0)
        }
        Command::Eval(args) => eval(args),
        Command::Sample(args) => {
            let doc = load_scene(&args.input.scene)?;
            let count_u = args.count.or(doc.samples_u).unwrap_or(DEFAULT_SAMPLES);
            let count_v = args.count_v.or(doc.samples_v).unwrap_or(DEFAULT_SAMPLES);
            let text = match args.format {
                SampleFormat::Csv => export_scene_csv(&doc, count_u, count_v)?,
                SampleFormat::Obj => export_mesh(&doc, count_u, count_v)?,
            };
            emit(args.output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Elevate(args) => {
            let doc = load_scene(&args.input.scene)?;
            let elevated = doc.elevated(args.times)?;
            if doc.kind() == "curve" {
                eprintln!(
                    "polygon distance: {} -> {}",
                    format_number(doc.polygon_distance()?),
                    format_number(elevated.polygon_distance()?)
                );
            }
            emit(args.output.as_deref(), &serialize_scene(&elevated))?;
            Ok(0)
        }
        Command::Render(args) => {
            let doc = load_scene(&args.input.scene)?;
            let options = RenderOptions {
                samples: args.samples.unwrap_or(RenderOptions::default().samples),
                width: args.width,
                height: args.height,
                stroke: args.stroke,
                show_polygon: !args.no_polygon,
                tableau_t: args.tableau,
                variant: args.variant,
                show_basis: args.basis,
            };
            emit(args.output.as_deref(), &render_curve_svg(&doc, &options)?)?;
            Ok(0)
        }
        Command::Audit(args) => {
            let params = if args.params.is_empty() {
                default_params()
            } else {
                args.params
            };
            let reports = identity_audit(args.n_max, &params, &uniform_grid(args.grid))?;
            if args.json {
                println!("{}", to_json(&reports));
            } else {
                print!("{}", format_table(&reports));
            }
            Ok(if any_failed(&reports) { 1 } else { 0 })
        }
        Command::Serve(args) => {
            serve(&args.host, args.port)?;
            Ok(0)
        }
    }
}

fn basis(args: BasisArgs) -> anyhow::Result<i32> {
    let params = PQParams::new(args.p, args.q)?;
    if !params.is_ordered() {
        eprintln!("warning: q exceeds p; basis values may be negative");
    }
    if let Some(path) = &args.svg {
        let options = RenderOptions {
            samples: args.samples,
            ..RenderOptions::default()
        };
        std::fs::write(path, render_basis_svg(args.n, params, &options)?)
            .with_context(|| format!("writing {}", path.display()))?;
        return Ok(0);
    }
    if let Some(t) = args.t {
        for (k, value) in basis_row(args.n, t, params)?.iter().enumerate() {
            println!("{k} {}", format_number(*value));
        }
        return Ok(0);
    }
    if args.samples < 2 {
        bail!("--samples must be at least 2");
    }
    let mut columns = vec!["t".to_string()];
    columns.extend((0..=args.n).map(|k| format!("b{k}")));
    columns.push("sum".to_string());
    let header: Vec<&str> = columns.iter().map(String::as_str).collect();
    let rows = uniform_parameters(args.samples)
        .map(|t| {
            let row = basis_row(args.n, t, params)?;
            let sum: f64 = row.iter().sum();
            Ok(std::iter::once(t).chain(row).chain([sum]).collect())
        })
        .collect::<pqbezier::Result<Vec<Vec<f64>>>>()?;
    print!("{}", export_csv(&header, rows));
    Ok(0)
}

fn eval(args: EvalArgs) -> anyhow::Result<i32> {
    let doc = load_scene(&args.input.scene)?;
    if doc.kind() == "curve" {
        let Some(t) = args.t else {
            bail!("curve scenes need --t");
        };
        let eval = doc.evaluate_curve(t, args.tableau.then_some(args.variant))?;
        if eval.extrapolated {
            eprintln!("warning: t = {t} lies outside [0, 1]; evaluating by extrapolation");
        }
        if let Some(levels) = &eval.tableau {
            for (r, level) in levels.iter().enumerate() {
                let points: Vec<String> = level.iter().map(|p| join(p)).collect();
                println!("level {r}: {}", points.join(", "));
            }
        }
        println!("{}", join(&eval.point));
    } else {
        let (Some(u), Some(v)) = (args.u, args.v) else {
            bail!("surface scenes need --u and --v");
        };
        if args.tableau {
            bail!("--tableau is only available for curves");
        }
        println!("{}", join(&doc.evaluate_surface(u, v)?));
    }
    Ok(0)
}

#[tokio::main]
async fn serve(host: &str, port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port))
        .await
        .with_context(|| format!("binding {host}:{port}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, crate::service::router()).await?;
    Ok(())
}
