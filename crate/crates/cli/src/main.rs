use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use choi3::region::{assemble_region, to_csv, to_svg, SamplingConfig};
use choi3::sweep::{run_sweep, Axis, SweepGrid};
use choi3::verify::{run_verify, VerifyConfig, DEFAULT_COUNT};
use choi3::{classify, BirkhoffParams, Tolerance, WMatrix};

const TOLERANCE_ENV: &str = "CHOI3_TOLERANCE";

#[derive(Parser)]
#[command(name = "choi3", version, about = "Positivity and decomposability of Choi-type maps on 3x3 matrices")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Tolerance profile: strict, default or loose (overrides $CHOI3_TOLERANCE).
    #[arg(long, global = true)]
    profile: Option<String>,
    #[arg(long, global = true)]
    eps_psd: Option<f64>,
    #[arg(long, global = true)]
    eps_eq: Option<f64>,
    #[arg(long, global = true)]
    eps_root: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one map and print the verdict as JSON.
    Classify(ClassifyArgs),
    /// Boundary curves of the admissible region for fixed (a, b, c).
    #[command(allow_negative_numbers = true)]
    Region(RegionArgs),
    /// Classify every point of a parameter grid; CSV output.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Run the oracle agreement checks and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ClassifyArgs {
    /// Circulant parameters `a,b,c`.
    #[arg(long, value_name = "A,B,C", allow_hyphen_values = true)]
    circulant: Option<String>,
    /// Birkhoff parameters `a,b,c,d,e,f` in any gauge.
    #[arg(long, value_name = "A,B,C,D,E,F", allow_hyphen_values = true)]
    birkhoff: Option<String>,
    /// Nine entries of W, row-major.
    #[arg(long, value_name = "W11,...,W33", allow_hyphen_values = true)]
    matrix: Option<String>,
    /// JSON file holding `{"entries": [...]}` or `{"a": .., "f": ..}`.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct RegionArgs {
    a: f64,
    b: f64,
    c: f64,
    /// Write the SVG figure here.
    #[arg(short = 'o', long = "svg")]
    svg: Option<PathBuf>,
    /// Write curve samples as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full curve data as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 201)]
    arc_samples: usize,
    #[arg(long, default_value_t = 601)]
    circle_samples: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// `value` or `start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Defaults to `c = b`.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    d: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    e: String,
    /// Output CSV path (stdout when absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Base sample count per family; below the default the run is partial.
    #[arg(long, default_value_t = DEFAULT_COUNT)]
    counts: usize,
    /// Sample near edge saturation.
    #[arg(long)]
    adversarial: bool,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Consistency(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<choi3::Error>() {
            Some(inner) if inner.is_consistency() => Failure::Consistency(inner.to_string()),
            _ => Failure::Input(e),
        }
    }
}

fn tolerance(args: &TolArgs) -> anyhow::Result<Tolerance> {
    let profile = match (&args.profile, std::env::var(TOLERANCE_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Ok(p)) if !p.is_empty() => Some(p),
        _ => None,
    };
    let mut tol = match profile {
        Some(p) => Tolerance::profile(&p).ok_or_else(|| anyhow!("unknown tolerance profile `{p}`"))?,
        None => Tolerance::default(),
    };
    if let Some(v) = args.eps_psd {
        tol.eps_psd = v;
    }
    if let Some(v) = args.eps_eq {
        tol.eps_eq = v;
    }
    if let Some(v) = args.eps_root {
        tol.eps_root = v;
    }
    tol.validate()?;
    Ok(tol)
}

fn numbers(s: &str, n: usize) -> anyhow::Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("`{}` is not a number", t.trim())))
        .collect::<anyhow::Result<_>>()?;
    if v.len() != n {
        bail!(choi3::Error::Arity { expected: n, got: v.len() });
    }
    Ok(v)
}

fn load_file(path: &Path, tol: &Tolerance) -> anyhow::Result<WMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let value = value.get("w").filter(|v| v.is_object()).cloned().unwrap_or(value);
    if value.get("entries").is_some() {
        let w: WMatrix = serde_json::from_value(value)?;
        Ok(w)
    } else {
        let p: BirkhoffParams = serde_json::from_value(value)?;
        Ok(choi3::model::w_from_birkhoff(&p, tol)?)
    }
}

fn read_input(args: &ClassifyArgs, tol: &Tolerance) -> anyhow::Result<WMatrix> {
    if let Some(s) = &args.circulant {
        let v = numbers(s, 3)?;
        return Ok(WMatrix::circulant(v[0], v[1], v[2], tol)?);
    }
    if let Some(s) = &args.birkhoff {
        let v = numbers(s, 6)?;
        let p = BirkhoffParams::from_any_gauge(v[0], v[1], v[2], v[3], v[4], v[5], tol)?;
        return Ok(choi3::model::w_from_birkhoff(&p, tol)?);
    }
    if let Some(s) = &args.matrix {
        return Ok(WMatrix::from_row_major(&numbers(s, 9)?, None, tol)?);
    }
    match &args.file {
        Some(path) => load_file(path, tol),
        None => bail!("no input given"),
    }
}

// A closed pipe downstream (e.g. `| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_classify(args: &ClassifyArgs, tol: &Tolerance) -> Result<(), Failure> {
    let w = read_input(args, tol)?;
    let report = classify(&w, tol).map_err(anyhow::Error::from)?;
    emit(&(serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)? + "\n"))?;
    if !report.consistent() {
        return Err(Failure::Consistency(report.consistency.join("; ")));
    }
    Ok(())
}

fn cmd_region(args: &RegionArgs, tol: &Tolerance) -> Result<(), Failure> {
    let sampling = SamplingConfig {
        arc: args.arc_samples,
        circle: args.circle_samples,
        cp: args.circle_samples,
        ..SamplingConfig::default()
    };
    let region = assemble_region(args.a, args.b, args.c, sampling, tol).map_err(anyhow::Error::from)?;
    for w in &region.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(p) = &args.svg {
        write_file(p, &to_svg(&region))?;
    }
    if let Some(p) = &args.csv {
        write_file(p, &to_csv(&region))?;
    }
    if let Some(p) = &args.json {
        write_file(p, &serde_json::to_string(&region).map_err(anyhow::Error::from)?)?;
    }
    let summary = json!({
        "a": region.a,
        "b": region.b,
        "c": region.c,
        "mu": region.vertex_triangle.mu,
        "triangle": region.vertex_triangle.state,
        "hessian_radius": region.hessian_circle.radius,
        "edge_arcs_empty": region.edge_arcs.iter().map(|a| a.is_empty()).collect::<Vec<_>>(),
        "cp_boundary_points": region.cp_boundary.len(),
        "origin_admissible": region.origin_admissible,
        "warnings": region.warnings,
    });
    emit(&(serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)? + "\n"))?;
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, tol: &Tolerance) -> Result<(), Failure> {
    let axis = |s: &str| s.parse::<Axis>().map_err(anyhow::Error::from);
    let grid = SweepGrid {
        a: axis(&args.a)?,
        b: axis(&args.b)?,
        c: args.c.as_deref().map(axis).transpose()?,
        d: axis(&args.d)?,
        e: axis(&args.e)?,
    };
    let rows = run_sweep(&grid, tol).map_err(anyhow::Error::from)?;
    let csv = choi3::sweep::to_csv(&rows);
    match &args.output {
        Some(p) => write_file(p, &csv)?,
        None => emit(&csv)?,
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, tol: &Tolerance) -> Result<(), Failure> {
    let report = run_verify(
        VerifyConfig {
            seed: args.seed,
            count: args.counts,
            adversarial: args.adversarial,
        },
        tol,
    );
    emit(&(serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)? + "\n"))?;
    if !report.passed {
        let failed: Vec<&str> = report.families.iter().filter(|f| !f.passed).map(|f| f.name).collect();
        return Err(Failure::Consistency(format!("failed families: {}", failed.join(", "))));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = tolerance(&cli.tol).map_err(Failure::Input).and_then(|tol| match &cli.command {
        Command::Classify(a) => cmd_classify(a, &tol),
        Command::Region(a) => cmd_region(a, &tol),
        Command::Sweep(a) => cmd_sweep(a, &tol),
        Command::Verify(a) => cmd_verify(a, &tol),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Consistency(msg)) => {
            eprintln!("consistency failure: {msg}");
            ExitCode::from(3)
        }
    }
}
