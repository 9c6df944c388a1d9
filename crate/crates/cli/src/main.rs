//! `hhc`: centers, bounds and verification runs from the command line.
//!
//! Exit codes: 0 success, 2 input error, 3 geometric degeneracy,
//! 4 inequality violation found.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use hhc_core::bounds::{reduced_bound, reduced_bound_trace, BoundReport, ConvexGauge};
use hhc_core::center::{find_center_with, CenterResult, ConcaveFunction};
use hhc_core::geometry::{ConvexBody, CoordinatePlane, Point};
use hhc_core::io::BodySpec;
use hhc_core::symmetrize::{DEFAULT_KNOTS, MIN_KNOTS};
use hhc_core::verify::{
    check_seed, format_repro_table, repro_table, section_bound_check, InstanceParams, Status, VerificationRecord,
};

#[derive(Parser)]
#[command(
    name = "hhc",
    version,
    about = "Centers of concave functions on convex bodies and cone bounds for ∫φ(f)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the center point of a body and a concave function.
    Center(CenterArgs),
    /// Evaluate the cone bound at the center.
    Bound(BoundArgs),
    /// Check the inequality on seeded random instances.
    Verify(VerifyArgs),
    /// Compare a polytope's volume with its shadow area times the central fiber.
    SectionBound(SectionArgs),
    /// Print the closed-form constants next to the optimizer's values.
    Repro(ReproArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhiKind {
    Power,
    Exp,
    ExpSquare,
    Pwl,
}

#[derive(Args)]
struct Instance {
    /// Body JSON file.
    #[arg(long)]
    body: PathBuf,
    /// Function JSON file.
    #[arg(long)]
    function: PathBuf,
    /// Start point for the supporting direction (comma separated); the
    /// centroid by default.
    #[arg(long, value_name = "X,Y[,Z]")]
    start_point: Option<String>,
    /// Number of profile knots.
    #[arg(long, default_value_t = DEFAULT_KNOTS)]
    knots: usize,
}

#[derive(Args)]
struct GaugeArgs {
    /// Convex gauge φ.
    #[arg(long, value_enum, default_value = "power")]
    phi: PhiKind,
    /// Exponent of the power gauge (≥ 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Knots of the piecewise-linear gauge, as t:y pairs separated by commas.
    #[arg(long, value_name = "T:Y,...")]
    phi_knots: Option<String>,
}

#[derive(Args)]
struct CenterArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    instance: Instance,
    #[command(flatten)]
    gauge: GaugeArgs,
    /// Divide the bound by the body's volume.
    #[arg(long)]
    per_volume: bool,
    /// json/table print the report; csv prints the (m, F(m)) scan.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Inclusive seed range A..B.
    #[arg(long, value_name = "A..B")]
    seeds: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[command(flatten)]
    gauge: GaugeArgs,
    /// json prints one record per line.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SectionArgs {
    /// Polytope JSON file.
    #[arg(long)]
    body: PathBuf,
    /// xy, xz, yz or all.
    #[arg(long, default_value = "all")]
    plane: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ReproArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

enum Failure {
    Input(String),
    Geometry(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Geometry(_) => 3,
            Failure::Violation(_) => 4,
        }
    }
}

impl From<hhc_core::Error> for Failure {
    fn from(e: hhc_core::Error) -> Self {
        if e.is_geometric() {
            Failure::Geometry(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn input<E: Display>(context: impl Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(input(path.display()))?;
    serde_json::from_str(&text).map_err(input(path.display()))
}

fn load_instance(args: &Instance) -> CliResult<(ConvexBody, ConcaveFunction, Option<Point>)> {
    if args.knots < MIN_KNOTS {
        return Err(Failure::Input(format!("--knots must be at least {MIN_KNOTS}")));
    }
    let spec: BodySpec = read_json(&args.body)?;
    let body = spec.build()?;
    let f: ConcaveFunction = read_json(&args.function)?;
    let start = match &args.start_point {
        None => None,
        Some(s) => {
            let coords = parse_list(s, "--start-point")?;
            Some(Point::new(coords)?)
        }
    };
    Ok((body, f, start))
}

fn parse_list(s: &str, flag: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| f64::from_str(x.trim()).map_err(input(format!("{flag} '{x}'"))))
        .collect()
}

fn gauge(args: &GaugeArgs) -> CliResult<ConvexGauge> {
    if args.alpha.is_some() && args.phi != PhiKind::Power {
        return Err(Failure::Input("--alpha applies to --phi power only".into()));
    }
    if args.phi_knots.is_some() && args.phi != PhiKind::Pwl {
        return Err(Failure::Input("--phi-knots applies to --phi pwl only".into()));
    }
    let g = match args.phi {
        PhiKind::Power => ConvexGauge::Power {
            alpha: args.alpha.unwrap_or(1.0),
        },
        PhiKind::Exp => ConvexGauge::ExpMinusOne,
        PhiKind::ExpSquare => ConvexGauge::ExpSquareMinusOne,
        PhiKind::Pwl => {
            let text = args
                .phi_knots
                .as_deref()
                .ok_or_else(|| Failure::Input("--phi pwl needs --phi-knots".into()))?;
            let mut knots = Vec::new();
            for pair in text.split(',') {
                let (t, y) = pair
                    .split_once(':')
                    .ok_or_else(|| Failure::Input(format!("--phi-knots: '{pair}' is not t:y")))?;
                let t = f64::from_str(t.trim()).map_err(input("--phi-knots"))?;
                let y = f64::from_str(y.trim()).map_err(input("--phi-knots"))?;
                knots.push((t, y));
            }
            ConvexGauge::PiecewiseLinearConvex { knots }
        }
    };
    g.validate()?;
    Ok(g)
}

fn parse_seeds(s: &str) -> CliResult<Vec<u64>> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Failure::Input(format!("--seeds '{s}' is not A..B")))?;
    let a = u64::from_str(a.trim()).map_err(input("--seeds"))?;
    let b = u64::from_str(b.trim()).map_err(input("--seeds"))?;
    if b < a {
        return Err(Failure::Input(format!("--seeds {a}..{b} is empty")));
    }
    Ok((a..=b).collect())
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Input(format!("writing output: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn csv_text<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>>(fill: F) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{x:.12}")).collect();
    format!("({})", parts.join(", "))
}

fn center_of(args: &Instance) -> CliResult<(ConvexBody, ConcaveFunction, CenterResult)> {
    let (body, f, start) = load_instance(args)?;
    let center = find_center_with(&body, &f, start.as_ref(), args.knots)?;
    Ok((body, f, center))
}

fn cmd_center(args: CenterArgs) -> CliResult<()> {
    let (_, _, c) = center_of(&args.instance)?;
    let text = match args.format {
        Format::Json => to_json(&c),
        Format::Table => format!(
            "point      {}\ndirection  {}\nt_R        {:.12}\nf0         {:.12}\ntie broken {}\n",
            fmt_point(&c.point),
            fmt_point(c.direction.as_slice()),
            c.t_value,
            c.f_at_center,
            c.diagnostics.tie_broken
        ),
        Format::Csv => csv_text(|w| {
            w.write_record(["coordinate", "point", "direction"])?;
            for (i, (x, u)) in c.point.iter().zip(c.direction.as_slice()).enumerate() {
                w.write_record([i.to_string(), x.to_string(), u.to_string()])?;
            }
            Ok(())
        }),
    };
    emit(&text)
}

#[derive(Serialize)]
struct BoundOutput {
    /// The bound, divided by the volume when `per_volume` is set.
    value: f64,
    per_volume: bool,
    volume: f64,
    gauge: ConvexGauge,
    report: BoundReport,
    center: Point,
}

fn cmd_bound(args: BoundArgs) -> CliResult<()> {
    let phi = gauge(&args.gauge)?;
    let (body, _, c) = center_of(&args.instance)?;
    let volume = body.volume()?;
    let n = body.dim();
    if args.format == Format::Csv {
        let trace = reduced_bound_trace(n, volume, c.f_at_center, &phi)?;
        let scale = if args.per_volume { volume } else { 1.0 };
        return emit(&csv_text(|w| {
            w.write_record(["m", "F"])?;
            for (m, v) in trace {
                w.write_record([m.to_string(), (v / scale).to_string()])?;
            }
            Ok(())
        }));
    }
    let report = reduced_bound(n, volume, c.f_at_center, &phi)?;
    let value = if args.per_volume {
        report.per_volume()
    } else {
        report.bound
    };
    let out = BoundOutput {
        value,
        per_volume: args.per_volume,
        volume,
        gauge: phi,
        report,
        center: c.point,
    };
    let text = match args.format {
        Format::Table => format!(
            "bound      {:.12}{}\nvolume     {:.12}\nf0         {:.12}\nargmax m   {:.12}\nm0         {:.12}\nt_m        {:.12}\ncenter     {}\n",
            out.value,
            if out.per_volume { " (per volume)" } else { "" },
            out.volume,
            out.report.f0,
            out.report.argmax_m,
            out.report.m0,
            out.report.t_m,
            fmt_point(&out.center)
        ),
        _ => to_json(&out),
    };
    emit(&text)
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("HHC_THREADS") {
        let n = usize::from_str(v.trim()).map_err(input("HHC_THREADS"))?;
        if n == 0 {
            return Err(Failure::Input("HHC_THREADS must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Input(format!("thread pool: {e}")))
}

fn cmd_verify(args: VerifyArgs) -> CliResult<()> {
    let phi = gauge(&args.gauge)?;
    let seeds = parse_seeds(&args.seeds)?;
    if !(args.dim == 2 || args.dim == 3) {
        return Err(Failure::Input(format!("--dim must be 2 or 3 (got {})", args.dim)));
    }
    let params = InstanceParams::default();
    let pool = thread_pool()?;
    // collect keeps seed order regardless of scheduling
    let results: Vec<hhc_core::Result<VerificationRecord>> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&s| check_seed(s, args.dim, &phi, &params))
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    for (seed, r) in seeds.iter().zip(results) {
        records.push(r.map_err(|e| {
            let f = Failure::from(e);
            match f {
                Failure::Geometry(m) => Failure::Geometry(format!("seed {seed}: {m}")),
                Failure::Input(m) | Failure::Violation(m) => Failure::Input(format!("seed {seed}: {m}")),
            }
        })?);
    }
    let text = match args.format {
        Format::Json => records
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect(),
        Format::Csv => csv_text(|w| {
            w.write_record(["seed", "f0", "integral", "bound", "slack", "status"])?;
            for r in &records {
                w.write_record([
                    r.seed.unwrap_or_default().to_string(),
                    r.f0.to_string(),
                    r.integral.to_string(),
                    r.bound.to_string(),
                    r.slack.to_string(),
                    status_name(r.status).to_string(),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut s = format!(
                "{:>8} {:>14} {:>14} {:>14} {:>14}  status\n",
                "seed", "f0", "integral", "bound", "slack"
            );
            for r in &records {
                s.push_str(&format!(
                    "{:>8} {:>14.8} {:>14.8} {:>14.8} {:>14.6e}  {}\n",
                    r.seed.unwrap_or_default(),
                    r.f0,
                    r.integral,
                    r.bound,
                    r.slack,
                    status_name(r.status)
                ));
            }
            s
        }
    };
    emit(&text)?;
    let count = |st: Status| records.iter().filter(|r| r.status == st).count();
    let violations = count(Status::Violation);
    eprintln!(
        "{} instances: {} ok, {} equality within tolerance, {} violations",
        records.len(),
        count(Status::Ok),
        count(Status::EqualityWithinTol),
        violations
    );
    if violations > 0 {
        return Err(Failure::Violation(format!("{violations} violation(s) found")));
    }
    Ok(())
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Violation => "violation",
        Status::EqualityWithinTol => "equality-within-tol",
    }
}

fn cmd_section(args: SectionArgs) -> CliResult<()> {
    let planes: Vec<CoordinatePlane> = if args.plane == "all" {
        CoordinatePlane::ALL.to_vec()
    } else {
        vec![CoordinatePlane::from_str(&args.plane)?]
    };
    let spec: BodySpec = read_json(&args.body)?;
    let ConvexBody::Polytope(k) = spec.build()? else {
        return Err(Failure::Input("section-bound needs a polytope3 body".into()));
    };
    let mut records = Vec::new();
    for plane in planes {
        records.push(section_bound_check(&k, plane)?);
    }
    let text = match args.format {
        Format::Json => records
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect(),
        Format::Csv => csv_text(|w| {
            w.write_record([
                "plane",
                "volume",
                "shadow_area",
                "fiber_at_center",
                "bound",
                "slack",
                "status",
            ])?;
            for r in &records {
                w.write_record([
                    r.plane.name().to_string(),
                    r.volume.to_string(),
                    r.shadow_area.to_string(),
                    r.fiber_at_center.to_string(),
                    r.bound.to_string(),
                    r.slack.to_string(),
                    status_name(r.status).to_string(),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut s = format!(
                "{:<5} {:>12} {:>12} {:>12} {:>12} {:>12}  status\n",
                "plane", "volume", "shadow", "fiber", "bound", "slack"
            );
            for r in &records {
                s.push_str(&format!(
                    "{:<5} {:>12.8} {:>12.8} {:>12.8} {:>12.8} {:>12.4e}  {}\n",
                    r.plane.name(),
                    r.volume,
                    r.shadow_area,
                    r.fiber_at_center,
                    r.bound,
                    r.slack,
                    status_name(r.status)
                ));
            }
            s
        }
    };
    emit(&text)?;
    if records.iter().any(|r| r.status == Status::Violation) {
        return Err(Failure::Violation("section bound violated".into()));
    }
    Ok(())
}

fn cmd_repro(args: ReproArgs) -> CliResult<()> {
    let rows = repro_table()?;
    let text = match args.format {
        Format::Table => format_repro_table(&rows),
        Format::Json => to_json(&rows),
        Format::Csv => csv_text(|w| {
            w.write_record(["row", "printed", "oracle", "abs_diff", "rel_diff", "argmax_m", "flag"])?;
            for r in &rows {
                w.write_record([
                    r.label.clone(),
                    r.printed.to_string(),
                    r.oracle.to_string(),
                    r.abs_diff.to_string(),
                    r.rel_diff.to_string(),
                    r.argmax_m.to_string(),
                    if r.flagged { "FLAG" } else { "ok" }.to_string(),
                ])?;
            }
            Ok(())
        }),
    };
    emit(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Center(a) => cmd_center(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Verify(a) => cmd_verify(a),
        Command::SectionBound(a) => cmd_section(a),
        Command::Repro(a) => cmd_repro(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) | Failure::Geometry(m) | Failure::Violation(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
