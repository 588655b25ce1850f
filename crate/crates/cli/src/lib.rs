//! The `catenary` command-line tool.
//!
//! Exit codes: 0 on success, 1 when validation fails or an artifact cannot be
//! written, 2 on configuration errors (bad flags, unknown surfaces, inputs
//! outside a domain). Diagnostics go to stderr as one line.

pub mod emit;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use catenary_core::integrator::{trace_catenary_with, trace_graph_with, Trace, TraceOptions};
use catenary_core::metric::{catalog_entries, tabulated_profile_csv};
use catenary_core::revolution::{
    clairaut_constant, clairaut_radius, critical_parallels, quadrature_v, stability_exponent, turning_points, Stability,
};
use catenary_core::validation::{run_suite, ValidationReport};
use catenary_core::{catalog_surface, CatenaryError, CatenaryState, SurfaceSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "catenary", version, about = "Trace and analyse α-catenaries on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in surfaces.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Trace a unit-speed catenary over arc length.
    Trace(TraceArgs),
    /// Trace a catenary as a graph u(v).
    TraceGraph(GraphArgs),
    /// Clairaut radius, critical parallels and turning points.
    Clairaut(ClairautArgs),
    /// Stability exponents of critical parallels.
    Stability(StabilityArgs),
    /// Δv between two parallels by quadrature.
    Quadrature(QuadratureArgs),
    /// Run the self-check suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    /// Surface kind, see `catenary catalog`.
    #[arg(long)]
    surface: String,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    slope: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Sphere on (0, π) instead of (0, π/2).
    #[arg(long)]
    extended: bool,
    /// `u,a` samples for `revolution_profile`.
    #[arg(long, value_name = "CSV")]
    profile: Option<PathBuf>,
    /// Polynomial coefficients a₀,a₁,… for `revolution_profile`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "COEFFS")]
    poly: Option<Vec<f64>>,
    /// u-range LO,HI of a polynomial profile.
    #[arg(long, value_delimiter = ',', value_name = "LO,HI")]
    poly_range: Option<Vec<f64>>,
    /// `v,f,g` samples for `ruled`.
    #[arg(long, value_name = "CSV")]
    ruled: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to json for a `.json` output path, csv otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Append x,y,z of the embedding as a surface of revolution.
    #[arg(long)]
    embed: bool,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    u0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    v0: f64,
    #[arg(long, allow_negative_numbers = true)]
    phi0: f64,
    #[arg(long)]
    smax: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Blow-up once u exceeds this multiple of u0.
    #[arg(long, default_value_t = 1e6)]
    blowup_factor: f64,
    #[arg(long)]
    max_steps: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    u0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    du0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    v0: f64,
    #[arg(long, allow_negative_numbers = true)]
    v1: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1e6)]
    blowup_factor: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ClairautArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Clairaut constant; alternatively give a state with --u0/--phi0.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long)]
    u0: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    v0: f64,
    #[arg(long, allow_negative_numbers = true)]
    phi0: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Critical parallel to evaluate; all of them when absent.
    #[arg(long)]
    u_star: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QuadratureArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long)]
    u0: f64,
    /// Upper parallel; `inf` for the improper integral.
    #[arg(long)]
    u1: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Run every item (the default).
    #[arg(long)]
    all: bool,
    /// Run only these item ids.
    #[arg(long = "item", value_name = "ID")]
    items: Vec<u8>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Core(CatenaryError),
    Io(PathBuf, io::Error),
    ValidationFailed(usize),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::ValidationFailed(n) => write!(f, "{n} validation item(s) failed"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed(_) | CliError::Io(..) => 1,
            CliError::Core(CatenaryError::Quadrature { .. }) => 1,
            CliError::Config(_) | CliError::Core(_) => 2,
        }
    }
}

impl From<CatenaryError> for CliError {
    fn from(e: CatenaryError) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("CATENARY_LOG", "error"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("catenary: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Catalog { format } => catalog(format),
        Command::Trace(a) => trace(a),
        Command::TraceGraph(a) => trace_graph_cmd(a),
        Command::Clairaut(a) => clairaut(a),
        Command::Stability(a) => stability(a),
        Command::Quadrature(a) => quadrature(a),
        Command::Validate(a) => validate(a),
    }
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn build_surface(a: &SurfaceArgs) -> CliResult<SurfaceSpec> {
    if !a.alpha.is_finite() {
        return Err(CliError::Config(format!("alpha must be finite, got {}", a.alpha)));
    }
    let data_flags = a.profile.is_some() || a.poly.is_some() || a.ruled.is_some();
    match a.surface.as_str() {
        "revolution_profile" => match (&a.profile, &a.poly) {
            (Some(p), None) => Ok(tabulated_profile_csv(open(p)?)?),
            (None, Some(coeffs)) => {
                let range = a.poly_range.as_deref().unwrap_or(&[]);
                let [lo, hi] = range else {
                    return Err(CliError::Config("--poly needs --poly-range LO,HI".into()));
                };
                Ok(SurfaceSpec::polynomial_profile(coeffs.clone(), *lo, *hi)?)
            }
            _ => Err(CliError::Config(
                "revolution_profile needs exactly one of --profile or --poly".into(),
            )),
        },
        "ruled" => {
            let path = a
                .ruled
                .as_ref()
                .ok_or_else(|| CliError::Config("ruled needs --ruled CSV".into()))?;
            read_ruled(path)
        }
        kind => {
            if data_flags {
                return Err(CliError::Config(format!("surface `{kind}` takes no sample data")));
            }
            let mut params = BTreeMap::new();
            for (name, value) in [("r", a.r), ("slope", a.slope), ("tau", a.tau)] {
                if let Some(x) = value {
                    params.insert(name.to_string(), x);
                }
            }
            if a.extended {
                params.insert("extended".into(), 1.0);
            }
            let spec = catalog_surface(kind, &params)?;
            if spec.realizability_warning() {
                log::warn!("surface `{kind}` is not realizable as a Euclidean surface of revolution");
            }
            Ok(spec)
        }
    }
}

fn read_ruled(path: &Path) -> CliResult<SurfaceSpec> {
    let bad = |m: String| CliError::Config(format!("{}: {m}", path.display()));
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["v", "f", "g"] {
        return Err(bad("ruled csv must have header `v,f,g`".into()));
    }
    let (mut v, mut f, mut g) = (Vec::new(), Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let x = |i: usize| rec[i].parse::<f64>().map_err(|e| bad(e.to_string()));
        v.push(x(0)?);
        f.push(x(1)?);
        g.push(x(2)?);
    }
    Ok(SurfaceSpec::ruled(v, f, g)?)
}

fn emit_bytes(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => emit::write_atomic(p, bytes).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> CliResult<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("json serializes");
    bytes.push(b'\n');
    emit_bytes(out, &bytes)
}

fn catalog(format: Format) -> CliResult<()> {
    let entries = catalog_entries();
    match format {
        Format::Json => {
            let list: Vec<_> = entries
                .iter()
                .map(|e| json!({ "kind": e.kind, "metric": e.metric, "domain": e.domain, "params": e.params }))
                .collect();
            emit_json(None, &serde_json::Value::Array(list))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| CliError::Io(PathBuf::from("<stdout>"), e.into());
            w.write_record(["kind", "metric", "domain", "params"]).map_err(io_err)?;
            for e in &entries {
                w.write_record([e.kind, e.metric, e.domain, e.params]).map_err(io_err)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e.into_error()))?;
            emit_bytes(None, &bytes)
        }
    }
}

fn emit_trace(trace: &Trace, spec: &SurfaceSpec, alpha: f64, out: &OutputArgs) -> CliResult<()> {
    if trace.samples.is_empty() {
        return Err(CliError::Config("trace has no samples".into()));
    }
    let table = emit::trace_table(trace, spec, alpha, out.embed);
    let format = out.format.unwrap_or(match &out.out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        _ => Format::Csv,
    });
    log::info!(
        "{} samples, termination {}, {} steps",
        table.rows.len(),
        trace.termination.as_str(),
        trace.stats.accepted_steps
    );
    match format {
        Format::Csv => {
            let mut bytes = Vec::new();
            emit::write_csv(&table, &mut bytes).map_err(|e| CliError::Io(PathBuf::from("<buffer>"), e))?;
            emit_bytes(out.out.as_deref(), &bytes)
        }
        Format::Json => emit_json(out.out.as_deref(), &emit::trace_json(trace, spec, alpha, &table)),
    }
}

fn trace(a: TraceArgs) -> CliResult<()> {
    let spec = build_surface(&a.surface)?;
    let mut opts = TraceOptions::new(a.tol);
    opts.blowup_factor = a.blowup_factor;
    if let Some(n) = a.max_steps {
        opts.max_steps = n;
    }
    let start = CatenaryState::new(a.u0, a.v0, a.phi0);
    let trace = trace_catenary_with(&spec, a.surface.alpha, start, a.smax, &opts)?;
    emit_trace(&trace, &spec, a.surface.alpha, &a.output)
}

fn trace_graph_cmd(a: GraphArgs) -> CliResult<()> {
    let spec = build_surface(&a.surface)?;
    let mut opts = TraceOptions::new(a.tol);
    opts.blowup_factor = a.blowup_factor;
    let trace = trace_graph_with(&spec, a.surface.alpha, a.u0, a.du0, (a.v0, a.v1), &opts)?;
    emit_trace(&trace, &spec, a.surface.alpha, &a.output)
}

fn stability_label(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Degenerate => "degenerate",
    }
}

fn clairaut(a: ClairautArgs) -> CliResult<()> {
    let spec = build_surface(&a.surface)?;
    let alpha = a.surface.alpha;
    let c = match (a.c, a.u0, a.phi0) {
        (Some(c), None, None) => Some(c),
        (None, Some(u0), Some(phi0)) => Some(clairaut_constant(&spec, alpha, &CatenaryState::new(u0, a.v0, phi0))?),
        (None, None, None) => None,
        _ => return Err(CliError::Config("give either --c or both --u0 and --phi0".into())),
    };
    let cps: Vec<_> = critical_parallels(&spec, alpha, None)?
        .into_iter()
        .map(|cp| {
            let rho = clairaut_radius(&spec, alpha, cp.u).unwrap_or(f64::NAN);
            json!({ "u": cp.u, "rho": rho, "lambda": cp.lambda, "stability": stability_label(cp.stability) })
        })
        .collect();
    let mut doc = json!({
        "surface": spec.name(),
        "alpha": alpha,
        "critical_parallels": cps,
    });
    if let Some(c) = c {
        doc["c"] = json!(c);
        doc["turning_points"] = if c.abs() > 0.0 {
            json!(turning_points(&spec, alpha, c.abs())?)
        } else {
            json!([])
        };
    }
    emit_json(a.out.as_deref(), &doc)
}

fn stability(a: StabilityArgs) -> CliResult<()> {
    let spec = build_surface(&a.surface)?;
    let alpha = a.surface.alpha;
    let entries: Vec<_> = match a.u_star {
        Some(u) => {
            let lambda = stability_exponent(&spec, alpha, u)?;
            vec![(u, lambda, Stability::from_lambda(lambda))]
        }
        None => critical_parallels(&spec, alpha, None)?
            .into_iter()
            .map(|cp| (cp.u, cp.lambda, cp.stability))
            .collect(),
    };
    let list: Vec<_> = entries
        .into_iter()
        .map(|(u, lambda, s)| json!({ "u": u, "lambda": lambda, "stability": stability_label(s) }))
        .collect();
    emit_json(
        a.out.as_deref(),
        &json!({ "surface": spec.name(), "alpha": alpha, "critical_parallels": list }),
    )
}

fn quadrature(a: QuadratureArgs) -> CliResult<()> {
    let spec = build_surface(&a.surface)?;
    let alpha = a.surface.alpha;
    let dv = quadrature_v(&spec, alpha, a.c, a.u0, a.u1)?;
    // JSON has no infinity; keep the upper limit as text.
    emit_json(
        a.out.as_deref(),
        &json!({ "surface": spec.name(), "alpha": alpha, "c": a.c, "u0": a.u0, "u1": a.u1.to_string(), "delta_v": dv }),
    )
}

fn validate(a: ValidateArgs) -> CliResult<()> {
    if a.all && !a.items.is_empty() {
        return Err(CliError::Config("--all and --item are exclusive".into()));
    }
    let report: ValidationReport = run_suite(&a.items);
    if report.items.is_empty() {
        return Err(CliError::Config(format!("no validation item matches {:?}", a.items)));
    }
    for item in &report.items {
        let verdict = if item.passed { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {:>2} {}", item.id, item.name);
        for c in item.checks.iter().filter(|c| !c.passed) {
            eprintln!("     {}: {:e} (threshold {:e})", c.name, c.value, c.threshold);
        }
        if let Some(e) = &item.error {
            eprintln!("     error: {e}");
        }
    }
    emit_json(
        a.out.as_deref(),
        &serde_json::to_value(&report).expect("report serializes"),
    )?;
    let failed = report.items.iter().filter(|i| !i.passed).count();
    if failed > 0 {
        return Err(CliError::ValidationFailed(failed));
    }
    Ok(())
}
