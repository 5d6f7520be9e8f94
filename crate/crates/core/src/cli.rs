//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input (one line on stderr), 2 when
//! a numerical routine fails to converge or a simulation hits its cap.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{invalid, Error, Result};
use crate::estimation::{lrd_report, srd_report, DecayOptions, DecayReport, EstimatorKind};
use crate::moments::{moment_report, MfppConfig, MixedStableParams};
use crate::output::{atomic_write, CsvTable};
use crate::simulation::{simulate_ensemble, EnsembleKind, SimOptions};
use crate::special::ml3;

pub const TOOL_VERSION: &str = concat!("mfpp ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "mfpp", version, about = "Mixed fractional Poisson process toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the (three-parameter) Mittag-Leffler function.
    Ml(MlArgs),
    /// Exact moments of the inverse subordinator and the counting process on a grid.
    Moments(MomentsArgs),
    /// Simulate an ensemble of paths.
    Simulate(SimulateArgs),
    /// Fit the decay exponent of Corr(N(s), N(t)) from simulation.
    Lrd(DecayArgs),
    /// Fit the decay exponent of Corr(Z(s), Z(t)) for the increments Z from simulation.
    Srd(DecayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Inverse,
    Mfpp,
    Mfpn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Estimator {
    Plain,
    Conditional,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    alpha1: f64,
    #[arg(long)]
    alpha2: f64,
    /// Weight of the first component; the second weight is 1 - c1.
    #[arg(long)]
    c1: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Lag of the increment process.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    t_min: f64,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    spacing: Spacing,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long)]
    paths: usize,
    /// Master seed; required so every run is reproducible.
    #[arg(long)]
    seed: u64,
    /// Worker threads for ensemble generation (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Operational-time step of the subordinator walk.
    #[arg(long)]
    ds: Option<f64>,
    /// Operational-time cap before a walk is abandoned.
    #[arg(long)]
    s_cap: Option<f64>,
}

#[derive(Debug, Args)]
struct MlArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Also report covariances against this earlier time.
    #[arg(long)]
    cov_s: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Kind::Mfpp)]
    kind: Kind,
    /// Also write the binary per-time summary to this file.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DecayArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    sim: SimArgs,
    /// Earlier time of the correlation.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Fit window start (default 50 times s, or s + delta for increments).
    #[arg(long)]
    t_min: Option<f64>,
    /// Fit window end (default 500 times the same reference).
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 8)]
    points: usize,
    /// Verdict tolerance (default 0.1 for lrd, 0.15 for srd).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Correlation estimator for srd.
    #[arg(long, value_enum, default_value_t = Estimator::Conditional)]
    estimator: Estimator,
    /// Skip the exact reference correlation curve.
    #[arg(long)]
    no_exact: bool,
    #[command(flatten)]
    output: OutputArgs,
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence(_) | Error::SCapExceeded { .. } | Error::NegativeVariance { .. } => 2,
        _ => 1,
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ml(a) => ml(a),
        Command::Moments(a) => moments(a),
        Command::Simulate(a) => simulate(a),
        Command::Lrd(a) => decay(a, false),
        Command::Srd(a) => decay(a, true),
    }
}

fn resolve_format(output: &OutputArgs, default: Format) -> Format {
    if let Some(f) = output.format {
        return f;
    }
    match output.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => default,
    }
}

fn emit(output: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => atomic_write(path, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn json_bytes(value: &Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Ordered key/value pairs echoed into every output.
type Metadata = Vec<(String, String)>;

fn base_metadata(command: &str) -> Metadata {
    vec![("tool".into(), TOOL_VERSION.into()), ("command".into(), command.into())]
}

fn model_metadata(config: &MfppConfig) -> Metadata {
    let p = &config.params;
    vec![
        ("alpha1".into(), p.alpha1().to_string()),
        ("alpha2".into(), p.alpha2().to_string()),
        ("c1".into(), p.c1().to_string()),
        ("c2".into(), p.c2().to_string()),
        ("lambda".into(), config.lambda.to_string()),
        ("delta".into(), config.delta.to_string()),
    ]
}

/// JSON object from metadata; numeric-looking values become numbers.
fn metadata_json(meta: &Metadata) -> Map<String, Value> {
    meta.iter()
        .map(|(k, v)| {
            let value = if let Ok(n) = v.parse::<u64>() {
                json!(n)
            } else {
                match v.parse::<f64>() {
                    Ok(x) if x.is_finite() => json!(x),
                    _ => json!(v),
                }
            };
            (k.clone(), value)
        })
        .collect()
}

fn config_from(model: &ModelArgs) -> Result<MfppConfig> {
    let params = MixedStableParams::with_c1(model.alpha1, model.alpha2, model.c1)?;
    MfppConfig::new(params, model.lambda, model.delta)
}

fn time_grid(grid: &GridArgs) -> Result<Vec<f64>> {
    let (lo, hi, n) = (grid.t_min, grid.t_max, grid.points);
    if n == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid("time grid needs finite bounds and at least one point"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if !(hi > lo && lo >= 0.0) {
        return Err(invalid(format!("need 0 <= t-min < t-max (got {lo}, {hi})")));
    }
    Ok(match grid.spacing {
        Spacing::Linear => {
            (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
        }
        Spacing::Log => {
            if lo <= 0.0 {
                return Err(invalid("log spacing needs t-min > 0"));
            }
            crate::estimation::log_window(lo, hi, n)?
        }
    })
}

fn sim_options(sim: &SimArgs) -> SimOptions {
    SimOptions { paths: sim.paths, seed: sim.seed, threads: sim.threads, ds: sim.ds, s_cap: sim.s_cap }
}

fn sim_metadata(sim: &SimArgs) -> Metadata {
    let mut m: Metadata = vec![("paths".into(), sim.paths.to_string()), ("seed".into(), sim.seed.to_string())];
    if let Some(ds) = sim.ds {
        m.push(("ds_requested".into(), ds.to_string()));
    }
    if let Some(cap) = sim.s_cap {
        m.push(("s_cap_requested".into(), cap.to_string()));
    }
    m
}

fn ml(a: MlArgs) -> Result<()> {
    let r = ml3(a.alpha, a.beta, a.gamma, a.x)?;
    let mut meta = base_metadata("ml");
    meta.extend([
        ("alpha".into(), a.alpha.to_string()),
        ("beta".into(), a.beta.to_string()),
        ("gamma".into(), a.gamma.to_string()),
        ("x".into(), a.x.to_string()),
    ]);
    let bytes = match resolve_format(&a.output, Format::Csv) {
        Format::Csv => {
            let mut t =
                CsvTable::new(vec!["value".into(), "est_abs_error".into(), "regime".into()]).with_metadata(meta);
            t.rows.push(vec![r.value.to_string(), r.est_abs_error.to_string(), r.regime.as_str().into()]);
            t.to_bytes()?
        }
        Format::Json => {
            let mut obj = metadata_json(&meta);
            obj.insert("value".into(), json!(r.value));
            obj.insert("est_abs_error".into(), json!(r.est_abs_error));
            obj.insert("regime".into(), json!(r.regime.as_str()));
            json_bytes(&Value::Object(obj))?
        }
    };
    emit(&a.output, &bytes)
}

fn moments(a: MomentsArgs) -> Result<()> {
    let config = config_from(&a.model)?;
    let grid = time_grid(&a.grid)?;
    let report = moment_report(&config, &grid, a.cov_s)?;
    let mut meta = base_metadata("moments");
    meta.extend(model_metadata(&config));
    if let Some(s) = a.cov_s {
        meta.push(("cov_s".into(), s.to_string()));
    }
    let bytes = match resolve_format(&a.output, Format::Csv) {
        Format::Csv => report.to_table().with_metadata(meta).to_bytes()?,
        Format::Json => {
            let mut obj = metadata_json(&meta);
            if let Value::Object(fields) = to_json(&report)? {
                obj.extend(fields);
            }
            json_bytes(&Value::Object(obj))?
        }
    };
    emit(&a.output, &bytes)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let config = config_from(&a.model)?;
    let times = time_grid(&a.grid)?;
    let kind = match a.kind {
        Kind::Inverse => EnsembleKind::InverseSubordinator,
        Kind::Mfpp => EnsembleKind::Mfpp,
        Kind::Mfpn => EnsembleKind::Mfpn,
    };
    let ensemble = simulate_ensemble(&config, &times, kind, &sim_options(&a.sim))?;
    let mut meta = base_metadata("simulate");
    meta.extend(ensemble.metadata());
    if let Some(path) = &a.summary {
        atomic_write(path, &ensemble.to_binary_summary()?)?;
    }
    let bytes = match resolve_format(&a.output, Format::Csv) {
        Format::Csv => ensemble.to_table().with_metadata(meta).to_bytes()?,
        Format::Json => {
            let mut obj = metadata_json(&meta);
            obj.insert("times".into(), json!(ensemble.times));
            let rows: Vec<&[f64]> = (0..ensemble.n_paths).map(|i| ensemble.row(i)).collect();
            obj.insert("values".into(), json!(rows));
            json_bytes(&Value::Object(obj))?
        }
    };
    emit(&a.output, &bytes)
}

fn decay(a: DecayArgs, noise: bool) -> Result<()> {
    let config = config_from(&a.model)?;
    let window = match (a.t_min, a.t_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => return Err(invalid("give both --t-min and --t-max, or neither")),
    };
    let estimator = match a.estimator {
        Estimator::Plain => EstimatorKind::Plain,
        Estimator::Conditional => EstimatorKind::Conditional,
    };
    let opts = DecayOptions { s: a.s, window, points: a.points, tolerance: a.tolerance, estimator, exact: !a.no_exact };
    let sim = sim_options(&a.sim);
    let report = if noise { srd_report(&config, &sim, &opts)? } else { lrd_report(&config, &sim, &opts)? };
    let command = if noise { "srd" } else { "lrd" };
    let mut meta = base_metadata(command);
    meta.extend(model_metadata(&config));
    meta.extend(sim_metadata(&a.sim));
    let bytes = match resolve_format(&a.output, Format::Json) {
        Format::Json => json_bytes(&decay_json(&meta, &report)?)?,
        Format::Csv => {
            let mut m = meta;
            m.extend(decay_summary(&report));
            report.to_table().with_metadata(m).to_bytes()?
        }
    };
    emit(&a.output, &bytes)
}

fn decay_summary(r: &DecayReport) -> Metadata {
    let f = &r.fit;
    let mut m: Metadata = vec![
        ("process".into(), format!("{:?}", r.process).to_lowercase()),
        ("estimator".into(), r.estimator.as_str().into()),
        ("s".into(), r.s.to_string()),
        ("window_min".into(), r.window_min.to_string()),
        ("window_max".into(), r.window_max.to_string()),
        ("ds".into(), r.ds.to_string()),
        ("slope".into(), f.slope.to_string()),
        ("intercept".into(), f.intercept.to_string()),
        ("slope_stderr".into(), f.slope_stderr.to_string()),
        ("n_used".into(), f.n_used.to_string()),
        ("dropped".into(), f.dropped.to_string()),
        ("target".into(), f.target.to_string()),
        ("tolerance".into(), f.tolerance.to_string()),
        ("exponent".into(), f.exponent.to_string()),
        ("verdict".into(), json_str(&f.verdict)),
        ("dependence".into(), json_str(&f.dependence)),
    ];
    if let Some(e) = &r.exact_fit {
        m.push(("exact_exponent".into(), e.exponent.to_string()));
    }
    m
}

fn json_str<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

/// Flat JSON: metadata and fit fields at the top level, the curve and the
/// exact reference as nested records.
fn decay_json(meta: &Metadata, r: &DecayReport) -> Result<Value> {
    let mut obj = metadata_json(meta);
    obj.insert("process".into(), to_json(&r.process)?);
    obj.insert("estimator".into(), to_json(&r.estimator)?);
    obj.insert("s".into(), json!(r.s));
    obj.insert("window_min".into(), json!(r.window_min));
    obj.insert("window_max".into(), json!(r.window_max));
    obj.insert("ds".into(), json!(r.ds));
    if let Value::Object(fit) = to_json(&r.fit)? {
        obj.extend(fit);
    }
    obj.insert("curve".into(), to_json(&r.curve)?);
    obj.insert("exact_corr".into(), to_json(&r.exact_corr)?);
    obj.insert("exact_fit".into(), to_json(&r.exact_fit)?);
    Ok(Value::Object(obj))
}
