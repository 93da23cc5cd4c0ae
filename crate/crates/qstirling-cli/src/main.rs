//! Command-line front end for the quantum Stirling-cycle toolkit: single
//! cycles, (Th, Tc) phase-map sweeps, relative-partition-function curves,
//! particle-number efficiency scans, and the built-in verification suite.
//!
//! Exit codes: 0 success, 1 verification-suite failure, 2 usage error,
//! 3 domain error, 4 I/O error.

use clap::{Args, Parser, Subcommand};
use qstirling::oracle::{verify_suite, write_report_json};
use qstirling::{
    nsweep, run_sweep, write_json, write_nsweep_csv, write_sweep_csv, write_zeta_csv, zeta_curve,
    CycleResult, Error, GasSpec, MuPolicy, OutputFormat, Spacing, Species, StirlingMachine,
    SweepSpec, DEFAULT_TAIL_TOL,
};
use serde::Deserialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(
    name = "qstirling",
    version,
    about = "Quantum Stirling cycles for ideal gases in a box with an insertable mid-box barrier",
    long_about = "Evaluates quantum Stirling cycles for ideal Fermi, Bose, and \
Maxwell-Boltzmann gases confined to a d-dimensional box into which an \
impenetrable mid-box barrier is inserted isothermally at the hot bath and \
removed at the cold bath. All energies and temperatures are in units of the \
level-spacing scale alpha."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one cycle at (th, tc) and print W, Qh, Qc, mode, eta, eta_scaled.
    Cycle(CycleArgs),
    /// Sweep a (Th, Tc) grid and emit one row per point with Tc <= Th.
    Sweep(SweepArgs),
    /// Tabulate the relative partition function zeta(T), omega, and domega/dT.
    Zeta(ZetaArgs),
    /// Scan scaled engine efficiency over particle numbers at fixed Tc/Th.
    Nsweep(NsweepArgs),
    /// Run the self-verification suite and write a JSON report.
    Verify(VerifyArgs),
}

/// Flags shared by every evaluation subcommand. All are optional at parse
/// time so a `--config` file can supply them; explicit flags win.
#[derive(Args, Debug, Default, Clone)]
struct SharedArgs {
    /// Particle statistics: fermi, bose, or mb.
    #[arg(long, value_name = "TOKEN")]
    species: Option<String>,

    /// Box dimension: 1, 2, or 3.
    #[arg(long, value_name = "INT")]
    d: Option<u32>,

    /// Mean particle number (>= 1).
    #[arg(long = "N", value_name = "INT")]
    particles: Option<u64>,

    /// Level-spacing scale; temperatures are quoted in units of alpha [default: 1].
    #[arg(long, value_name = "FLOAT")]
    alpha: Option<f64>,

    /// Chemical-potential policy: paper (closed forms) or exact (numeric solve) [default: paper].
    #[arg(long, value_name = "TOKEN")]
    mu_policy: Option<String>,

    /// Spectrum-truncation tolerance in (0, 1) [default: 1e-16].
    #[arg(long, value_name = "FLOAT")]
    tail_tol: Option<f64>,

    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format: csv or json [default: csv].
    #[arg(long, value_name = "TOKEN")]
    format: Option<String>,

    /// JSON file supplying any of the flags; explicit flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CycleArgs {
    #[command(flatten)]
    shared: SharedArgs,

    /// Hot-bath temperature (barrier inserted here).
    #[arg(long, value_name = "FLOAT")]
    th: Option<f64>,

    /// Cold-bath temperature (barrier removed here); must satisfy tc <= th.
    #[arg(long, value_name = "FLOAT")]
    tc: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    shared: SharedArgs,

    /// Smallest hot-bath temperature [default: 0.01*alpha].
    #[arg(long, value_name = "FLOAT")]
    th_min: Option<f64>,

    /// Largest hot-bath temperature [default: 1.0*alpha].
    #[arg(long, value_name = "FLOAT")]
    th_max: Option<f64>,

    /// Number of hot-bath grid points (>= 2) [default: 100].
    #[arg(long, value_name = "INT")]
    th_steps: Option<u32>,

    /// Smallest cold-bath temperature [default: 0.01*alpha].
    #[arg(long, value_name = "FLOAT")]
    tc_min: Option<f64>,

    /// Largest cold-bath temperature [default: 1.0*alpha].
    #[arg(long, value_name = "FLOAT")]
    tc_max: Option<f64>,

    /// Number of cold-bath grid points (>= 2) [default: 100].
    #[arg(long, value_name = "INT")]
    tc_steps: Option<u32>,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    #[command(flatten)]
    shared: SharedArgs,

    /// Smallest temperature [default: 0.01*alpha].
    #[arg(long, value_name = "FLOAT")]
    t_min: Option<f64>,

    /// Largest temperature [default: 1.0*alpha].
    #[arg(long, value_name = "FLOAT")]
    t_max: Option<f64>,

    /// Number of temperature points (>= 2) [default: 100].
    #[arg(long, value_name = "INT")]
    points: Option<u32>,

    /// Grid spacing: lin (or linear) / log [default: lin].
    #[arg(long, value_name = "TOKEN")]
    spacing: Option<String>,
}

#[derive(Args, Debug)]
struct NsweepArgs {
    #[command(flatten)]
    shared: SharedArgs,

    /// Fixed ratio Tc/Th in (0, 1).
    #[arg(long, value_name = "FLOAT")]
    ratio: Option<f64>,

    /// Smallest hot-bath temperature [default: 0.01*alpha].
    #[arg(long, value_name = "FLOAT")]
    th_min: Option<f64>,

    /// Largest hot-bath temperature [default: 1.0*alpha].
    #[arg(long, value_name = "FLOAT")]
    th_max: Option<f64>,

    /// Number of hot-bath grid points (>= 2) [default: 100].
    #[arg(long, value_name = "INT")]
    th_steps: Option<u32>,

    /// Comma-separated particle numbers, e.g. 10,20,40.
    #[arg(long, value_name = "LIST")]
    n_list: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Path for the JSON verification report [default: verify_report.json].
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

/// Optional values a `--config` JSON file may supply. Unknown keys are
/// ignored; `N` is accepted with its uppercase column spelling.
#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct FileConfig {
    species: Option<String>,
    d: Option<u32>,
    #[serde(rename = "N")]
    particles: Option<u64>,
    alpha: Option<f64>,
    mu_policy: Option<String>,
    tail_tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<String>,
    th: Option<f64>,
    tc: Option<f64>,
    th_min: Option<f64>,
    th_max: Option<f64>,
    th_steps: Option<u32>,
    tc_min: Option<f64>,
    tc_max: Option<f64>,
    tc_steps: Option<u32>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    points: Option<u32>,
    spacing: Option<String>,
    ratio: Option<f64>,
    n_list: Option<Vec<u64>>,
}

/// CLI failure carrying its process exit code.
#[derive(Debug)]
enum CliError {
    /// Bad or missing flags/config values: exit 2.
    Usage(String),
    /// Valid request outside the model's domain: exit 3.
    Domain(String),
    /// Filesystem or stream failure: exit 4.
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

/// Maps library errors onto the exit-code contract: parameter-validation
/// failures are usage errors, I/O keeps its own code, and everything else
/// (non-convergence, statistics domain violations, ...) is a domain error.
fn classify(err: Error) -> CliError {
    match &err {
        Error::TemperatureOrder { .. } => CliError::Usage("th must be ≥ tc".into()),
        Error::UnsupportedDimension(_)
        | Error::NonPositiveAlpha(_)
        | Error::NonPositiveTemperature(_)
        | Error::InvalidParticleCount(_)
        | Error::InvalidTailTolerance(_)
        | Error::InvalidGrid(_) => CliError::Usage(err.to_string()),
        Error::Io(_) => CliError::Io(err.to_string()),
        _ => CliError::Domain(err.to_string()),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("write failed: {e}"))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

fn parse_token<T>(s: &str) -> Result<T, CliError>
where
    T: FromStr<Err = String>,
{
    s.parse::<T>().map_err(CliError::Usage)
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

/// Shared flags after merging command line over config file over defaults.
struct Resolved {
    gas: GasSpec,
    dim: u32,
    alpha: f64,
    tail_tol: f64,
    out: Option<PathBuf>,
    format: OutputFormat,
}

fn resolve_shared(shared: &SharedArgs, cfg: &FileConfig) -> Result<Resolved, CliError> {
    let species: Species =
        parse_token(&require(shared.species.clone().or_else(|| cfg.species.clone()), "species")?)?;
    let dim = require(shared.d.or(cfg.d), "d")?;
    let particles = require(shared.particles.or(cfg.particles), "N")?;
    let alpha = shared.alpha.or(cfg.alpha).unwrap_or(1.0);
    let mu_policy = match shared.mu_policy.clone().or_else(|| cfg.mu_policy.clone()) {
        Some(tok) => parse_token(&tok)?,
        None => MuPolicy::PaperApprox,
    };
    let tail_tol = shared.tail_tol.or(cfg.tail_tol).unwrap_or(DEFAULT_TAIL_TOL);
    let out = shared.out.clone().or_else(|| cfg.out.clone());
    let format = match shared.format.clone().or_else(|| cfg.format.clone()) {
        Some(tok) => parse_token(&tok)?,
        None => OutputFormat::Csv,
    };
    let gas = GasSpec::new(species, particles, mu_policy).map_err(classify)?;
    Ok(Resolved { gas, dim, alpha, tail_tol, out, format })
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match out {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
    }
}

/// Plain-text cycle report: one `name = value` line per field, floats at 12
/// significant digits, efficiency lines left empty outside their modes.
fn write_cycle_text(result: &CycleResult, sink: &mut dyn Write) -> Result<(), CliError> {
    writeln!(sink, "W = {:.11e}", result.w).map_err(io_err)?;
    writeln!(sink, "Qh = {:.11e}", result.qh).map_err(io_err)?;
    writeln!(sink, "Qc = {:.11e}", result.qc).map_err(io_err)?;
    writeln!(sink, "mode = {}", result.mode.token()).map_err(io_err)?;
    for (name, value) in [("eta", result.eta), ("eta_scaled", result.eta_scaled)] {
        match value {
            Some(v) => writeln!(sink, "{name} = {v:.11e}").map_err(io_err)?,
            None => writeln!(sink, "{name} =").map_err(io_err)?,
        }
    }
    Ok(())
}

fn cmd_cycle(args: CycleArgs) -> Result<i32, CliError> {
    let cfg = load_config(args.shared.config.as_deref())?;
    let r = resolve_shared(&args.shared, &cfg)?;
    let th = require(args.th.or(cfg.th), "th")?;
    let tc = require(args.tc.or(cfg.tc), "tc")?;
    let machine = StirlingMachine::new(r.gas, r.dim, r.alpha, r.tail_tol).map_err(classify)?;
    let result = machine.run(th, tc).map_err(classify)?;
    let mut sink = open_sink(r.out.as_deref())?;
    match r.format {
        OutputFormat::Csv => write_cycle_text(&result, &mut sink)?,
        OutputFormat::Json => {
            let json = serde_json::to_string_pretty(&result).expect("cycle result serializes");
            writeln!(sink, "{json}").map_err(io_err)?;
        }
    }
    sink.flush().map_err(io_err)?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, CliError> {
    let cfg = load_config(args.shared.config.as_deref())?;
    let r = resolve_shared(&args.shared, &cfg)?;
    let spec = SweepSpec {
        species: r.gas.species,
        dim: r.dim,
        particles: r.gas.particles,
        alpha: r.alpha,
        th_min: args.th_min.or(cfg.th_min).unwrap_or(0.01 * r.alpha),
        th_max: args.th_max.or(cfg.th_max).unwrap_or(1.0 * r.alpha),
        th_steps: args.th_steps.or(cfg.th_steps).unwrap_or(100),
        tc_min: args.tc_min.or(cfg.tc_min).unwrap_or(0.01 * r.alpha),
        tc_max: args.tc_max.or(cfg.tc_max).unwrap_or(1.0 * r.alpha),
        tc_steps: args.tc_steps.or(cfg.tc_steps).unwrap_or(100),
        mu_policy: r.gas.mu_policy,
        tail_tol: r.tail_tol,
        format: r.format,
    };
    let rows = run_sweep(&spec).map_err(classify)?;
    let mut sink = open_sink(r.out.as_deref())?;
    match r.format {
        OutputFormat::Csv => write_sweep_csv(&rows, &mut sink).map_err(classify)?,
        OutputFormat::Json => write_json(&rows, &mut sink).map_err(classify)?,
    }
    sink.flush().map_err(io_err)?;
    Ok(0)
}

fn cmd_zeta(args: ZetaArgs) -> Result<i32, CliError> {
    let cfg = load_config(args.shared.config.as_deref())?;
    let r = resolve_shared(&args.shared, &cfg)?;
    let t_min = args.t_min.or(cfg.t_min).unwrap_or(0.01 * r.alpha);
    let t_max = args.t_max.or(cfg.t_max).unwrap_or(1.0 * r.alpha);
    let points = args.points.or(cfg.points).unwrap_or(100);
    let spacing = match args.spacing.clone().or_else(|| cfg.spacing.clone()) {
        Some(tok) => parse_token::<Spacing>(&tok)?,
        None => Spacing::Linear,
    };
    let rows = zeta_curve(&r.gas, r.dim, r.alpha, t_min, t_max, points, spacing, r.tail_tol)
        .map_err(classify)?;
    let mut sink = open_sink(r.out.as_deref())?;
    match r.format {
        OutputFormat::Csv => write_zeta_csv(&rows, &mut sink).map_err(classify)?,
        OutputFormat::Json => write_json(&rows, &mut sink).map_err(classify)?,
    }
    sink.flush().map_err(io_err)?;
    Ok(0)
}

fn parse_n_list(s: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        out.push(tok.parse::<u64>().map_err(|e| {
            CliError::Usage(format!("invalid particle count '{tok}' in --n-list: {e}"))
        })?);
    }
    if out.is_empty() {
        return Err(CliError::Usage("--n-list must contain at least one particle count".into()));
    }
    Ok(out)
}

fn cmd_nsweep(args: NsweepArgs) -> Result<i32, CliError> {
    let cfg = load_config(args.shared.config.as_deref())?;
    // The particle axis comes from --n-list, so --N is not required here;
    // resolve the remaining shared flags around a placeholder N.
    let shared = SharedArgs { particles: args.shared.particles.or(Some(1)), ..args.shared.clone() };
    let r = resolve_shared(&shared, &cfg)?;
    let ratio = require(args.ratio.or(cfg.ratio), "ratio")?;
    let th_min = args.th_min.or(cfg.th_min).unwrap_or(0.01 * r.alpha);
    let th_max = args.th_max.or(cfg.th_max).unwrap_or(1.0 * r.alpha);
    let th_steps = args.th_steps.or(cfg.th_steps).unwrap_or(100);
    let n_list = match args.n_list.as_deref() {
        Some(s) => parse_n_list(s)?,
        None => require(cfg.n_list.clone(), "n-list")?,
    };
    let rows = nsweep(
        r.gas.species,
        r.dim,
        r.alpha,
        r.gas.mu_policy,
        ratio,
        th_min,
        th_max,
        th_steps,
        &n_list,
        r.tail_tol,
    )
    .map_err(classify)?;
    let mut sink = open_sink(r.out.as_deref())?;
    match r.format {
        OutputFormat::Csv => write_nsweep_csv(&rows, &mut sink).map_err(classify)?,
        OutputFormat::Json => write_json(&rows, &mut sink).map_err(classify)?,
    }
    sink.flush().map_err(io_err)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let report = verify_suite().map_err(classify)?;
    print!("{}", report.render_text());
    let path = args.report.unwrap_or_else(|| PathBuf::from("verify_report.json"));
    write_report_json(&report, &path).map_err(classify)?;
    Ok(if report.all_pass { 0 } else { 1 })
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Cycle(args) => cmd_cycle(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Zeta(args) => cmd_zeta(args),
        Command::Nsweep(args) => cmd_nsweep(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Prints help/version to stdout (exit 0) or the usage error to
        // stderr (exit 2).
        Err(e) => e.exit(),
    };
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    };
    std::process::exit(code);
}
