//! The `catotto` command-line harness.
//!
//! `ω_h` is the energy unit and is fixed to 1 at this level. Exit codes: 0
//! success, 1 usage, 2 runtime or infeasibility, 3 invariant-suite failure.

pub mod check;
pub mod config;
pub mod regime;
pub mod svg;
pub mod sweep;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::protocol::{d_otto_protocol, ProtocolMode, SwapProtocol};
use crate::search::{external_swap_census, optimize, CensusRow, Objective, SearchTask};
use crate::state::{thermal_qubit, Catalyst, ThermalQubit};
use crate::thermo::{laws_check, run_cycle, CycleResult, FixedPointChoice, MIN_WORK};

/// Failure of a CLI command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) | CliError::CheckFailed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "catotto", version, about = "Catalytic two-stroke Otto engine simulator")]
#[command(args_override_self = true)]
pub struct Cli {
    /// key=value file supplying defaults for the subcommand's flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one engine cycle and print a JSON record
    Cycle(CycleArgs),
    /// Sweep one parameter of the d-Otto engine and write CSV
    Sweep(sweep::SweepArgs),
    /// Tabulate which catalyst dimensions run as an engine over a ratio grid
    RegimeMap(regime::RegimeArgs),
    /// Exhaustive protocol search
    Search(SearchArgs),
    /// Best engine per number of external swaps
    Census(CensusArgs),
    /// Run the invariant suite
    Check(check::CheckArgs),
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct Params {
    /// cold qubit frequency (units of ω_h)
    #[arg(long)]
    pub omega_c: f64,
    #[arg(long)]
    pub beta_h: f64,
    #[arg(long)]
    pub beta_c: f64,
}

impl Params {
    pub fn qubits(&self) -> CliResult<(ThermalQubit, ThermalQubit)> {
        let hot = thermal_qubit(self.beta_h, 1.0).map_err(|e| CliError::Usage(e.to_string()))?;
        let cold = thermal_qubit(self.beta_c, self.omega_c).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((hot, cold))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixedPointArg {
    MaxWork,
    MaxEff,
}

#[derive(Debug, clap::Args)]
pub struct CycleArgs {
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub params: Params,
    /// `d-otto` or a protocol file
    #[arg(long, default_value = "d-otto")]
    pub protocol: String,
    #[arg(long, value_enum, default_value = "max-work")]
    pub fixed_point: FixedPointArg,
    /// explicit catalyst distribution (comma separated); must be a fixed point
    #[arg(long, value_delimiter = ',')]
    pub catalyst: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Transpositions,
    Permutations,
}

impl From<ModeArg> for ProtocolMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Transpositions => ProtocolMode::Transpositions,
            ModeArg::Permutations => ProtocolMode::Permutations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Efficiency,
    Work,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "transpositions")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "efficiency")]
    pub objective: ObjectiveArg,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[command(flatten)]
    pub params: Params,
    #[arg(long, default_value_t = MIN_WORK)]
    pub min_work: f64,
    /// only protocols with this many external swaps
    #[arg(long)]
    pub external_swaps: Option<usize>,
    /// only protocols with this many internal swaps
    #[arg(long)]
    pub internal_swaps: Option<usize>,
    /// allow dimensions above the default cap
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub threads: Option<usize>,
    /// write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct CensusArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[command(flatten)]
    pub params: Params,
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// JSON record printed by `cycle`.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct CycleRecord {
    #[serde(rename = "Q_h")]
    pub q_h: f64,
    #[serde(rename = "Q_c")]
    pub q_c: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub eta: Option<f64>,
    pub eta_carnot: f64,
    pub delta_p: Option<f64>,
    pub catalyst: Vec<f64>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Residuals {
    pub first_law: f64,
    pub clausius: f64,
    pub carnot_margin: Option<f64>,
    pub cyclicity: f64,
}

impl CycleRecord {
    pub fn new(r: &CycleResult, hot: &ThermalQubit, cold: &ThermalQubit) -> Self {
        let laws = laws_check(r, hot, cold);
        Self {
            q_h: r.q_h,
            q_c: r.q_c,
            w: r.work,
            eta: r.eta,
            eta_carnot: r.eta_carnot,
            delta_p: r.delta_p,
            catalyst: r.catalyst.clone(),
            residuals: Residuals {
                first_law: laws.first_law_residual,
                clausius: laws.clausius,
                carnot_margin: laws.carnot_margin,
                cyclicity: r.cyclicity_residual,
            },
        }
    }
}

fn load_protocol(source: &str, d: usize) -> CliResult<SwapProtocol> {
    if source == "d-otto" {
        return Ok(d_otto_protocol(d)?);
    }
    let text = fs::read_to_string(source)
        .map_err(|e| CliError::Runtime(format!("cannot read protocol file {source}: {e}")))?;
    SwapProtocol::parse(&text, d).map_err(|e| CliError::Runtime(format!("{source}: {e}")))
}

pub fn cmd_cycle(args: &CycleArgs) -> CliResult<CycleRecord> {
    if args.d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    let (hot, cold) = args.params.qubits()?;
    let proto = load_protocol(&args.protocol, args.d)?;
    let choice = match (&args.catalyst, args.fixed_point) {
        (Some(p), _) => FixedPointChoice::Given(Catalyst::new(p.clone()).map_err(|e| CliError::Usage(e.to_string()))?),
        (None, FixedPointArg::MaxWork) => FixedPointChoice::MaxWork,
        (None, FixedPointArg::MaxEff) => FixedPointChoice::MaxEfficiency,
    };
    let result = run_cycle(&proto, &hot, &cold, &choice).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(CycleRecord::new(&result, &hot, &cold))
}

#[derive(Debug, Clone, Serialize)]
struct SearchReportEntry {
    rank: usize,
    protocol: Vec<String>,
    #[serde(rename = "Q_h")]
    q_h: f64,
    #[serde(rename = "Q_c")]
    q_c: f64,
    #[serde(rename = "W")]
    w: f64,
    eta: Option<f64>,
    catalyst: Vec<f64>,
    degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SearchReport {
    d: usize,
    mode: &'static str,
    objective: &'static str,
    omega_h: f64,
    omega_c: f64,
    beta_h: f64,
    beta_c: f64,
    eta_carnot: f64,
    scanned: u64,
    engines: u64,
    entries: Vec<SearchReportEntry>,
}

pub(crate) fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn cmd_search(args: &SearchArgs) -> CliResult<String> {
    let (hot, cold) = args.params.qubits()?;
    let objective = match args.objective {
        ObjectiveArg::Efficiency => Objective::Efficiency,
        ObjectiveArg::Work => Objective::Work,
    };
    let mut task = SearchTask::new(args.d, args.mode.into(), objective, hot, cold);
    task.top = Some(args.top);
    task.min_work = args.min_work;
    task.external_swaps = args.external_swaps;
    task.internal_swaps = args.internal_swaps;
    task.allow_large = args.force;
    let result = with_threads(args.threads, || optimize(&task))??;
    let report = SearchReport {
        d: args.d,
        mode: match args.mode {
            ModeArg::Transpositions => "transpositions",
            ModeArg::Permutations => "permutations",
        },
        objective: match objective {
            Objective::Efficiency => "efficiency",
            Objective::Work => "work",
        },
        omega_h: 1.0,
        omega_c: args.params.omega_c,
        beta_h: args.params.beta_h,
        beta_c: args.params.beta_c,
        eta_carnot: crate::thermo::carnot_efficiency(&hot, &cold),
        scanned: result.scanned,
        engines: result.engines,
        entries: result
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| SearchReportEntry {
                rank: i + 1,
                protocol: e.protocol.to_text().lines().map(str::to_owned).collect(),
                q_h: e.result.q_h,
                q_c: e.result.q_c,
                w: e.result.work,
                eta: e.result.eta,
                catalyst: e.result.catalyst.clone(),
                degenerate: e.result.degenerate,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n")
}

pub fn cmd_census(args: &CensusArgs) -> CliResult<Vec<CensusRow>> {
    let (hot, cold) = args.params.qubits()?;
    Ok(with_threads(args.threads, || {
        external_swap_census(args.d, &hot, &cold, MIN_WORK, args.force)
    })??)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

/// Dispatches a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Cycle(args) => {
            let record = cmd_cycle(args)?;
            write_output(None, &(serde_json::to_string(&record).expect("serializable") + "\n"))
        }
        Command::Sweep(args) => sweep::cmd_sweep(args),
        Command::RegimeMap(args) => regime::cmd_regime_map(args),
        Command::Search(args) => {
            let json = cmd_search(args)?;
            write_output(args.output.as_ref(), &json)
        }
        Command::Census(args) => {
            let rows = cmd_census(args)?;
            write_output(
                None,
                &(serde_json::to_string_pretty(&rows).expect("serializable") + "\n"),
            )
        }
        Command::Check(args) => check::cmd_check(args),
    }
}

/// Parses `argv` (with `--config` defaults spliced in) and runs the command.
/// Returns the process exit code.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::splice_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
