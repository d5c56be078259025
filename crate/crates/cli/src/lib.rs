//! The `costnav` command line: simulate navigation episodes, turn episode
//! logs into unit economics, and run break-even and sensitivity analyses.

pub mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use costnav::analysis::{
    bep_curve, frontier, leaderboard, render, sweep, Artifact, Axis, AxisRange, EconConfig, Format,
    FrontierSolution, LeaderboardInput, SweepSpec,
};
use costnav::analysis::AnalysisError;
use costnav::econ::{build_report, Bep, EconError, EconInputs, Settlement};
use costnav::fixture::{Baseline, FixtureError};
use costnav::log::{aggregate_with, read_log, to_run_metrics, AggregateOptions, LogError, ReadOptions, Termination};
use costnav::sim::{run_batch, run_batch_with_workers, Level, PolicySpec, ScenarioConfig, ScenarioFile, SimError};

pub use config::RunConfig;
use config::parse_key;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<LogError> for CliError {
    fn from(e: LogError) -> Self {
        match e {
            LogError::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match &e {
            AnalysisError::Io(_)
            | AnalysisError::Log {
                source: LogError::Io(_), ..
            } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> Self {
        match e {
            FixtureError::Io(_) => CliError::Io(format!("fixture: {e}")),
            other => CliError::Validation(format!("fixture: {other}")),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<EconError> for CliError {
    fn from(e: EconError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "costnav", version, about = "Unit economics for delivery-robot navigation policies")]
pub struct Cli {
    /// Flat TOML run configuration; flags on the command line take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Log progress to stderr
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the navigation micro-simulator and write an episode log
    Simulate(SimulateArgs),
    /// Build the cost, revenue and break-even report
    Evaluate(EvaluateArgs),
    /// Sweep economic inputs over a grid, or solve for the break-even frontier
    Sensitivity(SensitivityArgs),
    /// Print the break-even point and optionally emit the cumulative curve
    Breakeven(BreakevenArgs),
    /// Rank several policies by profit per run
    Leaderboard(LeaderboardArgs),
    /// Check an episode log against the schema
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario and policy file (flat TOML)
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,
    /// Difficulty level: l1 (empty) or l2 (crowded)
    #[arg(long)]
    pub level: Option<Level>,
    /// Policy: straight-line, potential-field or noisy-heading
    #[arg(long)]
    pub policy: Option<String>,
    /// Number of episodes
    #[arg(long)]
    pub episodes: Option<u32>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (output does not depend on this)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Episode log to write
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Where the run metrics come from. Without `--log` the baseline fixture's
/// evaluation table is used.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Episode log to evaluate
    #[arg(long, value_name = "FILE", conflicts_with = "paper_baseline")]
    pub log: Option<PathBuf>,
    /// Use the bundled baseline fixture (the default when no log is given)
    #[arg(long)]
    pub paper_baseline: bool,
    /// Alternate baseline fixture (TOML) for hardware, training and cost inputs
    #[arg(long, value_name = "FILE", conflicts_with = "paper_baseline")]
    pub fixture: Option<PathBuf>,
    /// Ignore unknown log keys with a warning instead of rejecting them
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct EconArgs {
    /// Electricity price, USD per kWh
    #[arg(long)]
    pub c_elec: Option<f64>,
    /// Maintenance charge per N·s of collision impulse, fraction of hardware cost
    #[arg(long)]
    pub c_shock: Option<f64>,
    /// Base delivery fee, USD
    #[arg(long)]
    pub r_base: Option<f64>,
    /// Delivery-time limit for revenue, seconds
    #[arg(long)]
    pub sla_timeout: Option<f64>,
    /// Probability a run needs a human rescue
    #[arg(long)]
    pub p_failure: Option<f64>,
    /// Cost of one human rescue, USD
    #[arg(long)]
    pub c_human_op: Option<f64>,
    /// Runtime each run is projected to, hours
    #[arg(long)]
    pub runtime_hr: Option<f64>,
    /// Scale expected collisions by the delivery/episode distance ratio
    #[arg(long)]
    pub distance_scale: bool,
    /// Line-item settlement: ledger (round to cents/mills) or exact
    #[arg(long)]
    pub settlement: Option<Settlement>,
    /// Deliveries per day, enables time to profitability
    #[arg(long)]
    pub deliveries_per_day: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    /// Override the collision rate
    #[arg(long)]
    pub collision: Option<f64>,
    /// Override the SLA compliance
    #[arg(long)]
    pub sla: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format: table, csv or svg
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub econ: EconArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub econ: EconArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    /// Swept axis as NAME=LO:HI:STEPS or NAME=VALUE (repeatable)
    #[arg(long, value_name = "SPEC")]
    pub axis: Vec<String>,
    /// Solve profit = 0 along this axis instead of emitting the grid
    #[arg(long, value_name = "AXIS")]
    pub frontier: Option<Axis>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BreakevenArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub econ: EconArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    /// Last run on the emitted cumulative curve
    #[arg(long, value_name = "RUNS")]
    pub curve_max: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LeaderboardArgs {
    /// Policy and its episode log as POLICY=FILE (repeatable)
    #[arg(long, value_name = "POLICY=FILE")]
    pub entry: Vec<String>,
    /// Alternate baseline fixture (TOML) for hardware, training and cost inputs
    #[arg(long, value_name = "FILE")]
    pub fixture: Option<PathBuf>,
    /// Skip policies whose logs fail instead of aborting, and ignore unknown log keys
    #[arg(long)]
    pub lenient: bool,
    #[command(flatten)]
    pub econ: EconArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Episode log to check
    #[arg(long, value_name = "FILE")]
    pub log: Option<PathBuf>,
    /// Ignore unknown keys with a warning instead of rejecting them
    #[arg(long)]
    pub lenient: bool,
    /// Timeout episodes must last at least this long, seconds
    #[arg(long)]
    pub sla_timeout: Option<f64>,
}

/// Parse arguments and run. Normal output goes to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Simulate(args) => cmd_simulate(&args, &config, out),
        Command::Evaluate(args) => cmd_evaluate(&args, &config, out),
        Command::Sensitivity(args) => cmd_sensitivity(&args, &config, out),
        Command::Breakeven(args) => cmd_breakeven(&args, &config, out),
        Command::Leaderboard(args) => cmd_leaderboard(&args, &config, out),
        Command::Validate(args) => cmd_validate(&args, &config, out),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_output(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| io_err(path, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

pub fn cmd_simulate(args: &SimulateArgs, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let scenario_path = args.scenario.as_ref().or(config.scenario.as_ref());
    let mut file = match scenario_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            ScenarioFile::from_toml_str(&text)?
        }
        None => ScenarioFile::default(),
    };
    let level = match args.level {
        Some(level) => Some(level),
        None => parse_key::<Level>("level", config.level.as_deref())?,
    };
    if let Some(id) = args.policy.as_ref().or(config.policy.as_ref()) {
        file.policy = Some(id.clone());
    }
    let (mut scenario, policy): (ScenarioConfig, PolicySpec) = file.resolve(level)?;
    if let Some(n) = args.episodes.or(config.episodes) {
        scenario.n_episodes = n;
    }
    if let Some(seed) = args.seed.or(config.seed) {
        scenario.master_seed = seed;
    }
    if scenario.n_episodes == 0 {
        return Err(CliError::Validation("--episodes must be >= 1".into()));
    }
    let path = args
        .out
        .as_ref()
        .or(config.out.as_ref())
        .ok_or_else(|| CliError::Validation("simulate needs --out".into()))?;

    log::info!(
        "simulating {} episodes of {} with {}",
        scenario.n_episodes,
        scenario.scenario_id,
        policy.id()
    );
    let records = match args.workers.or(config.workers) {
        Some(0) => return Err(CliError::Validation("--workers must be >= 1".into())),
        Some(workers) => run_batch_with_workers(&scenario, &policy, workers)?,
        None => run_batch(&scenario, &policy)?,
    };
    costnav::log::write_log(path, &records).map_err(|e| io_err(path, e))?;
    let count = |t: Termination| records.iter().filter(|r| r.termination == t).count();
    say(
        out,
        &format!(
            "{} episodes: {} Arrive, {} Collision, {} Timeout -> {}",
            records.len(),
            count(Termination::Arrive),
            count(Termination::Collision),
            count(Termination::Timeout),
            path.display()
        ),
    )
}

/// Assemble the economics inputs from fixture, log and overrides.
fn econ_inputs(
    source: &SourceArgs,
    econ: &EconArgs,
    metrics: Option<&MetricArgs>,
    config: &RunConfig,
) -> Result<EconInputs, CliError> {
    let baseline = load_baseline(source.fixture.as_ref(), source.paper_baseline, config)?;
    let mut inputs = baseline.inputs();
    apply_econ(&mut inputs, econ, config)?;

    let log_path = if source.paper_baseline {
        None
    } else {
        source.log.as_ref().or(config.log.as_ref())
    };
    if let Some(path) = log_path {
        let lenient = source.lenient || config.lenient.unwrap_or(false);
        let timeout = inputs.params.sla_timeout_s;
        let records = read_log(
            path,
            &ReadOptions {
                strict: !lenient,
                timeout_s: timeout,
            },
        )?;
        let summary = aggregate_with(&records, AggregateOptions { sla_timeout_s: timeout })?;
        inputs.metrics = to_run_metrics(&summary);
    }
    if let Some(m) = metrics {
        if let Some(c) = m.collision.or(config.collision_rate) {
            inputs.metrics.collision_rate = c;
        }
        if let Some(s) = m.sla.or(config.sla_compliance) {
            inputs.metrics.sla_compliance = s;
        }
    }
    build_report(&inputs)?;
    Ok(inputs)
}

fn load_baseline(fixture: Option<&PathBuf>, paper_baseline: bool, config: &RunConfig) -> Result<Baseline, CliError> {
    let bundled = paper_baseline || (fixture.is_none() && config.paper_baseline.unwrap_or(false));
    match fixture.or(config.fixture.as_ref()) {
        Some(path) if !bundled => Ok(Baseline::load(path)?),
        _ => Ok(Baseline::bundled()),
    }
}

fn apply_econ(inputs: &mut EconInputs, econ: &EconArgs, config: &RunConfig) -> Result<(), CliError> {
    let p = &mut inputs.params;
    let overrides = [
        (&mut p.c_elec, econ.c_elec.or(config.c_elec)),
        (&mut p.c_shock, econ.c_shock.or(config.c_shock)),
        (&mut p.r_base, econ.r_base.or(config.r_base)),
        (&mut p.sla_timeout_s, econ.sla_timeout.or(config.sla_timeout_s)),
        (&mut p.p_failure, econ.p_failure.or(config.p_failure)),
        (&mut p.c_human_op, econ.c_human_op.or(config.c_human_op)),
    ];
    for (target, value) in overrides {
        if let Some(v) = value {
            *target = v;
        }
    }
    if let Some(hr) = econ.runtime_hr.or(config.target_runtime_hr) {
        inputs.projection.target_runtime_hr = Some(hr);
    }
    if econ.distance_scale || config.distance_scale_maintenance.unwrap_or(false) {
        inputs.projection.distance_scale_maintenance = true;
    }
    inputs.settlement = match econ.settlement {
        Some(s) => s,
        None => parse_key("settlement", config.settlement.as_deref())?.unwrap_or_default(),
    };
    inputs.deliveries_per_day = econ.deliveries_per_day.or(config.deliveries_per_day);
    inputs.params.validate()?;
    inputs.projection.validate()?;
    Ok(())
}

fn output_format(output: &OutputArgs, config: &RunConfig) -> Result<Format, CliError> {
    match output.format {
        Some(f) => Ok(f),
        None => Ok(parse_key("format", config.format.as_deref())?.unwrap_or(Format::Table)),
    }
}

fn output_path<'a>(output: &'a OutputArgs, config: &'a RunConfig) -> Option<&'a Path> {
    output.out.as_deref().or(config.out.as_deref())
}

pub fn cmd_evaluate(args: &EvaluateArgs, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let inputs = econ_inputs(&args.source, &args.econ, Some(&args.metrics), config)?;
    let report = build_report(&inputs)?;
    let text = render(Artifact::Report(&report), output_format(&args.output, config)?)?;
    write_output(&text, output_path(&args.output, config), out)
}

/// `NAME=LO:HI:STEPS` or `NAME=VALUE`.
pub fn parse_axis(spec: &str) -> Result<AxisRange, CliError> {
    let bad = |why: &str| CliError::Validation(format!("axis `{spec}`: {why}"));
    let (name, range) = spec.split_once('=').ok_or_else(|| bad("expected NAME=LO:HI:STEPS"))?;
    let axis: Axis = name.trim().parse().map_err(|e: String| bad(&e))?;
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
    match parts.as_slice() {
        [value] => Ok(AxisRange::point(axis, num(value)?)),
        [lo, hi, steps] => {
            let steps = steps.parse().map_err(|_| bad(&format!("`{steps}` is not a step count")))?;
            Ok(AxisRange::new(axis, num(lo)?, num(hi)?, steps))
        }
        _ => Err(bad("expected NAME=LO:HI:STEPS or NAME=VALUE")),
    }
}

pub fn cmd_sensitivity(args: &SensitivityArgs, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let baseline = econ_inputs(&args.source, &args.econ, Some(&args.metrics), config)?;
    let specs: Vec<String> = if args.axis.is_empty() {
        config.axes.clone().unwrap_or_default()
    } else {
        args.axis.clone()
    };
    let axes = specs.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec { axes, baseline };
    let format = output_format(&args.output, config)?;
    let free = match args.frontier {
        Some(axis) => Some(axis),
        None => parse_key::<Axis>("frontier", config.frontier.as_deref())?,
    };
    match free {
        None => {
            let grid = sweep(&spec)?;
            let text = render(Artifact::Grid(&grid), format)?;
            write_output(&text, output_path(&args.output, config), out)
        }
        Some(axis) => {
            let points = frontier(&spec, axis)?;
            let text = render(Artifact::Frontier(&points), format)?;
            write_output(&text, output_path(&args.output, config), out)?;
            let missing = points
                .iter()
                .filter(|p| matches!(p.solution, FrontierSolution::NoRoot { .. }))
                .count();
            if missing > 0 {
                return Err(CliError::Infeasible(format!(
                    "{missing} of {} frontier points have no break-even {axis} in the requested range",
                    points.len()
                )));
            }
            Ok(())
        }
    }
}

pub fn cmd_breakeven(args: &BreakevenArgs, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let inputs = econ_inputs(&args.source, &args.econ, Some(&args.metrics), config)?;
    let report = build_report(&inputs)?;
    say(out, &format!("Profit ($/run): {}", costnav::econ::fixed(report.profit, 3)))?;
    say(out, &format!("BEP: {}", report.bep))?;

    let path = output_path(&args.output, config);
    let requested_format = args.output.format.is_some() || config.format.is_some();
    if path.is_some() || requested_format {
        let n_max = args.curve_max.or(config.curve_max).unwrap_or(match report.bep {
            Bep::Runs(n) => n.saturating_add(n / 4).max(1000),
            Bep::NotViable => 1000,
        });
        let curve = bep_curve(&report, n_max)?;
        let text = render(Artifact::Curve(&curve), output_format(&args.output, config)?)?;
        write_output(&text, path, out)?;
    }
    Ok(())
}

/// `POLICY=FILE`.
pub fn parse_entry(spec: &str) -> Result<LeaderboardInput, CliError> {
    match spec.split_once('=') {
        Some((id, path)) if !id.trim().is_empty() && !path.trim().is_empty() => Ok(LeaderboardInput {
            policy_id: id.trim().to_string(),
            log_path: PathBuf::from(path.trim()),
        }),
        _ => Err(CliError::Validation(format!("entry `{spec}`: expected POLICY=FILE"))),
    }
}

pub fn cmd_leaderboard(args: &LeaderboardArgs, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let specs = if args.entry.is_empty() {
        config.entries.clone().unwrap_or_default()
    } else {
        args.entry.clone()
    };
    let inputs = specs.iter().map(|s| parse_entry(s)).collect::<Result<Vec<_>, _>>()?;
    if inputs.is_empty() {
        return Err(CliError::Validation("leaderboard needs at least one --entry".into()));
    }
    let lenient = args.lenient || config.lenient.unwrap_or(false);
    let baseline = load_baseline(args.fixture.as_ref(), false, config)?;
    let mut econ_inputs = baseline.inputs();
    apply_econ(&mut econ_inputs, &args.econ, config)?;
    let mut shared = EconConfig::from_inputs(&econ_inputs);
    shared.read.strict = !lenient;
    let board = leaderboard(&inputs, &shared, lenient)?;
    for (policy, reason) in &board.skipped {
        log::warn!("skipped {policy}: {reason}");
    }
    let text = render(Artifact::Leaderboard(&board), output_format(&args.output, config)?)?;
    write_output(&text, output_path(&args.output, config), out)
}

pub fn cmd_validate(args: &ValidateArgs, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let path = args
        .log
        .as_ref()
        .or(config.log.as_ref())
        .ok_or_else(|| CliError::Validation("validate needs --log".into()))?;
    let opts = ReadOptions {
        strict: !(args.lenient || config.lenient.unwrap_or(false)),
        timeout_s: args.sla_timeout.or(config.sla_timeout_s).unwrap_or(600.0),
    };
    let records = read_log(path, &opts).map_err(|e| match e {
        LogError::Io(io) => io_err(path, io),
        other => CliError::Validation(format!("{}: {other}", path.display())),
    })?;
    say(out, &format!("{}: {} valid records", path.display(), records.len()))
}

/// Initialise stderr logging; warnings only unless `verbose`.
pub fn init_logging(verbose: bool) {
    let level = if verbose {
        log::LevelFilter::Info
    } else {
        log::LevelFilter::Warn
    };
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).try_init();
}
