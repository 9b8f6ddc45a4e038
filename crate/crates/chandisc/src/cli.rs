// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Every command reads JSON artifacts, runs one library stage, and writes
//! a provenance-wrapped JSON artifact to `--out` or stdout, so commands
//! chain through files: `state make` feeds `detect`, `construct` feeds
//! `verify` and `simulate`. Domain failures print one JSON line
//! (`{"error": code, "detail": ...}`) on stderr and exit 1; usage errors
//! exit 2.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channel::{apply_tensor_identity, classify};
use crate::construct::{
    eb_mix, normalize_to_tp, state_to_channels_with, transpose_channels_closed_form, verify_pair,
    ChannelPair, EBPair, XiMode,
};
use crate::detect::{builtin_maps, detect_entanglement, negativity, NegativityResult,
    PositiveMapSpec};
use crate::discriminate::{
    advantage_report, eb_advantage_report, helstrom, simulate_experiment, DiscriminationReport,
    HelstromResult, SimulationResult,
};
use crate::error::{Error, Result};
use crate::io::{
    csv_line, csv_number, envelope_json, hash_file, read_channel_pair, read_state,
    resolve_out_dir, RunProvenance,
};
use crate::linalg::{trace_product, DimPair};
use crate::state::{bell_state, isotropic_state, sample_random_pure, sample_separable,
    validate_state, DensityMatrix};
use crate::tol::Tolerances;

/// Entanglement detection through channel discrimination.
#[derive(Debug, Parser)]
#[command(name = "chandisc", version, about)]
pub struct Cli {
    /// Root seed; every random stage derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Omit timestamps so identical runs produce identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create or validate state files.
    State {
        #[command(subcommand)]
        command: StateCommand,
    },
    /// Inspect channel files.
    Channel {
        #[command(subcommand)]
        command: ChannelCommand,
    },
    /// Scan the positive-map registry for entanglement in a state.
    Detect {
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the channel pair a detected state powers.
    Construct {
        state: PathBuf,
        /// Mix both channels toward full depolarizing: a weight in [0, 1]
        /// or `auto` for the largest certified entanglement-breaking mix.
        #[arg(long)]
        eb: Option<String>,
        /// How the shared completion term is realized.
        #[arg(long, value_enum, default_value_t)]
        xi_mode: XiModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check the invariants of a constructed pair file.
    Verify {
        pair: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play the discrimination game shot by shot with the best
    /// measurement.
    Simulate {
        state: PathBuf,
        pair: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full advantage report for one probe, or a CSV sweep.
    Report {
        /// Probe state file; omitted only with `--sweep`.
        state: Option<PathBuf>,
        /// Sweep a state family against the closed-form pair instead of
        /// reading a probe file; output is CSV.
        #[arg(long, value_enum)]
        sweep: Option<SweepKind>,
        /// Local dimension for the sweep family.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Number of sweep points over the parameter range [0, 1].
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End-to-end run: detect, construct, verify, report, simulate, and
    /// summarize into a directory of artifacts.
    Pipeline {
        state: PathBuf,
        /// Output directory; falls back to CHANDISC_OUT_DIR, then
        /// `./chandisc-pipeline`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also build and report an entanglement-broken mixture.
        #[arg(long)]
        eb: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum StateCommand {
    /// Write a state from one of the built-in families.
    Make {
        #[arg(long, value_enum)]
        kind: StateKind,
        /// Local dimension for bell and isotropic states.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Visibility for the isotropic family.
        #[arg(long)]
        visibility: Option<f64>,
        /// Factor dimensions, comma separated, for sampled states.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Ensemble size for sampled separable states.
        #[arg(long, default_value_t = 4)]
        terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the full state validation on a file.
    Validate { state: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StateKind {
    Bell,
    Isotropic,
    RandomPure,
    Separable,
}

#[derive(Debug, Subcommand)]
pub enum ChannelCommand {
    /// Report which structural properties a stored map satisfies.
    Classify { channel: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepKind {
    Isotropic,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum XiModeArg {
    #[default]
    Block,
    Purification,
}

impl From<XiModeArg> for XiMode {
    fn from(arg: XiModeArg) -> Self {
        match arg {
            XiModeArg::Block => XiMode::Block,
            XiModeArg::Purification => XiMode::Purification,
        }
    }
}

/// Parse the `--eb` argument: a weight, or `auto` for the bisected
/// maximum certified weight.
fn parse_eb(arg: &str) -> Result<Option<f64>> {
    if arg == "auto" {
        return Ok(None);
    }
    arg.parse::<f64>().map(Some).map_err(|_| Error::Format {
        detail: format!("--eb expects a number in [0, 1] or 'auto', got '{arg}'"),
    })
}

fn emit<T: Serialize>(out: Option<&Path>, prov: &RunProvenance, data: &T) -> Result<()> {
    let text = envelope_json(prov, data)?;
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_text(out: Option<&Path>, prov: &RunProvenance, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".provenance.json");
            let mut body = serde_json::to_string_pretty(prov)?;
            body.push('\n');
            fs::write(PathBuf::from(sidecar), body)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StateSummary {
    valid: bool,
    dims: Vec<usize>,
    purity: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConstructOutput<'a> {
    pair: &'a ChannelPair,
    map: &'a PositiveMapSpec,
    negativity: &'a NegativityResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    eb: Option<&'a EBPair>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SimulateOutput {
    helstrom: HelstromResult,
    simulation: SimulationResult,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReportOutput<'a> {
    base: &'a DiscriminationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    eb: Option<&'a DiscriminationReport>,
}

/// Parse arguments from the process environment and run; returns the
/// process exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    match run(cli, &command_line) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", err.to_json_line());
            1
        }
    }
}

/// Dispatch a parsed command line. `command_line` is recorded in
/// provenance verbatim.
pub fn run(cli: Cli, command_line: &str) -> Result<i32> {
    let tol = Tolerances::default();
    let with_timestamp = !cli.no_timestamp;
    let mut prov = RunProvenance::new(command_line, &tol, with_timestamp);
    let seed = cli.seed;

    match cli.command {
        Command::State { command } => match command {
            StateCommand::Make { kind, d, visibility, dims, terms, out } => {
                let state = make_state(kind, d, visibility, dims, terms, seed, &mut prov, &tol)?;
                emit(out.as_deref(), &prov, &state)?;
            }
            StateCommand::Validate { state } => {
                prov.record_input("state", hash_file(&state)?);
                let state = read_state(&state, &tol)?;
                let purity = trace_product(state.mat(), state.mat()).re;
                let summary = StateSummary {
                    valid: true,
                    dims: state.dims().to_vec(),
                    purity,
                };
                emit(None, &prov, &summary)?;
            }
        },
        Command::Channel { command } => match command {
            ChannelCommand::Classify { channel } => {
                prov.record_input("channel", hash_file(&channel)?);
                let op = crate::io::read_superoperator(&channel)?;
                let report = classify(&op, &tol);
                emit(None, &prov, &report)?;
            }
        },
        Command::Detect { state, out } => {
            prov.record_input("state", hash_file(&state)?);
            prov.record_seed("positive-map-probes", 0);
            let rho = read_state(&state, &tol)?;
            let result = detect_entanglement(&rho, &tol)?;
            emit(out.as_deref(), &prov, &result)?;
        }
        Command::Construct { state, eb, xi_mode, out } => {
            prov.record_input("state", hash_file(&state)?);
            prov.record_seed("positive-map-probes", 0);
            let rho = read_state(&state, &tol)?;
            let built = state_to_channels_with(&rho, xi_mode.into(), &tol)?;
            let eb_pair = match eb.as_deref() {
                Some(arg) => Some(eb_mix(&built.pair, parse_eb(arg)?, &tol)?),
                None => None,
            };
            let output = ConstructOutput {
                pair: &built.pair,
                map: &built.map,
                negativity: &built.negativity,
                eb: eb_pair.as_ref(),
            };
            emit(out.as_deref(), &prov, &output)?;
        }
        Command::Verify { pair, out } => {
            prov.record_input("pair", hash_file(&pair)?);
            let pair = read_channel_pair(&pair)?;
            let report = verify_pair(&pair, &tol)?;
            emit(out.as_deref(), &prov, &report)?;
            if let Some(failure) = report.first_failure() {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                let detail = format!("verification failed: {}", failed.join(", "));
                let line = serde_json::json!({
                    "error": failure.error_code,
                    "detail": detail,
                });
                eprintln!("{line}");
                return Ok(1);
            }
        }
        Command::Simulate { state, pair, shots, out } => {
            prov.record_input("state", hash_file(&state)?);
            prov.record_input("pair", hash_file(&pair)?);
            prov.record_seed("simulate-experiment", seed);
            let rho = read_state(&state, &tol)?;
            let pair = read_channel_pair(&pair)?;
            let out0 = apply_tensor_identity(&pair.psi0, &rho)?;
            let out1 = apply_tensor_identity(&pair.psi1, &rho)?;
            let best = helstrom(&out0, &out1, &tol)?;
            let simulation =
                simulate_experiment(&out0, &out1, &best.measurement, shots, seed, &tol)?;
            let output = SimulateOutput { helstrom: best, simulation };
            emit(out.as_deref(), &prov, &output)?;
        }
        Command::Report { state, sweep, d, points, out } => match sweep {
            Some(SweepKind::Isotropic) => {
                prov.record_seed("positive-map-probes", 0);
                prov.record_seed("seesaw-no-ancilla", seed);
                prov.record_seed("seesaw-diamond", seed);
                let csv = isotropic_sweep(d, points, seed, &tol)?;
                emit_text(out.as_deref(), &prov, &csv)?;
            }
            None => {
                let Some(state) = state else {
                    Cli::command()
                        .error(
                            clap::error::ErrorKind::MissingRequiredArgument,
                            "a probe state file is required unless --sweep is given",
                        )
                        .exit();
                };
                prov.record_input("state", hash_file(&state)?);
                prov.record_seed("positive-map-probes", 0);
                prov.record_seed("seesaw-no-ancilla", seed);
                prov.record_seed("seesaw-diamond", seed);
                let rho = read_state(&state, &tol)?;
                let built = state_to_channels_with(&rho, XiMode::Block, &tol)?;
                let report = advantage_report(&built.pair, &rho, &built.negativity, seed, &tol)?;
                let output = ReportOutput { base: &report, eb: None };
                emit(out.as_deref(), &prov, &output)?;
            }
        },
        Command::Pipeline { state, out_dir, eb, shots } => {
            let dir = resolve_out_dir(out_dir, "chandisc-pipeline");
            return run_pipeline(&state, &dir, eb.as_deref(), shots, seed, prov, &tol);
        }
    }
    Ok(0)
}

fn make_state(
    kind: StateKind,
    d: usize,
    visibility: Option<f64>,
    dims: Option<Vec<usize>>,
    terms: usize,
    seed: u64,
    prov: &mut RunProvenance,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    let positive_dim = |value: usize| -> Result<usize> {
        if value == 0 {
            return Err(Error::ParameterOutOfRange { name: "dims", value: 0.0 });
        }
        Ok(value)
    };
    match kind {
        StateKind::Bell => {
            positive_dim(d)?;
            Ok(bell_state(d))
        }
        StateKind::Isotropic => {
            positive_dim(d)?;
            isotropic_state(d, visibility.unwrap_or(1.0))
        }
        StateKind::RandomPure => {
            let dims = dims.unwrap_or_else(|| vec![d]);
            let mut total = 1usize;
            for dim in &dims {
                total *= positive_dim(*dim)?;
            }
            prov.record_seed("sample-random-pure", seed);
            let pure = sample_random_pure(total, seed);
            validate_state(pure.mat(), &dims, tol)
        }
        StateKind::Separable => {
            let dims = dims.unwrap_or_else(|| vec![2, 2]);
            let [first, second] = dims[..] else {
                return Err(Error::DimensionMismatch {
                    detail: format!(
                        "separable sampling needs exactly two factor dimensions, got {}",
                        dims.len()
                    ),
                });
            };
            positive_dim(first)?;
            positive_dim(second)?;
            if terms == 0 {
                return Err(Error::ParameterOutOfRange { name: "terms", value: 0.0 });
            }
            prov.record_seed("sample-separable", seed);
            let (_, state) = sample_separable(DimPair::new(first, second), terms, seed);
            Ok(state)
        }
    }
}

/// Sweep isotropic visibility from zero to one against the closed-form
/// transposition pair, certifying each probe's negativity against the
/// registry transposition map. Returns CSV text.
fn isotropic_sweep(d: usize, points: usize, seed: u64, tol: &Tolerances) -> Result<String> {
    if points < 2 {
        return Err(Error::ParameterOutOfRange { name: "points", value: points as f64 });
    }
    let pair = transpose_channels_closed_form(d, tol)?;
    let maps = builtin_maps(d, tol)?;
    let transpose = maps
        .into_iter()
        .find(|m| m.name() == "transpose")
        .expect("registry always carries the transposition map");
    let tp = normalize_to_tp(&transpose, tol)?;

    let mut csv = csv_line([
        "index",
        "visibility",
        "negativity",
        "probeDistance",
        "separableBound",
        "closedFormBound",
        "advantage",
        "predictedAdvantage",
        "diamondLowerBound",
    ]);
    for index in 0..points {
        let visibility = index as f64 / (points - 1) as f64;
        let rho = isotropic_state(d, visibility)?;
        let neg = negativity(&tp, &rho, tol)?;
        let report = advantage_report(&pair, &rho, &neg, seed, tol)?;
        csv.push_str(&csv_line([
            index.to_string(),
            csv_number(visibility),
            csv_number(report.negativity),
            csv_number(report.probe_distance),
            csv_number(report.separable_bound),
            csv_number(report.closed_form_bound),
            csv_number(report.advantage),
            csv_number(report.predicted_advantage),
            csv_number(report.diamond_lower_bound),
        ]));
    }
    Ok(csv)
}

fn run_pipeline(
    state_path: &Path,
    dir: &Path,
    eb: Option<&str>,
    shots: u64,
    seed: u64,
    mut prov: RunProvenance,
    tol: &Tolerances,
) -> Result<i32> {
    fs::create_dir_all(dir)?;
    let mut stage = "read-state";
    let result = pipeline_stages(state_path, dir, eb, shots, seed, &mut prov, tol, &mut stage);
    if let Err(err) = &result {
        let marker = serde_json::json!({
            "stage": stage,
            "error": err.code(),
            "detail": err.to_string(),
        });
        // Keep partial artifacts; the marker records where the run died.
        let _ = fs::write(dir.join("FAILED"), format!("{marker}\n"));
    }
    result.map(|_| 0)
}

#[allow(clippy::too_many_arguments)]
fn pipeline_stages(
    state_path: &Path,
    dir: &Path,
    eb: Option<&str>,
    shots: u64,
    seed: u64,
    prov: &mut RunProvenance,
    tol: &Tolerances,
    stage: &mut &'static str,
) -> Result<()> {
    prov.record_input("state", hash_file(state_path)?);
    prov.record_seed("positive-map-probes", 0);
    prov.record_seed("seesaw-no-ancilla", seed);
    prov.record_seed("seesaw-diamond", seed);
    prov.record_seed("simulate-experiment", seed);
    let rho = read_state(state_path, tol)?;

    *stage = "detect";
    let detection = detect_entanglement(&rho, tol)?;
    crate::io::write_envelope(&dir.join("detection.json"), prov, &detection)?;
    if !detection.detected {
        return Err(Error::NotDetected);
    }

    *stage = "construct";
    let built = state_to_channels_with(&rho, XiMode::Block, tol)?;
    let eb_pair = match eb {
        Some(arg) => Some(eb_mix(&built.pair, parse_eb(arg)?, tol)?),
        None => None,
    };
    let constructed = ConstructOutput {
        pair: &built.pair,
        map: &built.map,
        negativity: &built.negativity,
        eb: eb_pair.as_ref(),
    };
    crate::io::write_envelope(&dir.join("constructed.json"), prov, &constructed)?;

    *stage = "verify";
    let verification = verify_pair(&built.pair, tol)?;
    crate::io::write_envelope(&dir.join("verification.json"), prov, &verification)?;
    if let Some(failure) = verification.first_failure() {
        return Err(Error::Format {
            detail: format!("constructed pair failed verification at {}", failure.name),
        });
    }

    *stage = "report";
    let base = advantage_report(&built.pair, &rho, &built.negativity, seed, tol)?;
    let eb_report = match &eb_pair {
        Some(pair) => Some(eb_advantage_report(pair, &rho, &built.negativity, seed, tol)?),
        None => None,
    };
    let report = ReportOutput { base: &base, eb: eb_report.as_ref() };
    crate::io::write_envelope(&dir.join("report.json"), prov, &report)?;

    *stage = "simulate";
    let out0 = apply_tensor_identity(&built.pair.psi0, &rho)?;
    let out1 = apply_tensor_identity(&built.pair.psi1, &rho)?;
    let best = helstrom(&out0, &out1, tol)?;
    let simulation = simulate_experiment(&out0, &out1, &best.measurement, shots, seed, tol)?;
    let sim_output = SimulateOutput { helstrom: best, simulation: simulation.clone() };
    crate::io::write_envelope(&dir.join("simulation.json"), prov, &sim_output)?;

    *stage = "summarize";
    let dims = rho
        .dims()
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("x");
    let mut text = String::new();
    text.push_str(&format!("input: {}\n", state_path.display()));
    text.push_str(&format!("dims: {dims}\n"));
    text.push_str(&format!("route: {}\n", built.map.name()));
    for (label, value) in [
        ("negativity", base.negativity),
        ("c", base.c),
        ("probe distance", base.probe_distance),
        ("separable bound", base.separable_bound),
        ("advantage", base.advantage),
        ("predicted advantage", base.predicted_advantage),
        ("diamond lower bound", base.diamond_lower_bound),
        ("probe success", base.probe_success_probability),
        ("separable success", base.separable_success_probability),
    ] {
        text.push_str(&format!("{label}: {}\n", csv_number(value)));
    }
    text.push_str(&format!(
        "simulated success: {} ({} shots)\n",
        csv_number(simulation.success_rate),
        simulation.shots
    ));
    if let (Some(pair), Some(report)) = (&eb_pair, &eb_report) {
        text.push_str(&format!("eb weight: {}\n", csv_number(pair.p)));
        text.push_str(&format!("eb ball certified: {}\n", pair.ball_certified));
        text.push_str(&format!("eb advantage: {}\n", csv_number(report.advantage)));
    }
    fs::write(dir.join("summary.txt"), &text)?;

    let mut csv = csv_line([
        "route",
        "mixingWeight",
        "c",
        "negativity",
        "probeDistance",
        "separableBound",
        "closedFormBound",
        "advantage",
        "predictedAdvantage",
        "diamondLowerBound",
        "probeSuccess",
        "separableSuccess",
        "simulatedSuccessRate",
    ]);
    csv.push_str(&csv_line([
        built.map.name().to_string(),
        csv_number(base.mixing_weight),
        csv_number(base.c),
        csv_number(base.negativity),
        csv_number(base.probe_distance),
        csv_number(base.separable_bound),
        csv_number(base.closed_form_bound),
        csv_number(base.advantage),
        csv_number(base.predicted_advantage),
        csv_number(base.diamond_lower_bound),
        csv_number(base.probe_success_probability),
        csv_number(base.separable_success_probability),
        csv_number(simulation.success_rate),
    ]));
    if let Some(report) = &eb_report {
        csv.push_str(&csv_line([
            "eb".to_string(),
            csv_number(report.mixing_weight),
            csv_number(report.c),
            csv_number(report.negativity),
            csv_number(report.probe_distance),
            csv_number(report.separable_bound),
            csv_number(report.closed_form_bound),
            csv_number(report.advantage),
            csv_number(report.predicted_advantage),
            csv_number(report.diamond_lower_bound),
            csv_number(report.probe_success_probability),
            csv_number(report.separable_success_probability),
            String::new(),
        ]));
    }
    fs::write(dir.join("summary.csv"), &csv)?;
    Ok(())
}
