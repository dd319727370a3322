//! `qtele`: CHSH evaluation, single-configuration teleportation transcripts
//! and fidelity sweeps.
//!
//! Exit codes: 0 success, 1 internal invariant failure, 2 usage or domain error.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qtele::entanglement::{
    canonical_setting, chsh_expectation_mixed, chsh_expectation_pure, violates_classical_bound, CLASSICAL_BOUND,
    TSIRELSON_BOUND,
};
use qtele::linalg::{tensor_vec, DensityMatrix};
use qtele::qubit::{bell_basis, ket0, singlet};
use qtele::sweep::{parse_scalar, run_sweep, write_csv, write_json, AxisRange, SweepConfig};
use qtele::teleport::Teleporter;
use qtele::{tol, BlochQubit, CorrectionMap, EntangledChannel, Error};

const EXIT_INVARIANT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const PROTOCOL_TOLERANCE: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "qtele", version, about = "Two-qubit entanglement and teleportation fidelity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the CHSH functional with the canonical observables.
    Chsh(ChshArgs),
    /// Run the teleportation protocol for one input state and channel; prints a JSON transcript.
    Teleport(TeleportArgs),
    /// Tabulate closed-form, protocol and Monte Carlo fidelity over a (theta, phi, alpha) grid.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ChshState {
    PhiPlus,
    Singlet,
    #[value(name = "00")]
    Zero,
}

#[derive(Args)]
struct ChshArgs {
    #[arg(long, value_enum, default_value = "phi-plus")]
    state: ChshState,
    /// Negate B and B'.
    #[arg(long)]
    flip_b: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Correction {
    Standard,
    ZetaListing,
}

impl From<Correction> for CorrectionMap {
    fn from(c: Correction) -> Self {
        match c {
            Correction::Standard => CorrectionMap::Standard,
            Correction::ZetaListing => CorrectionMap::ZetaListing,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Monte Carlo shots (0 disables sampling).
    #[arg(long, default_value_t = 0)]
    shots: u64,
    /// Root RNG seed.
    #[arg(long, env = "QTS_SEED", default_value_t = 42)]
    seed: u64,
    /// Read theta and phi in degrees instead of radians.
    #[arg(long)]
    degrees: bool,
    /// Receiver's correction assignment.
    #[arg(long, value_enum, default_value = "standard")]
    correction: Correction,
}

#[derive(Args)]
struct TeleportArgs {
    /// Polar angle of the input qubit; accepts multiples of pi, e.g. pi/2.
    #[arg(long, value_parser = parse_scalar, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_parser = parse_scalar, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Channel coefficient alpha in (0, 1/sqrt(2)].
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    alpha: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    /// START:STOP:STEPS or a single value.
    #[arg(long, default_value = "0:pi:21")]
    theta: AxisRange,
    #[arg(long, default_value = "0")]
    phi: AxisRange,
    #[arg(long, default_value = "0.1:0.7:7")]
    alpha: AxisRange,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } => Failure::Usage(e.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invariant(format!("write failed: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Chsh(args) => cmd_chsh(&args),
        Command::Teleport(args) => cmd_teleport(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}

/// Six significant digits for human-facing summaries.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-4 {
        return format!("{x:.5e}");
    }
    let decimals = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cmd_chsh(args: &ChshArgs) -> Result<(), Failure> {
    let (label, state) = match args.state {
        ChshState::PhiPlus => ("phi-plus", bell_basis().phi_plus),
        ChshState::Singlet => ("singlet", singlet()),
        ChshState::Zero => ("00", tensor_vec(&ket0(), &ket0())?),
    };
    let setting = if args.flip_b { canonical_setting().with_flipped_b() } else { canonical_setting() };
    let value = chsh_expectation_pure(&state, &setting)?;
    let mixed = chsh_expectation_mixed(&DensityMatrix::pure(&state), &setting)?;

    let mut out = io::stdout().lock();
    writeln!(out, "state            {label}")?;
    writeln!(out, "setting          canonical{}", if args.flip_b { ", B and B' negated" } else { "" })?;
    writeln!(out, "value            {}  [{value}]", sig6(value))?;
    writeln!(out, "classical bound  {CLASSICAL_BOUND}")?;
    writeln!(out, "Tsirelson bound  {}  [{TSIRELSON_BOUND}]", sig6(TSIRELSON_BOUND))?;
    let verdict = if violates_classical_bound(value) { "violation" } else { "no violation" };
    writeln!(out, "verdict          {verdict}")?;

    let within = value.abs() <= TSIRELSON_BOUND + tol::EIG;
    let agree = (value - mixed).abs() < tol::EIG;
    if within && agree {
        writeln!(out, "PASS  |value| <= 2*sqrt(2) and Tr(rho*CHSH) agrees with <psi|CHSH|psi>")?;
        Ok(())
    } else {
        writeln!(out, "FAIL  within Tsirelson bound: {within}, pure/mixed agreement: {agree}")?;
        Err(Failure::Invariant("CHSH check failed".into()))
    }
}

fn angles(theta: f64, phi: f64, degrees: bool) -> (f64, f64) {
    if degrees {
        (theta.to_radians(), phi.to_radians())
    } else {
        (theta, phi)
    }
}

fn cmd_teleport(args: &TeleportArgs) -> Result<(), Failure> {
    let (theta, phi) = angles(args.theta, args.phi, args.common.degrees);
    let input = BlochQubit::new(theta, phi)?;
    let channel = EntangledChannel::new(args.alpha)?;
    let map = CorrectionMap::from(args.common.correction);
    let teleporter = Teleporter::new(input, channel, map);
    let transcript = teleporter.transcript();

    let mut doc = serde_json::to_value(&transcript).map_err(|e| Failure::Invariant(e.to_string()))?;
    let mut summary = format!(
        "average fidelity {} (closed form {})",
        sig6(transcript.average_fidelity),
        sig6(transcript.closed_form_fidelity)
    );
    if args.common.shots > 0 {
        let est = teleporter.monte_carlo(args.common.shots, args.common.seed, 0)?;
        doc["monte_carlo"] = json!({
            "shots": est.shots,
            "seed": est.seed,
            "mean": est.mean,
            "stderr": est.stderr,
            "counts": est.counts,
        });
        summary.push_str(&format!(", Monte Carlo {} +/- {}", sig6(est.mean), sig6(est.stderr)));
    }
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Failure::Invariant(e.to_string()))?;
    writeln!(out)?;
    eprintln!("{summary}");

    let gap = (transcript.average_fidelity - transcript.closed_form_fidelity).abs();
    if map == CorrectionMap::Standard && gap >= PROTOCOL_TOLERANCE {
        return Err(Failure::Invariant(format!("protocol and closed-form fidelity differ by {gap:e}")));
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let (theta, phi) =
        if args.common.degrees { (args.theta.to_radians(), args.phi.to_radians()) } else { (args.theta, args.phi) };
    let config = SweepConfig {
        theta,
        phi,
        alpha: args.alpha,
        shots: args.common.shots,
        seed: args.common.seed,
        correction: args.common.correction.into(),
    };
    let rows = run_sweep(&config)?;
    let mut out = io::BufWriter::new(io::stdout().lock());
    match args.format {
        Format::Csv => write_csv(&rows, &mut out)?,
        Format::Json => write_json(&rows, &mut out)?,
    }
    out.flush()?;

    if config.correction == CorrectionMap::Standard {
        if let Some(worst) = rows.iter().map(|r| r.protocol_gap()).reduce(f64::max) {
            if worst >= PROTOCOL_TOLERANCE {
                return Err(Failure::Invariant(format!("protocol and closed-form fidelity differ by {worst:e}")));
            }
        }
    }
    Ok(())
}
