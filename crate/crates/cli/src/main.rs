//! `qpure`: generate states, compute the Meyer-Wallach measure, verify the
//! Ising-pulse gate sequences and simulate the swap-test protocol.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 I/O,
//! malformed input or usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpure_core::io::{read_state, state_to_json, write_state, write_sweep_csv};
use qpure_core::protocol::{ProtocolReport, SubsetReport};
use qpure_core::pulse::{fidelity_deficit, phase_aligned_deviation};
use qpure_core::random::random_state;
use qpure_core::{
    convergence_sweep, cswap_sequence, gates, interaction_time, make_bell, make_cluster, make_ghz,
    make_product_state, make_w, q_direct, q_protocol_exact, q_purity, sequence_to_unitary,
    swap_sequence, three_body_sequence, CouplingModel, Error, ProtocolRun, PulseSequence,
    PureState, QubitSubset, SamplingMode, UnitaryMatrix, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

mod report;

use report::{emit, Format};

#[derive(Parser)]
#[command(name = "qpure", version, about = "Meyer-Wallach entanglement by three routes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state file.
    Gen(GenArgs),
    /// Compute Q for a state file.
    Q(QArgs),
    /// Check a pulse sequence against its target gate and report its
    /// interaction time.
    Verify(VerifyArgs),
    /// Simulate the swap-test protocol on two copies of a state.
    Protocol(ProtocolArgs),
}

#[derive(Args)]
struct OutputFormat {
    /// Machine-readable JSON output (default).
    #[arg(long, conflicts_with = "human")]
    json: bool,
    /// Human-readable output.
    #[arg(long)]
    human: bool,
}

impl OutputFormat {
    fn format(&self) -> Format {
        if self.human {
            Format::Human
        } else {
            Format::Json
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Ghz,
    W,
    Cluster,
    /// `|0...0>`, or random single-qubit factors when `--seed` is given.
    Product,
    /// Gaussian-random state; needs `--seed`.
    Random,
    /// Bell pairs on qubits (0,1), (2,3), ...; `--n` must be even.
    BellPairs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: StateKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Purity,
    Protocol,
    All,
}

#[derive(Args)]
struct QArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    route: Route,
    #[command(flatten)]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Target {
    Swap,
    Threebody,
    Cswap,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    /// Three-body angle; required for `threebody` only.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long)]
    sign_tunable: bool,
    /// Deviation tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Verify this exported pulse array instead of the built-in sequence.
    #[arg(long)]
    sequence: Option<PathBuf>,
    /// Write the verified sequence as a pulse array.
    #[arg(long)]
    export: Option<PathBuf>,
    #[command(flatten)]
    output: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Joint,
}

#[derive(Args)]
struct ProtocolArgs {
    file: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Comma-separated qubits; runs the subset-purity protocol.
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep")]
    subset: Option<Vec<usize>>,
    /// Comma-separated ascending trial counts for a convergence sweep.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
    /// CSV path for the sweep rows.
    #[arg(long, requires = "sweep")]
    csv: Option<PathBuf>,
    /// JSON report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputFormat,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Format(_) | Error::LengthMismatch { .. } => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Q(a) => cmd_q(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Protocol(a) => cmd_protocol(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn need_seed(kind: &str, seed: Option<u64>) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure::usage(format!("`gen {kind}` requires --seed")))
}

fn generate(kind: StateKind, n: usize, seed: Option<u64>) -> Result<PureState, Failure> {
    let state = match kind {
        StateKind::Ghz => make_ghz(n)?,
        StateKind::W => make_w(n)?,
        StateKind::Cluster => make_cluster(n)?,
        StateKind::Product => match seed {
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let factors = (0..n)
                    .map(|_| {
                        let s = random_state(1, &mut rng)?;
                        Ok([s.amplitudes()[0], s.amplitudes()[1]])
                    })
                    .collect::<qpure_core::Result<Vec<[C64; 2]>>>()?;
                make_product_state(&factors)?
            }
            None => {
                let zero = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
                make_product_state(&vec![zero; n])?
            }
        },
        StateKind::Random => {
            if n < 1 {
                return Err(Failure::validation("random state needs --n >= 1"));
            }
            let seed = need_seed("random", seed)?;
            random_state(n, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
        StateKind::BellPairs => {
            if n < 2 || !n.is_multiple_of(2) {
                return Err(Failure::validation("bell-pairs needs an even --n >= 2"));
            }
            (1..n / 2).fold(make_bell(), |acc, _| acc.tensor(&make_bell()))
        }
    };
    Ok(state)
}

fn cmd_gen(a: GenArgs) -> CliResult {
    let state = generate(a.kind, a.n, a.seed)?;
    match a.out {
        Some(path) => write_state(&path, &state)?,
        None => println!("{}", state_to_json(&state)?),
    }
    Ok(())
}

#[derive(Serialize)]
struct QReport {
    state: String,
    n_qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_direct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_purity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_protocol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_deviation: Option<f64>,
}

fn cmd_q(a: QArgs) -> CliResult {
    let state = read_state(&a.file)?;
    let want = |r: Route| a.route == r || a.route == Route::All;
    let direct = want(Route::Direct).then(|| q_direct(&state)).transpose()?;
    let purity = want(Route::Purity).then(|| q_purity(&state)).transpose()?;
    let protocol = want(Route::Protocol)
        .then(|| q_protocol_exact(&state))
        .transpose()?;
    let max_deviation = (a.route == Route::All).then(|| {
        let v = [direct.unwrap(), purity.unwrap(), protocol.unwrap()];
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((v[i] - v[j]).abs());
            }
        }
        worst
    });
    let report = QReport {
        state: a.file.display().to_string(),
        n_qubits: state.n_qubits(),
        q_direct: direct,
        q_purity: purity,
        q_protocol: protocol,
        max_deviation,
    };
    emit(&report, a.output.format(), None, |r| {
        let mut lines = vec![format!("state      {} ({} qubits)", r.state, r.n_qubits)];
        for (name, v) in [
            ("direct", r.q_direct),
            ("purity", r.q_purity),
            ("protocol", r.q_protocol),
        ] {
            if let Some(v) = v {
                lines.push(format!("Q {name:<9}{v:.15}"));
            }
        }
        if let Some(d) = r.max_deviation {
            lines.push(format!("max pairwise deviation {d:.3e}"));
        }
        lines.join("\n")
    })
}

#[derive(Serialize)]
struct VerifyReport {
    target: Target,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    n_pulses: usize,
    n_ising_pulses: usize,
    deviation: f64,
    fidelity_deficit: f64,
    tolerance: f64,
    g: f64,
    sign_tunable: bool,
    interaction_time: f64,
    passed: bool,
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let phi = match (a.target, a.phi) {
        (Target::Threebody, Some(phi)) => Some(phi),
        (Target::Threebody, None) => return Err(Failure::usage("threebody requires --phi")),
        (_, Some(_)) => return Err(Failure::usage("--phi only applies to threebody")),
        (_, None) => None,
    };
    let model = CouplingModel::new(a.g, a.sign_tunable)?;
    let (built, canonical): (PulseSequence, UnitaryMatrix) = match a.target {
        Target::Swap => (swap_sequence(0, 1)?, gates::swap()),
        Target::Threebody => {
            let phi = phi.unwrap_or_default();
            (three_body_sequence(phi, 0, 1, 2)?, gates::zzz_phase(phi))
        }
        Target::Cswap => (cswap_sequence(0, 1, 2)?, gates::cswap()),
    };
    let seq = match &a.sequence {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let seq = PulseSequence::from_json(&text)?;
            if seq.register_size() > canonical.n_qubits() {
                return Err(Failure::validation(format!(
                    "sequence touches {} qubits, target acts on {}",
                    seq.register_size(),
                    canonical.n_qubits()
                )));
            }
            PulseSequence::from_pulses(canonical.n_qubits(), seq.pulses().to_vec())?
        }
        None => built,
    };
    if let Some(path) = &a.export {
        write_file(path, &seq.to_json()?)?;
    }
    let u = sequence_to_unitary(&seq)?;
    let deviation = phase_aligned_deviation(&u, &canonical)?;
    let report = VerifyReport {
        target: a.target,
        phi,
        n_pulses: seq.len(),
        n_ising_pulses: seq.ising_pulses().count(),
        deviation,
        fidelity_deficit: fidelity_deficit(&u, &canonical)?,
        tolerance: a.tol,
        g: a.g,
        sign_tunable: a.sign_tunable,
        interaction_time: interaction_time(&seq, &model),
        passed: deviation < a.tol,
    };
    emit(&report, a.output.format(), None, |r| {
        format!(
            "{} pulses ({} Ising)\nphase-aligned deviation {:.3e} (tol {:.1e})\ninteraction time {:.12} (g = {}, sign tunable: {})\n{}",
            r.n_pulses,
            r.n_ising_pulses,
            r.deviation,
            r.tolerance,
            r.interaction_time,
            r.g,
            r.sign_tunable,
            if r.passed { "PASS" } else { "FAIL" }
        )
    })?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "verification failed: deviation {deviation:e} >= {}",
            a.tol
        )))
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    let mut f = fs::File::create(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    writeln!(f, "{text}")?;
    Ok(())
}

fn cmd_protocol(a: ProtocolArgs) -> CliResult {
    let state = read_state(&a.file)?;
    let label = a.file.display().to_string();
    let trials = a.trials as usize;
    let format = a.output.format();

    if let Some(indices) = a.subset {
        let subset = QubitSubset::new(indices, state.n_qubits())?;
        let report = SubsetReport::run(label, &state, &subset, trials, a.seed)?;
        return emit(&report, format, a.out.as_deref(), |r| {
            format!(
                "subset {:?}\npurity (reduced state) {:.15}\npurity (circuit)       {}\np(+)                   {:.15}\nsampled purity         {:.6} +/- {:.6} ({} trials)",
                r.subset,
                r.purity_direct,
                r.purity_circuit
                    .map_or("skipped (register too large)".to_string(), |p| format!("{p:.15}")),
                r.p_plus,
                r.purity_estimate,
                r.std_error,
                r.n_trials
            )
        });
    }

    if let Some(counts) = &a.sweep {
        let rows = convergence_sweep(&state, counts, a.seed)?;
        if let Some(path) = &a.csv {
            let f = fs::File::create(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            write_sweep_csv(f, &rows)?;
        }
    }

    let mode = match a.mode {
        Mode::Exact => SamplingMode::ExactMarginal,
        Mode::Joint => SamplingMode::FullJoint,
    };
    let run = ProtocolRun::new(state, trials, a.seed, mode)?;
    let report = ProtocolReport::run(label, &run)?;
    emit(&report, format, a.out.as_deref(), |r| {
        format!(
            "mode {:?}, seed {}, {} trials\nper-qubit p(-) {:?}\nexact p(-)     {:?}\nQ estimate {:.6} +/- {:.6}\nQ exact    {:.15}",
            r.mode,
            r.seed,
            r.n_trials,
            r.per_qubit_p_minus,
            r.per_qubit_p_minus_exact,
            r.q_estimate,
            r.std_error,
            r.q_exact
        )
    })
}
