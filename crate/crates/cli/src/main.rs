use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sdi_cert::commands::{
    cmd_certify, cmd_optimize, cmd_score, cmd_sweep, cmd_verify, CertifyInput, OptimizeOptions,
    OptimizeSource,
};
use sdi_cert::suites::Suite;
use sdi_cert::{configure_threads, CliResult};
use sdi_core::optimize::SeesawMode;

/// Semi-device-independent certification of multipartite entangled states
/// and measurements.
#[derive(Parser)]
#[command(name = "sdi-cert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score the strategy in a scenario file.
    Score {
        scenario: PathBuf,
        /// Include the win probability of every input tuple.
        #[arg(long)]
        per_input: bool,
    },
    /// Certify from an observed score or a CSV of conditional probabilities.
    Certify {
        #[arg(long, conflicts_with = "distribution", required_unless_present = "distribution")]
        score: Option<f64>,
        #[arg(long)]
        distribution: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Required excess over each bound, e.g. a statistical error bar.
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
    },
    /// Sweep the visibility of a scenario template and write CSV.
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Paper)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a high-scoring strategy by seesaw.
    Optimize {
        /// Catalog state, e.g. `w`, `ghz:3:2`, `maximally_mixed:2:2`.
        #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
        state: Option<String>,
        /// Scenario file whose strategy seeds restart 0.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Unitary)]
        mode: ModeArg,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        /// Kraus rank in channel mode (default d).
        #[arg(long)]
        kraus_rank: Option<usize>,
        /// Include the trace and the strategy matrices.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
    Bounds,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Unitary,
    Channel,
}

fn run(cli: Cli) -> CliResult<(String, bool)> {
    configure_threads()?;
    let text = match cli.command {
        Command::Score { scenario, per_input } => cmd_score(&scenario, per_input)?,
        Command::Certify {
            score,
            distribution,
            n,
            d,
            margin,
        } => {
            let input = match (&score, &distribution) {
                (Some(s), _) => CertifyInput::Score(*s),
                (None, Some(p)) => CertifyInput::Distribution(p),
                (None, None) => unreachable!("clap requires one input"),
            };
            cmd_certify(input, n, d, margin)?
        }
        Command::Sweep { spec, out, force } => cmd_sweep(&spec, &out, force)?,
        Command::Verify { suite, seed } => {
            let suite = match suite {
                SuiteArg::Paper => Suite::Paper,
                SuiteArg::Bounds => Suite::Bounds,
                SuiteArg::Oracle => Suite::Oracle,
            };
            return Ok(cmd_verify(suite, seed));
        }
        Command::Optimize {
            state,
            scenario,
            mode,
            restarts,
            seed,
            max_iter,
            kraus_rank,
            full,
            out,
            force,
        } => {
            let source = match (&state, &scenario) {
                (Some(s), _) => OptimizeSource::StateRef(s),
                (None, Some(p)) => OptimizeSource::Scenario(p),
                (None, None) => unreachable!("clap requires one source"),
            };
            let opts = OptimizeOptions {
                mode: match mode {
                    ModeArg::Unitary => SeesawMode::UnitaryOnly,
                    ModeArg::Channel => SeesawMode::GeneralChannel,
                },
                restarts,
                seed,
                max_iter,
                kraus_rank,
                full,
                out: out.as_deref(),
                force,
            };
            cmd_optimize(source, &opts)?
        }
    };
    Ok((text, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
