//! Command-line front end: reproduce the worked three-signal example, run
//! fuzz campaigns against the fidelity bound and the fidelity inequality,
//! sweep the block-coding converse, and emit machine-readable reports.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status contract: 0 = all checked inequalities hold, 1 = a violation
/// was found (serialized for replay), 2 = configuration or I/O error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "fidlim",
    version,
    about = "Average-fidelity limits for quantum channels: worked example, bound fuzzing, converse sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report to this path (a stdout summary is always printed).
    #[arg(long = "out")]
    out: Option<std::path::PathBuf>,
    /// Report format. Fuzz and demo reports are JSON; converse sweeps
    /// default to CSV.
    #[arg(long = "format")]
    format: Option<Format>,
}

// Aliased so clap's derive treats each list as one parsed value rather
// than a multi-value argument.
type DimPairs = Vec<(usize, usize)>;
type UsizeList = Vec<usize>;
type F64List = Vec<f64>;

#[derive(Subcommand, Debug)]
enum Command {
    /// Reproduce the tetrahedron-edge example: identity, best-unitary, and
    /// measure-and-prepare decoders on the two-dimensional encoding.
    Appendix {
        /// Random restarts for the unitary-decoder search.
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fuzz the bound chain F ≤ (3+2√2)η < 6η over random ensembles,
    /// arbitrary encodings, and Haar-random CPTP decoders.
    FuzzBound {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Dimension pairs n:d, comma separated (default: n in 3..=6, all d < n).
        #[arg(long, value_parser = parse_dims)]
        dims: Option<DimPairs>,
        /// Permit pairs with d >= n (the bound is vacuous there).
        #[arg(long, default_value_t = false)]
        allow_vacuous: bool,
        /// Re-run the violating trials recorded in an earlier report.
        #[arg(long)]
        replay: Option<std::path::PathBuf>,
        /// With --replay: re-run this specific trial index instead.
        #[arg(long)]
        trial: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fuzz the fidelity inequality on random (possibly subnormalized)
    /// state triples.
    FuzzInequality {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// State dimensions, comma separated.
        #[arg(long, value_parser = parse_usize_list, default_value = "2,3,4")]
        dims: UsizeList,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep block lengths and check Σ_d ≤ ε_N + 2^(−Nδ) at every N.
    Converse {
        /// Base spectrum, comma separated, summing to 1.
        #[arg(long, value_parser = parse_f64_list, default_value = "0.9,0.1")]
        spectrum: F64List,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Block length range a..b (inclusive).
        #[arg(long = "N", value_parser = parse_range, default_value = "1..200")]
        n_range: (u32, u32),
        /// Use d = 2^floor(N(S-2δ)) (whole qubits) instead of floor(2^(N(S-2δ))).
        #[arg(long, default_value_t = false)]
        literal_qubits: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Block-coding demo: top-d encoder at a chosen rate on an N-fold
    /// ensemble, plus random decoders checked against the 6Σ_d ceiling.
    BlockDemo {
        /// Block length (dense dimensions cap this at small values).
        #[arg(long = "N", default_value_t = 4)]
        n_block: u32,
        /// Channel dimension for the top-d encoder.
        #[arg(long, default_value_t = 8)]
        d: u64,
        /// Number of random decoders to sample.
        #[arg(long, default_value_t = 25)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Base probabilities for the orthogonal-signal source.
        #[arg(long = "base", value_parser = parse_f64_list, default_value = "0.9,0.1")]
        base: F64List,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_dims(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(',')
        .map(|pair| {
            let (n, d) = pair
                .split_once(':')
                .ok_or_else(|| format!("expected n:d, got {pair:?}"))?;
            Ok((
                n.trim().parse().map_err(|e| format!("{e}"))?,
                d.trim().parse().map_err(|e| format!("{e}"))?,
            ))
        })
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| format!("{e}")))
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| format!("{e}")))
        .collect()
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let lo: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: u32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("invalid range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Appendix {
            restarts,
            seed,
            output,
        } => commands::appendix(restarts, seed, &output),
        Command::FuzzBound {
            trials,
            seed,
            dims,
            allow_vacuous,
            replay,
            trial,
            output,
        } => commands::fuzz_bound(trials, seed, dims, allow_vacuous, replay, trial, &output),
        Command::FuzzInequality {
            trials,
            seed,
            dims,
            output,
        } => commands::fuzz_inequality(trials, seed, dims, &output),
        Command::Converse {
            spectrum,
            delta,
            n_range,
            literal_qubits,
            seed,
            output,
        } => commands::converse(spectrum, delta, n_range, literal_qubits, seed, &output),
        Command::BlockDemo {
            n_block,
            d,
            trials,
            seed,
            base,
            output,
        } => commands::block_demo(n_block, d, trials, seed, base, &output),
    }
}
