//! `subkit`: substitutions, Bratteli diagrams and telescope equivalence
//! from the command line.

mod commands;
mod error;
mod input;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use subkit::{Execution, Preset};

use commands::{BudgetChoice, EquivArgs, SuccessorArgs};
use error::{CliError, EXIT_USAGE};
use report::{Outcome, Report, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "subkit", version, about = "Symbolic substitutions, Bratteli diagrams and telescope equivalence")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the searches (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized steps; the current searches are exhaustive and
    /// do not draw from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct BudgetArgs {
    /// Budget preset.
    #[arg(long, env = "SUBKIT_BUDGET_PRESET", default_value = "default")]
    preset: Preset,
    #[arg(long)]
    max_power: Option<u32>,
    #[arg(long)]
    max_chain: Option<usize>,
    #[arg(long)]
    max_alphabet: Option<usize>,
    /// Ordered search only: candidate first maps per power.
    #[arg(long)]
    max_candidates: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants of a substitution or matrix.
    Analyze { file: String },
    /// Decide telescope equivalence. Exit 0 equivalent, 1 distinguished, 2 unknown.
    Equiv {
        a: String,
        b: String,
        /// Compare ordered diagrams.
        #[arg(long)]
        ordered: bool,
        /// Ordered comparison specialised to powers of the Fibonacci matrix.
        #[arg(long)]
        fib: bool,
        /// Write the certificate here when one is found.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Telescope a stationary diagram or a diagram JSON file.
    Telescope {
        file: String,
        #[arg(long, conflicts_with = "cuts")]
        stride: Option<usize>,
        /// Comma-separated cut levels, starting at 0.
        #[arg(long, value_delimiter = ',')]
        cuts: Option<Vec<usize>>,
        /// Levels of the stationary diagram before telescoping.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// outer ∘ inner (inner applied first).
    Compose { outer: String, inner: String },
    /// The k-th power of a substitution.
    Power {
        #[arg(long)]
        k: u32,
        #[arg(default_value = "-")]
        file: String,
    },
    /// Letter-count matrix; reads stdin when no file is given.
    Abelianize {
        #[arg(default_value = "-")]
        file: String,
    },
    /// State splitting M = N·S ↦ S·N.
    Split { m: String, n: String, s: String },
    /// An equivalent primitive matrix on more vertices.
    Enlarge {
        m: String,
        #[arg(long)]
        size: usize,
    },
    /// Supernatural number of a rank-one matrix.
    Supernatural { m: String },
    /// P/Q factorization of a 2×2 matrix of determinant ±1.
    Pq { m: String },
    /// Classify a factorization A·B = F^m.
    FibClassify { a: String, b: String },
    /// Admissible words of length at most k.
    Factors {
        file: String,
        #[arg(long)]
        k: usize,
    },
    /// Vershik successors of a finite path, written `vertex:rank` per level.
    Successor {
        file: String,
        #[arg(long, conflicts_with_all = ["min", "end"])]
        path: Option<String>,
        /// Start from the minimal path of this length.
        #[arg(long, requires = "end")]
        min: Option<usize>,
        #[arg(long)]
        end: Option<String>,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Graphviz rendering of the diagram.
    ExportDot {
        file: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Paint maximal edges red and minimal edges green.
        #[arg(long)]
        color_extremes: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The standard TAF chain of the ordered diagram.
    Taf {
        file: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Check a certificate written by `equiv --certificate`.
    Verify { certificate: String, a: String, b: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Equiv { .. } => "equiv",
            Command::Telescope { .. } => "telescope",
            Command::Compose { .. } => "compose",
            Command::Power { .. } => "power",
            Command::Abelianize { .. } => "abelianize",
            Command::Split { .. } => "split",
            Command::Enlarge { .. } => "enlarge",
            Command::Supernatural { .. } => "supernatural",
            Command::Pq { .. } => "pq",
            Command::FibClassify { .. } => "fib-classify",
            Command::Factors { .. } => "factors",
            Command::Successor { .. } => "successor",
            Command::ExportDot { .. } => "export-dot",
            Command::Taf { .. } => "taf",
            Command::Verify { .. } => "verify",
        }
    }

    fn inputs(&self) -> Vec<String> {
        let v = |xs: &[&String]| xs.iter().map(|s| s.to_string()).collect();
        match self {
            Command::Analyze { file }
            | Command::Telescope { file, .. }
            | Command::Power { file, .. }
            | Command::Abelianize { file }
            | Command::Factors { file, .. }
            | Command::Successor { file, .. }
            | Command::ExportDot { file, .. }
            | Command::Taf { file, .. } => v(&[file]),
            Command::Equiv { a, b, .. } | Command::FibClassify { a, b } => v(&[a, b]),
            Command::Compose { outer, inner } => v(&[outer, inner]),
            Command::Split { m, n, s } => v(&[m, n, s]),
            Command::Enlarge { m, .. } | Command::Supernatural { m } | Command::Pq { m } => v(&[m]),
            Command::Verify { certificate, a, b } => v(&[certificate, a, b]),
        }
    }
}

fn execution(threads: Option<usize>) -> Execution {
    if threads == Some(1) {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run(cmd: &Command, exec: Execution) -> Result<Outcome, CliError> {
    match cmd {
        Command::Analyze { file } => commands::analyze(file),
        Command::Equiv {
            a,
            b,
            ordered,
            fib,
            certificate,
            budget,
        } => commands::equiv(EquivArgs {
            a,
            b,
            ordered: *ordered,
            fib: *fib,
            certificate: certificate.as_deref(),
            budget: BudgetChoice {
                preset: budget.preset,
                max_power: budget.max_power,
                max_chain: budget.max_chain,
                max_alphabet: budget.max_alphabet,
                max_candidates: budget.max_candidates,
                execution: exec,
            },
        }),
        Command::Telescope {
            file,
            stride,
            cuts,
            depth,
        } => commands::telescope(file, *stride, cuts.as_deref(), *depth),
        Command::Compose { outer, inner } => commands::compose(outer, inner),
        Command::Power { k, file } => commands::power(file, *k),
        Command::Abelianize { file } => commands::abelianize(file),
        Command::Split { m, n, s } => commands::split(m, n, s),
        Command::Enlarge { m, size } => commands::enlarge_cmd(m, *size),
        Command::Supernatural { m } => commands::supernatural_cmd(m),
        Command::Pq { m } => commands::pq(m),
        Command::FibClassify { a, b } => commands::fib_classify(a, b),
        Command::Factors { file, k } => commands::factors(file, *k),
        Command::Successor {
            file,
            path,
            min,
            end,
            steps,
        } => commands::successor(SuccessorArgs {
            file,
            path: path.as_deref(),
            min: *min,
            end: end.as_deref(),
            steps: *steps,
        }),
        Command::ExportDot {
            file,
            depth,
            color_extremes,
            output,
        } => commands::export_dot(file, *depth, *color_extremes, output.as_deref()),
        Command::Taf { file, depth } => commands::taf(file, *depth),
        Command::Verify { certificate, a, b } => commands::verify(certificate, a, b),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) -> Result<(), CliError> {
    Ok(())
}

/// Writes to stdout; a closed pipe (`subkit … | head`) is not an error.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if cli.threads == Some(0) {
        eprintln!("subkit: --threads must be positive");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("subkit: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    let start = Instant::now();
    let outcome = run(&cli.command, execution(cli.threads));
    let elapsed = start.elapsed();
    match outcome {
        Ok(out) => {
            if cli.json {
                let inputs = cli.command.inputs();
                let report = Report {
                    schema: SCHEMA,
                    command: cli.command.name(),
                    inputs: &inputs,
                    verdict: out.verdict,
                    details: &out.details,
                    timing_ms: elapsed.as_secs_f64() * 1000.0,
                };
                emit(&(serde_json::to_string(&report).expect("reports serialize") + "\n"));
            } else {
                emit(&out.text);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("subkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
