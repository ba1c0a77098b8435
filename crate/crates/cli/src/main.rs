use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qex_core::bounds::{parse_range, table_of_bounds, table_to_csv, table_to_text};
use qex_core::report::{
    analyze_state, report_to_csv, report_to_text, resolve_state, search_to_csv, search_to_text, to_json,
    BackendChoice, BoundsReport, SearchReport,
};
use qex_core::search::{hill_climb, random_search, trial_graph};
use qex_core::verify::run_verify;
use qex_core::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

#[derive(Parser)]
#[command(name = "qex", version, about = "Count maximally mixed reductions of qubit pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count maximally mixed k-reductions of a state and run the freeness checks.
    Analyze(AnalyzeArgs),
    /// Print upper and lower bounds on the maximum count.
    Bounds(BoundsArgs),
    /// Sample random graph states and report the best one.
    Search(SearchArgs),
    /// Recompute the reference values and report pass/fail for each.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Auto,
    Rank,
    Statevector,
    Both,
}

impl From<Backend> for BackendChoice {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Auto => Self::Auto,
            Backend::Rank => Self::Rank,
            Backend::Statevector => Self::Statevector,
            Backend::Both => Self::Both,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// State name (tk<k>, circulant:<n>:<d,..>, phi4, m4, random:<n>:<seed>) or a graph/amplitude file.
    #[arg(long)]
    state: String,
    #[arg(long, conflicts_with = "all_k", required_unless_present = "all_k")]
    k: Option<usize>,
    /// Analyze every k from 1 to n/2.
    #[arg(long)]
    all_k: bool,
    #[arg(long, value_enum, default_value = "auto")]
    backend: Backend,
    /// Max-norm tolerance for the statevector backend.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    n: Option<u64>,
    /// Inclusive range `a:b`.
    #[arg(long)]
    range: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hill-climb from the random graph drawn with --seed instead of sampling.
    #[arg(long)]
    hill_climb: bool,
    /// Step budget for --hill-climb.
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BackendDisagreement { .. } => EXIT_DISAGREEMENT,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("QEX_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| input_error(format!("QEX_THREADS must be a non-negative integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| input_error(format!("cannot configure thread pool: {e}")))
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| input_error(format!("cannot write to stdout: {e}")))
        }
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let (state, descriptor) = resolve_state(&args.state)?;
    let n = state.n();
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k],
        None => (1..=n / 2).collect(),
    };
    if ks.is_empty() {
        return Err(input_error(format!("a {n}-qubit state has no k with 1 ≤ k ≤ n/2")));
    }
    let report = analyze_state(&state, descriptor, &ks, args.backend.into(), args.tol)?;
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Csv => report_to_csv(&report),
        Format::Text => report_to_text(&report),
    };
    emit(&args.output, &text)
}

fn bounds(args: &BoundsArgs) -> Result<(), Failure> {
    let range = match (&args.n, &args.range) {
        (Some(n), _) => parse_range(&n.to_string())?,
        (None, Some(r)) => parse_range(r)?,
        (None, None) => unreachable!("clap requires one of --n / --range"),
    };
    let rows = table_of_bounds(range)?;
    let text = match args.format {
        Format::Json => to_json(&BoundsReport::new(rows)),
        Format::Csv => table_to_csv(&rows),
        Format::Text => table_to_text(&rows),
    };
    emit(&args.output, &text)
}

fn search(args: &SearchArgs) -> Result<(), Failure> {
    let result = if args.hill_climb {
        let start = trial_graph(args.n, args.seed, 0)?;
        hill_climb(&start, args.k, args.max_steps, args.seed)?
    } else {
        random_search(args.n, args.k, args.trials, args.seed)?
    };
    let text = match args.format {
        Format::Json => to_json(&SearchReport::new(result)),
        Format::Csv => search_to_csv(&result),
        Format::Text => search_to_text(&result),
    };
    emit(&args.output, &text)
}

fn verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let summary = run_verify();
    let text = match args.format {
        Format::Json => to_json(&summary),
        Format::Csv => summary.to_csv(),
        Format::Text => summary.to_text(),
    };
    emit(&args.output, &text)?;
    Ok(summary.all_passed())
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Analyze(a) => analyze(a)?,
        Command::Bounds(b) => bounds(b)?,
        Command::Search(s) => search(s)?,
        Command::Verify(v) => {
            if !verify(v)? {
                return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("qex: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
