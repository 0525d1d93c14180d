//! `sseval`: evaluate sentence-simplification outputs from the command line.
//!
//! Three subcommands: `evaluate` prints a JSON score document, `report`
//! renders a self-contained HTML report, and `datasets` lists, fetches and
//! validates registered test sets.
//!
//! Exit codes: 0 on success, 1 for runtime errors (I/O, downloads), 2 for
//! usage and validation errors (bad flags, mismatched corpora, unknown
//! names).

mod common;
mod datasets;
mod evaluate;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "sseval",
    version,
    about = "Evaluate sentence-simplification outputs: SARI, BLEU, FKGL, word-level transformation scores, QE features and HTML reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a system output against a test set, printing JSON to stdout
    Evaluate(EvaluateArgs),
    /// Render the full evaluation as one self-contained HTML file
    Report(ReportArgs),
    /// List, fetch and validate registered datasets
    Datasets(DatasetsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TokenizerArg {
    /// Split punctuation from words and split on whitespace
    Standard,
    /// Split on whitespace only
    Whitespace,
}

impl From<TokenizerArg> for sseval_core::text::TokenScheme {
    fn from(arg: TokenizerArg) -> Self {
        match arg {
            TokenizerArg::Standard => sseval_core::text::TokenScheme::Standard,
            TokenizerArg::Whitespace => sseval_core::text::TokenScheme::Whitespace,
        }
    }
}

/// Where the corpus comes from and how it is tokenized.
#[derive(Args)]
struct CorpusArgs {
    /// Registered test-set name (see `sseval datasets list`)
    #[arg(long, value_name = "NAME", conflicts_with_all = ["orig", "refs"])]
    test_set: Option<String>,

    /// Original sentences, one per line (explicit-paths mode)
    #[arg(long, value_name = "FILE", requires = "refs")]
    orig: Option<PathBuf>,

    /// Reference simplifications, one file per reference; repeatable
    #[arg(long = "ref", value_name = "FILE")]
    refs: Vec<PathBuf>,

    /// System output, one line per original sentence
    #[arg(long, value_name = "FILE")]
    sys: PathBuf,

    /// Registry config mapping dataset names to files, URLs and digests
    #[arg(long, value_name = "FILE")]
    registry: Option<PathBuf>,

    /// Data directory for registered datasets
    /// [default: $SSEVAL_DATA_DIR or ./sseval-data]
    #[arg(long, value_name = "DIR")]
    data_dir: Option<PathBuf>,

    /// Tokenization scheme used by all metrics
    #[arg(long, value_enum, default_value = "standard")]
    tokenizer: TokenizerArg,

    /// Score on raw surface forms instead of lowercased tokens
    #[arg(long)]
    no_lowercase: bool,

    /// Word-frequency table for the lexical-complexity feature
    /// (one word per line, most frequent first)
    #[arg(long, value_name = "FILE")]
    freq_table: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,

    /// Metrics to compute (sari, bleu, fkgl)
    #[arg(long, value_delimiter = ',', default_value = "sari,bleu,fkgl")]
    metrics: Vec<String>,

    /// Print a human-readable table instead of JSON
    #[arg(long)]
    table: bool,

    /// Seed for deterministic tie-breaking (accepted for config parity)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    corpus: CorpusArgs,

    /// Where to write the HTML report
    #[arg(long, short = 'o', value_name = "FILE")]
    output: PathBuf,

    /// System name shown in the report [default: the --sys file stem]
    #[arg(long, value_name = "NAME")]
    system_name: Option<String>,

    /// Seed for sampling and tie-breaking
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DatasetsArgs {
    #[command(subcommand)]
    action: DatasetsAction,

    /// Registry config mapping dataset names to files, URLs and digests
    #[arg(long, value_name = "FILE")]
    registry: Option<PathBuf>,

    /// Data directory for registered datasets
    /// [default: $SSEVAL_DATA_DIR or ./sseval-data]
    #[arg(long, value_name = "DIR")]
    data_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DatasetsAction {
    /// Print every registered dataset with its shape
    List,
    /// Download a dataset's files into the data directory
    Fetch { name: String },
    /// Check line counts and digests of a dataset on disk
    Validate { name: String },
}

/// Errors split by exit code: usage/validation problems exit 2, runtime
/// failures exit 1.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<sseval_core::Error> for CliError {
    fn from(err: sseval_core::Error) -> Self {
        match err {
            sseval_core::Error::InvalidArgument(_)
            | sseval_core::Error::NotFound(_)
            | sseval_core::Error::CorruptDataset(_) => CliError::Usage(err.to_string()),
            sseval_core::Error::Fetch(_) | sseval_core::Error::Io(_) => {
                CliError::Runtime(err.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate(args) => evaluate::run(&args),
        Command::Report(args) => report::run(&args),
        Command::Datasets(args) => datasets::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
