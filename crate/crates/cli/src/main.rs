mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "pmiir",
    version,
    about = "Synonym recognition with PMI-IR and LSA"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Config {
    /// Corpus directory (one document per file) or JSON-lines record file.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,

    /// Serialized positional index (written by `index`, read by the others).
    #[arg(long, global = true)]
    pub index: Option<PathBuf>,

    /// Stop-word file, one word per line; replaces the built-in list.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = MethodArg::S3)]
    pub method: MethodArg,

    /// LSA rank. Defaults to min(50, rank), or 300 when the matrix allows it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,

    /// Maximum token distance for NEAR.
    #[arg(long, global = true, default_value_t = pmiir::DEFAULT_NEAR_WINDOW,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub near_window: u32,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Summary)]
    pub format: FormatArg,

    /// Output file for reports and LSA factors.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Table of `query<TAB>count` lines answering hit queries instead of an index.
    #[arg(long, global = true)]
    pub inject_hits: Option<PathBuf>,

    /// Serialized LSA factors (written by `lsa-build`).
    #[arg(long, global = true)]
    pub factors: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the positional index of a corpus.
    Index,
    /// Count the documents matching a query.
    Hits { query: String },
    /// Answer one question given as a JSON record.
    Answer { record: String },
    /// Evaluate a question file.
    Eval { questions: PathBuf },
    /// Compute and save LSA factors for a corpus.
    LsaBuild,
    /// Evaluate a question file with LSA.
    LsaEval { questions: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    S1,
    S2,
    S3,
    S4,
    Lsa,
}

impl From<MethodArg> for pmiir::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::S1 => pmiir::Method::S1,
            MethodArg::S2 => pmiir::Method::S2,
            MethodArg::S3 => pmiir::Method::S3,
            MethodArg::S4 => pmiir::Method::S4,
            MethodArg::Lsa => pmiir::Method::Lsa,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Summary,
    Table,
    Machine,
}

impl From<FormatArg> for pmiir::ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Summary => pmiir::ReportFormat::Summary,
            FormatArg::Table => pmiir::ReportFormat::Table,
            FormatArg::Machine => pmiir::ReportFormat::Machine,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.config, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
