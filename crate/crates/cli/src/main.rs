//! Command-line front end: invariant reports, classification, equivalence
//! decisions, cusp duals, and batch enumeration over entry boxes.

mod enumerate;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csdiv::divisor::{parse_entry_list, Divisor};
use csdiv::equiv::SearchBudget;
use csdiv::fillings::CuspCycle;
use csdiv::{Error, Z};

#[derive(Parser)]
#[command(
    name = "csdiv",
    version,
    about = "Exact invariants and classification for circular spherical divisors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on states held across both search frontiers.
    #[arg(long, env = "MAX_BFS_NODES")]
    max_bfs_nodes: Option<usize>,
    /// Longest divisor the search may construct.
    #[arg(long, env = "MAX_LENGTH")]
    max_length: Option<usize>,
    /// Smallest entry the search may construct.
    #[arg(long, env = "MIN_ENTRY", allow_hyphen_values = true)]
    min_entry: Option<i64>,
}

impl BudgetArgs {
    fn resolve(&self, d1: &Divisor, d2: &Divisor) -> SearchBudget {
        let mut budget = SearchBudget::for_pair(d1, d2);
        if let Some(nodes) = self.max_bfs_nodes {
            budget.max_nodes = nodes;
        }
        if let Some(length) = self.max_length {
            budget.max_length = length;
        }
        if let Some(entry) = self.min_entry {
            budget.min_entry = Z::from(entry);
        }
        budget
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the move-invariant data of a divisor.
    Invariants {
        /// Divisor literal, e.g. "(0,4)".
        divisor: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Full report: invariants, trichotomy, fillability, anti-canonical
    /// status, rigidity, and filling data where applicable.
    Classify {
        /// Divisor literal, e.g. "(0,4)".
        divisor: String,
        #[command(flatten)]
        format: FormatArg,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Include replayable move traces in the report.
        #[arg(long)]
        traces: bool,
    },
    /// Decide whether two divisors are toric equivalent.
    Equiv {
        /// First divisor literal.
        left: String,
        /// Second divisor literal.
        right: String,
        #[command(flatten)]
        format: FormatArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// The dual of a negative cusp cycle.
    Dual {
        /// Cycle literal with every entry at most -2 and one at most -3.
        cycle: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Classify every canonical divisor in a box, one JSON line each.
    Enumerate {
        /// Longest divisor length to enumerate.
        #[arg(long, env = "MAX_LENGTH")]
        max_length: usize,
        /// Inclusive entry range, e.g. "-4..2".
        #[arg(long, allow_hyphen_values = true)]
        entries: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cap on states held across both search frontiers.
        #[arg(long, env = "MAX_BFS_NODES")]
        max_bfs_nodes: Option<usize>,
        /// Smallest entry the per-divisor searches may construct.
        #[arg(long, env = "MIN_ENTRY", allow_hyphen_values = true)]
        min_entry: Option<i64>,
        /// Include replayable move traces in each report.
        #[arg(long)]
        traces: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse { .. }) { 2 } else { 3 };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn emit(format: Format, set: &report::ReportSet) {
    match format {
        Format::Json => println!("{}", set.value),
        Format::Text => print!("{}", set.text),
    }
}

fn exit_for(set: &report::ReportSet) -> ExitCode {
    if set.inconclusive {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Invariants { divisor, format } => {
            let d: Divisor = Divisor::parse(&divisor)?;
            let set = report::invariants(&d);
            emit(format.format, &set);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { divisor, format, budget, traces } => {
            let d: Divisor = Divisor::parse(&divisor)?;
            let set = report::classify(&d, &budget.resolve(&d, &d), traces)?;
            emit(format.format, &set);
            Ok(exit_for(&set))
        }
        Command::Equiv { left, right, format, budget } => {
            let d1: Divisor = Divisor::parse(&left)?;
            let d2: Divisor = Divisor::parse(&right)?;
            let set = report::equiv(&d1, &d2, &budget.resolve(&d1, &d2))?;
            emit(format.format, &set);
            Ok(exit_for(&set))
        }
        Command::Dual { cycle, format } => {
            let entries: Vec<Z> = parse_entry_list(&cycle)?;
            let cycle = CuspCycle::new(entries)?;
            let set = report::dual(&cycle);
            emit(format.format, &set);
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { max_length, entries, out, max_bfs_nodes, min_entry, traces } => {
            let range = enumerate::parse_entry_range(&entries)
                .map_err(|message| Failure { code: 2, message })?;
            let job = enumerate::Job {
                max_length,
                range,
                max_bfs_nodes,
                min_entry,
                traces,
                out,
            };
            enumerate::run(&job)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
