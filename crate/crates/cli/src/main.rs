//! Command-line front end for exact conductor computations.
//!
//! Exit status: 0 when every verdict is AGREE, 1 on a DISAGREE verdict,
//! 2 on usage or validation errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use artin_cli::commands::{self, ExampleKind};

#[derive(Parser)]
#[command(name = "artin", version, about = "Exact Artin/Swan conductors of local Galois and Weil-Deligne representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Herbrand breakpoints and the upper breaks of a filtration
    Filtration {
        /// Instance file (any kind; only the filtration is used)
        #[arg(long)]
        input: PathBuf,
        /// Emit the breakpoints as a TSV table with columns r and s
        #[arg(long)]
        tsv: bool,
        /// Mirror the report to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute the Artin conductor of a character by all three formulas
    Conductor {
        /// Character instance file
        #[arg(long)]
        input: PathBuf,
        /// Refuse instances whose integrality assertions would be vacuous
        #[arg(long)]
        strict: bool,
        /// Mirror the report to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute the three conductors of a Weil-Deligne representation
    Wd {
        /// Weil-Deligne instance file
        #[arg(long)]
        input: PathBuf,
        /// Refuse instances whose integrality assertions would be vacuous
        #[arg(long)]
        strict: bool,
        /// Mirror the report to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit ready-made instance files
    Examples {
        #[command(subcommand)]
        what: ExamplesCommand,
    },
    /// Run the differential test sweep and the fixed corpus
    Verify {
        /// Number of random instances per sweep
        #[arg(long, default_value_t = 100)]
        sweep: usize,
        /// Seed for the deterministic generators
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mirror the report to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExamplesCommand {
    /// The cyclotomic extension Q_p(zeta_{p^n}) with its exact filtration
    Cyclotomic {
        p: u64,
        n: u32,
        /// Attach the degree-1 character with this index (0 is trivial)
        #[arg(long)]
        character: Option<usize>,
        /// Write the instance file here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// A totally tamely ramified cyclic extension of degree e
    Tame {
        e: usize,
        /// Attach the degree-1 character with this index (0 is trivial)
        #[arg(long)]
        character: Option<usize>,
        /// Write the instance file here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The split-multiplicative Weil-Deligne fixture with residue size q
    SplitMultiplicative {
        q: u64,
        /// Write the instance file here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Filtration { input, tsv, output } => {
            commands::filtration(&input, tsv, output.as_deref())
        }
        Command::Conductor { input, strict, output } => {
            commands::conductor(&input, strict, output.as_deref())
        }
        Command::Wd { input, strict, output } => commands::wd(&input, strict, output.as_deref()),
        Command::Examples { what } => match what {
            ExamplesCommand::Cyclotomic { p, n, character, output } => {
                commands::examples(ExampleKind::Cyclotomic { p, n }, character, output.as_deref())
            }
            ExamplesCommand::Tame { e, character, output } => {
                commands::examples(ExampleKind::Tame { e }, character, output.as_deref())
            }
            ExamplesCommand::SplitMultiplicative { q, output } => {
                commands::examples(ExampleKind::SplitMultiplicative { q }, None, output.as_deref())
            }
        },
        Command::Verify { sweep, seed, output } => {
            commands::verify(sweep, seed, output.as_deref())
        }
    };
    match result {
        Ok(report) if report.agree() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
