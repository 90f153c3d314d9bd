//! Command-line front end: argument parsing, dispatch and report rendering.
//!
//! Exit codes: 0 success (holds, valid, all checks pass), 1 negative
//! verdict, 2 malformed input, 3 a size cap was exceeded, 4 the decision
//! procedure and the grid oracle disagree.

pub mod commands;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "belief", about = "Reasoning about belief under inconsistent and incomplete probabilistic information")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxiomChoice {
    /// Additivity of belief and its companions.
    Additive,
    /// Negation interderivability and the monotonicity rule.
    Monotone,
    /// Probability axioms of the aggregated assignment.
    Prob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DialectChoice {
    /// Łukasiewicz logic; `!`-prefixed subformulas count as atoms.
    Luk,
    /// Łukasiewicz logic with the bilattice negation, over pairs.
    Lukneg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Four-valued entailment between event formulas.
    BdEntail {
        /// Premises; empty strings are ignored.
        premises: Vec<String>,
        #[arg(long)]
        conc: String,
        #[arg(long, default_value_t = belief_core::bd_core::DEFAULT_ATOM_CAP)]
        atom_cap: usize,
    },
    /// Value of an upper formula in a scenario's belief model.
    Belief { scenario: PathBuf, formula: String },
    /// Checks an axiom set on all event formulas up to a connective depth.
    Check {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        axioms: AxiomChoice,
        /// Connective depth of the universe of event formulas.
        #[arg(long, default_value_t = 1)]
        universe: usize,
        /// Largest universe accepted.
        #[arg(long, default_value_t = commands::DEFAULT_MAX_UNIVERSE)]
        max_universe: usize,
        /// Witnesses printed per failing item.
        #[arg(long, default_value_t = 3)]
        witnesses: usize,
    },
    /// Decides Łukasiewicz consequence exactly.
    Luk {
        #[arg(long, value_enum, default_value_t = DialectChoice::Lukneg)]
        dialect: DialectChoice,
        /// Premises; empty strings are ignored.
        premises: Vec<String>,
        #[arg(long)]
        conc: String,
        /// Cross-check against a grid search with denominators up to this.
        #[arg(long)]
        oracle_denominator: Option<i64>,
        #[arg(long, default_value_t = belief_core::luk_decide::DEFAULT_ATOM_CAP)]
        atom_cap: usize,
        #[arg(long, default_value_t = belief_core::luk_decide::DEFAULT_GRID_BUDGET)]
        grid_budget: u128,
        /// Print the mixed-integer program in LP format instead of deciding.
        #[arg(long)]
        emit_lp: bool,
    },
    /// Negation normal form of a lukneg formula and its negative translation.
    Nnf { formula: String },
    /// Validates a scenario and prints it in canonical form.
    Normalize {
        scenario: PathBuf,
        /// Write to this file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// What a run prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match commands::dispatch(&cli) {
        Ok(report) => Outcome { code: report.code, stdout: report.render(cli.format), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
