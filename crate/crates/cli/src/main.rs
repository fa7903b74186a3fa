//! `entmom`: exact purity statistics, Edgeworth densities and Monte Carlo
//! checks from the command line.

mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};

pub(crate) const VERSION: &str = concat!("entmom ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(
    name = "entmom",
    version,
    about = "Purity and Meyer-Wallach statistics of random pure states"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    Rnferme,
    Symmetric,
    P2,
}

/// Either a `p × q` bipartition or an `m`-qubit register.
#[derive(Args, Debug, Clone, Copy)]
pub struct Target {
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Meyer-Wallach Q of an m-qubit state instead of a purity.
    #[arg(long, conflicts_with_all = ["p", "q"], requires = "qubits")]
    mw: bool,
    #[arg(long, requires = "mw")]
    qubits: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Sampling {
    /// Defaults to $ENTMOM_SEED, then 0.
    #[arg(long, env = "ENTMOM_SEED", default_value_t = 0)]
    seed: u64,
    /// Independent RNG streams; the output depends on this value.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact moments <R^n> for n = 0..=n-max.
    Moments {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Use one formula; by default all applicable formulas are cross-checked.
        #[arg(long, value_enum)]
        formula: Option<Formula>,
    },
    /// Exact cumulants kappa_1..kappa_n-max.
    Cumulants {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Compare n <= 5 against the closed forms.
        #[arg(long)]
        check_closed_form: bool,
    },
    /// Truncated Edgeworth density on a grid over mu +- 6 sigma within the support.
    ///
    /// Truncations can be slightly negative in the far tails; values are not clipped.
    Pdf {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Exact p = 2 density on [1/2, 1] instead of the expansion.
        #[arg(long)]
        exact_p2: bool,
    },
    /// Sample random states; writes the batch, or a density histogram with --bins.
    Sample {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        bins: Option<usize>,
        /// Write the batch CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled histogram against truncated expansions of several orders.
    Compare {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Moments {
            p,
            q,
            n_max,
            formula,
        } => commands::moments(*p, *q, *n_max, *formula),
        Command::Cumulants {
            target,
            n_max,
            check_closed_form,
        } => commands::cumulants(target, *n_max, *check_closed_form),
        Command::Pdf {
            target,
            order,
            grid,
            exact_p2,
        } => commands::pdf(target, *order, *grid, *exact_p2),
        Command::Sample {
            target,
            count,
            sampling,
            bins,
            out,
        } => commands::sample(target, *count, sampling, *bins, out.as_deref(), cli.format),
        Command::Compare {
            target,
            orders,
            count,
            sampling,
            bins,
        } => commands::compare(target, orders, *count, sampling, *bins),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) => Cli::command()
            .error(ErrorKind::ArgumentConflict, msg)
            .exit(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let written = match (&outcome.record, cli.format) {
        (Some(r), Format::Csv) => r.write_csv(&mut out),
        (Some(r), Format::Json) => r.write_json(&mut out),
        (None, _) => Ok(()),
    }
    .and_then(|_| out.write_all(&outcome.raw))
    .and_then(|_| out.flush());
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    for line in &outcome.failures {
        eprintln!("check failed: {line}");
    }
    if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
