//! `warpdeg`: warping degrees and independent region sets of knot shadows.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "warpdeg", version)]
#[command(about = "Warping degree and independent region sets of knot shadows")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// PD file, one `name: P[...]` entry per line.
    #[arg(long)]
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate shadows and print basic data and canonical codes.
    Parse(Input),
    /// List regions with their boundary crossings.
    Regions(Input),
    /// Warping degree d(P) with a witness.
    Warp(Input),
    /// Maximal independent region number IR(P).
    Ir {
        #[command(flatten)]
        input: Input,
        /// Restrict to one base crossing (1-based).
        #[arg(long)]
        crossing: Option<usize>,
        /// List every independent region set avoiding the base crossing.
        #[arg(long, requires = "crossing")]
        all_sets: bool,
        /// Print a DIMACS CNF asking for an independent set of this size.
        #[arg(long, value_name = "K", requires = "crossing", conflicts_with = "all_sets")]
        emit_dimacs: Option<usize>,
    },
    /// Check IR ≤ d ≤ c - IR - 1 and the IR bounds on every entry.
    Verify {
        /// PD file (same as --file).
        path: Option<PathBuf>,
        #[arg(long, conflicts_with = "path")]
        file: Option<PathBuf>,
    },
    /// Census of knot (or connected link) shadows by crossing number.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        from: usize,
        /// Last crossing number (defaults to --from).
        #[arg(long)]
        to: Option<usize>,
        /// Print the d_min table instead of the shadows.
        #[arg(long)]
        table: bool,
        /// Connected link shadows instead of knot shadows.
        #[arg(long)]
        links: bool,
        /// Keep only reduced shadows.
        #[arg(long, conflicts_with = "links")]
        reduced: bool,
        /// Crossing budget (defaults: 8 for knots, 6 for links).
        #[arg(long)]
        limit: Option<usize>,
        /// Write one census file per crossing number into this directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Bounds report over a corpus file or every `.pd` file in a directory.
    Corpus {
        #[arg(long, required_unless_present = "dir", conflicts_with = "dir")]
        file: Option<PathBuf>,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
