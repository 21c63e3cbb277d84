//! `pc2`: command-line front end to the covering workbench.
//!
//! Every subcommand writes its result as JSON (or SVG with `--format svg`) to
//! stdout or `--out`, and a one-line summary to stderr. Exit status is 0 on
//! success, 1 when a verification fails and 2 on bad usage or input.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pc2",
    version,
    about = "Packing-constrained point covering workbench"
)]
pub struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "PC2_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Where a point set comes from.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Point set JSON: an object with a `points` array of `[x, y]` pairs.
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub input: Option<PathBuf>,
    /// Built-in point set (`fig1-55`).
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 1_000)]
    pub partitions: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: u32,
    #[arg(long, default_value_t = 500)]
    pub iterations: u32,
    /// Multiplies the partition budget.
    #[arg(long, default_value_t = 1)]
    pub budget_scale: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Area lower bound on the number of points needed in the handicap game.
    Bound {
        #[command(flatten)]
        output: Output,
    },
    #[command(subcommand)]
    Config(ConfigCommand),
    #[command(subcommand)]
    Lemma(LemmaCommand),
    #[command(subcommand)]
    Handicap(HandicapCommand),
    #[command(subcommand)]
    Cover(CoverCommand),
    #[command(subcommand)]
    Translates(TranslatesCommand),
    /// SVG of a scene.
    Render {
        #[arg(value_enum)]
        scene: Scene,
        /// Point set or translate set JSON, depending on the scene.
        input: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Lattice translate set divisor for the `translates` scene.
        #[arg(long)]
        lattice: Option<u32>,
        /// Packing translate `x,y` for the `handicap` scene.
        #[arg(long, value_parser = io::parse_point)]
        t: Option<pc2_core::Point2>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// HTTP interface for the interactive front end.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: std::net::SocketAddr,
        /// Concurrent solver jobs.
        #[arg(long)]
        workers: Option<usize>,
        /// Queued jobs accepted before requests are refused.
        #[arg(long)]
        queue: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConfigCommand {
    /// Searches a lattice pose and emits the interior points of the rectangle.
    Generate {
        /// Lattice minimum distance as a fraction of √3 r.
        #[arg(long, default_value_t = 0.999999)]
        d_frac: f64,
        #[arg(long, default_value_t = 720)]
        angles: usize,
        #[arg(long, default_value_t = 64)]
        shifts: usize,
        #[arg(long)]
        no_refine: bool,
        /// Also write an SVG drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Regenerates a configuration file from its pose and checks it.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum LemmaCommand {
    Verify {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        lemma: u8,
        /// Random trials; 10^4 for the first lemma and 10^5 for the third by default.
        #[arg(long)]
        trials: Option<u64>,
        /// Sweep grid for the second lemma.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Lattice distance for the third lemma as a fraction of √3 r.
        #[arg(long, default_value_t = 0.99)]
        d_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum HandicapCommand {
    /// Decides whether one translate of the close packing covers the points.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = pc2_core::interstitium::DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = pc2_core::interstitium::DEFAULT_MARGIN)]
        margin: f64,
        /// Exit 1 unless the outcome matches.
        #[arg(long, value_enum)]
        expect: Option<HandicapExpect>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HandicapExpect {
    Coverable,
    NotCoverable,
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// Searches for non-overlapping unit disks covering the points.
    Solve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Skip the rotated close-packing attempts.
        #[arg(long)]
        no_lattice: bool,
        /// Exit 1 unless the outcome matches.
        #[arg(long, value_enum)]
        expect: Option<CoverExpect>,
        #[command(flatten)]
        output: Output,
    },
    /// Solves with each point removed in turn.
    Removability {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverExpect {
    Covered,
    Unknown,
}

#[derive(Debug, Subcommand)]
pub enum TranslatesCommand {
    /// The translates `(1/n) H` reduced to one cell.
    Lattice {
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Certifies that the interstitium translates cover the plane.
    Certify {
        input: PathBuf,
        #[arg(long, default_value_t = pc2_core::interstitium::DEFAULT_MARGIN)]
        margin: f64,
        #[arg(long, default_value_t = pc2_core::interstitium::DEFAULT_DEPTH)]
        depth: u32,
        /// Also run the exact triangle tiling check on lattice sets.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Annealing search for a small covering translate set.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200_000)]
        moves: u64,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start from a translate set file instead of random positions.
        #[arg(long)]
        initial: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scene {
    Config,
    Cover,
    Handicap,
    Translates,
    Fig3,
}

/// Result of a command that ran to completion.
pub enum Verdict {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command, cli.threads) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
