use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Debug, Parser)]
#[command(
    name = "raider",
    version,
    about = "Graph derangements and the Territorial Raider game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge-list file
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,

    /// cycle, path, star, complete or random
    #[arg(long, requires = "size")]
    pub family: Option<String>,

    /// Family size (leaves for star, vertices otherwise)
    #[arg(long)]
    pub size: Option<usize>,

    /// Edge probability for --family random
    #[arg(long)]
    pub p: Option<f64>,

    /// Seed for randomized commands
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    /// Comma-separated defended shares, decimals or fractions
    #[arg(long, default_value = "1/2")]
    pub h: String,

    /// Ignore the profile-count guard
    #[arg(long)]
    pub force: bool,

    /// Worker threads
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a graph and print its size and connectivity
    ParseCheck(GraphArgs),
    /// Print a generated graph in canonical edge-list form
    Generate(GraphArgs),
    /// Find a derangement, or a Hall violator when none exists
    Derange {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decompose a derangement into pairs and cycles
    Qfactor {
        #[command(flatten)]
        graph: GraphArgs,
        /// Derangement to decompose; one is searched for if omitted
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Exhaustive Hall-condition scan
    Hall(GraphArgs),
    /// Count derangements and print the [n!/e] bound
    Count(GraphArgs),
    /// Payoffs of a profile
    Payoffs {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "1/2")]
        h: String,
    },
    /// Check whether a profile is a strict Nash equilibrium
    NashVerify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "1/2")]
        h: String,
    },
    /// List every strict Nash equilibrium
    NashEnumerate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        enumerate: EnumArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check that strict equilibria are exactly the derangements
    Theorem {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        enumerate: EnumArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run Exp3 learners and certify the outcome
    Learn {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "1/2")]
        h: String,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long, default_value_t = 20_000)]
        rounds: u64,
        #[arg(long, default_value_t = raider_core::exp3::DEFAULT_WINDOW)]
        window: u64,
        #[arg(long, default_value_t = raider_core::exp3::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Per-round CSV log
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let result = match cli.command {
        Command::ParseCheck(g) => commands::parse_check(&mut out, &g),
        Command::Generate(g) => commands::generate(&mut out, &g),
        Command::Derange { graph, json } => commands::derange(&mut out, &graph, json.as_deref()),
        Command::Qfactor { graph, profile } => {
            commands::qfactor(&mut out, &graph, profile.as_deref())
        }
        Command::Hall(g) => commands::hall(&mut out, &g),
        Command::Count(g) => commands::count(&mut out, &g),
        Command::Payoffs { graph, profile, h } => commands::payoffs(&mut out, &graph, &profile, &h),
        Command::NashVerify { graph, profile, h } => {
            commands::nash_verify(&mut out, &graph, &profile, &h)
        }
        Command::NashEnumerate {
            graph,
            enumerate,
            json,
        } => commands::nash_enumerate(&mut out, &graph, &enumerate, json.as_deref()),
        Command::Theorem {
            graph,
            enumerate,
            json,
        } => commands::theorem(&mut out, &graph, &enumerate, json.as_deref()),
        Command::Learn {
            graph,
            h,
            gamma,
            rounds,
            window,
            threshold,
            json,
            log,
        } => commands::learn(
            &mut out,
            &graph,
            commands::LearnArgs {
                h,
                gamma,
                rounds,
                window,
                threshold,
                json,
                log,
            },
        ),
    };
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
