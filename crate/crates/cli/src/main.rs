mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use meandric::Error;

#[derive(Parser, Debug)]
#[command(name = "meandric", version, about = "Exact counts of meandric systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Directory for cached irreducible counts.
    #[arg(long, global = true, env = "MEANDER_CACHE_DIR", default_value = "./cache")]
    pub cache_dir: PathBuf,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, value_parser = parse_workers, default_value = "auto")]
    pub workers: Workers,
    /// Lift the resource guards on enumeration sizes.
    #[arg(long, global = true)]
    pub override_guards: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Workers(pub Option<usize>);

fn parse_workers(s: &str) -> Result<Workers, String> {
    if s == "auto" {
        return Ok(Workers(None));
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer or `auto`, got {s:?}")),
        Ok(k) => Ok(Workers(Some(k))),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count meandric systems on 2n points by number of loops.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only report this loop count.
        #[arg(long)]
        loops: Option<usize>,
        /// Take the k = n - r slices from the generating functions instead of
        /// brute force.
        #[arg(long)]
        use_genfun: bool,
        /// Largest r for --use-genfun.
        #[arg(long, default_value_t = 6)]
        max_r: usize,
    },
    /// Count irreducible systems by (n, r, a, b).
    Irreducible {
        /// A single size; without it the whole table up to n = 2 max_r is built.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_r: Option<usize>,
        /// Also write every pair found (requires --n).
        #[arg(long, requires = "n")]
        emit_pairs: Option<PathBuf>,
    },
    /// Compute P~_r and the series F_r for r <= max_r.
    Genfun {
        #[arg(long, default_value_t = 3)]
        max_r: usize,
        /// Series order (default 4 max_r + 4).
        #[arg(long)]
        nx: Option<usize>,
    },
    /// Asymptotic constants c_r for r <= max_r (or a single --r).
    Asympt {
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_r: usize,
    },
    /// Run the oracle checks and golden comparisons.
    Verify,
    /// Draw a meandric system as SVG.
    Render {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Number of points per side (default: largest element mentioned).
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Exit statuses.
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeLimit { .. } => EXIT_GUARD,
        Error::Parse { .. } | Error::NotNonCrossing(_) | Error::SizeMismatch { .. } => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
