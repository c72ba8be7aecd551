use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use constellation_core::enumerate::CAP_ENV;
use constellation_core::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "constellation-lab", version, about = "Enumerate and cross-check factorizations of the long cycle")]
pub struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest search space an enumeration may visit.
    #[arg(long, global = true, env = CAP_ENV, value_parser = parse_cap)]
    pub cap: Option<u128>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

fn parse_cap(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("cap must be positive".into()),
        Ok(c) => Ok(c),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Size {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Colored counts C, color-composition counts c(γ), connection coefficients κ, or M.
    Count(CountArgs),
    /// Colored counts against n!^(k-1)·M^(n-1)_(p-1).
    JacksonCheck(TypeArgs),
    /// The generating-function identity at integer points.
    GfCheck(GfArgs),
    /// Color-composition counts against their closed form.
    MvCheck(MvArgs),
    /// Color-composition counts depend only on the part counts.
    SymmetryCheck(Size),
    /// Exhaustive round trip of one bijection.
    Roundtrip(RoundtripArgs),
    /// Tree-pointed and nebula counts against tree-rooted and colored counts.
    PointingCheck(TypeArgs),
    /// Tree probability against the full-first-subset probability.
    Puzzle(PuzzleArgs),
    /// Graphviz drawing of a constellation, nebula or bidding.
    Render(RenderArgs),
    /// Stream every object of a family as JSON lines.
    Enumerate(EnumerateArgs),
    /// Nebula to bidding, or back.
    Psi(PsiArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub size: Size,
    /// Type vector, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    /// Count M^n_p instead of colored factorizations.
    #[arg(long, requires = "p")]
    pub m: bool,
    /// Cycle types, one partition per factor: "2,1;3;1,1,1".
    #[arg(long, conflicts_with_all = ["p", "gamma"])]
    pub kappa: Option<String>,
    /// Color compositions, one per factor: "1,2;3;2,1".
    #[arg(long, conflicts_with = "p")]
    pub gamma: Option<String>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["p", "all_p"])))]
pub struct TypeArgs {
    #[command(flatten)]
    pub size: Size,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
    /// Every type vector in range.
    #[arg(long)]
    pub all_p: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["x", "all_x"])))]
pub struct GfArgs {
    #[command(flatten)]
    pub size: Size,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Option<Vec<i64>>,
    /// Every point with coordinates in {1, 2, 3}.
    #[arg(long)]
    pub all_x: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["gamma", "all"])))]
pub struct MvArgs {
    #[command(flatten)]
    pub size: Size,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Every tuple of compositions of n.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    #[arg(long, value_parser = ["phi", "swap", "lambda", "theta", "sigma", "psi"])]
    pub bijection: String,
    #[command(flatten)]
    pub size: Size,
}

#[derive(Args, Debug)]
pub struct PuzzleArgs {
    #[command(flatten)]
    pub size: Size,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<usize>,
    /// Exact probabilities by enumeration (the default).
    #[arg(long, conflicts_with = "sample")]
    pub exact: bool,
    /// Monte Carlo with this many accepted trials.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "sample")]
    pub seed: u64,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "perms"])))]
pub struct RenderArgs {
    /// JSON file holding a constellation, a nebula or a bidding; "-" for stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Factors in one-line notation, one per type: "2,3,1;1,3,2".
    #[arg(long)]
    pub perms: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Emit {
    Jsonl,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Family {
    Cacti,
    Colored,
    TreeRooted,
    TreePointed,
    Nebulas,
    Prebiddings,
    Biddings,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, value_enum, default_value_t = Emit::Jsonl)]
    pub emit: Emit,
    #[arg(long, value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub size: Size,
    /// Restrict to one type vector (colored counts require it).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<usize>>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Direction {
    Fwd,
    Inv,
}

#[derive(Args, Debug)]
pub struct PsiArgs {
    #[arg(long, value_enum)]
    pub direction: Direction,
    /// JSON file; "-" for stdin.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => 3,
            CliError::Core(Error::InternalDisagreement(_) | Error::AcceptanceTooLow { .. }) => 1,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let name = commands::name(&cli.command);
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.render(&cli, name));
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.format == Format::Json {
                println!("{}", commands::error_report(&cli, name, &e));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
