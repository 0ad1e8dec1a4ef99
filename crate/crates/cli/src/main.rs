mod commands;
mod format;

use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use parkmodel::{Model, NaplesSemantics};

use format::{parse_rational, Format};

/// Exact and simulated parking probabilities for random-direction and
/// random k-Naples parking.
#[derive(Parser, Debug)]
#[command(name = "parkmodel", version, about)]
struct Cli {
    /// Worker threads for census, verification and simulation (0 = all cores).
    #[arg(long, global = true, env = "PARKMODEL_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parking probability of one preference tuple.
    Prob(ProbArgs),
    /// P(n), T(n), (N(n) + P(n)) / 2 and N(n) for n = 1..=n-max.
    Table(TableArgs),
    /// How many n-tuples park with each probability a / 2^(n-1) at p = 1/2.
    Census(CensusArgs),
    /// Exhaustive and sampled checks; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Monte Carlo estimates with a fixed seed.
    Mc(McArgs),
    /// A tuple with a prescribed parking probability at k = 1, p = 1/2.
    Construct(ConstructArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Direction,
    Naples,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Direction => Model::RandomDirection,
            ModelArg::Naples => Model::RandomNaples,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Jump,
    Firstfit,
}

impl From<SemanticsArg> for NaplesSemantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Jump => NaplesSemantics::JumpBackThenForward,
            SemanticsArg::Firstfit => NaplesSemantics::FirstFitBackward,
        }
    }
}

impl SemanticsArg {
    fn name(self) -> &'static str {
        match self {
            SemanticsArg::Jump => "jump",
            SemanticsArg::Firstfit => "firstfit",
        }
    }
}

impl ModelArg {
    fn name(self) -> &'static str {
        match self {
            ModelArg::Direction => "direction",
            ModelArg::Naples => "naples",
        }
    }
}

#[derive(Args, Debug)]
pub struct ProbArgs {
    /// Preferences, e.g. 2,2,2.
    #[arg(long, value_parser = parse_prefs)]
    alpha: Prefs,
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value = "firstfit")]
    semantics: SemanticsArg,
    /// Evaluate at this probability (a/b or integer) instead of printing the polynomial.
    #[arg(long, value_parser = parse_rational)]
    p: Option<BigRational>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    p: BigRational,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value = "firstfit")]
    semantics: SemanticsArg,
    /// Permit n = 8 (several minutes of work).
    #[arg(long)]
    allow_large: bool,
    /// Count every choice vector instead of walking the decision tree.
    #[arg(long)]
    replay: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Monotonicity,
    OddCensus,
    Sandwich,
    #[value(name = "theorem2", alias = "direction-total")]
    DirectionTotal,
    CircularShift,
    Characterization,
    StaircaseFormula,
    Dyadic,
    Recursion,
    NaplesSemantics,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    /// Size to check (largest size for range checks); each check has its own default.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled cases when the check is not exhaustive.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value = "firstfit")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Estimate this tuple's parking probability.
    #[arg(long, value_parser = parse_prefs, conflicts_with = "n", required_unless_present = "n")]
    alpha: Option<Prefs>,
    /// Estimate the expected number of parking n-tuples.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value = "firstfit")]
    semantics: SemanticsArg,
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    p: BigRational,
    /// Simulated runs of the tuple (with --alpha).
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// Tuples drawn (with --n).
    #[arg(long, default_value_t = 200_000)]
    tuple_samples: u64,
    /// Runs per drawn tuple (with --n).
    #[arg(long, default_value_t = 1)]
    trials_per_tuple: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("target").required(true).args(["t", "a"])))]
pub struct ConstructArgs {
    #[arg(long)]
    n: usize,
    /// Odd numerator 2t - 1, for 1 <= t <= 2^(n-2).
    #[arg(long)]
    t: Option<u64>,
    /// Any numerator 0 <= a <= 2^(n-1).
    #[arg(long)]
    a: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Debug)]
pub struct Prefs(pub Vec<u32>);

/// Comma-separated positive integers; range checks happen later.
fn parse_prefs(s: &str) -> Result<Prefs, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{}` is not a preference", part.trim()))
        })
        .collect::<Result<_, _>>()
        .map(Prefs)
}

/// What a subcommand reports back: a domain error, a failed verification,
/// or success.
pub enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Prob(a) => commands::prob(a),
        Command::Table(a) => commands::table(a),
        Command::Census(a) => commands::census(a),
        Command::Verify(a) => commands::verify(a),
        Command::Mc(a) => commands::mc(a),
        Command::Construct(a) => commands::construct(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
