use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symbranch::abelian::Weight;
use symbranch::localize::{Caps, Engine};
use symbranch::pairs::PairSpec;
use symbranch::Error;
use symbranch_cli::commands;

#[derive(Parser)]
#[command(name = "symbranch", version, about = "Branching multiplicities for symmetric pairs by orbit localization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Branching table of one highest weight with per-orbit contributions
    Branch {
        #[command(flatten)]
        common: Common,
        /// G-dominant highest weight, e.g. `2,1,0` or `1;2` for a product
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Also list candidate weights whose total is zero
        #[arg(long)]
        all: bool,
        /// Compare against the brute-force oracle and report a verdict
        #[arg(long)]
        verify: bool,
    },
    /// Compare against the oracle and the full-Weyl route over many highest weights
    Verify {
        #[command(flatten)]
        common: Common,
        /// Sweep all dominant weights with entries in [0, BOX]
        #[arg(long, conflicts_with = "lambda")]
        lambda_box: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Check sign parity, transport identities and representative independence
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Highest weights with entries in [0, BOX] used for representative independence
        #[arg(long, default_value_t = 1)]
        lambda_box: i64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Summaries of the orbit classes of a pair
    Orbits {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct Common {
    /// su2-torus | diag:su2 | diag:u<k> | upq:<p>,<q>
    #[arg(long)]
    pair: String,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Largest Weyl group that may be enumerated
    #[arg(long, default_value_t = Caps::default().max_weyl)]
    max_weyl: usize,
    /// Largest representation dimension that may be expanded
    #[arg(long, default_value_t = Caps::default().max_dim)]
    max_dim: u128,
    /// Worker threads (0 picks the number of cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Common {
    fn engine(&self) -> Result<Engine, Error> {
        let caps = Caps { max_weyl: self.max_weyl, max_dim: self.max_dim, ..Caps::default() };
        Engine::new(PairSpec::parse(&self.pair)?, caps)
    }
}

fn emit<T: Serialize>(format: Format, report: &T, text: impl FnOnce(&T) -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("reports serialize")),
        Format::Table => print!("{}", text(report)),
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::UnsupportedPair(_)
            | Error::NotDominant(_)
            | Error::RankMismatch { .. }
            | Error::WeylCap { .. }
            | Error::DimensionCap { .. }
            | Error::WedgeCap { .. }
    )
}

fn run(cli: Cli) -> Result<bool, Error> {
    let common = match &cli.command {
        Command::Branch { common, .. }
        | Command::Verify { common, .. }
        | Command::Selftest { common, .. }
        | Command::Orbits { common } => common,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build_global()
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    let engine = common.engine()?;
    let g = engine.pair().g().clone();
    let dominant = |w: Weight| -> Result<Weight, Error> {
        g.require_dominant(&w)?;
        Ok(w)
    };
    match &cli.command {
        Command::Branch { lambda, all, verify, .. } => {
            let lambda = dominant(g.parse_weight(lambda)?)?;
            let (report, ok) = commands::cmd_branch(&engine, &lambda, *all, *verify)?;
            emit(common.format, &report, |r| r.to_text());
            Ok(ok)
        }
        Command::Verify { lambda_box, lambda, .. } => {
            let lambdas = match (lambda_box, lambda) {
                (_, Some(l)) => vec![dominant(g.parse_weight(l)?)?],
                (Some(b), None) if *b >= 0 => g.dominant_box(0, *b),
                _ => {
                    return Err(Error::Parse {
                        what: "verify range (give --lambda or --lambda-box >= 0)",
                        input: String::new(),
                    })
                }
            };
            let (report, ok) = commands::cmd_verify(&engine, &lambdas)?;
            emit(common.format, &report, |r| r.to_text());
            Ok(ok)
        }
        Command::Selftest { lambda_box, seed, .. } => {
            let (report, ok) = commands::cmd_selftest(&engine, &g.dominant_box(0, *lambda_box), *seed)?;
            emit(common.format, &report, |r| r.to_text());
            Ok(ok)
        }
        Command::Orbits { .. } => {
            emit(common.format, &commands::cmd_orbits(&engine), |r| r.to_text());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
