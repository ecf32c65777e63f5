//! Command-line front end. Every subcommand prints one JSON artifact (or a
//! one-line summary with `--format text`) and maps its outcome to an exit
//! status: 0 verified, 1 error or failed verification, 2 undecided at the
//! chosen truncation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "dichot", version, about = "Schreier families, Schreier games and their certificates")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Also write the artifact here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership, enumeration and counting for S_α and tuple families.
    #[command(subcommand)]
    Schreier(SchreierCmd),
    /// Play, solve or verify a Schreier game on a family.
    #[command(subcommand)]
    Game(GameCmd),
    /// Spreading maps of bound games.
    #[command(subcommand)]
    Spreadmap(SpreadmapCmd),
    /// Embeddings of a hereditary family into a tuple family.
    #[command(subcommand)]
    Embed(EmbedCmd),
    #[command(subcommand)]
    Dichotomy(DichotomyCmd),
    #[command(subcommand)]
    Example(ExampleCmd),
    /// Strong Cantor-Bendixson rank, index and the bar operator.
    #[command(subcommand)]
    Cb(CbCmd),
}

/// `--alpha` for a single S_α, `--tuple` for a tuple family.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TargetArg {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub tuple: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SchreierCmd {
    Member {
        #[command(flatten)]
        target: TargetArg,
        #[arg(long)]
        set: String,
    },
    Enum {
        #[command(flatten)]
        target: TargetArg,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
    },
    Count {
        #[command(flatten)]
        target: TargetArg,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1 << 20)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MachineSide {
    N,
    S,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub tuple: String,
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub universe: u64,
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// Interactive session on stdin/stdout.
    Play {
        #[command(flatten)]
        game: GameArgs,
        /// The side the program plays.
        #[arg(long, value_enum, default_value_t = MachineSide::N)]
        machine: MachineSide,
    },
    Solve {
        #[command(flatten)]
        game: GameArgs,
        /// Largest choice for N; defaults to the universe bound.
        #[arg(long)]
        n_budget: Option<u64>,
        /// Count plays where S runs out of room as wins for N.
        #[arg(long)]
        allow_truncation: bool,
        #[arg(long, default_value_t = 2_000_000)]
        cap: usize,
    },
    Verify {
        #[command(flatten)]
        game: GameArgs,
        /// const:<l>, seq:<l,..>, prevmin:<l,..> or file:<strategy.json>.
        #[arg(long)]
        strategy: String,
    },
}

#[derive(Debug, Args)]
pub struct BoundGameArgs {
    #[arg(long)]
    pub tuple: String,
    #[arg(long)]
    pub policy: String,
    #[arg(long)]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum SpreadmapCmd {
    Build {
        #[command(flatten)]
        game: BoundGameArgs,
    },
    /// Rebuilds nothing: checks a stored map (or a fresh one) on all minimal plays.
    Verify {
        #[command(flatten)]
        game: BoundGameArgs,
        #[arg(long)]
        map: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EmbedCmd {
    Build {
        #[arg(long)]
        family: String,
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        policy: String,
        #[arg(long)]
        universe: u64,
    },
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum DichotomyCmd {
    Run {
        #[arg(long)]
        family: String,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        universe: u64,
        /// Also run the diagonalization for a leading 0 to this many stages.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 6)]
        inclusion_len: usize,
        #[arg(long)]
        n_budget: Option<u64>,
        #[arg(long, default_value_t = 64)]
        max_candidates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    /// The family built from the blocks {2^k+1, …, 2^k+k}.
    Amt {
        #[arg(long)]
        kmax: u32,
        /// Sequence prefix; defaults to the identity on the family's universe.
        #[arg(long)]
        m: Option<String>,
        /// Produce and check both non-inclusion witnesses.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CbCmd {
    Rank {
        #[arg(long)]
        family: String,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    Index {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// Members of the barred family within a bound.
    Bar {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
}

/// What a command established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Failed,
    Undecided,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Verified => 0,
            Status::Failed => 1,
            Status::Undecided => 2,
        }
    }
}

pub struct Report {
    pub json: String,
    pub text: String,
    pub status: Status,
}

fn describe(e: &Error) -> String {
    let mut msg = format!("error: {e}");
    if let Error::Parse { what, .. } = e {
        if (*what == "tuple" || *what == "ordinal") && !msg.contains(crate::ordinal::GRAMMAR_HINT) {
            msg.push_str(&format!("\nhint: {}", crate::ordinal::GRAMMAR_HINT));
        }
    }
    msg
}

/// Runs a parsed command, writing the artifact to `stdout` (and `--out`).
pub fn run_with<W: std::io::Write, E: std::io::Write>(cli: Cli, stdout: &mut W, stderr: &mut E) -> u8 {
    let result = commands::dispatch(&cli.command, stdout).and_then(|report| {
        if let Some(path) = &cli.out {
            std::fs::write(path, &report.json)?;
        }
        Ok(report)
    });
    match result {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => &report.json,
                Format::Text => &report.text,
            };
            let _ = writeln!(stdout, "{}", body.trim_end());
            report.status.code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", describe(&e));
            1
        }
    }
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let code = run_with(cli, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code)
}
