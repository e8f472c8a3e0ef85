use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eewt_core::Mode;

#[derive(Debug, Parser)]
#[command(name = "eewt", version, about = "Nested coset coding for the erasure-erasure wiretap channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionKind {
    Eval,
    Cyclic,
}

/// Where the scheme comes from: a descriptor file, or construction flags.
#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// Scheme descriptor written by `construct`.
    #[arg(long, conflicts_with_all = ["field", "construction", "n", "nu", "mu", "k"])]
    pub scheme: Option<PathBuf>,
    /// Field, e.g. `gf(2^8,modulus=0x11D)`. Defaults to the smallest GF(2^m)
    /// with 2^m >= n + 1.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionKind>,
    /// Code length. Optional for the cyclic construction (n = q - 1).
    #[arg(long)]
    pub n: Option<usize>,
    /// Symbols the legitimate receiver sees.
    #[arg(long)]
    pub nu: Option<usize>,
    /// Symbols the eavesdropper sees.
    #[arg(long)]
    pub mu: Option<usize>,
    /// Secret length; defaults to nu - mu.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct ModeArg(pub Option<usize>);

impl FromStr for ModeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(ModeArg(None));
        }
        s.strip_prefix("sampled:")
            .and_then(|t| t.parse().ok())
            .filter(|&t: &usize| t > 0)
            .map(|t| ModeArg(Some(t)))
            .ok_or_else(|| format!("expected `exhaustive` or `sampled:N`, got `{s}`"))
    }
}

impl ModeArg {
    pub fn with_seed(self, seed: u64) -> Mode {
        match self.0 {
            None => Mode::Exhaustive,
            Some(trials) => Mode::Sampled { seed, trials },
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SeedArg {
    #[arg(long, env = "EEWT_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeChoice {
    /// D = C + C*.
    Sum,
    /// C.
    Message,
    /// C*.
    Randomizer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a scheme and print its descriptor.
    Construct {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a secret: X = S·G + E·G*.
    Encode {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Secret symbols, hex, space or comma separated.
        #[arg(long, conflicts_with = "input")]
        secret: Option<String>,
        /// File holding the secret symbols.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Randomizer symbols; drawn from --seed when omitted.
        #[arg(long)]
        randomizer: Option<String>,
        /// Emit an observation of these indices instead of the codeword.
        #[arg(long, value_delimiter = ',')]
        reveal: Option<Vec<usize>>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the secret from an observation (`index:value` lines) or a full
    /// codeword.
    Decode {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode, pass through both erasure channels, decode, and report what
    /// the eavesdropper learned.
    Simulate {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Secret symbols; drawn from --seed when omitted.
        #[arg(long)]
        secret: Option<String>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Check security over |W| = mu and reliability over |M| = nu.
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "exhaustive")]
        mode: ModeArg,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Dimension/length profile of one of the scheme's codes.
    Dlp {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_enum, default_value = "sum")]
        code: CodeChoice,
        /// Single profile entry; the whole profile when omitted.
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, default_value = "exhaustive")]
        mode: ModeArg,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Equivocation and leakage against the number of revealed symbols, CSV.
    Leakage {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "exhaustive")]
        mode: ModeArg,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split files into share files and join them back.
    Shares {
        #[command(subcommand)]
        action: SharesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum SharesAction {
    /// Write `<basename>.share<i>` for every node.
    Split {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Share basename; defaults to the input path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Reconstruct the original file from at least nu shares.
    Join {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(required = true)]
        shares: Vec<PathBuf>,
    },
    /// Report what the given shares reveal about each block.
    Leak {
        #[command(flatten)]
        scheme: SchemeArgs,
        shares: Vec<PathBuf>,
    },
    /// Print a share file header.
    Inspect { share: PathBuf },
}
