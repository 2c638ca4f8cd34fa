use clap::{Args, Parser, Subcommand, ValueEnum};

use ordtope::audit::DEFAULT_SEED;
use ordtope::numeric::DEFAULT_DIGITS;
use ordtope::order::DEFAULT_BUDGET;

#[derive(Parser, Debug)]
#[command(name = "ordtope", version, about = "Prime-power codes, log orders and finite distance spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Fractional decimal digits of every truncated logarithm.
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,
    /// Largest number of codes any command may materialize.
    #[arg(long, global = true, env = "ORDTOPE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock times (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct Kind {
    /// Prime-power product code.
    #[arg(long)]
    pub g: bool,
    /// Truncated log-sum code.
    #[arg(long)]
    pub l: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a comma-separated exponent vector.
    Encode {
        #[command(flatten)]
        kind: Kind,
        /// `first:m` or `prog:a:d`; defaults to the first primes.
        #[arg(long)]
        basis: Option<String>,
        exponents: String,
    },
    /// Recover exponents from a g-code (decimal) or an l-code (decimal log value).
    Decode {
        #[command(flatten)]
        kind: Kind,
        #[arg(long)]
        basis: String,
        /// Largest exponent searched when decoding an l-code.
        #[arg(long, default_value_t = 1)]
        max_exponent: u32,
        /// Code length; required for `prog:a:d` bases.
        #[arg(long)]
        length: Option<usize>,
        value: String,
    },
    /// CSV of every code of `{0..k}^n` in value order.
    OrderCurve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value_t = 1)]
        max_exponent: u32,
    },
    /// Binary search by rank for a code with the given l-code value.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value_t = 1)]
        max_exponent: u32,
        #[arg(long)]
        target: String,
    },
    /// Run claim audits and print a JSON array of reports.
    Audit {
        /// Comma-separated claim ids, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        claims: Vec<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// JST block parameter K.
        #[arg(long)]
        k: Option<usize>,
        /// JST block parameter M.
        #[arg(long)]
        m: Option<usize>,
        /// Exponent bound of the JST third code.
        #[arg(long)]
        exp_bound: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        #[arg(long)]
        targets: Option<usize>,
        /// Print the report JSON schema and exit.
        #[arg(long)]
        schema: bool,
    },
    /// Build a JST matrix and its three l-codes.
    Jst {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        exp_bound: u32,
        /// Print order audits for this cell instead of the codes.
        #[arg(long)]
        audit: bool,
    },
    /// Uniform points on the sphere in even dimension `n`.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Print pairwise distance statistics instead of points.
        #[arg(long)]
        stats: bool,
    },
    /// Sort natural numbers by letting beads fall.
    Beadsort {
        #[arg(long)]
        width: u64,
        values: String,
    },
    /// Compare order search, linear scan and sort-then-search.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "4,8,12,16")]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        targets: usize,
    },
}
