//! `onlinify`: offline estimators, their online conversions, regret and coding
//! from the command line.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "onlinify", version, about = "Offline-to-online conversion of sequence estimators")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct Source {
    /// Estimator as JSON, e.g. '{"kind":"good_turing","d":3}', or a bare kind name.
    #[arg(long)]
    pub estimator: String,
    /// Alphabet size, when the estimator does not give one.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Conversion {
    /// Scheme as JSON, e.g. '{"scheme":"mixture","S":8}', or a bare scheme name.
    #[arg(long, default_value = "naive_norm")]
    pub scheme: String,
    /// Horizon S for the limit and mixture schemes.
    #[arg(short = 'S', long = "horizon")]
    pub horizon: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Data {
    /// Comma-separated symbols in 1..=d, e.g. 1,2,1.
    #[arg(long)]
    pub seq: Option<String>,
    /// File with one byte per symbol.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RegretMode {
    Exact,
    Bound,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact offline mass q_n(x).
    Mass {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        data: Data,
    },
    /// Conditional distribution of the next symbol after a prefix.
    Predict {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        conversion: Conversion,
        #[command(flatten)]
        data: Data,
    },
    /// Checks time consistency level by level.
    TcCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_n: usize,
    },
    /// Worst-case regret of a converted predictor at one horizon.
    Regret {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        conversion: Conversion,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = RegretMode::Exact)]
        mode: RegretMode,
    },
    /// Regret over a range of horizons, as CSV.
    RegretCurve {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        conversion: Conversion,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = RegretMode::Exact)]
        mode: RegretMode,
    },
    /// Certified bracket on the mixture probability of a sequence.
    Mix {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        data: Data,
        #[arg(long, value_parser = ["dense", "sparse"])]
        prior: Option<String>,
        #[arg(long, value_parser = ["uniform", "zero"])]
        completion: Option<String>,
        /// Sum horizons 0..=S.
        #[arg(short = 'S', long = "horizon", conflicts_with = "eps")]
        horizon: Option<usize>,
        /// Grow the horizon until the relative width is at most eps, e.g. 1/100.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Tracks the extension q̄_s(x) as s grows.
    LimitProbe {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        data: Data,
        /// Increasing horizons, e.g. 10,11,12; defaults to 12 horizons from 2n+2.
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Probability of all same-length sequences up to x in lexicographic order.
    Cdf {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        conversion: Conversion,
        #[command(flatten)]
        data: Data,
    },
    /// Bound checks for N_n along the staircase or cycle sequence.
    AppendixA {
        #[arg(long, value_parser = ["staircase", "cycle"])]
        kind: String,
        #[arg(long)]
        max_n: usize,
        /// Alphabet size; defaults to the smallest that fits the sequence.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Arithmetic-codes a sequence into a bitstream file.
    Encode {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        conversion: Conversion,
        #[command(flatten)]
        data: Data,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decodes a bitstream file.
    Decode {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        conversion: Conversion,
        #[arg(long = "in")]
        input: PathBuf,
        /// Write symbols as bytes here instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A message and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
    /// Output produced before the failure, still printed.
    partial: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            partial: String::new(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
            partial: String::new(),
        }
    }

    pub fn with_partial(mut self, partial: String) -> Self {
        self.partial = partial;
        self
    }
}

impl From<onlinify::Error> for Failure {
    fn from(e: onlinify::Error) -> Self {
        if e.is_budget() {
            Failure::budget(e.to_string())
        } else {
            Failure::validation(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    use commands as c;
    let f = cli.format;
    match cli.command {
        Command::Mass { source, data } => c::mass(f, &source, &data),
        Command::Predict { source, conversion, data } => c::predict(f, &source, &conversion, &data),
        Command::TcCheck { source, max_n } => c::tc_check(f, &source, max_n),
        Command::Regret { source, conversion, n, mode } => c::regret(f, &source, &conversion, n, mode),
        Command::RegretCurve { source, conversion, n_min, n_max, mode } => {
            c::regret_curve(f, &source, &conversion, n_min, n_max, mode)
        }
        Command::Mix { source, data, prior, completion, horizon, eps } => {
            c::mix(f, &source, &data, prior, completion, horizon, eps)
        }
        Command::LimitProbe { source, data, schedule } => {
            c::limit_probe(f, &source, &data, schedule.as_deref())
        }
        Command::Cdf { source, conversion, data } => c::cdf(f, &source, &conversion, &data),
        Command::AppendixA { kind, max_n, d } => c::appendix_a(f, &kind, max_n, d),
        Command::Encode { source, conversion, data, out } => c::encode(f, &source, &conversion, &data, &out),
        Command::Decode { source, conversion, input, out } => {
            c::decode(f, &source, &conversion, &input, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            print!("{}", failure.partial);
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
