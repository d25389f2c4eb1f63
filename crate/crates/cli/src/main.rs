//! `ffsym`: command-line front end for the symbol toolkit.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffsym_core::io::DATA_DIR_ENV;

#[derive(Parser)]
#[command(name = "ffsym", version, about = "Three-gluon form factor symbol toolkit")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of keys at loop L that are not trivially zero.
    Count {
        #[arg(long = "loop")]
        loop_order: usize,
    },
    /// Emit the built-in one- or two-loop symbol.
    Builtin {
        #[arg(long = "loop")]
        loop_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fetch, verify and parse the files listed in an archive manifest.
    Ingest {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, env = DATA_DIR_ENV, default_value = "data")]
        data_dir: PathBuf,
        /// Fail instead of downloading missing files.
        #[arg(long)]
        offline: bool,
    },
    /// Check catalog relations against a symbol.
    VerifyRelations(VerifyArgs),
    /// Compress a symbol to the quad representation.
    Quad {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "loop")]
        loop_order: Option<usize>,
        /// Also check that expanding reproduces every input coefficient.
        #[arg(long)]
        check: bool,
    },
    /// Write a training dataset.
    Dataset(DatasetArgs),
    /// Score a prediction file.
    Score {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Defaults to every id in the truth file.
        #[arg(long)]
        test_ids: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relation metrics for every epoch-indexed prediction file in a directory.
    Curves {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        force_trivial_zeros: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of log10 coefficient magnitudes.
    Hist {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = ffsym_core::eval::DEFAULT_BIN_WIDTH)]
        width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Angles between the six letter embeddings.
    Angles {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "loop")]
    loop_order: usize,
    /// Instances per relation, or `all` for exhaustive enumeration.
    #[arg(long, default_value = "500")]
    n: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    relation: Option<String>,
    /// Truth symbol; the built-in symbol is used at loops 1 and 2.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// Write the checked instances here.
    #[arg(long)]
    instances_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    ZeroNonzero,
    Coeff,
    Mixed,
    Strikeout,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Uniform,
    Biased,
}

#[derive(Clone, Copy, ValueEnum)]
enum Repr {
    Full,
    Quad,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Coefficient,
    Magnitude,
    Sign,
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long)]
    seed: u64,
    /// Symbol file (the child symbol for strikeout).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Lower-loop symbol for mixed data.
    #[arg(long)]
    lower: Option<PathBuf>,
    /// Upper-loop symbol for mixed data.
    #[arg(long)]
    upper: Option<PathBuf>,
    /// Parent symbol for strikeout data.
    #[arg(long)]
    parent: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// File name stem; defaults to the task and loop.
    #[arg(long)]
    stem: Option<String>,
    #[arg(long)]
    train: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    test: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    policy: Policy,
    #[arg(long, value_enum, default_value = "full")]
    repr: Repr,
    #[arg(long, value_enum, default_value = "coefficient")]
    target: Target,
    /// Put the sign token after the digits.
    #[arg(long)]
    sign_last: bool,
    /// Strike distance: a number or `full`.
    #[arg(long, default_value = "full")]
    k: String,
    /// Strikeout variant such as `plain`, `sorted-unique` or `signs-only+shuffled`.
    #[arg(long, default_value = "plain")]
    variant: String,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: invalid-argument: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {e}", e.class());
            ExitCode::FAILURE
        }
    }
}
