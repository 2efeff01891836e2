use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gaussian_tv::cli::{parse_methods, run, JobConfig, OracleMode, OutputFormat};
use gaussian_tv::Tolerances;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleArg {
    Off,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

/// Bound the total variation distance between Gaussian pairs.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// JSON document with `pairs` and/or `ensembles`.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated subset of thm1,thm2,thm3,kl,hellinger,exact,all.
    #[arg(long, default_value = "all", value_parser = parse_methods)]
    methods: gaussian_tv::MethodSet,
    #[arg(long, value_enum, default_value = "off")]
    oracle: OracleArg,
    /// Monte Carlo draws per pair.
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = gaussian_tv::gaussian::DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[arg(long, default_value_t = gaussian_tv::gaussian::DEFAULT_RANGE_TOL)]
    range_tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Worker threads (defaults to available parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = JobConfig {
        input_path: args.input,
        methods: args.methods,
        oracle: match args.oracle {
            OracleArg::Off => OracleMode::Off,
            OracleArg::Auto => OracleMode::Auto,
        },
        samples: args.samples,
        seed: args.seed,
        tolerances: Tolerances {
            rank_tol: args.rank_tol,
            range_tol: args.range_tol,
        },
        output_format: match args.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Table => OutputFormat::Table,
        },
        threads: args.threads,
    };
    let outcome = run(&config);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.exit_code as u8)
}
