//! Driving a batch run from code instead of the command line.

use gaussian_tv::cli::{run, JobConfig, OracleMode, OutputFormat};

fn main() {
    let input = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/acceptance_input.json"
    );
    let mut config = JobConfig::new(input);
    config.oracle = OracleMode::Auto;
    config.samples = 20_000;
    config.seed = 1;
    config.output_format = OutputFormat::Table;
    let outcome = run(&config);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    println!("exit code {}", outcome.exit_code);
}
