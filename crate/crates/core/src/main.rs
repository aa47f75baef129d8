use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ris_relay::experiments::run_experiment;

#[derive(Parser)]
#[command(name = "ris-relay", version, about = "Hybrid RIS + relay link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write <experiment>.csv and <experiment>.manifest.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// ber-sweep, rate-vs-position, rate-vs-N, power-allocation-map or oracle-validation.
        #[arg(long)]
        experiment: String,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to all cores.
        #[arg(long, env = "RIS_RELAY_THREADS")]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        config,
        experiment,
        out,
        seed,
        threads,
    } = Cli::parse().command;

    if let Some(n) = threads.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run_experiment(&config, &experiment, &out, seed) {
        Ok(run) => {
            println!("{} rows -> {}", run.result.rows.len(), run.csv.display());
            println!("manifest -> {}", run.manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprint!("error: {e}");
            if !e.to_string().ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
