//! Load a TOML scenario, report diagnostics, and run an experiment into a
//! temporary directory.

use ris_relay::config::validate_config;
use ris_relay::experiments::run_experiment;

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let bad = "scheme = \"joint\"\nK_dB = \"10dB\"\nfrequency = 2.4e9\n";
    if let Err(diags) = validate_config(bad) {
        println!("rejected config:\n{diags}");
    }
    let out = std::env::temp_dir().join("ris-relay-example");
    let run = run_experiment(&dir.join("rate_vs_n.toml"), "rate-vs-N", &out, Some(9)).unwrap();
    println!("{} rows -> {}", run.result.rows.len(), run.csv.display());
}
