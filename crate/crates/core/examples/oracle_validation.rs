//! Closed-form moments and MGFs against sampled SNRs.

use ris_relay::experiments::{execute, Experiment};
use ris_relay::ScenarioConfig;

fn main() {
    let res = execute(Experiment::OracleValidation, &ScenarioConfig::sub6_integrated(64)).unwrap();
    for row in &res.rows {
        println!("{:<8} {:<28} {:>12.5e}", row.swept, row.metric, row.value);
    }
}
