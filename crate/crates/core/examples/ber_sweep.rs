//! Simulated BER against the closed-form SEP over an SNR sweep.

use ris_relay::config::{SweepSpec, SweepVariable};
use ris_relay::montecarlo::{simulate_ber, SweepPlan, Swept};
use ris_relay::ScenarioConfig;

fn main() {
    let mut cfg = ScenarioConfig::sub6_joint(64);
    cfg.sweep = Some(SweepSpec {
        variable: SweepVariable::SnrDb,
        values: vec![86.0, 90.0, 94.0],
        trials: Some(2_000_000),
        min_errors: 300,
        symbols_per_draw: 8,
    });
    let res = simulate_ber(&SweepPlan::from_config(&cfg, 0).unwrap()).unwrap();
    for (x, ber) in res.series("ber") {
        let sep = res.find(x, "sep_analytic").unwrap().value;
        let ci = res.find(x, "ber").unwrap().ci_halfwidth;
        if let Swept::Scalar(snr) = x {
            println!("{snr:>5} dB  BER {ber:.3e} ± {ci:.1e}  SEP {sep:.3e}");
        }
    }
}
