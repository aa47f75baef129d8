//! Closed-form M-PSK symbol error probability against transmit SNR.

use ris_relay::analytic::{sep_mpsk, total_mgf};
use ris_relay::fading::ChannelModel;
use ris_relay::{db_to_linear, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig::sub6_joint(64);
    let model = ChannelModel::from_config(&cfg).unwrap();
    println!("{:>8} {:>10} {:>10} {:>10}", "SNR dB", "BPSK", "QPSK", "8PSK");
    for snr_db in (80..=100).step_by(4) {
        let n0 = cfg.total_power() / db_to_linear(snr_db as f64);
        let mgf = total_mgf(&model, &cfg.power_allocation_at(n0).unwrap());
        let [b, q, e] = [2, 4, 8].map(|m| sep_mpsk(&mgf, m).unwrap());
        println!("{snr_db:>8} {b:>10.3e} {q:>10.3e} {e:>10.3e}");
    }
}
