//! Rician channel draws: per-seed determinism and empirical power.

use ris_relay::fading::{draw_rician, ChannelModel, RicianSpec};
use ris_relay::{db_to_linear, ScenarioConfig};

fn main() {
    let spec = RicianSpec::new(db_to_linear(10.0), 1.0, 4096);
    let h = draw_rician(&spec, 7);
    let power = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / h.len() as f64;
    let mean = h.iter().sum::<num_complex::Complex64>() / h.len() as f64;
    println!("4096 coefficients, K = 10 dB: mean power {power:.3}, mean {mean:.3}");
    assert_eq!(h, draw_rician(&spec, 7));

    let model = ChannelModel::from_config(&ScenarioConfig::sub6_joint(64)).unwrap();
    let real = model.draw(1);
    println!(
        "joint realization: {} elements, |g_RD| = {:.3e}",
        real.elements(),
        real.g_rd.map_or(0.0, |g| g.norm())
    );
}
