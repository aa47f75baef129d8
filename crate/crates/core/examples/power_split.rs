//! Source/relay power split under a total budget, per realization.

use ris_relay::fading::ChannelModel;
use ris_relay::optimizer::sequential_optimize;
use ris_relay::ScenarioConfig;

fn main() {
    for y_relay in [40.0, 21.0] {
        let cfg = ScenarioConfig::mmwave_budget(256, 20.0, y_relay);
        let problem = cfg.split_problem().unwrap();
        let model = ChannelModel::from_config(&cfg).unwrap();
        println!("relay at y = {y_relay}:");
        for seed in 0..4 {
            let r = sequential_optimize(&model.draw(seed), &problem).unwrap();
            println!(
                "  draw {seed}: P1* = {:.3} W, P2* = {:.3} W, {:?}, rate {:.3} b/s/Hz",
                r.solution.p1_star, r.solution.p2_star, r.solution.active_constraint, r.rate
            );
        }
    }
}
