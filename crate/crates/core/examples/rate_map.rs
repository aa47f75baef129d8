//! Average rate over RIS and relay positions, ideal and non-ideal relay.

use ris_relay::config::RelayMode;
use ris_relay::montecarlo::simulate_rate_grid;
use ris_relay::ScenarioConfig;

fn main() {
    let ys = [0.0, 15.0, 30.0, 45.0, 60.0];
    let cfg = ScenarioConfig::mmwave_placement(256, 0.0, 30.0);
    for (mode, metric) in [(RelayMode::Ideal, "rate_ideal"), (RelayMode::Nonideal, "rate_nonideal")] {
        let res = simulate_rate_grid(&cfg, &ys, &ys, mode, 200).unwrap();
        println!("{metric} (rows: RIS y, columns: relay y)");
        for (i, row) in res.series(metric).chunks(ys.len()).enumerate() {
            let cells: Vec<String> = row.iter().map(|(_, v)| format!("{v:6.2}")).collect();
            println!("{:>5} {}", ys[i], cells.join(" "));
        }
    }
}
