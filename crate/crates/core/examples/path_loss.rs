//! Link gains of the two built-in path-loss laws and of a cascaded RIS link.

use ris_relay::geometry::{cascaded_loss, CascadeRule, NodeLayout, PathLossModel, Point};
use ris_relay::{linear_to_db, Scheme};

fn main() {
    let sub6 = PathLossModel::umi_2_4ghz();
    let mmw = PathLossModel::umi_street_canyon_28ghz();
    println!("{:>8} {:>12} {:>12}", "d (m)", "UMi 2.4G", "UMi-SC 28G");
    for d in [1.0, 5.0, 10.0, 50.0, 100.0] {
        println!(
            "{d:>8.0} {:>10.1}dB {:>10.1}dB",
            sub6.loss_db(d).unwrap(),
            mmw.loss_db(d).unwrap()
        );
    }

    let layout = NodeLayout {
        source: Point::new(5.0, 0.0),
        destination: Point::new(5.0, 10.0),
        ris: Point::new(0.0, 15.0),
        relay: Point::new(10.0, 35.0),
    };
    for rule in [CascadeRule::Product, CascadeRule::EndToEnd] {
        let g = cascaded_loss(&layout, &sub6, Scheme::Joint, rule).unwrap();
        println!(
            "{rule:?}: S-RIS-D {:.1} dB, relay-D {:.1} dB",
            linear_to_db(g.ris_cascade),
            linear_to_db(g.relay_dest)
        );
    }
}
