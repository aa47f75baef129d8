//! Phase alignment and instantaneous SNRs of every scheme on one realization.

use ris_relay::fading::ChannelModel;
use ris_relay::schemes::{instantaneous_snrs, PowerAllocation};
use ris_relay::{dbm_to_watts, linear_to_db, ScenarioConfig, Scheme};

fn main() {
    let n0 = dbm_to_watts(-100.0);
    for scheme in Scheme::ALL {
        let mut cfg = match scheme {
            Scheme::Joint | Scheme::RisOnly => ScenarioConfig::sub6_joint(64),
            _ => ScenarioConfig::sub6_integrated(64),
        };
        cfg.scheme = scheme;
        let model = ChannelModel::from_config(&cfg).unwrap();
        let pa = PowerAllocation::new(scheme, 5.0, 5.0, n0).unwrap();
        let s = instantaneous_snrs(&model.draw(3), &pa, scheme).unwrap();
        println!(
            "{:<11} gamma1 {:>6.1} dB  gamma2 {:>6.1} dB  total {:>6.1} dB  relay {:>6.1} dB",
            scheme.as_str(),
            linear_to_db(s.gamma1),
            linear_to_db(s.gamma2),
            linear_to_db(s.gamma_tot),
            linear_to_db(s.gamma_r)
        );
    }
}
