//! Link-level simulation and closed-form analysis of hybrid transmission
//! schemes that pair a passive reconfigurable intelligent surface (RIS) with a
//! half-duplex decode-and-forward relay.
//!
//! Two hybrid schemes are modelled:
//!
//! * **joint**: the RIS sits near the source and reflects towards both the
//!   relay and the destination; in the second slot the source (via the RIS)
//!   and the relay transmit together.
//! * **integrated**: RIS and relay share one device between source and
//!   destination; the relay retransmits in the second slot.
//!
//! The crate is organised bottom-up: [`geometry`] (placement and path loss),
//! [`fading`] (Rician draws), [`schemes`] (phase alignment, SNRs, MRC),
//! [`analytic`] (moments, MGFs, SEP, rates), [`optimizer`] (sequential phase
//! and power optimization), [`montecarlo`] (simulation engine) and
//! [`experiments`] (config-driven runs writing CSV + JSON manifests).

pub mod analytic;
pub mod config;
pub mod experiments;
pub mod fading;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod schemes;
pub mod seeding;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use config::ScenarioConfig;
pub use fading::{ChannelModel, ChannelRealization};
pub use geometry::{NodeLayout, PathLossModel, Point};
pub use schemes::{PowerAllocation, SnrBreakdown};

/// Transmission scheme. `RisOnly` and `RelayOnly` are single-technology
/// benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Joint,
    Integrated,
    RisOnly,
    RelayOnly,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Joint,
        Scheme::Integrated,
        Scheme::RisOnly,
        Scheme::RelayOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Joint => "joint",
            Scheme::Integrated => "integrated",
            Scheme::RisOnly => "ris-only",
            Scheme::RelayOnly => "relay-only",
        }
    }

    pub fn has_relay(self) -> bool {
        self != Scheme::RisOnly
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown scheme {s:?} (expected joint, integrated, ris-only or relay-only)"))
    }
}

/// Converts dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Converts dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}
