//! Node placement in the plane and large-scale path loss.
//!
//! All path-loss models are affine in `log10(d)` and `log10(f_GHz)`:
//!
//! ```text
//! PL(dB) = intercept + distance_slope * log10(d / 1 m) + frequency_slope * log10(f / 1 GHz)
//! ```
//!
//! Gains handed to the rest of the crate are linear power gains `10^(-PL/10)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Scheme;

/// Distances below this are clamped before the log-distance law is applied.
pub const MIN_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("nodes {0} and {1} coincide")]
    Coincident(&'static str, &'static str),
    #[error("integrated scheme requires the RIS and relay to share one location")]
    SplitIntegratedNode,
    #[error("distance {0} m is not positive")]
    Domain(f64),
    #[error("invalid path-loss model: {0}")]
    InvalidModel(String),
    #[error("link {0} is blocked in this scheme")]
    BlockedLink(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Euclidean distance in meters.
pub fn distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Positions of the four terminals. In the integrated scheme `ris` and `relay`
/// are the same device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeLayout {
    pub source: Point,
    pub destination: Point,
    pub ris: Point,
    pub relay: Point,
}

impl NodeLayout {
    /// Integrated-scheme layout with a single shared RIS/relay node.
    pub fn integrated(source: Point, destination: Point, node: Point) -> Self {
        Self {
            source,
            destination,
            ris: node,
            relay: node,
        }
    }

    pub fn validate(&self, scheme: Scheme) -> Result<(), GeometryError> {
        let named = [
            ("source", self.source),
            ("destination", self.destination),
            ("ris", self.ris),
            ("relay", self.relay),
        ];
        for (name, p) in named {
            if !p.is_finite() {
                return Err(GeometryError::NonFinite(name));
            }
        }

        let active: &[(&'static str, Point)] = match scheme {
            Scheme::Joint => &named,
            Scheme::Integrated => {
                if self.ris != self.relay {
                    return Err(GeometryError::SplitIntegratedNode);
                }
                &named[..3]
            }
            Scheme::RisOnly => &named[..3],
            Scheme::RelayOnly => &[named[0], named[1], named[3]],
        };
        for (i, (na, pa)) in active.iter().enumerate() {
            for (nb, pb) in &active[i + 1..] {
                if distance(*pa, *pb) == 0.0 {
                    return Err(GeometryError::Coincident(na, nb));
                }
            }
        }
        Ok(())
    }
}

/// Coefficients of an affine-in-log10 path-loss law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineLogLoss {
    pub intercept_db: f64,
    pub distance_slope_db: f64,
    pub frequency_slope_db: f64,
}

impl AffineLogLoss {
    /// 3GPP UMi NLOS form used at 2.4 GHz.
    pub const UMI_NLOS: Self = Self {
        intercept_db: 22.7,
        distance_slope_db: 36.7,
        frequency_slope_db: 26.0,
    };

    /// 3GPP UMi LOS form below the breakpoint distance.
    pub const UMI_LOS: Self = Self {
        intercept_db: 28.0,
        distance_slope_db: 22.0,
        frequency_slope_db: 20.0,
    };

    /// 5G UMi street-canyon LOS form used at 28 GHz.
    pub const UMI_STREET_CANYON_LOS: Self = Self {
        intercept_db: 32.4,
        distance_slope_db: 21.0,
        frequency_slope_db: 20.0,
    };

    pub fn loss_db(&self, d: f64, carrier_hz: f64) -> f64 {
        self.intercept_db
            + self.distance_slope_db * d.log10()
            + self.frequency_slope_db * (carrier_hz / 1e9).log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PathLossKind {
    /// 3GPP Urban Micro, intended for 2.4 GHz.
    Umi,
    /// 5G UMi street canyon, intended for 28 GHz.
    UmiStreetCanyon,
    Custom(AffineLogLoss),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub carrier_hz: f64,
    pub kind: PathLossKind,
}

impl PathLossModel {
    pub fn new(carrier_hz: f64, kind: PathLossKind) -> Result<Self, GeometryError> {
        let model = Self { carrier_hz, kind };
        model.check()?;
        Ok(model)
    }

    pub fn umi_2_4ghz() -> Self {
        Self {
            carrier_hz: 2.4e9,
            kind: PathLossKind::Umi,
        }
    }

    pub fn umi_street_canyon_28ghz() -> Self {
        Self {
            carrier_hz: 28e9,
            kind: PathLossKind::UmiStreetCanyon,
        }
    }

    pub fn coefficients(&self) -> AffineLogLoss {
        match self.kind {
            PathLossKind::Umi => AffineLogLoss::UMI_NLOS,
            PathLossKind::UmiStreetCanyon => AffineLogLoss::UMI_STREET_CANYON_LOS,
            PathLossKind::Custom(c) => c,
        }
    }

    /// A model is usable when it yields a non-negative loss at the clamp
    /// distance and never decreases its loss with distance.
    pub fn check(&self) -> Result<(), GeometryError> {
        if !(self.carrier_hz.is_finite() && self.carrier_hz > 0.0) {
            return Err(GeometryError::InvalidModel(format!(
                "carrier frequency {} Hz",
                self.carrier_hz
            )));
        }
        let c = self.coefficients();
        if !(c.intercept_db.is_finite()
            && c.distance_slope_db.is_finite()
            && c.frequency_slope_db.is_finite())
        {
            return Err(GeometryError::InvalidModel("non-finite coefficient".into()));
        }
        if c.distance_slope_db < 0.0 {
            return Err(GeometryError::InvalidModel(format!(
                "negative distance slope {}",
                c.distance_slope_db
            )));
        }
        let at_min = c.loss_db(MIN_DISTANCE_M, self.carrier_hz);
        if at_min < 0.0 {
            return Err(GeometryError::InvalidModel(format!(
                "loss at {MIN_DISTANCE_M} m is {at_min:.2} dB (gain above unity)"
            )));
        }
        Ok(())
    }

    pub fn loss_db(&self, d: f64) -> Result<f64, GeometryError> {
        if d.is_nan() || d <= 0.0 {
            return Err(GeometryError::Domain(d));
        }
        let d = d.max(MIN_DISTANCE_M);
        Ok(self.coefficients().loss_db(d, self.carrier_hz))
    }

    /// Linear power gain at distance `d`.
    pub fn gain(&self, d: f64) -> Result<f64, GeometryError> {
        Ok(10f64.powf(-self.loss_db(d)? / 10.0))
    }
}

/// Shorthand for [`PathLossModel::gain`].
pub fn pathloss_linear(model: &PathLossModel, d: f64) -> Result<f64, GeometryError> {
    model.gain(d)
}

/// How the RIS cascade gain is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CascadeRule {
    /// Product of the two segment gains (double fading).
    #[default]
    Product,
    /// A single law evaluated over the end-to-end distance from the source.
    EndToEnd,
}

/// Linear gains of every link used by a scheme.
///
/// The `*_element` gains are the per-element second moments the fading
/// generator uses; under [`CascadeRule::Product`] they are the segment gains,
/// under [`CascadeRule::EndToEnd`] the whole cascade loss is carried by the
/// second segment and the first is unity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGains {
    pub scheme: Scheme,
    pub source_ris_element: f64,
    pub ris_dest_element: f64,
    pub ris_relay_element: f64,
    /// P_L^{R_1}: cascade S -> RIS -> D.
    pub ris_cascade: f64,
    /// P_L^D: relay -> destination.
    pub relay_dest: f64,
    source_relay: Option<f64>,
}

impl LinkGains {
    /// Source -> relay gain. Only the integrated scheme and the relay-only
    /// benchmark have this link.
    pub fn source_relay(&self) -> Result<f64, GeometryError> {
        self.source_relay
            .ok_or(GeometryError::BlockedLink("source-relay"))
    }

    /// Cascade S -> RIS -> relay, joint scheme.
    pub fn ris_relay_cascade(&self) -> f64 {
        self.source_ris_element * self.ris_relay_element
    }
}

pub fn cascaded_loss(
    layout: &NodeLayout,
    model: &PathLossModel,
    scheme: Scheme,
    rule: CascadeRule,
) -> Result<LinkGains, GeometryError> {
    cascaded_loss_split(layout, model, model, scheme, rule)
}

/// Like [`cascaded_loss`], with a separate model for the RIS segments
/// (typically a LOS law) and `model` for the relay and direct links.
pub fn cascaded_loss_split(
    layout: &NodeLayout,
    model: &PathLossModel,
    ris_model: &PathLossModel,
    scheme: Scheme,
    rule: CascadeRule,
) -> Result<LinkGains, GeometryError> {
    layout.validate(scheme)?;
    model.check()?;
    ris_model.check()?;
    let g = |a: Point, b: Point| model.gain(distance(a, b));
    let gr = |a: Point, b: Point| ris_model.gain(distance(a, b));

    let uses_ris = scheme != Scheme::RelayOnly;
    let (source_ris_element, ris_dest_element, ris_relay_element) = if !uses_ris {
        (0.0, 0.0, 0.0)
    } else {
        let relay_leg = if scheme == Scheme::Joint {
            match rule {
                CascadeRule::Product => gr(layout.ris, layout.relay)?,
                CascadeRule::EndToEnd => gr(layout.source, layout.relay)?,
            }
        } else {
            0.0
        };
        match rule {
            CascadeRule::Product => (
                gr(layout.source, layout.ris)?,
                gr(layout.ris, layout.destination)?,
                relay_leg,
            ),
            CascadeRule::EndToEnd => (1.0, gr(layout.source, layout.destination)?, relay_leg),
        }
    };

    let relay_dest = match scheme {
        Scheme::RisOnly => 0.0,
        _ => g(layout.relay, layout.destination)?,
    };
    let source_relay = match scheme {
        Scheme::Integrated | Scheme::RelayOnly => Some(g(layout.source, layout.relay)?),
        _ => None,
    };

    Ok(LinkGains {
        scheme,
        source_ris_element,
        ris_dest_element,
        ris_relay_element,
        ris_cascade: source_ris_element * ris_dest_element,
        relay_dest,
        source_relay,
    })
}
