//! Rician fading draws for every link of a scenario.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::geometry::{cascaded_loss_split, GeometryError, LinkGains};
use crate::seeding::stream_rng;
use crate::Scheme;

/// Parameters of an i.i.d. Rician vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianSpec {
    /// Linear K-factor.
    pub k: f64,
    /// E[|h_i|^2].
    pub mean_power: f64,
    pub n: usize,
}

impl RicianSpec {
    pub fn new(k: f64, mean_power: f64, n: usize) -> Self {
        debug_assert!(k >= 0.0 && mean_power >= 0.0);
        Self { k, mean_power, n }
    }

    /// (LOS amplitude, per-dimension scatter std) for unit mean power.
    fn unit_amplitudes(&self) -> (f64, f64) {
        if self.k.is_infinite() {
            (1.0, 0.0)
        } else {
            let los = (self.k / (self.k + 1.0)).sqrt();
            let scatter = (1.0 / (2.0 * (self.k + 1.0))).sqrt();
            (los, scatter)
        }
    }

    /// Appends `n` draws to `out`. The LOS phase is zero for every element.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<Complex64>) {
        let (los, scatter) = self.unit_amplitudes();
        let amp = self.mean_power.sqrt();
        out.reserve(self.n);
        for _ in 0..self.n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            out.push(Complex64::new(amp * (los + scatter * re), amp * scatter * im));
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.n);
        self.fill(rng, &mut v);
        v
    }

    pub fn sample_scalar<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let (los, scatter) = self.unit_amplitudes();
        let amp = self.mean_power.sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(amp * (los + scatter * re), amp * scatter * im)
    }
}

pub fn draw_rician(spec: &RicianSpec, seed: u64) -> Vec<Complex64> {
    spec.sample(&mut stream_rng(seed, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
enum LinkStream {
    SourceRis = 0,
    RisDest = 1,
    RisRelay = 2,
    SourceRelay = 3,
    RelayDest = 4,
}

/// One draw of every channel of the active scheme, path loss included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub scheme: Scheme,
    pub h_sr: Vec<Complex64>,
    pub h_rd: Vec<Complex64>,
    /// RIS -> relay, joint scheme only.
    pub g_r: Option<Vec<Complex64>>,
    /// Source -> relay, integrated scheme and relay-only benchmark.
    pub g_sr: Option<Complex64>,
    /// Relay -> destination; absent for the RIS-only benchmark.
    pub g_rd: Option<Complex64>,
    pub seed: u64,
}

impl ChannelRealization {
    pub fn elements(&self) -> usize {
        self.h_sr.len()
    }
}

/// Resolved large-scale parameters of a scenario; draws realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub scheme: Scheme,
    pub elements: usize,
    pub k: f64,
    pub gains: LinkGains,
}

impl ChannelModel {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self, GeometryError> {
        let ris_model = cfg.ris_pathloss.as_ref().unwrap_or(&cfg.pathloss);
        let gains = cascaded_loss_split(&cfg.layout, &cfg.pathloss, ris_model, cfg.scheme, cfg.cascade)?;
        let elements = if cfg.scheme == Scheme::RelayOnly {
            0
        } else {
            cfg.elements
        };
        Ok(Self {
            scheme: cfg.scheme,
            elements,
            k: cfg.k_linear(),
            gains,
        })
    }

    /// Draws every link from its own stream of `seed`, so adding or
    /// removing a link never perturbs the others.
    pub fn draw(&self, seed: u64) -> ChannelRealization {
        let mut out = ChannelRealization {
            scheme: self.scheme,
            h_sr: Vec::new(),
            h_rd: Vec::new(),
            g_r: None,
            g_sr: None,
            g_rd: None,
            seed,
        };
        self.draw_into(seed, &mut out);
        out
    }

    /// Like [`draw`](Self::draw) but reuses the buffers of `out`.
    pub fn draw_into(&self, seed: u64, out: &mut ChannelRealization) {
        let n = self.elements;
        let vector = |power: f64| RicianSpec::new(self.k, power, n);
        let scalar = |power: f64| RicianSpec::new(self.k, power, 1);
        let g = &self.gains;

        out.scheme = self.scheme;
        out.seed = seed;
        out.h_sr.clear();
        out.h_rd.clear();
        vector(g.source_ris_element).fill(&mut stream_rng(seed, LinkStream::SourceRis as u64), &mut out.h_sr);
        vector(g.ris_dest_element).fill(&mut stream_rng(seed, LinkStream::RisDest as u64), &mut out.h_rd);

        out.g_r = match self.scheme {
            Scheme::Joint => {
                let mut v = out.g_r.take().unwrap_or_default();
                v.clear();
                vector(g.ris_relay_element)
                    .fill(&mut stream_rng(seed, LinkStream::RisRelay as u64), &mut v);
                Some(v)
            }
            _ => None,
        };
        out.g_sr = match g.source_relay() {
            Ok(p) => Some(scalar(p).sample_scalar(&mut stream_rng(seed, LinkStream::SourceRelay as u64))),
            Err(_) => None,
        };
        out.g_rd = match self.scheme {
            Scheme::RisOnly => None,
            _ => Some(
                scalar(g.relay_dest)
                    .sample_scalar(&mut stream_rng(seed, LinkStream::RelayDest as u64)),
            ),
        };
    }
}

/// Draws one realization of the configured scenario.
pub fn draw_scenario(cfg: &ScenarioConfig, seed: u64) -> Result<ChannelRealization, GeometryError> {
    Ok(ChannelModel::from_config(cfg)?.draw(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::special::laguerre_half;
    use crate::config::ScenarioConfig;
    use std::f64::consts::PI;

    #[test]
    fn los_limit_magnitude() {
        let spec = RicianSpec::new(1e9, 4.0, 1000);
        for h in draw_rician(&spec, 1) {
            assert!((h.norm() / 2.0 - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn rayleigh_second_moment() {
        let spec = RicianSpec::new(0.0, 2.5, 1_000_000);
        let v = draw_rician(&spec, 11);
        let m2 = v.iter().map(|h| h.norm_sqr()).sum::<f64>() / v.len() as f64;
        assert!((m2 / 2.5 - 1.0).abs() < 0.01, "{m2}");
    }

    #[test]
    fn rician_mean_envelope() {
        let k = 10.0;
        let p = 0.3;
        let v = draw_rician(&RicianSpec::new(k, p, 1_000_000), 5);
        let mean = v.iter().map(|h| h.norm()).sum::<f64>() / v.len() as f64;
        let expected = p.sqrt() * (PI / (4.0 * (k + 1.0))).sqrt() * laguerre_half(-k);
        assert!((mean / expected - 1.0).abs() < 0.01, "{mean} vs {expected}");
    }

    #[test]
    fn second_moment_within_three_sigma() {
        // Var(|h|^2) = P^2 (1 + 2K) / (K + 1)^2 for a Rician power.
        let (k, p, n) = (10.0, 1.7, 100_000usize);
        let v = draw_rician(&RicianSpec::new(k, p, n), 99);
        let m2 = v.iter().map(|h| h.norm_sqr()).sum::<f64>() / n as f64;
        let sd = p * ((1.0 + 2.0 * k) / ((k + 1.0) * (k + 1.0))).sqrt() / (n as f64).sqrt();
        assert!((m2 - p).abs() < 3.0 * sd);
    }

    fn cfg(scheme: Scheme) -> ScenarioConfig {
        match scheme {
            Scheme::Integrated => ScenarioConfig::sub6_integrated(16),
            _ => ScenarioConfig {
                scheme,
                ..ScenarioConfig::sub6_joint(16)
            },
        }
    }

    #[test]
    fn scheme_field_selection() {
        let joint = draw_scenario(&cfg(Scheme::Joint), 1).unwrap();
        assert!(joint.g_r.is_some() && joint.g_sr.is_none() && joint.g_rd.is_some());
        assert_eq!(joint.h_sr.len(), 16);
        assert_eq!(joint.g_r.as_ref().unwrap().len(), 16);

        let integ = draw_scenario(&cfg(Scheme::Integrated), 1).unwrap();
        assert!(integ.g_r.is_none() && integ.g_sr.is_some() && integ.g_rd.is_some());

        let relay = draw_scenario(&cfg(Scheme::RelayOnly), 1).unwrap();
        assert!(relay.h_sr.is_empty() && relay.g_sr.is_some());

        let ris = draw_scenario(&cfg(Scheme::RisOnly), 1).unwrap();
        assert!(ris.g_rd.is_none() && ris.g_r.is_none());
    }

    #[test]
    fn deterministic() {
        let c = cfg(Scheme::Joint);
        assert_eq!(draw_scenario(&c, 42).unwrap(), draw_scenario(&c, 42).unwrap());
        assert_ne!(draw_scenario(&c, 42).unwrap(), draw_scenario(&c, 43).unwrap());
    }

    #[test]
    fn links_are_uncorrelated() {
        // Correlation between the first elements of h_sr and h_rd across draws.
        let model = ChannelModel {
            k: 0.0,
            ..ChannelModel::from_config(&cfg(Scheme::Joint)).unwrap()
        };
        let n = 1_000_000;
        let (mut sxy, mut sxx, mut syy) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
        let mut r = model.draw(0);
        for t in 0..n / 16 {
            model.draw_into(t as u64, &mut r);
            for (x, y) in r.h_sr.iter().zip(&r.h_rd) {
                sxy += x * y.conj();
                sxx += x.norm_sqr();
                syy += y.norm_sqr();
            }
        }
        let rho = sxy.norm() / (sxx * syy).sqrt();
        assert!(rho < 0.01, "{rho}");
    }
}
