//! Closed-form statistics of the hybrid links: moments of the co-phased
//! envelopes `A` and `B`, MGFs of the per-slot SNRs, MGF-based M-PSK error
//! probability and achievable rates.
//!
//! `A` and `B` are treated as Gaussian (CLT); each per-slot SNR is then a
//! scaled non-central chi-square variable with one degree of freedom. The
//! relay-only hop of the integrated scheme is an exact Rician power.

pub mod quadrature;
pub mod special;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fading::ChannelModel;
use crate::schemes::{PowerAllocation, SnrBreakdown};
use crate::Scheme;
use quadrature::{integrate, Quadrature};
use special::{laguerre_half, rician_mean_envelope};

/// Below this element count the Gaussian model of `A`/`B` is flagged.
pub const CLT_MIN_ELEMENTS: usize = 16;

/// Relative tolerance of the SEP quadrature.
pub const SEP_REL_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("MGF argument {s} is at or beyond the pole at {pole}")]
    BeyondPole { s: f64, pole: f64 },
    #[error("modulation order {0} is not a power of two >= 2")]
    BadOrder(usize),
    #[error("SEP quadrature did not converge (last relative change {0:e})")]
    NotConverged(f64),
}

/// Mean and variance of a co-phased envelope sum under the CLT model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainStatistics {
    pub mu: f64,
    pub sigma2: f64,
    /// Degrees of freedom of the induced chi-square SNR.
    pub dof: u8,
    /// Whether the element count is large enough for the Gaussian model.
    pub clt_valid: bool,
}

impl GainStatistics {
    /// Non-centrality of `X^2 / sigma2` for `X ~ N(mu, sigma2)`.
    pub fn noncentrality(&self) -> f64 {
        self.mu * self.mu / self.sigma2
    }

    pub fn second_moment(&self) -> f64 {
        self.sigma2 + self.mu * self.mu
    }
}

/// Moments of one product term `|h_RD,i| |h_SR,i|` at unit cascade gain.
fn product_term_moments(k: f64) -> (f64, f64) {
    let m = rician_mean_envelope(k);
    let mean = m * m;
    (mean, 1.0 - mean * mean)
}

/// Moments of `A = sum_i |h_RD,i| |h_SR,i|` for `n` elements with Rician
/// factor `k` and cascade gain `cascade_gain` (product of the segment gains).
///
/// `mu_A = N sqrt(P) pi L^2 / (4(K+1))`,
/// `sigma_A^2 = N P (1 - pi^2 L^4 / (16 (K+1)^2))`, `L = L_{1/2}(-K)`.
/// An empty surface gives zero moments.
pub fn stats_a(n: usize, k: f64, cascade_gain: f64) -> GainStatistics {
    let (mean, var) = product_term_moments(k);
    let nf = n as f64;
    GainStatistics {
        mu: nf * cascade_gain.sqrt() * mean,
        sigma2: nf * cascade_gain * var,
        dof: 1,
        clt_valid: n >= CLT_MIN_ELEMENTS,
    }
}

/// Moments of `B = |g_RD| + A`.
///
/// The direct term contributes the Rician envelope moments
/// `E|g| = sqrt(P_D) sqrt(pi/(4(K+1))) L` and `Var|g| = P_D (1 - pi L^2/(4(K+1)))`.
pub fn stats_b(n: usize, k: f64, cascade_gain: f64, relay_dest_gain: f64) -> GainStatistics {
    let a = stats_a(n, k, cascade_gain);
    let m = rician_mean_envelope(k);
    GainStatistics {
        mu: a.mu + relay_dest_gain.sqrt() * m,
        sigma2: a.sigma2 + relay_dest_gain * (1.0 - m * m),
        dof: 1,
        clt_valid: n >= CLT_MIN_ELEMENTS,
    }
}

/// Moment generating function `s -> E[exp(s gamma)]` of an SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MgfSpec {
    /// `gamma = scale * X^2` with `X ~ N(mean, variance)`.
    NoncentralChi1 { mean: f64, variance: f64, scale: f64 },
    /// `gamma = mean_snr * |h|^2` for a unit-power Rician `h` with factor `k`.
    RicianPower { k: f64, mean_snr: f64 },
    /// Independent sum: product of the member MGFs.
    Product(Vec<MgfSpec>),
}

impl MgfSpec {
    /// The SNR is identically zero.
    pub fn zero() -> Self {
        MgfSpec::Product(Vec::new())
    }

    /// A deterministic SNR `gamma`.
    pub fn constant(gamma: f64) -> Self {
        MgfSpec::NoncentralChi1 {
            mean: gamma.sqrt(),
            variance: 0.0,
            scale: 1.0,
        }
    }

    /// Smallest positive `s` where the MGF diverges.
    pub fn pole(&self) -> f64 {
        match self {
            MgfSpec::NoncentralChi1 {
                variance, scale, ..
            } => {
                let v = 2.0 * variance * scale;
                if v > 0.0 {
                    1.0 / v
                } else {
                    f64::INFINITY
                }
            }
            MgfSpec::RicianPower { k, mean_snr } => {
                if *mean_snr > 0.0 {
                    (1.0 + k) / mean_snr
                } else {
                    f64::INFINITY
                }
            }
            MgfSpec::Product(parts) => parts.iter().map(MgfSpec::pole).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64, AnalyticError> {
        let pole = self.pole();
        if s >= pole {
            return Err(AnalyticError::BeyondPole { s, pole });
        }
        Ok(self.eval_unchecked(s))
    }

    fn eval_unchecked(&self, s: f64) -> f64 {
        match self {
            MgfSpec::NoncentralChi1 {
                mean,
                variance,
                scale,
            } => {
                let d = 1.0 - 2.0 * s * variance * scale;
                (s * mean * mean * scale / d).exp() / d.sqrt()
            }
            MgfSpec::RicianPower { k, mean_snr } => {
                if k.is_infinite() {
                    return (s * mean_snr).exp();
                }
                let d = 1.0 + k - s * mean_snr;
                (1.0 + k) / d * (k * s * mean_snr / d).exp()
            }
            MgfSpec::Product(parts) => parts.iter().map(|p| p.eval_unchecked(s)).product(),
        }
    }

    pub fn times(self, other: MgfSpec) -> MgfSpec {
        let mut parts = match self {
            MgfSpec::Product(p) => p,
            single => vec![single],
        };
        match other {
            MgfSpec::Product(p) => parts.extend(p),
            single => parts.push(single),
        }
        MgfSpec::Product(parts)
    }
}

/// MGF of `gamma = power * X^2 / n0` where `X` follows `stats`.
pub fn mgf_gamma(stats: &GainStatistics, power: f64, n0: f64) -> MgfSpec {
    MgfSpec::NoncentralChi1 {
        mean: stats.mu,
        variance: stats.sigma2,
        scale: power / n0,
    }
}

/// MGF of the relay -> destination SNR `P2 |g_RD|^2 / N0` (Rician power,
/// two degrees of freedom):
/// `M(s) = (1+K)/(1+K - s g) exp(K s g / (1+K - s g))`, `g = P2 P_D / N0`.
pub fn mgf_gamma2_integrated(k: f64, relay_dest_gain: f64, p2: f64, n0: f64) -> MgfSpec {
    MgfSpec::RicianPower {
        k,
        mean_snr: p2 * relay_dest_gain / n0,
    }
}

/// Moments of `(A, B)` for a scheme. `B` is `A + |g_RD|` in the joint scheme
/// and `|g_RD|` alone otherwise.
pub fn envelope_stats(model: &ChannelModel) -> (GainStatistics, GainStatistics) {
    let g = &model.gains;
    let a = stats_a(model.elements, model.k, g.ris_cascade);
    let b = match model.scheme {
        Scheme::Joint => stats_b(model.elements, model.k, g.ris_cascade, g.relay_dest),
        Scheme::RisOnly => stats_a(0, model.k, 0.0),
        _ => stats_b(0, model.k, 0.0, g.relay_dest),
    };
    (a, b)
}

/// Per-slot MGFs `(M_gamma1, M_gamma2)` of a scheme under a fixed power split.
pub fn slot_mgfs(model: &ChannelModel, pa: &PowerAllocation) -> (MgfSpec, MgfSpec) {
    let g = &model.gains;
    let n = model.elements;
    let a = stats_a(n, model.k, g.ris_cascade);
    match model.scheme {
        Scheme::Joint => {
            // P3 = P2: slot 2 carries P2 (|g_RD| + A)^2 / N0.
            let b = stats_b(n, model.k, g.ris_cascade, g.relay_dest);
            (mgf_gamma(&a, pa.p1, pa.n0), mgf_gamma(&b, pa.p2, pa.n0))
        }
        Scheme::Integrated => (
            mgf_gamma(&a, pa.p1, pa.n0),
            mgf_gamma2_integrated(model.k, g.relay_dest, pa.p2, pa.n0),
        ),
        Scheme::RisOnly => (mgf_gamma(&a, pa.p1, pa.n0), MgfSpec::zero()),
        Scheme::RelayOnly => (
            MgfSpec::zero(),
            mgf_gamma2_integrated(model.k, g.relay_dest, pa.p2, pa.n0),
        ),
    }
}

/// MGF of `gamma_tot = gamma1 + gamma2`, treating the slots as independent.
pub fn total_mgf(model: &ChannelModel, pa: &PowerAllocation) -> MgfSpec {
    let (m1, m2) = slot_mgfs(model, pa);
    m1.times(m2)
}

/// Average M-PSK symbol error probability
/// `(1/pi) int_0^{(M-1)pi/M} M_tot(-sin^2(pi/M) / sin^2 eta) d eta`.
pub fn sep_mpsk(mgf: &MgfSpec, m: usize) -> Result<f64, AnalyticError> {
    if m < 2 || !m.is_power_of_two() {
        return Err(AnalyticError::BadOrder(m));
    }
    let g = (PI / m as f64).sin().powi(2);
    let upper = (m as f64 - 1.0) * PI / m as f64;
    let integrand = |eta: f64| mgf.eval(-g / eta.sin().powi(2));
    match integrate(integrand, 0.0, upper, SEP_REL_TOL) {
        Quadrature::Converged(v) => Ok(v / PI),
        Quadrature::NotConverged { rel_change, .. } => Err(AnalyticError::NotConverged(rel_change)),
        Quadrature::Failed(e) => Err(e),
    }
}

/// `log2(1 + gamma_tot)`: the destination always receives the true symbol
/// from the relay.
pub fn rate_ideal(snr: &SnrBreakdown) -> f64 {
    (1.0 + snr.gamma_tot).log2()
}

/// `1/2 log2(1 + min(gamma_r, gamma_tot))`. Without a relay `gamma_r` is
/// infinite and only the half-duplex factor remains.
pub fn rate_nonideal(snr: &SnrBreakdown, scheme: Scheme) -> f64 {
    debug_assert!(scheme.has_relay() || snr.gamma_r.is_infinite());
    0.5 * (1.0 + snr.gamma_r.min(snr.gamma_tot)).log2()
}

/// Variants of the closed forms with known errors, kept so that the
/// oracle-validation experiment can show how far they fall from sampling.
pub mod uncorrected {
    use super::*;

    /// `B` moments with the direct gain outside the square root in the mean
    /// and `pi L^2 / (K+1)` in the variance.
    pub fn stats_b(n: usize, k: f64, cascade_gain: f64, relay_dest_gain: f64) -> GainStatistics {
        let a = stats_a(n, k, cascade_gain);
        let l = laguerre_half(-k);
        GainStatistics {
            mu: a.mu + relay_dest_gain * (PI / (4.0 * (k + 1.0))).sqrt() * l,
            sigma2: a.sigma2 + relay_dest_gain - relay_dest_gain * PI * l * l / (k + 1.0),
            dof: 1,
            clt_valid: n >= CLT_MIN_ELEMENTS,
        }
    }

    /// Rician-power MGF with the `s` dropped from the prefactor and a
    /// square-root exponent.
    pub fn mgf_gamma2_integrated(k: f64, relay_dest_gain: f64, p2: f64, n0: f64, s: f64) -> f64 {
        let g = p2 * relay_dest_gain / n0;
        (1.0 - g / (2.0 * (k + 1.0))).powf(-0.5)
            * (2.0 * s * g * k / (2.0 * (k + 1.0) - g)).exp()
    }

    /// SEP with `sin(pi/M)` in place of `sin^2(pi/M)`.
    pub fn sep_mpsk(mgf: &MgfSpec, m: usize) -> Result<f64, AnalyticError> {
        let g = (PI / m as f64).sin();
        let upper = (m as f64 - 1.0) * PI / m as f64;
        match integrate(|eta: f64| mgf.eval(-g / eta.sin().powi(2)), 0.0, upper, SEP_REL_TOL) {
            Quadrature::Converged(v) => Ok(v / PI),
            Quadrature::NotConverged { rel_change, .. } => {
                Err(AnalyticError::NotConverged(rel_change))
            }
            Quadrature::Failed(e) => Err(e),
        }
    }
}
