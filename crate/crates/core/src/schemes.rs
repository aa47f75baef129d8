//! Per-realization physics of the two hybrid schemes and the two benchmarks:
//! RIS phase alignment, per-slot SNRs, relay SNR and MRC detection.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fading::ChannelRealization;
use crate::Scheme;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("{scheme} scheme is missing channel {field}")]
    MissingField { scheme: Scheme, field: &'static str },
    #[error("realization was drawn for the {found} scheme, expected {expected}")]
    SchemeMismatch { expected: Scheme, found: Scheme },
    #[error("invalid power allocation: {0}")]
    InvalidPower(String),
    #[error("second-slot phases only exist in the joint scheme")]
    NoSecondSlot,
}

/// Time slot of the two-phase protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    /// Source power, slot 1.
    pub p1: f64,
    /// Slot-2 power: source in the joint scheme, relay otherwise.
    pub p2: f64,
    /// Relay power in slot 2 of the joint scheme (equal to `p2`).
    pub p3: f64,
    /// Noise power per complex sample.
    pub n0: f64,
}

impl PowerAllocation {
    pub fn new(scheme: Scheme, p1: f64, p2: f64, n0: f64) -> Result<Self, SchemeError> {
        let pa = Self {
            p1,
            p2,
            p3: if scheme == Scheme::Joint { p2 } else { 0.0 },
            n0,
        };
        pa.validate(scheme)?;
        Ok(pa)
    }

    /// Power spent over both slots.
    pub fn total(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Joint => self.p1 + self.p2 + self.p3,
            Scheme::Integrated | Scheme::RelayOnly => self.p1 + self.p2,
            Scheme::RisOnly => self.p1,
        }
    }

    pub fn validate(&self, scheme: Scheme) -> Result<(), SchemeError> {
        let all = [self.p1, self.p2, self.p3];
        if all.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(SchemeError::InvalidPower(format!(
                "powers must be finite and non-negative, got {all:?}"
            )));
        }
        if !(self.n0.is_finite() && self.n0 > 0.0) {
            return Err(SchemeError::InvalidPower(format!("N0 = {}", self.n0)));
        }
        if scheme == Scheme::Joint && self.p3 != self.p2 {
            return Err(SchemeError::InvalidPower(format!(
                "joint scheme requires P3 = P2 (P2 = {}, P3 = {})",
                self.p2, self.p3
            )));
        }
        Ok(())
    }

    /// Same split with a different noise level.
    pub fn with_n0(self, n0: f64) -> Self {
        Self { n0, ..self }
    }
}

/// SNRs of one realization. All values are linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrBreakdown {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_tot: f64,
    /// Relay receive SNR; infinite when the scheme has no relay.
    pub gamma_r: f64,
    /// Co-phased RIS envelope sum.
    pub a: f64,
    /// Slot-2 envelope: `|g_RD| + A` in the joint scheme, `|g_RD|` otherwise.
    pub b: f64,
}

impl SnrBreakdown {
    pub fn from_parts(gamma1: f64, gamma2: f64, gamma_r: f64, a: f64, b: f64) -> Self {
        Self {
            gamma1,
            gamma2,
            gamma_tot: gamma1 + gamma2,
            gamma_r,
            a,
            b,
        }
    }
}

fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Unit phasors `e^{j phi_i}` that cancel the phase of each cascade term
/// `h_RD,i * h_SR,i`.
pub fn aligning_phasors(h_rd: &[Complex64], h_sr: &[Complex64]) -> Vec<Complex64> {
    h_rd.iter()
        .zip(h_sr)
        .map(|(a, b)| {
            let c = a * b;
            let m = c.norm();
            if m > 0.0 {
                c.conj() / m
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect()
}

/// `sum_i left_i * phasor_i * right_i`, i.e. `left^T Phi right`.
pub fn reflect(left: &[Complex64], phasors: &[Complex64], right: &[Complex64]) -> Complex64 {
    left.iter()
        .zip(phasors)
        .zip(right)
        .map(|((l, p), r)| l * p * r)
        .sum()
}

/// Co-phased envelope sum `A = sum_i |h_RD,i| |h_SR,i|`.
pub fn envelope_sum(h_rd: &[Complex64], h_sr: &[Complex64]) -> f64 {
    h_rd.iter().zip(h_sr).map(|(a, b)| a.norm() * b.norm()).sum()
}

fn expect_scheme(real: &ChannelRealization, scheme: Scheme) -> Result<(), SchemeError> {
    if real.scheme != scheme {
        return Err(SchemeError::SchemeMismatch {
            expected: scheme,
            found: real.scheme,
        });
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, scheme: Scheme, field: &'static str) -> Result<T, SchemeError> {
    v.ok_or(SchemeError::MissingField { scheme, field })
}

/// RIS phase shifts (radians, wrapped to (-pi, pi]) maximizing the received
/// SNR at the destination in the given slot.
///
/// In slot 2 of the joint scheme the reflected aggregate is additionally
/// rotated onto the phase of `g_RD`, so that it adds coherently with the
/// relay's transmission.
pub fn optimize_phases(
    real: &ChannelRealization,
    scheme: Scheme,
    slot: Slot,
) -> Result<Vec<f64>, SchemeError> {
    expect_scheme(real, scheme)?;
    let base = real
        .h_rd
        .iter()
        .zip(&real.h_sr)
        .map(|(a, b)| -(a.arg() + b.arg()));
    match slot {
        Slot::First => Ok(base.map(wrap_phase).collect()),
        Slot::Second => {
            if scheme != Scheme::Joint {
                return Err(SchemeError::NoSecondSlot);
            }
            let common = need(real.g_rd, scheme, "g_RD")?.arg();
            Ok(base.map(|p| wrap_phase(p + common)).collect())
        }
    }
}

/// Complex baseband gains seen after phase alignment, power included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkState {
    /// Destination, slot 1.
    pub eff1: Complex64,
    /// Destination, slot 2.
    pub eff2: Complex64,
    /// Relay, slot 1. `None` when the scheme has no relay.
    pub eff_relay: Option<Complex64>,
    pub snr: SnrBreakdown,
}

/// Aligns the RIS for `real` and evaluates every SNR of the scheme under `pa`.
pub fn link_state(
    real: &ChannelRealization,
    pa: &PowerAllocation,
    scheme: Scheme,
) -> Result<LinkState, SchemeError> {
    expect_scheme(real, scheme)?;
    let zero = Complex64::new(0.0, 0.0);
    let s1 = pa.p1.sqrt();
    let s2 = pa.p2.sqrt();

    let phasors = aligning_phasors(&real.h_rd, &real.h_sr);
    // With aligned phasors the reflected sum is real and equals A.
    let reflected = reflect(&real.h_rd, &phasors, &real.h_sr);
    let a = reflected.norm();

    let (eff1, eff2, eff_relay, b) = match scheme {
        Scheme::Joint => {
            let g_rd = need(real.g_rd, scheme, "g_RD")?;
            let g_r = real.g_r.as_deref().ok_or(SchemeError::MissingField {
                scheme,
                field: "g_R",
            })?;
            let rot = if g_rd.norm() > 0.0 {
                g_rd / g_rd.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let relay_feed = reflect(g_r, &phasors, &real.h_sr);
            let eff2 = reflected * rot * s2 + g_rd * pa.p3.sqrt();
            (s1 * reflected, eff2, Some(s1 * relay_feed), a + g_rd.norm())
        }
        Scheme::Integrated => {
            let g_rd = need(real.g_rd, scheme, "g_RD")?;
            let g_sr = need(real.g_sr, scheme, "g_SR")?;
            (s1 * reflected, s2 * g_rd, Some(s1 * g_sr), g_rd.norm())
        }
        Scheme::RisOnly => (s1 * reflected, zero, None, 0.0),
        Scheme::RelayOnly => {
            let g_rd = need(real.g_rd, scheme, "g_RD")?;
            let g_sr = need(real.g_sr, scheme, "g_SR")?;
            (zero, s2 * g_rd, Some(s1 * g_sr), g_rd.norm())
        }
    };

    let gamma1 = eff1.norm_sqr() / pa.n0;
    let gamma2 = eff2.norm_sqr() / pa.n0;
    let gamma_r = eff_relay.map_or(f64::INFINITY, |e| e.norm_sqr() / pa.n0);
    Ok(LinkState {
        eff1,
        eff2,
        eff_relay,
        snr: SnrBreakdown::from_parts(gamma1, gamma2, gamma_r, a, b),
    })
}

pub fn instantaneous_snrs(
    real: &ChannelRealization,
    pa: &PowerAllocation,
    scheme: Scheme,
) -> Result<SnrBreakdown, SchemeError> {
    Ok(link_state(real, pa, scheme)?.snr)
}

/// MRC statistic `conj(eff1) y1 + conj(eff2) y2`.
pub fn mrc_combine(y1: Complex64, y2: Complex64, eff1: Complex64, eff2: Complex64) -> Complex64 {
    eff1.conj() * y1 + eff2.conj() * y2
}

/// BPSK decision after MRC; bit 0 maps to `s = +1`.
pub fn mrc_decision_bpsk(y1: Complex64, y2: Complex64, eff1: Complex64, eff2: Complex64) -> u8 {
    u8::from(mrc_combine(y1, y2, eff1, eff2).re < 0.0)
}

/// `e^{j 2 pi k / M}`.
pub fn psk_symbol(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// Nearest M-PSK symbol index to the MRC statistic.
pub fn mrc_decision_mpsk(
    y1: Complex64,
    y2: Complex64,
    eff1: Complex64,
    eff2: Complex64,
    m: usize,
) -> usize {
    let z = mrc_combine(y1, y2, eff1, eff2);
    let step = 2.0 * PI / m as f64;
    ((z.arg() / step).round() as i64).rem_euclid(m as i64) as usize
}
