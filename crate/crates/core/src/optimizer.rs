//! Sequential phase-then-power optimization for the non-ideal relay.
//!
//! Once the RIS phases are fixed, each arm of `min(relay SNR, destination SNR)`
//! is affine in `P1` on the budget line, so the max-min problem is solved
//! exactly by comparing the two endpoints with the crossing point.

use serde::{Deserialize, Serialize};

use crate::fading::ChannelRealization;
use crate::schemes::{link_state, optimize_phases, PowerAllocation, SchemeError, Slot};
use crate::Scheme;

/// Which expression the destination arm uses during power optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Both slot terms scale with `P2`: `P2 (A^2 + B^2) / N0` (joint),
    /// `P2 (A^2 + |g_RD|^2) / N0` (integrated).
    #[default]
    SharedP2,
    /// Slot 1 scales with `P1` and slot 2 with `P2`, as in the signal model.
    PerSlot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActiveConstraint {
    /// Both arms equal at the optimum.
    InteriorEqualized,
    /// Whole budget on slot 1 (`P1 = P_tot`).
    BoundaryP1,
    /// Whole budget on slot 2 (`P1 = 0`).
    BoundaryP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSolution {
    pub p1_star: f64,
    pub p2_star: f64,
    /// `min(arm1, arm2)` at the solution, linear SNR.
    pub achieved_objective: f64,
    pub active_constraint: ActiveConstraint,
    /// Set when the objective is zero for every split.
    pub degenerate: bool,
}

/// `intercept + slope * p1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub intercept: f64,
    pub slope: f64,
}

impl Affine {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Maximizes `min(f, g)` over `[0, hi]`. Returns `(x*, value, constraint)`
/// where the constraint refers to the endpoint `0 -> BoundaryP2`,
/// `hi -> BoundaryP1`.
pub fn maximize_min_affine(f: Affine, g: Affine, hi: f64) -> (f64, f64, ActiveConstraint) {
    let obj = |x: f64| f.eval(x).min(g.eval(x));
    let mut best = (0.0, obj(0.0), ActiveConstraint::BoundaryP2);
    let at_hi = obj(hi);
    if at_hi > best.1 {
        best = (hi, at_hi, ActiveConstraint::BoundaryP1);
    }
    let ds = f.slope - g.slope;
    if ds != 0.0 {
        let x = (g.intercept - f.intercept) / ds;
        if x > 0.0 && x < hi {
            // Evaluate both arms and keep the smaller so the value is exactly
            // the min at the reported point.
            let v = obj(x);
            if v >= best.1 {
                best = (x, v, ActiveConstraint::InteriorEqualized);
            }
        }
    }
    best
}

/// Per-watt SNR coefficients of the two arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmCoefficients {
    /// Relay arm: SNR per watt of `P1`.
    pub a: f64,
    /// Destination arm: SNR per watt of `P2`.
    pub b: f64,
}

/// Fraction of the remaining budget that becomes `P2`.
fn p2_share(scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Joint => 0.5,
        _ => 1.0,
    }
}

fn finish(scheme: Scheme, budget: f64, x: f64, value: f64, constraint: ActiveConstraint) -> PowerSolution {
    PowerSolution {
        p1_star: x,
        p2_star: (budget - x) * p2_share(scheme),
        achieved_objective: value,
        active_constraint: constraint,
        degenerate: value <= 0.0,
    }
}

/// Exact solution of `max_{P1} min(a P1, b P2)` on the scheme's budget line
/// (`P1 + 2 P2 = P_tot` joint, `P1 + P2 = P_tot` otherwise).
///
/// The interior optimum equalizes the arms: `P1* = b P_tot / (b + 2a)` for the
/// joint scheme and `b P_tot / (a + b)` otherwise. With a zero coefficient the
/// objective vanishes for every split; the result is then `P1 = P_tot` with
/// the degenerate flag set.
pub fn solve_power_split(coeffs: ArmCoefficients, budget: f64, scheme: Scheme) -> PowerSolution {
    let ArmCoefficients { a, b } = coeffs;
    let share = p2_share(scheme);
    if a <= 0.0 || b <= 0.0 {
        return PowerSolution {
            p1_star: budget,
            p2_star: 0.0,
            achieved_objective: 0.0,
            active_constraint: ActiveConstraint::BoundaryP1,
            degenerate: true,
        };
    }
    let p1 = b * share * budget / (a + b * share);
    let value = (a * p1).min(b * share * (budget - p1));
    finish(scheme, budget, p1, value, ActiveConstraint::InteriorEqualized)
}

/// Dense-grid reference solver for validating [`solve_power_split`].
pub fn grid_search_split(
    arm1: impl Fn(f64, f64) -> f64,
    arm2: impl Fn(f64, f64) -> f64,
    budget: f64,
    scheme: Scheme,
    points: usize,
) -> (f64, f64) {
    let share = p2_share(scheme);
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=points {
        let p1 = budget * i as f64 / points as f64;
        let p2 = (budget - p1) * share;
        let v = arm1(p1, p2).min(arm2(p1, p2));
        if v > best.1 {
            best = (p1, v);
        }
    }
    best
}

/// Inputs of the power step besides the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitProblem {
    pub scheme: Scheme,
    pub budget: f64,
    pub n0: f64,
    pub objective: Objective,
}

/// Per-watt SNR terms of a realization after phase alignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmTerms {
    /// Relay receive SNR per watt of `P1`.
    pub relay: f64,
    /// Destination slot-1 SNR per watt (`A^2 / N0`).
    pub slot1: f64,
    /// Destination slot-2 SNR per watt (`B^2 / N0` joint, `|g_RD|^2 / N0` otherwise).
    pub slot2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialResult {
    pub phases1: Vec<f64>,
    /// Joint scheme only.
    pub phases2: Option<Vec<f64>>,
    pub arms: Option<ArmTerms>,
    pub solution: PowerSolution,
    /// Non-ideal-relay rate at the solution, bits/s/Hz.
    pub rate: f64,
}

/// Phases first, then the power split maximizing the non-ideal rate.
pub fn sequential_optimize(
    real: &ChannelRealization,
    problem: &SplitProblem,
) -> Result<SequentialResult, SchemeError> {
    let scheme = problem.scheme;
    let phases1 = optimize_phases(real, scheme, Slot::First)?;
    let phases2 = if scheme == Scheme::Joint {
        Some(optimize_phases(real, scheme, Slot::Second)?)
    } else {
        None
    };

    // Unit powers give the per-watt SNR of every term.
    let unit = PowerAllocation {
        p1: 1.0,
        p2: 1.0,
        p3: if scheme == Scheme::Joint { 1.0 } else { 0.0 },
        n0: problem.n0,
    };
    let st = link_state(real, &unit, scheme)?;
    let n0 = problem.n0;
    let a2 = st.snr.a * st.snr.a / n0;
    let b2 = st.snr.b * st.snr.b / n0;
    let relay = st.snr.gamma_r;
    let budget = problem.budget;
    let share = p2_share(scheme);

    if scheme == Scheme::RisOnly {
        let gamma = budget * a2;
        return Ok(SequentialResult {
            phases1,
            phases2,
            arms: None,
            solution: PowerSolution {
                p1_star: budget,
                p2_star: 0.0,
                achieved_objective: gamma,
                active_constraint: ActiveConstraint::BoundaryP1,
                degenerate: gamma <= 0.0,
            },
            rate: 0.5 * (1.0 + gamma).log2(),
        });
    }

    // Destination arm as an affine function of P1 with P2 = share (P_tot - P1).
    let (slot1, slot2) = match scheme {
        Scheme::Joint | Scheme::Integrated => (a2, b2),
        _ => (0.0, b2),
    };
    let solution = match problem.objective {
        Objective::SharedP2 => {
            solve_power_split(ArmCoefficients { a: relay, b: slot1 + slot2 }, budget, scheme)
        }
        Objective::PerSlot => {
            let f = Affine {
                intercept: 0.0,
                slope: relay,
            };
            let g = Affine {
                intercept: share * budget * slot2,
                slope: slot1 - share * slot2,
            };
            let (x, v, c) = maximize_min_affine(f, g, budget);
            finish(scheme, budget, x, v, c)
        }
    };
    Ok(SequentialResult {
        phases1,
        phases2,
        arms: Some(ArmTerms { relay, slot1, slot2 }),
        rate: 0.5 * (1.0 + solution.achieved_objective).log2(),
        solution,
    })
}
