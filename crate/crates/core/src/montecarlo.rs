//! Simulation engine: BER sweeps, rate statistics and the sampling oracles
//! behind every closed form.
//!
//! Work is split into fixed-size blocks whose seeds depend only on the master
//! seed and the block index. Blocks run on the rayon pool and are merged in
//! index order, so results are identical for any thread count. The same seeds
//! are reused at every sweep point (common random numbers), which keeps
//! paired comparisons between points free of sampling noise in the channel.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{rate_ideal, rate_nonideal, sep_mpsk, total_mgf};
use crate::config::{Powers, RelayMode, ScenarioConfig, SweepSpec, SweepVariable};
use crate::fading::{ChannelModel, ChannelRealization};
use crate::geometry::{GeometryError, NodeLayout};
use crate::optimizer::sequential_optimize;
use crate::schemes::{
    instantaneous_snrs, link_state, mrc_decision_mpsk, psk_symbol, PowerAllocation, SchemeError,
    SnrBreakdown,
};
use crate::seeding::{derive_seed, stream_rng};
use crate::{db_to_linear, Scheme};

/// Channel draws per BER block.
pub const BER_BLOCK_DRAWS: u64 = 512;
/// Blocks scheduled together before the stopping rule is checked.
const BER_WAVE_BLOCKS: u64 = 16;
/// Trials per rate/sampling block.
pub const SAMPLE_BLOCK: u64 = 1024;
/// Error events below which a BER point is flagged low-confidence.
pub const LOW_CONFIDENCE_ERRORS: u64 = 100;
pub const MIN_MGF_SAMPLES: usize = 100_000;
/// Default trials per rate point.
pub const RATE_TRIALS: u64 = 10_000;
const Z95: f64 = 1.959_963_984_540_054;

// Seed path tags.
const TAG_CHANNEL: u64 = 1;
const TAG_NOISE: u64 = 2;
const NOISE_STREAM: u64 = 16;

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("need at least {MIN_MGF_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("MGF argument must be <= 0, got {0}")]
    PositiveArgument(f64),
}

/// A sweep: one base scenario, one swept variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub base: ScenarioConfig,
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    /// BER: maximum symbols per point. Rates: trials per point.
    pub trials: u64,
    pub min_errors: u64,
    pub symbols_per_draw: u32,
    pub seed: u64,
}

impl SweepPlan {
    /// Uses the config's `[sweep]` section; `default_trials` applies when it
    /// sets no trial count.
    pub fn from_config(cfg: &ScenarioConfig, default_trials: u64) -> Result<Self, MonteCarloError> {
        let s = cfg
            .sweep
            .as_ref()
            .ok_or_else(|| MonteCarloError::Config("a [sweep] section is required".into()))?;
        Ok(Self::new(cfg.clone(), s, default_trials))
    }

    pub fn new(base: ScenarioConfig, s: &SweepSpec, default_trials: u64) -> Self {
        Self {
            seed: base.seed,
            base,
            variable: s.variable,
            values: s.values.clone(),
            trials: s.trials.unwrap_or(default_trials),
            min_errors: s.min_errors,
            symbols_per_draw: s.symbols_per_draw.max(1),
        }
    }

    /// Scenario and noise level at one sweep value.
    pub fn point(&self, value: f64) -> Result<(ScenarioConfig, f64), MonteCarloError> {
        let mut cfg = self.base.clone();
        match self.variable {
            SweepVariable::SnrDb => {
                let n0 = cfg.total_power() / db_to_linear(value);
                return Ok((cfg, n0));
            }
            SweepVariable::Elements => {
                if !(value >= 0.0 && value.fract() == 0.0) {
                    return Err(MonteCarloError::Config(format!("N = {value} is not a count")));
                }
                cfg.elements = value as usize;
            }
            SweepVariable::RisY => {
                cfg.layout.ris.y = value;
                if cfg.scheme == Scheme::Integrated {
                    cfg.layout.relay.y = value;
                }
            }
            SweepVariable::RelayY => {
                cfg.layout.relay.y = value;
                if cfg.scheme == Scheme::Integrated {
                    cfg.layout.ris.y = value;
                }
            }
        }
        let n0 = cfg
            .n0()
            .ok_or_else(|| MonteCarloError::Config("N0 or N0_dBm is required".into()))?;
        Ok((cfg, n0))
    }
}

/// Swept coordinate of a result row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Swept {
    Scalar(f64),
    Grid { ris_y: f64, relay_y: f64 },
}

impl fmt::Display for Swept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Swept::Scalar(v) => write!(f, "{v}"),
            Swept::Grid { ris_y, relay_y } => write!(f, "ris_y={ris_y};relay_y={relay_y}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub swept: Swept,
    pub metric: String,
    pub value: f64,
    /// 95% confidence halfwidth; 0 for closed-form values.
    pub ci_halfwidth: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub scheme: Scheme,
    pub elements: usize,
    pub k_db: f64,
    pub carrier_hz: f64,
    pub layout: NodeLayout,
}

impl Metadata {
    pub fn of(cfg: &ScenarioConfig) -> Self {
        Self {
            scheme: cfg.scheme,
            elements: cfg.elements,
            k_db: cfg.k_db,
            carrier_hz: cfg.pathloss.carrier_hz,
            layout: cfg.layout,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub metadata: Metadata,
    pub rows: Vec<ResultRow>,
}

impl ExperimentResult {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        Self {
            metadata: Metadata::of(cfg),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, swept: Swept, metric: &str, value: f64, ci: f64, trials: u64, seed: u64) {
        self.rows.push(ResultRow {
            swept,
            metric: metric.to_string(),
            value,
            ci_halfwidth: ci,
            trials,
            seed,
        });
    }

    /// `(swept, value)` of every row with this metric.
    pub fn series(&self, metric: &str) -> Vec<(Swept, f64)> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric)
            .map(|r| (r.swept, r.value))
            .collect()
    }

    pub fn find(&self, swept: Swept, metric: &str) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.swept == swept && r.metric == metric)
    }
}

/// 95% Wilson score interval halfwidth for `k` successes in `n` trials.
pub fn wilson_halfwidth(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.5;
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// Error counts of one BER point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorTally {
    pub symbols: u64,
    pub symbol_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
    /// Symbols the relay decoded wrongly (non-ideal relay only).
    pub relay_errors: u64,
}

impl ErrorTally {
    fn add(&mut self, o: &ErrorTally) {
        self.symbols += o.symbols;
        self.symbol_errors += o.symbol_errors;
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.relay_errors += o.relay_errors;
    }

    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits.max(1) as f64
    }

    pub fn ser(&self) -> f64 {
        self.symbol_errors as f64 / self.symbols.max(1) as f64
    }
}

/// Stopping rule and sizing of one BER point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BerBudget {
    /// Stop once this many symbols have been sent.
    pub max_symbols: u64,
    /// Stop once this many bit errors have been seen.
    pub min_errors: u64,
    pub symbols_per_draw: u32,
}

impl Default for BerBudget {
    fn default() -> Self {
        Self {
            max_symbols: SweepSpec::DEFAULT_BER_TRIALS,
            min_errors: SweepSpec::DEFAULT_MIN_ERRORS,
            symbols_per_draw: SweepSpec::DEFAULT_SYMBOLS_PER_DRAW,
        }
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gray(k: usize) -> usize {
    k ^ (k >> 1)
}

/// Slot-2 coefficient split into its source and relay parts.
fn slot2_parts(real: &ChannelRealization, pa: &PowerAllocation, scheme: Scheme, eff2: Complex64) -> (Complex64, Complex64) {
    let relay = match (scheme, real.g_rd) {
        (Scheme::Joint, Some(g)) => g * pa.p3.sqrt(),
        (Scheme::Integrated | Scheme::RelayOnly, Some(g)) => g * pa.p2.sqrt(),
        _ => Complex64::new(0.0, 0.0),
    };
    (eff2 - relay, relay)
}

#[allow(clippy::too_many_arguments)]
fn ber_block(
    model: &ChannelModel,
    pa: &PowerAllocation,
    m: usize,
    mode: RelayMode,
    seed: u64,
    block: u64,
    draws: std::ops::Range<u64>,
    symbols_per_draw: u32,
) -> Result<ErrorTally, SchemeError> {
    let scheme = model.scheme;
    let bits_per_symbol = m.trailing_zeros() as u64;
    let sigma = pa.n0.sqrt();
    let mut noise = stream_rng(derive_seed(seed, &[TAG_NOISE, block]), NOISE_STREAM);
    let mut real = model.draw(0);
    let mut t = ErrorTally::default();
    for d in draws {
        model.draw_into(derive_seed(seed, &[TAG_CHANNEL, d]), &mut real);
        let st = link_state(&real, pa, scheme)?;
        let (src2, relay2) = slot2_parts(&real, pa, scheme, st.eff2);
        for _ in 0..symbols_per_draw {
            let k = noise.random_range(0..m);
            let n1 = complex_normal(&mut noise);
            let n2 = complex_normal(&mut noise);
            let nr = complex_normal(&mut noise);
            let s = psk_symbol(k, m);
            let relay_sym = match (mode, st.eff_relay) {
                (RelayMode::Nonideal, Some(er)) if scheme != Scheme::RisOnly => {
                    let yr = er * s + nr * sigma;
                    let zero = Complex64::new(0.0, 0.0);
                    let kr = mrc_decision_mpsk(yr, zero, er, zero, m);
                    if kr != k {
                        t.relay_errors += 1;
                    }
                    psk_symbol(kr, m)
                }
                _ => s,
            };
            let y1 = st.eff1 * s + n1 * sigma;
            let y2 = src2 * s + relay2 * relay_sym + n2 * sigma;
            let khat = mrc_decision_mpsk(y1, y2, st.eff1, st.eff2, m);
            t.symbols += 1;
            t.bits += bits_per_symbol;
            if khat != k {
                t.symbol_errors += 1;
                t.bit_errors += u64::from((gray(k) ^ gray(khat)).count_ones());
            }
        }
    }
    Ok(t)
}

/// Simulated error counts at one operating point: channel draw, phase
/// alignment, two-slot transmission, MRC detection. Stops once
/// `budget.min_errors` bit errors or `budget.max_symbols` symbols are reached,
/// evaluated block by block in index order.
pub fn simulate_ber_point(
    model: &ChannelModel,
    pa: &PowerAllocation,
    m: usize,
    mode: RelayMode,
    budget: BerBudget,
    seed: u64,
) -> Result<ErrorTally, MonteCarloError> {
    pa.validate(model.scheme)?;
    let spd = u64::from(budget.symbols_per_draw.max(1));
    let max_draws = budget.max_symbols.div_ceil(spd).max(1);
    let n_blocks = max_draws.div_ceil(BER_BLOCK_DRAWS);
    let mut total = ErrorTally::default();
    let mut next = 0;
    while next < n_blocks {
        let wave_end = (next + BER_WAVE_BLOCKS).min(n_blocks);
        let tallies: Vec<Result<ErrorTally, SchemeError>> = (next..wave_end)
            .into_par_iter()
            .map(|b| {
                let lo = b * BER_BLOCK_DRAWS;
                let hi = ((b + 1) * BER_BLOCK_DRAWS).min(max_draws);
                ber_block(model, pa, m, mode, seed, b, lo..hi, spd as u32)
            })
            .collect();
        for t in tallies {
            total.add(&t?);
            if total.bit_errors >= budget.min_errors {
                return Ok(total);
            }
        }
        next = wave_end;
    }
    Ok(total)
}

/// BER sweep with simulated and closed-form columns. Metrics: `ber`, `ser`,
/// `error_events`, `low_confidence` (1 when fewer than 100 error events) and
/// `sep_analytic` (absent where the closed form cannot be evaluated).
pub fn simulate_ber(plan: &SweepPlan) -> Result<ExperimentResult, MonteCarloError> {
    let mut out = ExperimentResult::new(&plan.base);
    let budget = BerBudget {
        max_symbols: plan.trials,
        min_errors: plan.min_errors,
        symbols_per_draw: plan.symbols_per_draw,
    };
    let m = plan.base.modulation;
    for &v in &plan.values {
        let (cfg, n0) = plan.point(v)?;
        let model = ChannelModel::from_config(&cfg)?;
        let pa = cfg.power_allocation_at(n0).map_err(MonteCarloError::Config)?;
        let t = simulate_ber_point(&model, &pa, m, cfg.relay_mode, budget, plan.seed)?;
        let x = Swept::Scalar(v);
        out.push(x, "ber", t.ber(), wilson_halfwidth(t.bit_errors, t.bits), t.bits, plan.seed);
        out.push(x, "ser", t.ser(), wilson_halfwidth(t.symbol_errors, t.symbols), t.symbols, plan.seed);
        out.push(x, "error_events", t.bit_errors as f64, 0.0, t.bits, plan.seed);
        let low = u8::from(t.bit_errors < LOW_CONFIDENCE_ERRORS);
        out.push(x, "low_confidence", f64::from(low), 0.0, t.bits, plan.seed);
        if let Ok(sep) = sep_mpsk(&total_mgf(&model, &pa), m) {
            out.push(x, "sep_analytic", sep, 0.0, 0, plan.seed);
        }
    }
    Ok(out)
}

/// Mean and 95% halfwidth accumulated from block sums.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanAcc {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl MeanAcc {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, o: &MeanAcc) {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n.max(1) as f64
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn halfwidth(&self) -> f64 {
        Z95 * (self.variance() / self.n.max(1) as f64).sqrt()
    }
}

/// Runs `f(trial_seed, &mut realization)` for `trials` draws in fixed blocks
/// and returns the per-trial outputs in trial order.
pub fn map_trials<T, F>(model: &ChannelModel, trials: u64, seed: u64, f: F) -> Result<Vec<T>, MonteCarloError>
where
    T: Send,
    F: Fn(&ChannelRealization) -> Result<T, MonteCarloError> + Sync,
{
    let blocks = trials.div_ceil(SAMPLE_BLOCK);
    let parts: Vec<Result<Vec<T>, MonteCarloError>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut real = model.draw(0);
            let hi = ((b + 1) * SAMPLE_BLOCK).min(trials);
            let mut v = Vec::with_capacity((hi - b * SAMPLE_BLOCK) as usize);
            for t in b * SAMPLE_BLOCK..hi {
                model.draw_into(derive_seed(seed, &[TAG_CHANNEL, t]), &mut real);
                v.push(f(&real)?);
            }
            Ok(v)
        })
        .collect();
    let mut out = Vec::with_capacity(trials as usize);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Instantaneous SNRs of `count` independent realizations at fixed powers.
pub fn sample_snrs(
    model: &ChannelModel,
    pa: &PowerAllocation,
    count: u64,
    seed: u64,
) -> Result<Vec<SnrBreakdown>, MonteCarloError> {
    map_trials(model, count, seed, |r| Ok(instantaneous_snrs(r, pa, model.scheme)?))
}

/// Averages at one rate point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub rate: MeanAcc,
    /// Optimized `P1` (budget configs only).
    pub p1_star: Option<MeanAcc>,
}

/// Average rate of one scenario. With explicit powers the rate follows
/// `mode`; with a budget every draw runs the sequential optimizer, whose rate
/// is the non-ideal one, and ideal mode reports `log2(1 + gamma_tot)` at the
/// optimized split.
pub fn rate_point(cfg: &ScenarioConfig, n0: f64, mode: RelayMode, trials: u64, seed: u64) -> Result<RatePoint, MonteCarloError> {
    let model = ChannelModel::from_config(cfg)?;
    let scheme = cfg.scheme;
    match cfg.powers {
        Powers::Explicit { .. } => {
            let pa = cfg.power_allocation_at(n0).map_err(MonteCarloError::Config)?;
            let rates = map_trials(&model, trials, seed, |r| {
                let snr = instantaneous_snrs(r, &pa, scheme)?;
                Ok(match mode {
                    RelayMode::Ideal => rate_ideal(&snr),
                    RelayMode::Nonideal => rate_nonideal(&snr, scheme),
                })
            })?;
            let mut acc = MeanAcc::default();
            rates.iter().for_each(|&x| acc.push(x));
            Ok(RatePoint { rate: acc, p1_star: None })
        }
        Powers::Budget { p_tot } => {
            let problem = crate::optimizer::SplitProblem {
                scheme,
                budget: p_tot,
                n0,
                objective: cfg.objective,
            };
            let out = map_trials(&model, trials, seed, |r| {
                let res = sequential_optimize(r, &problem)?;
                let rate = match mode {
                    RelayMode::Nonideal => res.rate,
                    RelayMode::Ideal => {
                        let pa = PowerAllocation {
                            p1: res.solution.p1_star,
                            p2: res.solution.p2_star,
                            p3: if scheme == Scheme::Joint { res.solution.p2_star } else { 0.0 },
                            n0,
                        };
                        rate_ideal(&instantaneous_snrs(r, &pa, scheme)?)
                    }
                };
                Ok((rate, res.solution.p1_star))
            })?;
            let (mut rate, mut p1) = (MeanAcc::default(), MeanAcc::default());
            for (r, p) in out {
                rate.push(r);
                p1.push(p);
            }
            Ok(RatePoint { rate, p1_star: Some(p1) })
        }
    }
}

fn rate_metric(mode: RelayMode) -> &'static str {
    match mode {
        RelayMode::Ideal => "rate_ideal",
        RelayMode::Nonideal => "rate_nonideal",
    }
}

fn push_rate(out: &mut ExperimentResult, x: Swept, mode: RelayMode, p: &RatePoint, seed: u64) {
    out.push(x, rate_metric(mode), p.rate.mean(), p.rate.halfwidth(), p.rate.n, seed);
    if let Some(p1) = &p.p1_star {
        out.push(x, "p1_star", p1.mean(), p1.halfwidth(), p1.n, seed);
    }
}

/// Average achievable rate along a sweep, `plan.trials` draws per point.
pub fn simulate_rate(plan: &SweepPlan, mode: RelayMode) -> Result<ExperimentResult, MonteCarloError> {
    let mut out = ExperimentResult::new(&plan.base);
    for &v in &plan.values {
        let (cfg, n0) = plan.point(v)?;
        let p = rate_point(&cfg, n0, mode, plan.trials, plan.seed)?;
        push_rate(&mut out, Swept::Scalar(v), mode, &p, plan.seed);
    }
    Ok(out)
}

/// Average rate (and `P1*` for budget configs) on a RIS/relay position grid.
/// For the integrated scheme the shared node follows `ris_y`.
pub fn simulate_rate_grid(
    cfg: &ScenarioConfig,
    ris_y: &[f64],
    relay_y: &[f64],
    mode: RelayMode,
    trials: u64,
) -> Result<ExperimentResult, MonteCarloError> {
    let n0 = cfg
        .n0()
        .ok_or_else(|| MonteCarloError::Config("N0 or N0_dBm is required".into()))?;
    let mut out = ExperimentResult::new(cfg);
    for &yr in ris_y {
        for &yl in relay_y {
            let mut c = cfg.clone();
            c.layout.ris.y = yr;
            c.layout.relay.y = if cfg.scheme == Scheme::Integrated { yr } else { yl };
            let p = rate_point(&c, n0, mode, trials, cfg.seed)?;
            let x = Swept::Grid { ris_y: yr, relay_y: yl };
            push_rate(&mut out, x, mode, &p, cfg.seed);
        }
    }
    Ok(out)
}

/// Sample estimate of `E[e^{s gamma}]` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfEstimate {
    pub value: f64,
    pub std_error: f64,
}

pub fn empirical_mgf(samples: &[f64], s: f64) -> Result<MgfEstimate, MonteCarloError> {
    if s > 0.0 {
        return Err(MonteCarloError::PositiveArgument(s));
    }
    if samples.len() < MIN_MGF_SAMPLES {
        return Err(MonteCarloError::TooFewSamples(samples.len()));
    }
    if s == 0.0 {
        return Ok(MgfEstimate { value: 1.0, std_error: 0.0 });
    }
    let mut acc = MeanAcc::default();
    for &g in samples {
        acc.push((s * g).exp());
    }
    Ok(MgfEstimate {
        value: acc.mean(),
        std_error: (acc.variance() / acc.n as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;
    use statrs::function::erf::erfc;

    fn q(x: f64) -> f64 {
        0.5 * erfc(x / std::f64::consts::SQRT_2)
    }

    #[test]
    fn wilson_basics() {
        assert!(wilson_halfwidth(0, 1000) > 0.0);
        let h = wilson_halfwidth(500, 10_000);
        let wald = Z95 * (0.05f64 * 0.95 / 10_000.0).sqrt();
        assert!((h / wald - 1.0).abs() < 0.01);
    }

    #[test]
    fn mgf_trivia() {
        let c = 3.0;
        let v = vec![c; MIN_MGF_SAMPLES];
        assert_eq!(empirical_mgf(&v, 0.0).unwrap().value, 1.0);
        let e = empirical_mgf(&v, -0.2).unwrap();
        assert!((e.value - (-0.2 * c).exp()).abs() < 1e-12);
        assert!(matches!(empirical_mgf(&v[..10], -1.0), Err(MonteCarloError::TooFewSamples(10))));
        assert!(empirical_mgf(&v, 0.1).is_err());
    }

    /// A LOS-only relay link with a fixed gain is plain AWGN.
    fn awgn_model() -> ChannelModel {
        let cfg = ScenarioConfig {
            scheme: Scheme::RelayOnly,
            k_db: f64::INFINITY,
            ..ScenarioConfig::sub6_integrated(0)
        };
        ChannelModel::from_config(&cfg).unwrap()
    }

    #[test]
    fn awgn_bpsk() {
        let model = awgn_model();
        let g = model.gains.relay_dest;
        let snr = db_to_linear(9.6);
        let pa = PowerAllocation { p1: 1.0, p2: 1.0, p3: 0.0, n0: g / snr };
        let budget = BerBudget { max_symbols: 2_000_000, min_errors: u64::MAX, symbols_per_draw: 64 };
        let t = simulate_ber_point(&model, &pa, 2, RelayMode::Ideal, budget, 3).unwrap();
        let p = q((2.0 * snr).sqrt());
        let sd = (p * (1.0 - p) / t.bits as f64).sqrt();
        assert!((t.ber() - p).abs() < 3.0 * sd, "{} vs {p}", t.ber());
    }

    #[test]
    fn noiseless_limit() {
        let cfg = ScenarioConfig::sub6_joint(16);
        let model = ChannelModel::from_config(&cfg).unwrap();
        let pa = cfg.power_allocation_at(cfg.total_power() / db_to_linear(200.0)).unwrap();
        let budget = BerBudget { max_symbols: 20_000, ..BerBudget::default() };
        let t = simulate_ber_point(&model, &pa, 2, RelayMode::Ideal, budget, 1).unwrap();
        assert_eq!(t.bit_errors, 0);
        assert_eq!(t.bits, 20_000);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = ScenarioConfig::sub6_integrated(32);
        let model = ChannelModel::from_config(&cfg).unwrap();
        let pa = cfg.power_allocation_at(cfg.total_power() / db_to_linear(105.0)).unwrap();
        let budget = BerBudget { max_symbols: 200_000, min_errors: 300, symbols_per_draw: 4 };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_ber_point(&model, &pa, 4, RelayMode::Nonideal, budget, 9).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn fixed_realization_rate_matches_closed_form() {
        let cfg = ScenarioConfig::mmwave_integrated(64);
        let model = ChannelModel::from_config(&cfg).unwrap();
        let pa = cfg.power_allocation().unwrap();
        let snrs = sample_snrs(&model, &pa, 1, 4).unwrap();
        let p = rate_point(&cfg, pa.n0, RelayMode::Ideal, 1, 4).unwrap();
        assert_eq!(p.rate.mean(), rate_ideal(&snrs[0]));
    }
}
