//! Config-driven experiment runs. Each run writes `<experiment>.csv` and
//! `<experiment>.manifest.json` into the output directory.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{
    envelope_stats, sep_mpsk, slot_mgfs, total_mgf, uncorrected, MgfSpec,
};
use crate::config::{validate_config, Diagnostics, Powers, RelayMode, ScenarioConfig, SweepVariable};
use crate::fading::ChannelModel;
use crate::geometry::GeometryError;
use crate::montecarlo::{
    empirical_mgf, rate_point, sample_snrs, simulate_ber, simulate_ber_point, simulate_rate_grid,
    wilson_halfwidth, BerBudget, ExperimentResult, MeanAcc, MonteCarloError, SweepPlan, Swept,
    RATE_TRIALS,
};
use crate::schemes::PowerAllocation;
use crate::Scheme;

pub const CSV_HEADER: [&str; 7] = ["swept", "metric", "value", "ci_halfwidth", "trials", "seed", "run_id"];

/// Element counts of `rate-vs-N` when the config has no sweep.
pub const DEFAULT_ELEMENT_SWEEP: [f64; 5] = [16.0, 32.0, 64.0, 128.0, 256.0];
/// MGF arguments checked by `oracle-validation`.
pub const ORACLE_MGF_POINTS: [f64; 3] = [-0.01, -0.1, -1.0];
/// Samples per oracle comparison.
pub const ORACLE_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    BerSweep,
    RateVsPosition,
    RateVsN,
    PowerAllocationMap,
    OracleValidation,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::BerSweep,
        Experiment::RateVsPosition,
        Experiment::RateVsN,
        Experiment::PowerAllocationMap,
        Experiment::OracleValidation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::BerSweep => "ber-sweep",
            Experiment::RateVsPosition => "rate-vs-position",
            Experiment::RateVsN => "rate-vs-N",
            Experiment::PowerAllocationMap => "power-allocation-map",
            Experiment::OracleValidation => "oracle-validation",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.as_str()).collect();
                format!("unknown experiment {s:?} (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Invalid(Diagnostics),
    #[error("{0}")]
    UnknownExperiment(String),
    /// Valid config that cannot support the requested experiment.
    #[error("{0}")]
    Infeasible(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Simulation(MonteCarloError),
    #[error("cannot write output: {0}")]
    Write(String),
}

impl ExperimentError {
    /// 2 for unreadable or malformed input, 3 for infeasible configs, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Read { .. } | ExperimentError::UnknownExperiment(_) => 2,
            ExperimentError::Invalid(d) if d.has_parse_errors() => 2,
            ExperimentError::Invalid(_)
            | ExperimentError::Infeasible(_)
            | ExperimentError::Geometry(_) => 3,
            ExperimentError::Simulation(MonteCarloError::Geometry(_))
            | ExperimentError::Simulation(MonteCarloError::Config(_)) => 3,
            ExperimentError::Simulation(_) | ExperimentError::Write(_) => 1,
        }
    }
}

impl From<MonteCarloError> for ExperimentError {
    fn from(e: MonteCarloError) -> Self {
        ExperimentError::Simulation(e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub run_id: String,
    pub experiment: String,
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub rows: usize,
    pub metadata: crate::montecarlo::Metadata,
    pub config: ScenarioConfig,
    /// Resolved config in its file form; feeding it back reproduces the run.
    pub config_toml: String,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub run_id: String,
    pub result: ExperimentResult,
}

/// FNV-1a, for a short stable fingerprint of the resolved config.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn run_id(experiment: Experiment, cfg: &ScenarioConfig) -> String {
    format!(
        "{}-{:016x}",
        experiment.as_str(),
        fnv1a(cfg.to_toml().as_bytes())
    )
}

/// Reads, validates and runs. `seed` overrides the config's seed.
pub fn run_experiment(
    config_path: &Path,
    experiment: &str,
    out_dir: &Path,
    seed: Option<u64>,
) -> Result<RunOutput, ExperimentError> {
    let experiment: Experiment = experiment.parse().map_err(ExperimentError::UnknownExperiment)?;
    let text = fs::read_to_string(config_path).map_err(|source| ExperimentError::Read {
        path: config_path.to_path_buf(),
        source,
    })?;
    let mut cfg = validate_config(&text).map_err(ExperimentError::Invalid)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let result = execute(experiment, &cfg)?;
    write_outputs(experiment, &cfg, result, out_dir)
}

/// Runs an experiment on an already validated config.
pub fn execute(experiment: Experiment, cfg: &ScenarioConfig) -> Result<ExperimentResult, ExperimentError> {
    match experiment {
        Experiment::BerSweep => ber_sweep(cfg),
        Experiment::RateVsPosition => rate_vs_position(cfg),
        Experiment::RateVsN => rate_vs_n(cfg),
        Experiment::PowerAllocationMap => power_allocation_map(cfg),
        Experiment::OracleValidation => oracle_validation(cfg),
    }
}

pub fn write_outputs(
    experiment: Experiment,
    cfg: &ScenarioConfig,
    result: ExperimentResult,
    out_dir: &Path,
) -> Result<RunOutput, ExperimentError> {
    let werr = |e: &dyn fmt::Display| ExperimentError::Write(e.to_string());
    fs::create_dir_all(out_dir).map_err(|e| werr(&e))?;
    let run_id = run_id(experiment, cfg);
    let csv_path = out_dir.join(format!("{experiment}.csv"));
    let manifest_path = out_dir.join(format!("{experiment}.manifest.json"));

    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| werr(&e))?;
    w.write_record(CSV_HEADER).map_err(|e| werr(&e))?;
    for r in &result.rows {
        w.write_record([
            r.swept.to_string(),
            r.metric.clone(),
            format!("{:e}", r.value),
            format!("{:e}", r.ci_halfwidth),
            r.trials.to_string(),
            r.seed.to_string(),
            run_id.clone(),
        ])
        .map_err(|e| werr(&e))?;
    }
    w.flush().map_err(|e| werr(&e))?;

    let manifest = Manifest {
        run_id: run_id.clone(),
        experiment: experiment.to_string(),
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        rows: result.rows.len(),
        metadata: result.metadata.clone(),
        config: cfg.clone(),
        config_toml: cfg.to_toml(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| werr(&e))?;
    fs::write(&manifest_path, json + "\n").map_err(|e| werr(&e))?;
    Ok(RunOutput {
        csv: csv_path,
        manifest: manifest_path,
        run_id,
        result,
    })
}

fn require_sweep(cfg: &ScenarioConfig, allowed: &[SweepVariable], what: &str) -> Result<(), ExperimentError> {
    match &cfg.sweep {
        Some(s) if allowed.contains(&s.variable) => Ok(()),
        Some(s) => Err(ExperimentError::Infeasible(format!(
            "{what} cannot sweep {}",
            s.variable.as_str()
        ))),
        None => Err(ExperimentError::Infeasible(format!("{what} needs a [sweep] section"))),
    }
}

fn ber_sweep(cfg: &ScenarioConfig) -> Result<ExperimentResult, ExperimentError> {
    if matches!(cfg.powers, Powers::Budget { .. }) {
        return Err(ExperimentError::Infeasible(
            "ber-sweep needs explicit powers P1/P2".into(),
        ));
    }
    require_sweep(cfg, &[SweepVariable::SnrDb], "ber-sweep")?;
    let plan = SweepPlan::from_config(cfg, crate::config::SweepSpec::DEFAULT_BER_TRIALS)?;
    Ok(simulate_ber(&plan)?)
}

/// Both relay modes at every point; `p1_star` once for budget configs.
fn rate_rows(plan: &SweepPlan) -> Result<ExperimentResult, ExperimentError> {
    let mut out = ExperimentResult::new(&plan.base);
    for &v in &plan.values {
        let (cfg, n0) = plan.point(v)?;
        let x = Swept::Scalar(v);
        for mode in [RelayMode::Ideal, RelayMode::Nonideal] {
            let p = rate_point(&cfg, n0, mode, plan.trials, plan.seed)?;
            let metric = match mode {
                RelayMode::Ideal => "rate_ideal",
                RelayMode::Nonideal => "rate_nonideal",
            };
            out.push(x, metric, p.rate.mean(), p.rate.halfwidth(), p.rate.n, plan.seed);
            if let (RelayMode::Nonideal, Some(p1)) = (mode, p.p1_star) {
                out.push(x, "p1_star", p1.mean(), p1.halfwidth(), p1.n, plan.seed);
            }
        }
    }
    Ok(out)
}

fn rate_vs_position(cfg: &ScenarioConfig) -> Result<ExperimentResult, ExperimentError> {
    if let (Some(g), None) = (&cfg.grid, &cfg.sweep) {
        let mut out = simulate_rate_grid(cfg, &g.ris_y, &g.relay_y, RelayMode::Ideal, g.trials)?;
        let non = simulate_rate_grid(cfg, &g.ris_y, &g.relay_y, RelayMode::Nonideal, g.trials)?;
        out.rows.extend(non.rows);
        return Ok(out);
    }
    require_sweep(
        cfg,
        &[SweepVariable::RisY, SweepVariable::RelayY],
        "rate-vs-position",
    )?;
    rate_rows(&SweepPlan::from_config(cfg, RATE_TRIALS)?)
}

fn rate_vs_n(cfg: &ScenarioConfig) -> Result<ExperimentResult, ExperimentError> {
    let plan = match &cfg.sweep {
        Some(_) => {
            require_sweep(cfg, &[SweepVariable::Elements], "rate-vs-N")?;
            SweepPlan::from_config(cfg, RATE_TRIALS)?
        }
        None => SweepPlan {
            base: cfg.clone(),
            variable: SweepVariable::Elements,
            values: DEFAULT_ELEMENT_SWEEP.to_vec(),
            trials: RATE_TRIALS,
            min_errors: 0,
            symbols_per_draw: 1,
            seed: cfg.seed,
        },
    };
    rate_rows(&plan)
}

fn power_allocation_map(cfg: &ScenarioConfig) -> Result<ExperimentResult, ExperimentError> {
    if !matches!(cfg.powers, Powers::Budget { .. }) {
        return Err(ExperimentError::Infeasible(
            "power-allocation-map needs a budget P_tot".into(),
        ));
    }
    if cfg.scheme == Scheme::RisOnly {
        return Err(ExperimentError::Infeasible(
            "power-allocation-map needs a relay".into(),
        ));
    }
    let g = cfg
        .grid
        .as_ref()
        .ok_or_else(|| ExperimentError::Infeasible("power-allocation-map needs a [grid] section".into()))?;
    Ok(simulate_rate_grid(cfg, &g.ris_y, &g.relay_y, RelayMode::Nonideal, g.trials)?)
}

/// Powers giving unit mean SNR in both slots at noise `n0`.
pub fn unit_mean_allocation(model: &ChannelModel, n0: f64) -> PowerAllocation {
    let (a, b) = envelope_stats(model);
    let inv = |m2: f64| if m2 > 0.0 { n0 / m2 } else { 0.0 };
    let p1 = match model.scheme {
        Scheme::RelayOnly => 1.0,
        _ => inv(a.second_moment()),
    };
    let p2 = match model.scheme {
        Scheme::RisOnly => 0.0,
        _ => inv(b.second_moment()),
    };
    PowerAllocation {
        p1,
        p2,
        p3: if model.scheme == Scheme::Joint { p2 } else { 0.0 },
        n0,
    }
}

/// Closed forms against sampling: envelope moments, per-slot MGFs at
/// [`ORACLE_MGF_POINTS`] and the M-PSK SEP, each next to its uncorrected
/// variant where one exists. Powers are rescaled so that both slots have unit
/// mean SNR, which keeps every MGF value well away from zero.
fn oracle_validation(cfg: &ScenarioConfig) -> Result<ExperimentResult, ExperimentError> {
    let model = ChannelModel::from_config(cfg)?;
    let seed = cfg.seed;
    let n0 = 1.0;
    let pa = unit_mean_allocation(&model, n0);
    let snrs = sample_snrs(&model, &pa, ORACLE_SAMPLES, seed)?;
    let n = snrs.len() as u64;
    let mut out = ExperimentResult::new(cfg);
    let x0 = Swept::Scalar(0.0);

    let (sa, sb) = envelope_stats(&model);
    let g = &model.gains;
    let sb_unc = match model.scheme {
        Scheme::Joint => Some(uncorrected::stats_b(model.elements, model.k, g.ris_cascade, g.relay_dest)),
        Scheme::Integrated | Scheme::RelayOnly => Some(uncorrected::stats_b(0, model.k, 0.0, g.relay_dest)),
        Scheme::RisOnly => None,
    };
    let (mut acc_a, mut acc_b) = (MeanAcc::default(), MeanAcc::default());
    for s in &snrs {
        acc_a.push(s.a);
        acc_b.push(s.b);
    }
    // Sample variance has relative standard error ~ sqrt(2/n) for near-Gaussian data.
    let var_ci = |acc: &MeanAcc| 1.96 * acc.variance() * (2.0 / acc.n as f64).sqrt();
    out.push(x0, "mu_a_analytic", sa.mu, 0.0, 0, seed);
    out.push(x0, "mu_a_sampled", acc_a.mean(), acc_a.halfwidth(), n, seed);
    out.push(x0, "sigma2_a_analytic", sa.sigma2, 0.0, 0, seed);
    out.push(x0, "sigma2_a_sampled", acc_a.variance(), var_ci(&acc_a), n, seed);
    out.push(x0, "mu_b_analytic", sb.mu, 0.0, 0, seed);
    out.push(x0, "sigma2_b_analytic", sb.sigma2, 0.0, 0, seed);
    if let Some(u) = sb_unc {
        out.push(x0, "mu_b_uncorrected", u.mu, 0.0, 0, seed);
        out.push(x0, "sigma2_b_uncorrected", u.sigma2, 0.0, 0, seed);
    }
    out.push(x0, "mu_b_sampled", acc_b.mean(), acc_b.halfwidth(), n, seed);
    out.push(x0, "sigma2_b_sampled", acc_b.variance(), var_ci(&acc_b), n, seed);

    let (m1, m2) = slot_mgfs(&model, &pa);
    let g1: Vec<f64> = snrs.iter().map(|s| s.gamma1).collect();
    let g2: Vec<f64> = snrs.iter().map(|s| s.gamma2).collect();
    let eval = |m: &MgfSpec, s: f64| m.eval(s).unwrap_or(f64::NAN);
    for s in ORACLE_MGF_POINTS {
        let x = Swept::Scalar(s);
        out.push(x, "mgf_gamma1_analytic", eval(&m1, s), 0.0, 0, seed);
        let e1 = empirical_mgf(&g1, s)?;
        out.push(x, "mgf_gamma1_sampled", e1.value, 1.96 * e1.std_error, n, seed);
        out.push(x, "mgf_gamma2_analytic", eval(&m2, s), 0.0, 0, seed);
        if matches!(model.scheme, Scheme::Integrated | Scheme::RelayOnly) {
            let u = uncorrected::mgf_gamma2_integrated(model.k, g.relay_dest, pa.p2, n0, s);
            out.push(x, "mgf_gamma2_uncorrected", u, 0.0, 0, seed);
        }
        let e2 = empirical_mgf(&g2, s)?;
        out.push(x, "mgf_gamma2_sampled", e2.value, 1.96 * e2.std_error, n, seed);
    }

    // SEP at the configured order, or QPSK where sin and sin^2 coincide.
    let m = if cfg.modulation == 2 { 4 } else { cfg.modulation };
    let mgf = total_mgf(&model, &pa);
    let x = Swept::Scalar(m as f64);
    if let Ok(p) = sep_mpsk(&mgf, m) {
        out.push(x, "sep_analytic", p, 0.0, 0, seed);
    }
    if let Ok(p) = uncorrected::sep_mpsk(&mgf, m) {
        out.push(x, "sep_uncorrected", p, 0.0, 0, seed);
    }
    let budget = BerBudget {
        max_symbols: 2_000_000,
        min_errors: 2_000,
        symbols_per_draw: 8,
    };
    let t = simulate_ber_point(&model, &pa, m, RelayMode::Ideal, budget, seed)?;
    out.push(x, "ser_sampled", t.ser(), wilson_halfwidth(t.symbol_errors, t.symbols), t.symbols, seed);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_names() {
        for e in Experiment::ALL {
            assert_eq!(e.as_str().parse::<Experiment>().unwrap(), e);
        }
        assert!("fig7".parse::<Experiment>().is_err());
    }

    #[test]
    fn exit_codes() {
        let parse = validate_config("N = 3").unwrap_err();
        assert_eq!(ExperimentError::Invalid(parse).exit_code(), 2);
        assert_eq!(ExperimentError::Infeasible("x".into()).exit_code(), 3);
    }

    #[test]
    fn run_id_tracks_config() {
        let a = ScenarioConfig::sub6_joint(64);
        let mut b = a.clone();
        b.seed += 1;
        assert_eq!(run_id(Experiment::BerSweep, &a), run_id(Experiment::BerSweep, &a));
        assert_ne!(run_id(Experiment::BerSweep, &a), run_id(Experiment::BerSweep, &b));
    }

    #[test]
    fn unit_mean_slots() {
        let model = ChannelModel::from_config(&ScenarioConfig::sub6_integrated(64)).unwrap();
        let pa = unit_mean_allocation(&model, 2.0);
        let (a, b) = envelope_stats(&model);
        assert!((pa.p1 * a.second_moment() / 2.0 - 1.0).abs() < 1e-12);
        assert!((pa.p2 * b.second_moment() / 2.0 - 1.0).abs() < 1e-12);
    }
}
