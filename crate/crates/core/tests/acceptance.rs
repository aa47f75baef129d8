//! Acceptance suite. One line per criterion:
//!
//! ```text
//! criterion N PASS|FAIL  <name>: <details> [<elapsed> / <limit>]
//! ```
//!
//! The process fails when any criterion fails, except those listed in
//! `KNOWN_FAILURES`, which are reported but do not fail the run.
//! `ACCEPTANCE_ONLY=3,4` restricts the run to some criteria.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ris_relay::analytic::{
    envelope_stats, rate_ideal, rate_nonideal, sep_mpsk, slot_mgfs, total_mgf, MgfSpec,
};
use ris_relay::config::{validate_config, RelayMode, SweepSpec, SweepVariable};
use ris_relay::experiments::unit_mean_allocation;
use ris_relay::fading::ChannelModel;
use ris_relay::geometry::{
    cascaded_loss, AffineLogLoss, NodeLayout, PathLossKind, PathLossModel, Point,
};
use ris_relay::montecarlo::{
    empirical_mgf, sample_snrs, simulate_ber, simulate_ber_point, simulate_rate_grid, BerBudget,
    MeanAcc, SweepPlan, Swept,
};
use ris_relay::optimizer::{
    grid_search_split, sequential_optimize, solve_power_split, ActiveConstraint, ArmCoefficients,
    Objective, SplitProblem,
};
use ris_relay::schemes::{
    instantaneous_snrs, link_state, optimize_phases, reflect, PowerAllocation, Slot,
};
use ris_relay::{db_to_linear, Scheme, ScenarioConfig};

const KNOWN_FAILURES: &[u8] = &[4];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

// 1. Envelope moments against 1e5 samples.
fn moments() -> Outcome {
    let mut worst_mu: f64 = 0.0;
    let mut worst_var: f64 = 0.0;
    for n in [64, 256] {
        for cfg in [ScenarioConfig::sub6_joint(n), ScenarioConfig::sub6_integrated(n)] {
            let model = ChannelModel::from_config(&cfg).unwrap();
            let pa = unit_mean_allocation(&model, 1.0);
            let snrs = sample_snrs(&model, &pa, 100_000, 11).unwrap();
            let (sa, sb) = envelope_stats(&model);
            let (mut a, mut b) = (MeanAcc::default(), MeanAcc::default());
            for s in &snrs {
                a.push(s.a);
                b.push(s.b);
            }
            worst_mu = worst_mu.max(rel(a.mean(), sa.mu)).max(rel(b.mean(), sb.mu));
            worst_var = worst_var
                .max(rel(a.variance(), sa.sigma2))
                .max(rel(b.variance(), sb.sigma2));
        }
    }
    Outcome::new(
        worst_mu <= 0.01 && worst_var <= 0.03,
        format!(
            "worst mean error {:.3}% (<= 1%), worst variance error {:.3}% (<= 3%)",
            100.0 * worst_mu,
            100.0 * worst_var
        ),
    )
}

// 2. Per-slot MGFs against 1e6 samples, each slot at unit mean SNR.
fn mgfs() -> Outcome {
    let mut worst: f64 = 0.0;
    for cfg in [ScenarioConfig::sub6_joint(64), ScenarioConfig::sub6_integrated(64)] {
        let model = ChannelModel::from_config(&cfg).unwrap();
        let pa = unit_mean_allocation(&model, 1.0);
        let snrs = sample_snrs(&model, &pa, 1_000_000, 21).unwrap();
        let g1: Vec<f64> = snrs.iter().map(|s| s.gamma1).collect();
        let g2: Vec<f64> = snrs.iter().map(|s| s.gamma2).collect();
        let (m1, m2) = slot_mgfs(&model, &pa);
        for s in [-0.01, -0.1, -1.0] {
            worst = worst.max(rel(empirical_mgf(&g1, s).unwrap().value, m1.eval(s).unwrap()));
            worst = worst.max(rel(empirical_mgf(&g2, s).unwrap().value, m2.eval(s).unwrap()));
        }
    }
    Outcome::new(worst <= 0.02, format!("worst relative error {:.3}% (<= 2%)", 100.0 * worst))
}

// 3. Analytic SEP against simulated BER, joint scheme, N = 64, BPSK.
fn sep_vs_ber() -> Outcome {
    let mut cfg = ScenarioConfig::sub6_joint(64);
    cfg.sweep = Some(SweepSpec {
        variable: SweepVariable::SnrDb,
        values: (0..8).map(|i| 86.0 + 2.0 * i as f64).collect(),
        trials: Some(30_000_000),
        min_errors: 2_000,
        symbols_per_draw: 8,
    });
    let plan = SweepPlan::from_config(&cfg, 0).unwrap();
    let res = simulate_ber(&plan).unwrap();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (x, ber) in res.series("ber") {
        if ber < 1e-4 {
            continue;
        }
        let sep = res.find(x, "sep_analytic").unwrap().value;
        worst = worst.max(rel(ber, sep));
        checked += 1;
    }
    Outcome::new(
        checked >= 4 && worst <= 0.10,
        format!("{checked} points with BER >= 1e-4, worst relative gap {:.2}% (<= 10%)", 100.0 * worst),
    )
}

/// Fig. 3 layouts with 3GPP UMi LOS on the RIS segments and UMi NLOS on the
/// relay links, both as custom affine laws.
fn sub6_los_ris(scheme: Scheme, n: usize) -> ScenarioConfig {
    let mut cfg = match scheme {
        Scheme::Joint => ScenarioConfig::sub6_joint(n),
        _ => ScenarioConfig::sub6_integrated(n),
    };
    cfg.pathloss.kind = PathLossKind::Custom(AffineLogLoss::UMI_NLOS);
    cfg.ris_pathloss = Some(PathLossModel {
        carrier_hz: cfg.pathloss.carrier_hz,
        kind: PathLossKind::Custom(AffineLogLoss::UMI_LOS),
    });
    cfg
}

fn ber_at(cfg: &ScenarioConfig, model: &ChannelModel, snr_db: f64) -> f64 {
    let pa = cfg
        .power_allocation_at(cfg.total_power() / db_to_linear(snr_db))
        .unwrap();
    let budget = BerBudget {
        max_symbols: 20_000_000,
        min_errors: 1_000,
        symbols_per_draw: 8,
    };
    simulate_ber_point(model, &pa, 2, RelayMode::Ideal, budget, cfg.seed)
        .unwrap()
        .ber()
}

fn sep_at(cfg: &ScenarioConfig, model: &ChannelModel, snr_db: f64) -> f64 {
    let pa = cfg
        .power_allocation_at(cfg.total_power() / db_to_linear(snr_db))
        .unwrap();
    sep_mpsk(&total_mgf(model, &pa), 2).unwrap()
}

/// SNR (dB) where `f` crosses `target`, by bisection.
fn crossing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Simulated SNR for BER = `target`: bracket around the closed-form guess in
/// 1 dB steps and interpolate log10(BER) linearly.
fn simulated_required_snr(cfg: &ScenarioConfig, target: f64) -> f64 {
    let model = ChannelModel::from_config(cfg).unwrap();
    let guess = crossing(|x| sep_at(cfg, &model, x), target, -100.0, 400.0);
    let mut lo = guess.floor();
    let mut b_lo = ber_at(cfg, &model, lo);
    while b_lo < target {
        lo -= 1.0;
        b_lo = ber_at(cfg, &model, lo);
    }
    let mut hi = lo + 1.0;
    let mut b_hi = ber_at(cfg, &model, hi);
    while b_hi > target {
        lo = hi;
        b_lo = b_hi;
        hi += 1.0;
        b_hi = ber_at(cfg, &model, hi);
    }
    let (l0, l1, lt) = (b_lo.log10(), b_hi.log10(), target.log10());
    lo + (l0 - lt) / (l0 - l1) * (hi - lo)
}

// 4. SNR shift per doubling of N at BER = 1e-3.
fn doubling_gain() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (scheme, want) in [(Scheme::Joint, 5.0), (Scheme::Integrated, 3.0)] {
        let req: Vec<f64> = [32, 64, 128]
            .iter()
            .map(|&n| simulated_required_snr(&sub6_los_ris(scheme, n), 1e-3))
            .collect();
        let shifts = [req[0] - req[1], req[1] - req[2]];
        let ok = shifts.iter().all(|s| (s - want).abs() <= 1.0);
        pass &= ok;
        parts.push(format!(
            "{scheme} {:.2}/{:.2} dB (want {want}±1)",
            shifts[0], shifts[1]
        ));
    }
    Outcome::new(pass, parts.join(", "))
}

fn budget_split(n: usize) -> (ScenarioConfig, SplitProblem) {
    let cfg = ScenarioConfig::mmwave_budget(n, 10.0, 30.0);
    let problem = cfg.split_problem().unwrap();
    (cfg, problem)
}

// 5. Closed-form split against a 1e4-point grid.
fn optimizer_exact() -> Outcome {
    let (base, mut problem) = budget_split(128);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for t in 0..100u64 {
        let mut cfg = base.clone();
        cfg.layout.ris.y = rng.random_range(0.0..40.0);
        cfg.layout.relay.y = rng.random_range(0.0..40.0);
        if cfg.layout.relay.y == cfg.layout.ris.y {
            continue;
        }
        let model = ChannelModel::from_config(&cfg).unwrap();
        let real = model.draw(t);
        for objective in [Objective::SharedP2, Objective::PerSlot] {
            problem.objective = objective;
            let res = sequential_optimize(&real, &problem).unwrap();
            // The oracle evaluates the SNRs directly at every grid point.
            let snr = |p1: f64, p2: f64| {
                let pa = PowerAllocation { p1, p2, p3: p2, n0: problem.n0 };
                instantaneous_snrs(&real, &pa, Scheme::Joint).unwrap()
            };
            let arm2 = |p1: f64, p2: f64| {
                let s = snr(p1, p2);
                match objective {
                    Objective::SharedP2 => p2 * (s.a * s.a + s.b * s.b) / problem.n0,
                    Objective::PerSlot => s.gamma_tot,
                }
            };
            let (p1_grid, v_grid) =
                grid_search_split(|p1, p2| snr(p1, p2).gamma_r, arm2, problem.budget, Scheme::Joint, 10_000);
            let err = (res.solution.p1_star - p1_grid).abs() / problem.budget;
            worst = worst.max(err);
            if res.solution.achieved_objective < v_grid * (1.0 - 1e-9) {
                return Outcome::new(false, format!("grid beats closed form at trial {t}"));
            }
        }
    }
    Outcome::new(
        worst <= 1e-3,
        format!("worst |P1* - P1_grid| = {worst:.2e} P_tot (<= 1e-3), 100 realizations, both objectives"),
    )
}

// 6. Mean P1* falls when the relay moves next to the RIS.
fn relay_near_ris() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for y_ris in [5.0, 20.0] {
        let mean_p1 = |y_relay: f64| {
            let cfg = ScenarioConfig::mmwave_budget(1024, y_ris, y_relay);
            let problem = cfg.split_problem().unwrap();
            let model = ChannelModel::from_config(&cfg).unwrap();
            let mut acc = MeanAcc::default();
            for t in 0..200 {
                acc.push(sequential_optimize(&model.draw(t), &problem).unwrap().solution.p1_star);
            }
            acc.mean()
        };
        let far = mean_p1(if y_ris < 20.0 { 40.0 } else { 0.0 });
        let near = mean_p1(y_ris + 1.0);
        pass &= near < far;
        parts.push(format!("RIS y={y_ris}: far {far:.3} W -> adjacent {near:.3} W"));
    }
    Outcome::new(pass, parts.join(", "))
}

// 7. Rate maxima on an 8x8 RIS/relay grid.
fn positioning() -> Outcome {
    let ys: Vec<f64> = (0..8).map(|i| 7.5 * i as f64).collect();
    let cfg = ScenarioConfig::mmwave_placement(256, 0.0, 30.0);
    let argmax = |mode: RelayMode| {
        let res = simulate_rate_grid(&cfg, &ys, &ys, mode, 1000).unwrap();
        let metric = match mode {
            RelayMode::Ideal => "rate_ideal",
            RelayMode::Nonideal => "rate_nonideal",
        };
        let best = res
            .series(metric)
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        match best.0 {
            Swept::Grid { ris_y, relay_y } => (ris_y, relay_y, best.1),
            Swept::Scalar(_) => unreachable!(),
        }
    };
    let (ri, li, vi) = argmax(RelayMode::Ideal);
    let (rn, ln, vn) = argmax(RelayMode::Nonideal);
    let s_end = ys[0];
    let d_end = *ys.last().unwrap();
    let ideal_ok = ri == s_end && li == d_end;
    let nonideal_ok = rn == ln;
    Outcome::new(
        ideal_ok && nonideal_ok,
        format!(
            "ideal max {vi:.3} at RIS y={ri}, relay y={li} (want {s_end}, {d_end}); \
             non-ideal max {vn:.3} at RIS y={rn}, relay y={ln} (want relay beside RIS)"
        ),
    )
}

fn check(runner: &mut TestRunner, name: &str, r: Result<(), String>, failures: &mut Vec<String>) {
    let _ = runner;
    if let Err(e) = r {
        failures.push(format!("{name}: {e}"));
    }
}

fn prop<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(PtConfig {
        cases,
        failure_persistence: None,
        ..PtConfig::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

// 8. Invariants of every module as one property batch.
fn invariants() -> Outcome {
    let mut failures = Vec::new();
    let mut dummy = TestRunner::default();
    let mut count = 0;
    let mut run = |name: &str, r: Result<(), String>| {
        count += 1;
        check(&mut dummy, name, r, &mut failures);
    };

    // Path loss.
    run(
        "gain in (0,1] and monotone",
        prop(256, (1.0..1e4f64, 0.0..1e4f64), |(d, dd)| {
            for m in [PathLossModel::umi_2_4ghz(), PathLossModel::umi_street_canyon_28ghz()] {
                let g1 = m.gain(d).unwrap();
                let g2 = m.gain(d + dd).unwrap();
                prop_assert!(g1 > 0.0 && g1 <= 1.0 && g2 <= g1);
            }
            Ok(())
        }),
    );
    run(
        "cascade below each factor",
        prop(128, (-50.0..50.0f64, 1.0..80.0f64), |(x, y)| {
            let layout = NodeLayout {
                source: Point::new(10.0, 0.0),
                destination: Point::new(10.0, 60.0),
                ris: Point::new(x, y),
                relay: Point::new(25.0, 30.0),
            };
            prop_assume!(layout.validate(Scheme::Joint).is_ok());
            let g = cascaded_loss(&layout, &PathLossModel::umi_street_canyon_28ghz(), Scheme::Joint, Default::default()).unwrap();
            prop_assert!(g.ris_cascade <= g.source_ris_element.min(g.ris_dest_element));
            Ok(())
        }),
    );

    // Fading and schemes.
    let model = ChannelModel::from_config(&ScenarioConfig::sub6_joint(32)).unwrap();
    run(
        "draws deterministic per seed",
        prop(64, any::<u64>(), |seed| {
            prop_assert_eq!(model.draw(seed), model.draw(seed));
            Ok(())
        }),
    );
    run(
        "phase optimality",
        prop(128, (complex_vec(16), complex_vec(16), prop::collection::vec(-PI..PI, 16)), |(a, b, phi)| {
            let mut real = model.draw(0);
            real.h_rd = a;
            real.h_sr = b;
            real.g_r = Some(real.h_rd.clone());
            let best = optimize_phases(&real, Scheme::Joint, Slot::First).unwrap();
            let as_phasors = |p: &[f64]| p.iter().map(|&t| Complex64::from_polar(1.0, t)).collect::<Vec<_>>();
            let opt = reflect(&real.h_rd, &as_phasors(&best), &real.h_sr).norm();
            let other = reflect(&real.h_rd, &as_phasors(&phi), &real.h_sr).norm();
            prop_assert!(opt + 1e-10 >= other);
            Ok(())
        }),
    );
    run(
        "MRC additivity",
        prop(128, (any::<u64>(), 0.0..10.0f64, 0.0..10.0f64), |(seed, p1, p2)| {
            let real = model.draw(seed);
            let pa = PowerAllocation { p1, p2, p3: p2, n0: 1e-12 };
            let st = link_state(&real, &pa, Scheme::Joint).unwrap();
            let s = st.snr;
            prop_assert!((s.gamma_tot - (s.gamma1 + s.gamma2)).abs() <= 1e-12 * s.gamma_tot.max(1.0));
            prop_assert!(s.gamma1 >= 0.0 && s.gamma2 >= 0.0 && s.gamma_r >= 0.0);
            Ok(())
        }),
    );

    // Analytic.
    run(
        "M(0) = 1",
        prop(256, (0.0..1e3f64, 0.0..1e3f64, 0.0..1e3f64, 0.0..30.0f64), |(mu, var, g, k)| {
            let specs = [
                MgfSpec::NoncentralChi1 { mean: mu, variance: var, scale: 1.0 },
                MgfSpec::RicianPower { k, mean_snr: g },
                MgfSpec::NoncentralChi1 { mean: mu, variance: var, scale: 1.0 }
                    .times(MgfSpec::RicianPower { k, mean_snr: g }),
            ];
            for m in specs {
                prop_assert!((m.eval(0.0).unwrap() - 1.0).abs() <= 1e-12);
            }
            Ok(())
        }),
    );
    run(
        "SEP monotone in SNR and ordered in M",
        prop(24, (0.0..1.0f64, 0.0..2.0f64), |(mu, var)| {
            let at = |c: f64| MgfSpec::NoncentralChi1 { mean: mu, variance: var, scale: c };
            let mut prev = 1.0;
            for c in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let p = sep_mpsk(&at(c), 2).unwrap();
                prop_assert!(p <= prev + 1e-12);
                prev = p;
            }
            let [b, q, e] = [2, 4, 8].map(|m| sep_mpsk(&at(1.0), m).unwrap());
            prop_assert!(b <= q + 1e-12 && q <= e + 1e-12);
            Ok(())
        }),
    );
    run(
        "rate_ideal >= 2 rate_nonideal",
        prop(256, (any::<u64>(), 0.0..10.0f64, 0.0..10.0f64, 1e-14..1e-9f64), |(seed, p1, p2, n0)| {
            let real = model.draw(seed);
            let pa = PowerAllocation { p1, p2, p3: p2, n0 };
            let s = instantaneous_snrs(&real, &pa, Scheme::Joint).unwrap();
            prop_assert!(rate_ideal(&s) + 1e-12 >= 2.0 * rate_nonideal(&s, Scheme::Joint));
            Ok(())
        }),
    );

    // Optimizer.
    run(
        "optimality certificate, budget, scale invariance",
        prop(256, (0.0..1e3f64, 0.0..1e3f64, 0.1..100.0f64, 1e-3..1e3f64), |(a, b, p, c)| {
            for scheme in [Scheme::Joint, Scheme::Integrated] {
                let s = solve_power_split(ArmCoefficients { a, b }, p, scheme);
                let share = if scheme == Scheme::Joint { 2.0 } else { 1.0 };
                prop_assert!((s.p1_star + share * s.p2_star - p).abs() <= 1e-9 * p);
                if !s.degenerate {
                    let (f, g) = (a * s.p1_star, b * s.p2_star);
                    prop_assert_eq!(s.achieved_objective, f.min(g));
                    prop_assert!(
                        (f - g).abs() <= 1e-9 * f.max(g)
                            || s.active_constraint != ActiveConstraint::InteriorEqualized
                    );
                }
                let bigger = solve_power_split(ArmCoefficients { a, b }, 2.0 * p, scheme);
                prop_assert!(bigger.achieved_objective >= s.achieved_objective);
                let scaled = solve_power_split(ArmCoefficients { a: c * a, b: c * b }, p, scheme);
                prop_assert!((scaled.p1_star - s.p1_star).abs() <= 1e-9 * p);
            }
            Ok(())
        }),
    );
    let (budget, problem) = budget_split(64);
    let m6 = ChannelModel::from_config(&budget).unwrap();
    run(
        "optimized rate beats even split",
        prop(64, any::<u64>(), |seed| {
            let real = m6.draw(seed);
            let res = sequential_optimize(&real, &problem).unwrap();
            let p1 = problem.budget / 2.0;
            let pa = PowerAllocation { p1, p2: p1 / 2.0, p3: p1 / 2.0, n0: problem.n0 };
            let s = instantaneous_snrs(&real, &pa, Scheme::Joint).unwrap();
            let printed = ris_relay::SnrBreakdown::from_parts(0.0, pa.p2 * (s.a * s.a + s.b * s.b) / pa.n0, s.gamma_r, s.a, s.b);
            prop_assert!(res.rate + 1e-12 >= rate_nonideal(&printed, Scheme::Joint));
            Ok(())
        }),
    );

    // Monte Carlo.
    let cfg = ScenarioConfig::sub6_integrated(32);
    let mi = ChannelModel::from_config(&cfg).unwrap();
    let budget = BerBudget { max_symbols: 400_000, min_errors: 500, symbols_per_draw: 8 };
    let ber = |p1: f64, p2: f64| {
        let pa = PowerAllocation { p1, p2, p3: 0.0, n0: 1e-20 };
        simulate_ber_point(&mi, &pa, 2, RelayMode::Ideal, budget, 3).unwrap()
    };
    run("BER deterministic", (ber(5.0, 5.0) == ber(5.0, 5.0)).then_some(()).ok_or("differs".into()));
    run("BER non-increasing in each power", {
        let base = ber(2.0, 2.0).ber();
        let (up1, up2) = (ber(8.0, 2.0).ber(), ber(2.0, 8.0).ber());
        (up1 <= base && up2 <= base)
            .then_some(())
            .ok_or(format!("{base:.3e} -> {up1:.3e}, {up2:.3e}"))
    });

    // Config.
    run(
        "config round trip",
        prop(64, (1usize..2048, 0.0..20.0f64, any::<u64>(), 0.0..60.0f64), |(n, k, seed, y)| {
            let mut c = ScenarioConfig::mmwave_placement(n, y, 60.0 - y + 0.5);
            c.k_db = k;
            c.seed = seed;
            prop_assert_eq!(validate_config(&c.to_toml()).unwrap(), c);
            Ok(())
        }),
    );

    let detail = if failures.is_empty() {
        format!("{count} property groups hold")
    } else {
        failures.join("; ")
    };
    Outcome::new(failures.is_empty(), detail)
}

type Criterion = (u8, &'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "moment oracles", moments, 30),
        (2, "MGF oracles", mgfs, 60),
        (3, "SEP vs simulated BER", sep_vs_ber, 300),
        (4, "SNR gain per doubling of N", doubling_gain, 600),
        (5, "power split vs grid", optimizer_exact, 30),
        (6, "relay beside RIS lowers P1*", relay_near_ris, 300),
        (7, "positioning trends", positioning, 600),
        (8, "invariant batch", invariants, 300),
    ];
    let only: Option<Vec<u8>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());

    let mut unexpected = 0;
    for (id, name, f, limit) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t0 = Instant::now();
        let out = f();
        let elapsed = t0.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = out.pass && in_time;
        let known = KNOWN_FAILURES.contains(&id);
        println!(
            "criterion {id} {}  {name}: {}{} [{:.1}s / {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            if in_time { "" } else { " (over time limit)" },
            elapsed.as_secs_f64()
        );
        if !pass && !known {
            unexpected += 1;
        }
        if !pass && known {
            println!("  known failure, see README");
        }
        if pass && known {
            println!("  listed as a known failure but passed");
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
