//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits non-zero if any fails.

use std::fs;
use std::process::ExitCode;

use edca_core::control::{compute_p_opt, dac_error, quantize_cw, ControllerState, CwBounds};
use edca_core::experiment::{run_experiment, sweep_points};
use edca_core::experiment::SweepAxis;
use edca_core::mac::{CaptureModel, ControlMode, HearingMatrix, NodeId, TrafficModel, World, WorldConfig};
use edca_core::metrics::ExperimentMetrics;
use edca_core::oracle::{cw_targeting, optimal_cw_bruteforce, solve_fixed_point};
use edca_core::output::emit_outputs;
use edca_core::scenario::{preset, preset_names, ControllerKind, Scenario};
use edca_core::PhyProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn p_opt() -> f64 {
    compute_p_opt::<f64>(&PhyProfile::default(), 1500).p_opt
}

/// Full-length runs: 10 replications of 120 s.
fn full_scale(name: &str) -> Scenario {
    let mut s = preset(name).expect("preset");
    s.duration_s = 120.0;
    s.replications = 10;
    s
}

fn run(s: &Scenario, c: ControllerKind) -> ExperimentMetrics {
    run_experiment(&s.with_controller(c)).expect("valid scenario")
}

fn optimal_point() -> Outcome {
    let p = p_opt();
    ((0.14..=0.18).contains(&p), format!("p_opt = {p:.6}, band [0.14, 0.18]"))
}

fn oracle_consistency() -> Outcome {
    let profile = PhyProfile::default();
    let p = p_opt();
    let mut worst = 0i32;
    let mut detail = String::new();
    for n in 2..=30 {
        let target = cw_targeting(n, &profile, 1500, p).unwrap();
        let best = optimal_cw_bruteforce(n, &profile, 1500).unwrap();
        let steps = (target.trailing_zeros() as i32 - best.trailing_zeros() as i32).abs();
        if steps > worst {
            worst = steps;
            detail = format!(" (n={n}: targeted {target}, best {best})");
        }
    }
    let best10 = optimal_cw_bruteforce(10, &profile, 1500).unwrap();
    (
        worst <= 1 && (best10 == 64 || best10 == 128),
        format!("max step gap {worst}{detail}; n=10 optimum {best10}"),
    )
}

fn cac_point_of_operation() -> Outcome {
    let s = preset("fig5_cac_point_of_operation").unwrap();
    let m = run_experiment(&s).unwrap();
    let run = &m.runs[0];
    let ap: Vec<_> = run.trace.iter().filter(|r| r.node == NodeId::Ap && r.t_ms > 20_000).collect();
    let stray: Vec<u32> = ap.iter().map(|r| r.cw_quantized).filter(|&c| c != 64 && c != 128).collect();
    let samples: Vec<f64> = ap.iter().filter_map(|r| r.p_obs).collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let p = p_opt();
    (
        stray.is_empty() && (mean - p).abs() <= 0.05,
        format!(
            "{} intervals after 20 s, {} outside {{64,128}}, mean p_obs {mean:.4} vs p_opt {p:.4}",
            ap.len(),
            stray.len()
        ),
    )
}

fn udp_throughput_gain() -> Outcome {
    let s = full_scale("fig7_udp_total");
    let edca = run(&s, ControllerKind::EdcaStatic).total_mbps().mean;
    let cac = run(&s, ControllerKind::Cac).total_mbps().mean;
    let dac = run(&s, ControllerKind::Dac).total_mbps().mean;
    let g_cac = cac / edca - 1.0;
    let g_dac = dac / edca - 1.0;
    let band = 0.30..=0.60;
    (
        band.contains(&g_cac) && band.contains(&g_dac),
        format!(
            "EDCA {edca:.2}, CAC {cac:.2} ({:+.1}%), DAC {dac:.2} ({:+.1}%) Mbps; band +30..+60%",
            100.0 * g_cac,
            100.0 * g_dac
        ),
    )
}

fn fairness_ordering(runs: &[(ControllerKind, ExperimentMetrics)]) -> Outcome {
    let jfi = |c| runs.iter().find(|(k, _)| *k == c).unwrap().1.jfi().mean;
    let (e, c, d) = (jfi(ControllerKind::EdcaStatic), jfi(ControllerKind::Cac), jfi(ControllerKind::Dac));
    (c > 0.98 && c > e && e > d, format!("JFI CAC {c:.4}, EDCA {e:.4}, DAC {d:.4}"))
}

fn snr_correlation(runs: &[(ControllerKind, ExperimentMetrics)]) -> Outcome {
    let r = |c| runs.iter().find(|(k, _)| *k == c).unwrap().1.snr_correlation().unwrap_or(0.0);
    let (e, c, d) = (r(ControllerKind::EdcaStatic), r(ControllerKind::Cac), r(ControllerKind::Dac));
    (e > 0.0 && d < 0.0 && c.abs() < 0.3, format!("r EDCA {e:+.3}, CAC {c:+.3}, DAC {d:+.3}"))
}

fn hidden_nodes() -> Outcome {
    let s = full_scale("fig10_hidden");
    let edca = run(&s, ControllerKind::EdcaStatic).total_mbps().mean;
    let cac = run(&s, ControllerKind::Cac).total_mbps().mean;
    let dac = run(&s, ControllerKind::Dac).total_mbps().mean;
    let ratio = cac / edca;
    let dac_rel = dac / edca - 1.0;
    (
        ratio >= 2.0 && dac_rel.abs() <= 0.15,
        format!(
            "EDCA {edca:.2}, CAC {cac:.2} (x{ratio:.2}, need >= 2), DAC {dac:.2} ({:+.1}%, need within 15%) Mbps",
            100.0 * dac_rel
        ),
    )
}

fn network_size_sweep() -> Outcome {
    let mut base = full_scale("fig11_sweep_n");
    base.replications = 3;
    let values: Vec<String> = (2..=18).map(|n| n.to_string()).collect();
    let totals = |c: ControllerKind| -> Vec<f64> {
        sweep_points(&base.with_controller(c), SweepAxis::NStations, &values)
            .unwrap()
            .iter()
            .map(|s| run_experiment(s).unwrap().total_mbps().mean)
            .collect()
    };
    let spread = |xs: &[f64]| {
        xs.iter().cloned().fold(f64::MIN, f64::max) / xs.iter().cloned().fold(f64::MAX, f64::min)
    };
    let cac = totals(ControllerKind::Cac);
    let dac = totals(ControllerKind::Dac);
    let edca = totals(ControllerKind::EdcaStatic);
    let drop = edca[16] / edca[0];
    (
        spread(&cac) < 1.15 && spread(&dac) < 1.15 && drop < 0.8,
        format!(
            "max/min CAC {:.3}, DAC {:.3}; EDCA n=18/n=2 = {drop:.3}",
            spread(&cac),
            spread(&dac)
        ),
    )
}

fn estimator_convergence() -> Outcome {
    let profile = PhyProfile::default();
    let (n, cw) = (10, 64);
    let fp = solve_fixed_point::<f64>(n, cw, profile.backoff_stages, &profile, 1500).unwrap();
    let mut w = World::new(WorldConfig {
        profile: profile.clone(),
        payload_bytes: 1500,
        snr_db: vec![30.0; n],
        hearing: HearingMatrix::full(n),
        capture: CaptureModel::none(),
        traffic: vec![TrafficModel::Saturated; n],
        control: ControlMode::Static { cw },
        gains_override: None,
        defer_threshold: 20,
        seed: 2024,
    })
    .unwrap();
    let reports = w.run_for(120_000_000);
    let r0: u64 = reports.iter().map(|r| r.ap_counters.r0).sum();
    let r1: u64 = reports.iter().map(|r| r.ap_counters.r1).sum();
    let p_obs = r1 as f64 / (r0 + r1) as f64;
    let mut f = 0u64;
    let mut t = 0u64;
    for r in &reports {
        for (c, &dropped) in r.station_counters.iter().zip(&r.drops_by_station) {
            let (df, dt) = c.interval_deltas_with_drops(profile.max_retry, dropped).unwrap();
            f += df;
            t += dt;
        }
    }
    let p_own = f as f64 / (f + t) as f64;
    let ok = r0 + r1 >= 100_000
        && f + t >= 100_000
        && (p_obs - fp.p).abs() <= 0.01
        && (p_own - fp.p).abs() <= 0.01;
    (
        ok,
        format!(
            "oracle p {:.4}; p_obs {p_obs:.4} over {} frames; p_own {p_own:.4} over {} attempts",
            fp.p,
            r0 + r1,
            f + t
        ),
    )
}

fn controller_algebra() -> Outcome {
    let p = p_opt();
    let gains = edca_core::control::compute_gains(p, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();

    // velocity form, away from the bounds
    let wide = CwBounds::new(16, 1 << 30).unwrap();
    for _ in 0..500 {
        let start = 1.0e6;
        let mut s = ControllerState::starting_at(start, gains, wide);
        let errors: Vec<f64> = (0..rng.random_range(1..100)).map(|_| rng.random_range(-0.5..0.5)).collect();
        for &e in &errors {
            s.pi_update(Some(e));
        }
        let integral: f64 = errors[..errors.len() - 1].iter().sum();
        let expected = start + gains.k_p * errors[errors.len() - 1] + gains.k_i * integral;
        if (s.cw_real - expected).abs() > 1e-7 * start {
            failures.push("velocity identity");
            break;
        }
    }

    // clamp absorption for errors in the CAC range
    let bounds = CwBounds::new(16, 1024).unwrap();
    for up in [true, false] {
        for _ in 0..200 {
            let mut s = ControllerState::cold_start(gains, bounds);
            let drive = if up { 1.0 - p } else { -p };
            for _ in 0..rng.random_range(0..30) {
                s.pi_update(Some(rng.random_range(-p..1.0 - p)));
            }
            let target = if up { 1024 } else { 16 };
            while !(s.is_saturated() && s.cw_quantized == target) {
                s.pi_update(Some(drive));
            }
            s.pi_update(Some(0.0));
            let settled = s.cw_real;
            for _ in 0..20 {
                s.pi_update(Some(0.0));
                if s.cw_quantized != target || s.cw_real != settled {
                    failures.push("clamp absorption");
                }
            }
        }
    }

    for _ in 0..10_000 {
        let x: f64 = rng.random_range(1.0..5000.0);
        let q = quantize_cw(x, bounds);
        if quantize_cw(q as f64, bounds) != q {
            failures.push("quantization idempotence");
            break;
        }
    }

    let mut w = World::new(WorldConfig {
        profile: PhyProfile::default(),
        payload_bytes: 1500,
        snr_db: vec![40.0, 35.0, 30.0, 25.0, 20.0, 15.0],
        hearing: HearingMatrix::full(6),
        capture: CaptureModel::threshold(10.0).unwrap(),
        traffic: vec![TrafficModel::Saturated; 6],
        control: ControlMode::Cac,
        gains_override: None,
        defer_threshold: 20,
        seed: 4,
    })
    .unwrap();
    for r in w.run_for(30_000_000) {
        if r.committed_cw.iter().any(|&c| c != r.committed_cw[0]) {
            failures.push("CAC uniformity");
            break;
        }
    }

    for _ in 0..10_000 {
        let x: f64 = rng.random_range(0.0..1.0);
        let at_target = dac_error(p, p, p) == 0.0;
        let homogeneous_zero = (dac_error(x, x, p).abs() < 1e-12) == ((x - p).abs() < 1e-12);
        if !at_target || !homogeneous_zero {
            failures.push("DAC fixed point");
            break;
        }
    }

    failures.dedup();
    (
        failures.is_empty(),
        if failures.is_empty() {
            "velocity identity, clamp absorption, idempotence, CAC uniformity, DAC fixed point".into()
        } else {
            format!("violated: {}", failures.join(", "))
        },
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    for name in preset_names() {
        let s = preset(name).unwrap();
        for tag in ["a", "b"] {
            let m = run_experiment(&s).unwrap();
            emit_outputs(&s, &m, &dir.path().join(name).join(tag)).unwrap();
        }
        for f in ["summary.csv", "trace.csv"] {
            let a = fs::read(dir.path().join(name).join("a").join(f)).unwrap();
            let b = fs::read(dir.path().join(name).join("b").join(f)).unwrap();
            if a != b {
                differing.push(format!("{name}/{f}"));
            }
        }
    }
    (
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} presets byte-identical", preset_names().count())
        } else {
            format!("differs: {}", differing.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let fig9 = full_scale("fig9_snr_correlation");
    let snr_runs: Vec<(ControllerKind, ExperimentMetrics)> =
        [ControllerKind::EdcaStatic, ControllerKind::Cac, ControllerKind::Dac]
            .into_iter()
            .map(|c| (c, run(&fig9, c)))
            .collect();

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("01 optimal collision probability", Box::new(optimal_point)),
        ("02 oracle consistency", Box::new(oracle_consistency)),
        ("03 CAC point of operation", Box::new(cac_point_of_operation)),
        ("04 UDP throughput gain", Box::new(udp_throughput_gain)),
        ("05 fairness ordering", Box::new(|| fairness_ordering(&snr_runs))),
        ("06 SNR correlation signs", Box::new(|| snr_correlation(&snr_runs))),
        ("07 hidden nodes", Box::new(hidden_nodes)),
        ("08 network size sweep", Box::new(network_size_sweep)),
        ("09 estimator convergence", Box::new(estimator_convergence)),
        ("10 controller algebra", Box::new(controller_algebra)),
        ("11 determinism", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
