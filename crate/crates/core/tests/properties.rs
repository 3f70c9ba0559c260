use edca_core::control::{
    compute_gains, compute_p_opt, dac_error, quantize_cw, ControllerState, CwBounds, PiGains,
};
use edca_core::estimators::{estimate_p_obs, estimate_p_own, BeaconCounters};
use edca_core::mac::{CaptureMode, CaptureModel, HearingMatrix, TrafficModel};
use edca_core::metrics::jain_index;
use edca_core::phy::expected_collision_length;
use edca_core::scenario::{ControllerKind, Scenario, SnrOrder};
use edca_core::PhyProfile;
use proptest::prelude::*;

fn reference_gains() -> (f64, PiGains<f64>) {
    let p_opt = compute_p_opt::<f64>(&PhyProfile::default(), 1500).p_opt;
    (p_opt, compute_gains(p_opt, 6).unwrap())
}

proptest! {
    #[test]
    fn pi_matches_velocity_form(errors in prop::collection::vec(prop::option::of(-0.5f64..0.5), 1..200)) {
        let (_, g) = reference_gains();
        // bounds wide enough that the clamp never engages
        let bounds = CwBounds::new(16, 1 << 30).unwrap();
        let start = 1.0e6;
        let mut s = ControllerState::starting_at(start, g, bounds);
        let applied: Vec<f64> = errors.iter().flatten().copied().collect();
        for e in &errors {
            s.pi_update(*e);
        }
        let last = applied.last().copied().unwrap_or(0.0);
        let integral: f64 = applied.iter().rev().skip(1).sum();
        let expected = start + g.k_p * last + g.k_i * integral;
        prop_assert!((s.cw_real - expected).abs() < 1e-7 * start);
        prop_assert_eq!(s.prev_error, last);
    }

    #[test]
    fn clamped_state_holds_bound_under_zero_error(
        push in prop::collection::vec(-0.2f64..0.85, 1..60),
        upward in any::<bool>(),
        zeros in 1usize..50,
    ) {
        let (p_opt, g) = reference_gains();
        let bounds = CwBounds::new(16, 1024).unwrap();
        let mut s = ControllerState::cold_start(g, bounds);
        let drive = if upward { 1.0 - p_opt } else { -p_opt };
        for e in push.iter().map(|e| e.clamp(-p_opt, 1.0 - p_opt)) {
            s.pi_update(Some(e));
        }
        while !s.is_saturated() || (s.cw_quantized != 1024 && upward) || (s.cw_quantized != 16 && !upward) {
            s.pi_update(Some(drive));
        }
        let bound = s.cw_quantized;
        s.pi_update(Some(0.0));
        let settled = s.cw_real;
        for _ in 0..zeros {
            s.pi_update(Some(0.0));
            prop_assert_eq!(s.cw_quantized, bound);
            prop_assert_eq!(s.cw_real, settled);
        }
    }

    #[test]
    fn quantize_is_idempotent(x in 1.0f64..5000.0) {
        let b = CwBounds::new(16, 1024).unwrap();
        let q = quantize_cw(x, b);
        prop_assert!(q.is_power_of_two() && (16..=1024).contains(&q));
        prop_assert_eq!(quantize_cw(q as f64, b), q);
        prop_assert_eq!(quantize_cw(x as f32, b), q);
    }

    #[test]
    fn homogeneous_collision_length_is_the_payload(tau in 0.001f64..0.999, n in 2usize..12, len in 1u32..2304) {
        let got: f64 = expected_collision_length(tau, &vec![len; n]).unwrap();
        prop_assert!((got - len as f64).abs() < 1e-9 * len as f64);
    }

    #[test]
    fn estimators_are_scale_free(r0 in 0u64..500, r1 in 0u64..500, f in 0u64..500, t in 0u64..500, k in 1u64..50) {
        let base = BeaconCounters {
            r0, r1,
            successes_cumulative: 1000 + t,
            failures_cumulative: 200 + f,
            prev_successes: 1000,
            prev_failures: 200,
        };
        let scaled = BeaconCounters {
            r0: r0 * k, r1: r1 * k,
            successes_cumulative: 1000 * k + t * k,
            failures_cumulative: 200 * k + f * k,
            prev_successes: 1000 * k,
            prev_failures: 200 * k,
        };
        let own = estimate_p_own::<f64>(&base, 7, 0).unwrap();
        let own_scaled = estimate_p_own::<f64>(&scaled, 7, 0).unwrap();
        prop_assert_eq!(own, own_scaled);
        if r0 + r1 >= 20 {
            prop_assert_eq!(estimate_p_obs::<f64>(&base), estimate_p_obs::<f64>(&scaled));
        }
    }

    #[test]
    fn jain_index_is_bounded(xs in prop::collection::vec(0.0f64..100.0, 1..40)) {
        prop_assume!(xs.iter().any(|&x| x > 0.0));
        let j = jain_index(&xs).unwrap();
        let n = xs.len() as f64;
        prop_assert!(j >= 1.0 / n - 1e-12 && j <= 1.0 + 1e-12);
    }

    #[test]
    fn dac_equilibrium_under_homogeneity(p in 0.0f64..1.0, p_opt in 0.01f64..0.49) {
        // with p_obs = p_own the error vanishes exactly at p_opt
        let e = dac_error(p, p, p_opt);
        prop_assert!((e - (p - p_opt)).abs() < 1e-12);
        prop_assert_eq!(dac_error(p_opt, p_opt, p_opt), 0.0);
    }

    #[test]
    fn scenario_round_trips(
        snr in prop::collection::vec(-5.0f64..60.0, 1..12),
        ctrl in 0usize..3,
        order in 0usize..3,
        threshold in 0.5f64..20.0,
        capture_on in any::<bool>(),
        hidden in any::<bool>(),
        silence in 0.0f64..120.0,
        onoff_mask in any::<u16>(),
        duration in 1.0f64..300.0,
        seed in any::<u64>(),
        gains in prop::option::of((0.1f64..100.0, 0.1f64..100.0)),
    ) {
        let n = snr.len();
        let mut s = Scenario::homogeneous("prop", n, 30.0);
        s.snr_db = snr;
        s.controller = [ControllerKind::EdcaStatic, ControllerKind::Cac, ControllerKind::Dac][ctrl];
        s.snr_order = [SnrOrder::Listed, SnrOrder::Ascending, SnrOrder::Descending][order];
        s.capture = CaptureModel {
            mode: if capture_on { CaptureMode::Threshold } else { CaptureMode::None },
            threshold_db: threshold,
        };
        if hidden && n >= 2 {
            s.hearing = HearingMatrix::with_hidden_pairs(n, &[(0, n - 1)]).unwrap();
        }
        s.onoff_mean_silence_s = silence;
        s.traffic = (0..n)
            .map(|i| if onoff_mask & (1 << i) != 0 {
                TrafficModel::OnOff { burst_bytes: s.onoff_burst_bytes, mean_silence_s: silence }
            } else {
                TrafficModel::Saturated
            })
            .collect();
        s.duration_s = duration;
        s.seed = seed;
        s.gains = gains;
        prop_assert_eq!(Scenario::parse(&s.emit()).unwrap(), s);
    }

    #[test]
    fn sweep_order_depends_only_on_snr(snr in prop::collection::vec(0.0f64..50.0, 1..18), k in 1usize..18) {
        let mut s = Scenario::homogeneous("order", snr.len(), 30.0);
        s.snr_db = snr.clone();
        s.snr_order = SnrOrder::Ascending;
        let k = k.min(snr.len());
        let sub = s.with_stations(k).unwrap();
        let mut sorted = snr.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert_eq!(&sub.snr_db[..], &sorted[..k]);
        let mut shuffled = s.clone();
        shuffled.controller = ControllerKind::Dac;
        prop_assert_eq!(shuffled.with_stations(k).unwrap().snr_db, sub.snr_db);
    }
}

#[test]
fn dac_error_alone_does_not_pin_both_estimates() {
    // zero error is reachable with p_obs != p_own; equality needs the
    // homogeneous coupling p_obs = p_own
    let e = dac_error(0.2f64, 0.24, 0.16);
    assert!(e.abs() < 1e-12);
}
