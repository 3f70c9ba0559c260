use edca_core::phy::expected_collision_length;
use edca_core::control::{compute_gains, compute_p_opt, p_opt_from_durations};
use edca_core::PhyProfile;

/// E[longest frame | collision] by enumerating every transmit pattern.
fn enumerate_collision_length(tau: f64, payloads: &[u32]) -> f64 {
    let n = payloads.len();
    let mut mass = 0.0;
    let mut acc = 0.0;
    for pattern in 0u32..(1 << n) {
        if pattern.count_ones() < 2 {
            continue;
        }
        let mut prob = 1.0;
        let mut longest = 0;
        for (i, &len) in payloads.iter().enumerate() {
            if pattern & (1 << i) != 0 {
                prob *= tau;
                longest = longest.max(len);
            } else {
                prob *= 1.0 - tau;
            }
        }
        mass += prob;
        acc += prob * longest as f64;
    }
    acc / mass
}

#[test]
fn collision_length_matches_enumeration() {
    let payloads = [500, 1000, 1500];
    let expected = enumerate_collision_length(0.2, &payloads);
    // (0.072·1500 + 0.032·1000) / 0.104
    assert!((expected - 1346.1538461538462).abs() < 1e-9);
    let got: f64 = expected_collision_length(0.2, &payloads).unwrap();
    assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");

    for tau in [0.01, 0.1, 0.37, 0.9] {
        for payloads in [vec![100, 100, 2000, 2000], vec![40, 80, 1500, 1500, 1800], vec![1500, 1500]] {
            let want = enumerate_collision_length(tau, &payloads);
            let got: f64 = expected_collision_length(tau, &payloads).unwrap();
            assert!((got - want).abs() < 1e-9 * want, "tau={tau} {payloads:?}");
        }
    }
}

#[test]
fn reference_profile_durations() {
    let p = PhyProfile::default();
    assert_eq!(p.data_airtime_us(1500), 520);
    assert_eq!(p.collision_duration::<f64>(1500), 623.0);
    assert_eq!(p.success_duration::<f64>(1500), 607.0);
}

#[test]
fn optimal_point_and_gains_golden() {
    // 1 − exp(−sqrt(18/623)) evaluated at 50 digits
    let op = compute_p_opt::<f64>(&PhyProfile::default(), 1500);
    assert!((op.p_opt - 0.1563164621901198).abs() < 1e-15);

    // gains from the closed form summed independently at 50 digits
    let g = compute_gains(op.p_opt, 6).unwrap();
    assert!((g.k_p - 26.6787108626341).abs() < 1e-9);
    assert!((g.k_i - 15.6933593309612).abs() < 1e-9);
    let g = compute_gains(0.16f64, 6).unwrap();
    assert!((g.k_p - 25.30279403204119).abs() < 1e-9);
    assert!((g.k_i - 14.883996489436).abs() < 1e-9);

    // T_e = T_c / 2 forces the exponent to one
    let half = p_opt_from_durations(9.0f64, 18.0);
    assert!((half.p_opt - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
}
