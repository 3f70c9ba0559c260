//! Saturation fixed-point model of binary exponential backoff.
//!
//! Each station is assumed to see a constant, independent conditional
//! collision probability `p`. Given `p`, the per-slot attempt probability
//! `τ(p)` follows from the mean time spent in each backoff stage; the system
//! closes with `p = 1 − (1 − τ)^(n−1)`. Retries are unbounded, and windows
//! stop doubling at `min(2^m · CW_min, ceiling)`.

use crate::error::{Error, Result};
use crate::phy::PhyProfile;
use crate::scalar::Real;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSolution<T> {
    /// Per-slot transmission probability of each station.
    pub tau: T,
    /// Conditional collision probability seen by a transmitter.
    pub p: T,
    /// Saturation throughput in Mbit/s.
    pub throughput_mbps: T,
    pub cw_min: u32,
    pub n: usize,
}

/// Attempt probability per slot for a station whose attempts fail with
/// probability `p`. Stage `j` uses window `W_j = min(2^j·cw_min, cw_max)` and
/// occupies `(W_j + 1)/2` slots on average (uniform counter plus the
/// transmission slot).
pub fn tau_given_p<T: Real>(p: T, cw_min: u32, cw_max: u32) -> T {
    let half = T::of(0.5);
    let mut attempts = T::zero();
    let mut slots = T::zero();
    let mut reach = T::one();
    let mut w = cw_min.max(1);
    loop {
        let w_t = T::of_u64(w as u64);
        if w >= cw_max {
            // geometric tail at the capped window
            let tail = reach / (T::one() - p);
            attempts = attempts + tail;
            slots = slots + tail * (w_t + T::one()) * half;
            break;
        }
        attempts = attempts + reach;
        slots = slots + reach * (w_t + T::one()) * half;
        reach = reach * p;
        w = w.saturating_mul(2).min(cw_max);
    }
    attempts / slots
}

fn residual<T: Real>(p: T, n: usize, cw_min: u32, cw_max: u32) -> T {
    let tau = tau_given_p(p, cw_min, cw_max);
    T::one() - (T::one() - tau).powi(n as i32 - 1) - p
}

/// Solve for `(τ, p)` with `n` saturated stations all using `cw_min` and `m`
/// doubling stages, then evaluate the saturation throughput.
pub fn solve_fixed_point<T: Real>(
    n: usize,
    cw_min: u32,
    m: u32,
    profile: &PhyProfile,
    payload: u32,
) -> Result<FixedPointSolution<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("fixed point needs at least one station".into()));
    }
    if cw_min == 0 {
        return Err(Error::InvalidInput("cw_min must be positive".into()));
    }
    let cw_max = ((cw_min as u64) << m).min(profile.cw_ceiling as u64).max(cw_min as u64) as u32;

    let p = if n == 1 {
        T::zero()
    } else {
        // residual is decreasing in p: positive at 0, negative near 1
        let tol = T::of(1e-12).max(T::epsilon() * T::of(64.0));
        let (mut lo, mut hi) = (T::zero(), T::one() - T::epsilon());
        let mut mid = (lo + hi) * T::of(0.5);
        let mut converged = false;
        for _ in 0..MAX_BISECTIONS {
            mid = (lo + hi) * T::of(0.5);
            let r = residual(mid, n, cw_min, cw_max);
            if r.abs() < tol {
                converged = true;
                break;
            }
            if r > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::epsilon() {
                converged = residual(mid, n, cw_min, cw_max).abs() < tol.sqrt();
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { n, cw: cw_min, iterations: MAX_BISECTIONS });
        }
        mid
    };

    let tau = tau_given_p(p, cw_min, cw_max);
    let q = T::one() - tau;
    let nn = T::of_u64(n as u64);
    let p_idle = q.powi(n as i32);
    let p_tr = T::one() - p_idle;
    let p_succ = nn * tau * q.powi(n as i32 - 1);
    let p_coll = p_tr - p_succ;
    let t_e = profile.slot_duration::<T>();
    let t_s = profile.success_duration::<T>(payload);
    let t_c = profile.collision_duration::<T>(payload);
    let bits = T::of_u64(8 * payload as u64);
    let mean_slot = p_idle * t_e + p_succ * t_s + p_coll * t_c;
    Ok(FixedPointSolution { tau, p, throughput_mbps: p_succ * bits / mean_slot, cw_min, n })
}

/// Power-of-two CW values between the profile bounds.
pub fn cw_grid(profile: &PhyProfile) -> Vec<u32> {
    let mut cw = profile.cw_floor;
    let mut out = Vec::new();
    while cw <= profile.cw_ceiling {
        out.push(cw);
        cw *= 2;
    }
    out
}

/// Fixed-point solution at every CW in the grid.
pub fn throughput_grid<T: Real>(
    n: usize,
    profile: &PhyProfile,
    payload: u32,
) -> Result<Vec<FixedPointSolution<T>>> {
    cw_grid(profile)
        .into_iter()
        .map(|cw| solve_fixed_point(n, cw, profile.backoff_stages, profile, payload))
        .collect()
}

/// The grid CW with the highest fixed-point throughput.
pub fn optimal_cw_bruteforce(n: usize, profile: &PhyProfile, payload: u32) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidInput("brute-force optimum needs n >= 2".into()));
    }
    let grid = throughput_grid::<f64>(n, profile, payload)?;
    let best = grid
        .iter()
        .max_by(|a, b| a.throughput_mbps.total_cmp(&b.throughput_mbps))
        .expect("grid is never empty");
    Ok(best.cw_min)
}

/// The grid CW whose fixed-point collision probability is closest to
/// `p_target`: where a controller regulating `p` would settle.
pub fn cw_targeting(n: usize, profile: &PhyProfile, payload: u32, p_target: f64) -> Result<u32> {
    let grid = throughput_grid::<f64>(n, profile, payload)?;
    let best = grid
        .iter()
        .min_by(|a, b| (a.p - p_target).abs().total_cmp(&(b.p - p_target).abs()))
        .expect("grid is never empty");
    Ok(best.cw_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_station_has_no_collisions() {
        let profile = PhyProfile::default();
        for cw in cw_grid(&profile) {
            let s: FixedPointSolution<f64> = solve_fixed_point(1, cw, 6, &profile, 1500).unwrap();
            assert_eq!(s.p, 0.0);
            assert!((s.tau - 2.0 / (cw as f64 + 1.0)).abs() < 1e-15);
            // one frame per (mean backoff + success cycle)
            let cycle = (cw as f64 - 1.0) / 2.0 * 9.0 + 607.0;
            assert!((s.throughput_mbps - 12_000.0 / cycle).abs() < 1e-9);
        }
    }

    #[test]
    fn residual_below_tolerance() {
        let profile = PhyProfile::default();
        for n in [2, 5, 10, 30] {
            for cw in [16, 128, 1024] {
                let s: FixedPointSolution<f64> =
                    solve_fixed_point(n, cw, 6, &profile, 1500).unwrap();
                let r = 1.0 - (1.0 - s.tau).powi(n as i32 - 1) - s.p;
                assert!(r.abs() < 1e-10, "n={n} cw={cw} residual {r}");
            }
        }
    }

    #[test]
    fn tau_without_collisions() {
        assert!((tau_given_p(0.0f64, 16, 1024) - 2.0 / 17.0).abs() < 1e-15);
        // capped window: no doubling possible
        assert!((tau_given_p(0.4f64, 1024, 1024) - 2.0 / 1025.0).abs() < 1e-15);
    }

    #[test]
    fn grid_spans_bounds() {
        assert_eq!(cw_grid(&PhyProfile::default()), vec![16, 32, 64, 128, 256, 512, 1024]);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let profile = PhyProfile::default();
        assert!(solve_fixed_point::<f64>(0, 16, 6, &profile, 1500).is_err());
        assert!(optimal_cw_bruteforce(1, &profile, 1500).is_err());
    }
}
