use crate::phy::PhyProfile;
use crate::scalar::Real;

/// Target operating point of a saturated WLAN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPoint<T> {
    /// Target conditional collision probability.
    pub p_opt: T,
    pub t_e: T,
    pub t_c: T,
}

impl<T: Real> OptimalPoint<T> {
    /// Optimal per-slot transmission probability for `n` stations,
    /// `τ_opt = (1/n)·sqrt(2·T_e/T_c)`.
    pub fn tau_opt(&self, n: usize) -> T {
        (T::of(2.0) * self.t_e / self.t_c).sqrt() / T::of_u64(n as u64)
    }

    /// Exact finite-`n` collision probability at `τ_opt`,
    /// `1 − (1 − τ_opt)^(n−1)`; tends to `p_opt` as `n` grows.
    pub fn p_col_exact(&self, n: usize) -> T {
        T::one() - (T::one() - self.tau_opt(n)).powi(n as i32 - 1)
    }
}

/// `p_opt = 1 − exp(−sqrt(2·T_e / T_c))`.
pub fn p_opt_from_durations<T: Real>(t_e: T, t_c: T) -> OptimalPoint<T> {
    let p_opt = T::one() - (-(T::of(2.0) * t_e / t_c).sqrt()).exp();
    OptimalPoint { p_opt, t_e, t_c }
}

/// Optimal point for a profile, with `T_c` taken from the collision duration
/// of `collision_payload` bytes. Independent of the number of stations.
pub fn compute_p_opt<T: Real>(profile: &PhyProfile, collision_payload: u32) -> OptimalPoint<T> {
    p_opt_from_durations(profile.slot_duration(), profile.collision_duration(collision_payload))
}
