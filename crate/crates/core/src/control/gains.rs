use crate::error::{Error, Result};
use crate::scalar::Real;

/// Proportional and integral gains of the CW controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiGains<T> {
    pub k_p: T,
    pub k_i: T,
    /// Backoff stages the gains were derived for.
    pub m: u32,
}

/// Closed-form gains for target `p_opt` and `m` backoff stages:
///
/// ```text
/// D   = p_opt² · (1 + p_opt · Σ_{k=0}^{m−1} (2·p_opt)^k)
/// K_P = 0.8 / D
/// K_I = 0.4 / (0.85 · D)
/// ```
pub fn compute_gains<T: Real>(p_opt: T, m: u32) -> Result<PiGains<T>> {
    if !(p_opt > T::zero()) {
        return Err(Error::InvalidInput(format!("p_opt must be positive, got {p_opt}")));
    }
    if p_opt >= T::of(0.5) {
        return Err(Error::InvalidInput(format!(
            "p_opt = {p_opt} is outside the controller design range (< 0.5)"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let ratio = T::of(2.0) * p_opt;
    let series = (0..m).fold(T::zero(), |acc, k| acc + ratio.powi(k as i32));
    let denom = p_opt * p_opt * (T::one() + p_opt * series);
    Ok(PiGains { k_p: T::of(0.8) / denom, k_i: T::of(0.4) / (T::of(0.85) * denom), m })
}
