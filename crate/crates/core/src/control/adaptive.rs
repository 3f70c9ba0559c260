use crate::error::Result;
use crate::estimators::{estimate_p_obs_with, estimate_p_own, BeaconCounters};
use crate::scalar::Real;

use super::pi::ControllerState;

/// Centralized error: `e = p_obs − p_opt`.
pub fn cac_error<T: Real>(p_obs: T, p_opt: T) -> T {
    p_obs - p_opt
}

/// Distributed error: collision term `p_obs − p_opt` plus fairness term
/// `p_obs − p_own`, i.e. `2·p_obs − p_own − p_opt`.
pub fn dac_error<T: Real>(p_obs: T, p_own: T, p_opt: T) -> T {
    let collision = p_obs - p_opt;
    let fairness = p_obs - p_own;
    collision + fairness
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacOutput<T> {
    pub p_obs: Option<T>,
    pub error: Option<T>,
    /// CW_min announced in the next beacon.
    pub broadcast_cw: u32,
}

/// PI controller at the AP; its CW is announced to every station.
#[derive(Debug, Clone)]
pub struct CacController<T> {
    pub state: ControllerState<T>,
    pub p_opt: T,
    pub defer_threshold: u64,
}

impl<T: Real> CacController<T> {
    pub fn new(state: ControllerState<T>, p_opt: T, defer_threshold: u64) -> Self {
        CacController { state, p_opt, defer_threshold }
    }

    /// One beacon-interval update from the AP's sniffer counters.
    pub fn step(&mut self, counters: &BeaconCounters) -> CacOutput<T> {
        let p_obs = estimate_p_obs_with::<T>(counters, self.defer_threshold);
        let error = p_obs.map(|p| cac_error(p, self.p_opt));
        self.state.pi_update(error);
        CacOutput { p_obs, error, broadcast_cw: self.state.cw_quantized }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DacOutput<T> {
    pub p_obs: Option<T>,
    pub p_own: Option<T>,
    pub error: Option<T>,
    pub local_cw: u32,
}

/// Per-station PI controller; the result is applied locally only.
#[derive(Debug, Clone)]
pub struct DacController<T> {
    pub state: ControllerState<T>,
    pub p_opt: T,
    pub defer_threshold: u64,
}

impl<T: Real> DacController<T> {
    pub fn new(state: ControllerState<T>, p_opt: T, defer_threshold: u64) -> Self {
        DacController { state, p_opt, defer_threshold }
    }

    /// The update is skipped unless both estimates are available.
    pub fn step(
        &mut self,
        counters: &BeaconCounters,
        max_retry: u32,
        dropped: u64,
    ) -> Result<DacOutput<T>> {
        let p_obs = estimate_p_obs_with::<T>(counters, self.defer_threshold);
        let p_own = estimate_p_own::<T>(counters, max_retry, dropped)?;
        let error = match (p_obs, p_own) {
            (Some(o), Some(w)) => Some(dac_error(o, w, self.p_opt)),
            _ => None,
        };
        self.state.pi_update(error);
        Ok(DacOutput { p_obs, p_own, error, local_cw: self.state.cw_quantized })
    }
}
