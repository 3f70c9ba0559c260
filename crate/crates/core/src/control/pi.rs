use crate::error::{Error, Result};
use crate::scalar::Real;

use super::gains::PiGains;

/// Inclusive bounds on `CW_min`, both powers of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CwBounds {
    pub floor: u32,
    pub ceiling: u32,
}

impl CwBounds {
    pub fn new(floor: u32, ceiling: u32) -> Result<Self> {
        if !floor.is_power_of_two() || !ceiling.is_power_of_two() || floor >= ceiling {
            return Err(Error::InvalidInput(format!(
                "CW bounds must be powers of two with floor < ceiling, got [{floor}, {ceiling}]"
            )));
        }
        Ok(CwBounds { floor, ceiling })
    }

    fn clamp<T: Real>(&self, x: T) -> T {
        x.max(T::of_u64(self.floor as u64)).min(T::of_u64(self.ceiling as u64))
    }
}

/// `2^rint(log2(cw))`, ties to even on the exponent, clamped to `bounds`.
pub fn quantize_cw<T: Real>(cw_real: T, bounds: CwBounds) -> u32 {
    let clamped = bounds.clamp(cw_real);
    let exp = clamped.log2().round_half_even();
    let exp = exp.to_u32().unwrap_or(0).min(31);
    (1u32 << exp).clamp(bounds.floor, bounds.ceiling)
}

/// Integrator state of one CW controller.
///
/// The recurrence runs on the unquantized `cw_real`; only the committed value
/// is snapped to a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState<T> {
    pub cw_real: T,
    pub cw_quantized: u32,
    pub prev_error: T,
    pub gains: PiGains<T>,
    pub bounds: CwBounds,
}

impl<T: Real> ControllerState<T> {
    /// Cold start at the lower bound with zero error history.
    pub fn cold_start(gains: PiGains<T>, bounds: CwBounds) -> Self {
        Self::starting_at(T::of_u64(bounds.floor as u64), gains, bounds)
    }

    pub fn starting_at(cw_real: T, gains: PiGains<T>, bounds: CwBounds) -> Self {
        let cw_real = bounds.clamp(cw_real);
        ControllerState {
            cw_real,
            cw_quantized: quantize_cw(cw_real, bounds),
            prev_error: T::zero(),
            gains,
            bounds,
        }
    }

    /// `CW[t] = CW[t−1] + K_P·e[t] + (K_I − K_P)·e[t−1]`, clamped, then
    /// quantized. A deferred estimate (`None`) leaves the state untouched.
    pub fn pi_update(&mut self, error: Option<T>) {
        let Some(e) = error else { return };
        let g = &self.gains;
        let next = self.cw_real + g.k_p * e + (g.k_i - g.k_p) * self.prev_error;
        self.cw_real = self.bounds.clamp(next);
        self.cw_quantized = quantize_cw(self.cw_real, self.bounds);
        self.prev_error = e;
    }

    /// Whether the last update hit one of the bounds.
    pub fn is_saturated(&self) -> bool {
        self.cw_real <= T::of_u64(self.bounds.floor as u64)
            || self.cw_real >= T::of_u64(self.bounds.ceiling as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds() -> CwBounds {
        CwBounds::new(16, 1024).unwrap()
    }

    fn gains() -> PiGains<f64> {
        PiGains { k_p: 25.3, k_i: 14.9, m: 6 }
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(quantize_cw(115.0f64, bounds()), 128);
        assert_eq!(quantize_cw(90.0f64, bounds()), 64);
        assert_eq!(quantize_cw(16.0f64, bounds()), 16);
        assert_eq!(quantize_cw(1024.0f64, bounds()), 1024);
        assert_eq!(quantize_cw(3.0f64, bounds()), 16);
        assert_eq!(quantize_cw(5000.0f64, bounds()), 1024);
    }

    #[test]
    fn update_example() {
        let mut s = ControllerState::starting_at(64.0, gains(), bounds());
        s.pi_update(Some(0.1));
        assert!((s.cw_real - 66.53).abs() < 1e-9);
        assert_eq!(s.cw_quantized, 64);
        assert_eq!(s.prev_error, 0.1);
    }

    #[test]
    fn clamps_at_ceiling() {
        let mut s = ControllerState::starting_at(1020.0, gains(), bounds());
        s.pi_update(Some(0.9));
        assert_eq!(s.cw_real, 1024.0);
        assert_eq!(s.cw_quantized, 1024);
        assert!(s.is_saturated());
    }

    #[test]
    fn zero_error_is_equilibrium() {
        let mut s = ControllerState::starting_at(200.0, gains(), bounds());
        let before = s.clone();
        s.pi_update(Some(0.0));
        assert_eq!(s, before);
    }

    #[test]
    fn deferred_update_freezes_everything() {
        let mut s = ControllerState::starting_at(100.0, gains(), bounds());
        s.pi_update(Some(0.05));
        let before = s.clone();
        s.pi_update(None);
        assert_eq!(s, before);
    }

    #[test]
    fn cold_start_at_floor() {
        let s = ControllerState::cold_start(gains(), bounds());
        assert_eq!(s.cw_real, 16.0);
        assert_eq!(s.cw_quantized, 16);
        assert_eq!(s.prev_error, 0.0);
    }

    #[test]
    fn bounds_validation() {
        assert!(CwBounds::new(16, 16).is_err());
        assert!(CwBounds::new(15, 1024).is_err());
    }
}
