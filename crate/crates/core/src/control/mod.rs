//! Contention-window control: the optimal operating point, the PI gains that
//! follow from it, and the centralized (AP) and distributed (per-station)
//! adaptive controllers built on one shared PI recurrence.

mod adaptive;
mod gains;
mod optimal;
mod pi;

pub use adaptive::{cac_error, dac_error, CacController, CacOutput, DacController, DacOutput};
pub use gains::{compute_gains, PiGains};
pub use optimal::{compute_p_opt, p_opt_from_durations, OptimalPoint};
pub use pi::{quantize_cw, CwBounds, ControllerState};
