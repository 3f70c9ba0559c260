//! 802.11 EDCA simulation with PI contention-window control.
//!
//! The analytical pieces (optimal operating point, gains, estimators, the
//! saturation oracle) are generic over the scalar type; the simulator and
//! harness run in `f64`. Concrete aliases for the common case live here.

pub mod control;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod mac;
pub mod metrics;
pub mod oracle;
pub mod output;
pub mod phy;
pub mod scalar;
pub mod scenario;

pub use error::{Error, Result};
pub use phy::{FrameSpec, PhyProfile};
pub use scalar::Real;
pub use scenario::Scenario;

pub type Controller = control::ControllerState<f64>;
pub type Gains = control::PiGains<f64>;
pub type Optimum = control::OptimalPoint<f64>;
pub type FixedPoint = oracle::FixedPointSolution<f64>;
