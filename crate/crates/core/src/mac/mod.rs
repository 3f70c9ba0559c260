//! EDCA channel access.
//!
//! [`slotted`] steps a single collision domain one virtual slot at a time;
//! [`engine`] is the event-driven simulator used for full experiments, which
//! also handles partial carrier-sense visibility (hidden nodes) in continuous
//! time. Both share the per-station backoff rules in [`station`].

pub mod engine;
pub mod slotted;
pub mod station;
pub mod topology;
pub mod traffic;

pub use engine::{BeaconReport, ControlMode, NodeId, TraceRecord, World, WorldConfig};
pub use slotted::{resolve_capture, run_slot, CaptureMode, CaptureModel, SlotKind, SlotOutcome};
pub use station::{FailureOutcome, StationState};
pub use topology::HearingMatrix;
pub use traffic::TrafficModel;
