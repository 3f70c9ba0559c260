//! One virtual slot of a single collision domain.
//!
//! A virtual slot is either an idle slot or one busy period. At every slot
//! boundary a backlogged station whose counter is zero transmits and every
//! other backlogged station decrements its counter once (the EDCA boundary
//! rule), then holds it frozen until the medium is idle again.

use crate::error::{Error, Result};
use crate::phy::PhyProfile;

use super::station::{FailureOutcome, StationState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaptureMode {
    None,
    Threshold,
}

/// Receiver capture at the AP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaptureModel {
    pub mode: CaptureMode,
    /// Minimum SNR margin over the strongest interferer, dB.
    pub threshold_db: f64,
}

impl CaptureModel {
    pub const DEFAULT_THRESHOLD_DB: f64 = 10.0;

    pub fn none() -> Self {
        CaptureModel { mode: CaptureMode::None, threshold_db: Self::DEFAULT_THRESHOLD_DB }
    }

    pub fn threshold(threshold_db: f64) -> Result<Self> {
        if !(threshold_db > 0.0) || !threshold_db.is_finite() {
            return Err(Error::config("capture_threshold_db", "must be positive and finite"));
        }
        Ok(CaptureModel { mode: CaptureMode::Threshold, threshold_db })
    }

    /// Whether a frame at `snr_db` survives an interferer at `interferer_db`.
    pub fn captures(&self, snr_db: f64, interferer_db: f64) -> bool {
        self.mode == CaptureMode::Threshold && snr_db - interferer_db >= self.threshold_db
    }
}

/// Winner among overlapping transmissions `(id, snr_db)`, if any.
///
/// The strongest frame is decoded when it beats the runner-up by at least the
/// threshold; ties never capture.
pub fn resolve_capture(transmitters: &[(usize, f64)], capture: &CaptureModel) -> Option<usize> {
    if transmitters.len() < 2 || capture.mode == CaptureMode::None {
        return None;
    }
    let (best_idx, best) = transmitters
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, t)| (i, *t))?;
    let runner_up = transmitters
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best_idx)
        .map(|(_, t)| t.1)
        .fold(f64::NEG_INFINITY, f64::max);
    capture.captures(best.1, runner_up).then_some(best.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Idle,
    Success,
    Collision,
    CaptureSuccess,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotOutcome {
    pub kind: SlotKind,
    /// Station ids that transmitted.
    pub transmitters: Vec<usize>,
    pub decoded: Option<usize>,
    /// Duration of the virtual slot, µs.
    pub duration_us: u64,
    /// Retry flags of the transmitted frames, aligned with `transmitters`.
    pub retry_flags: Vec<bool>,
}

/// Advance a fully connected network by one virtual slot.
///
/// With `saturated`, a station whose frame completes (acknowledged or
/// dropped) immediately queues another of the same size.
pub fn run_slot(
    stations: &mut [StationState],
    capture: &CaptureModel,
    profile: &PhyProfile,
    saturated: bool,
) -> SlotOutcome {
    let mut transmitters = Vec::new();
    for (idx, st) in stations.iter_mut().enumerate() {
        if !st.is_backlogged() {
            continue;
        }
        if st.backoff == 0 {
            transmitters.push(idx);
        } else {
            st.backoff -= 1;
        }
    }

    if transmitters.is_empty() {
        return SlotOutcome {
            kind: SlotKind::Idle,
            transmitters,
            decoded: None,
            duration_us: profile.slot_us,
            retry_flags: Vec::new(),
        };
    }

    let retry_flags: Vec<bool> = transmitters.iter().map(|&i| stations[i].begin_attempt()).collect();
    let airtime = transmitters
        .iter()
        .map(|&i| profile.data_airtime_us(stations[i].pending.expect("backlogged").payload_bytes))
        .max()
        .unwrap_or(0);

    let decoded = if transmitters.len() == 1 {
        Some(transmitters[0])
    } else {
        let snrs: Vec<(usize, f64)> =
            transmitters.iter().map(|&i| (i, stations[i].snr_db)).collect();
        resolve_capture(&snrs, capture)
    };

    for &i in &transmitters {
        let st = &mut stations[i];
        let frame = st.pending.expect("backlogged");
        let done = if Some(i) == decoded {
            st.on_success();
            true
        } else {
            st.on_failure() == FailureOutcome::Dropped
        };
        if done && saturated {
            st.enqueue(frame);
        }
    }

    let (kind, duration_us) = match (transmitters.len(), decoded) {
        (1, _) => (SlotKind::Success, airtime + profile.sifs_us + profile.ack_us + profile.aifs_us),
        (_, Some(_)) => {
            (SlotKind::CaptureSuccess, airtime + profile.sifs_us + profile.ack_us + profile.aifs_us)
        }
        (_, None) => (SlotKind::Collision, airtime + profile.eifs_us),
    };
    SlotOutcome { kind, transmitters, decoded, duration_us, retry_flags }
}
