use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::estimators::DriverStats;
use crate::phy::{FrameSpec, PhyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureOutcome {
    /// The frame stays queued with a doubled window.
    Retry,
    /// The retry limit was exhausted and the frame discarded.
    Dropped,
}

/// Backoff and accounting state of one station.
#[derive(Debug, Clone)]
pub struct StationState {
    pub id: usize,
    /// CW_min currently in force (a power of two).
    pub cw_min: u32,
    /// CW_max derived from `cw_min`: `2^m · cw_min`, capped at the profile ceiling.
    pub cw_max: u32,
    pub backoff: u32,
    pub retry_count: u32,
    pub max_retry: u32,
    pub pending: Option<FrameSpec>,
    pub snr_db: f64,
    pub driver: DriverStats,
    /// Acknowledged frames (ideal accounting, independent of the driver formulas).
    pub acked: u64,
    pub dropped: u64,
    pub attempts: u64,
    pub delivered_bytes: u64,
    rng: ChaCha8Rng,
}

impl StationState {
    pub fn new(id: usize, snr_db: f64, profile: &PhyProfile, rng: ChaCha8Rng) -> Self {
        StationState {
            id,
            cw_min: profile.cw_floor,
            cw_max: profile.cw_max_for(profile.cw_floor),
            backoff: 0,
            retry_count: 0,
            max_retry: profile.max_retry,
            pending: None,
            snr_db,
            driver: DriverStats::default(),
            acked: 0,
            dropped: 0,
            attempts: 0,
            delivered_bytes: 0,
            rng,
        }
    }

    /// Window for the current attempt: `min(2^retry · CW_min, CW_max)`.
    pub fn current_cw(&self) -> u32 {
        let shifted = (self.cw_min as u64) << self.retry_count.min(32);
        shifted.min(self.cw_max as u64) as u32
    }

    pub fn retry_flag(&self) -> bool {
        self.retry_count > 0
    }

    pub fn is_backlogged(&self) -> bool {
        self.pending.is_some()
    }

    /// Adopt a new CW_min. The running backoff counter is left alone; the new
    /// window applies from the next draw.
    pub fn set_cw_min(&mut self, cw_min: u32, profile: &PhyProfile) {
        if (cw_min as u64) << profile.backoff_stages > profile.cw_ceiling as u64 {
            log::trace!("station {}: CW_max capped at {}", self.id, profile.cw_ceiling);
        }
        self.cw_min = cw_min;
        self.cw_max = profile.cw_max_for(cw_min);
    }

    pub fn draw_backoff(&mut self) {
        let cw = self.current_cw();
        self.backoff = self.rng.random_range(0..cw);
    }

    /// Queue a new frame and start its backoff.
    pub fn enqueue(&mut self, frame: FrameSpec) {
        debug_assert!(self.pending.is_none());
        self.pending = Some(frame);
        self.retry_count = 0;
        self.draw_backoff();
    }

    /// Account for an attempt of the pending frame; returns its retry flag.
    pub fn begin_attempt(&mut self) -> bool {
        self.attempts += 1;
        if self.retry_count == 0 {
            self.driver.tx_packets += 1;
        } else {
            self.driver.tx_longretry += 1;
        }
        self.retry_flag()
    }

    /// The pending frame was acknowledged. Returns its payload size.
    pub fn on_success(&mut self) -> u32 {
        let frame = self.pending.take().expect("success without a pending frame");
        self.acked += 1;
        self.delivered_bytes += frame.payload_bytes as u64;
        self.retry_count = 0;
        frame.payload_bytes
    }

    /// The pending frame was not acknowledged.
    pub fn on_failure(&mut self) -> FailureOutcome {
        debug_assert!(self.pending.is_some());
        if self.retry_count >= self.max_retry {
            self.pending = None;
            self.retry_count = 0;
            self.dropped += 1;
            self.driver.tx_xretries += 1;
            FailureOutcome::Dropped
        } else {
            self.retry_count += 1;
            self.draw_backoff();
            FailureOutcome::Retry
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
