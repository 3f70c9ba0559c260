//! Collision-probability estimators.
//!
//! `p_obs` comes from the retry flags of overheard successful frames;
//! `p_own` from the transmitter's cumulative driver statistics.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum number of sniffed frames before `p_obs` is trusted.
pub const DEFAULT_DEFER_THRESHOLD: u64 = 20;

/// Cumulative transmit statistics as exposed by the wireless driver.
///
/// These never reset: estimators work on differences between two snapshots.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DriverStats {
    /// Unique frames handed to the radio.
    pub tx_packets: u64,
    /// Frames sent without ACK (management traffic).
    pub tx_noack: u64,
    /// Total retransmissions.
    pub tx_longretry: u64,
    /// Frames discarded after exhausting the retry limit.
    pub tx_xretries: u64,
}

impl DriverStats {
    /// `Successes = tx_packets − tx_xretries − tx_noack`
    pub fn successes(&self) -> u64 {
        self.tx_packets.saturating_sub(self.tx_xretries + self.tx_noack)
    }

    /// `Failures = tx_longretry − tx_xretries · MAX_RETRY`
    pub fn failures(&self, max_retry: u32) -> u64 {
        self.tx_longretry.saturating_sub(self.tx_xretries * max_retry as u64)
    }
}

/// Counters accumulated over one beacon interval at one vantage point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BeaconCounters {
    /// Sniffed frames with the retry flag clear.
    pub r0: u64,
    /// Sniffed frames with the retry flag set.
    pub r1: u64,
    pub successes_cumulative: u64,
    pub failures_cumulative: u64,
    pub prev_successes: u64,
    pub prev_failures: u64,
}

impl BeaconCounters {
    pub fn record_sniffed(&mut self, retry_flag: bool) {
        if retry_flag {
            self.r1 += 1;
        } else {
            self.r0 += 1;
        }
    }

    pub fn samples(&self) -> u64 {
        self.r0 + self.r1
    }

    /// Load the latest driver snapshot into the cumulative fields.
    pub fn load_driver(&mut self, stats: &DriverStats, max_retry: u32) {
        self.successes_cumulative = stats.successes();
        self.failures_cumulative = stats.failures(max_retry);
    }

    /// Close the interval: clear sniffer tallies and remember the driver
    /// snapshot as the base for the next delta.
    pub fn roll(&mut self) {
        self.r0 = 0;
        self.r1 = 0;
        self.prev_successes = self.successes_cumulative;
        self.prev_failures = self.failures_cumulative;
    }

    /// `(F, T)` for the interval just ended.
    pub fn interval_deltas(&self) -> Result<(u64, u64)> {
        self.interval_deltas_with_drops(0, 0)
    }

    /// `(F, T)` allowing for `dropped` frames that hit the retry limit during
    /// the interval. A drop retroactively removes the frame from Successes
    /// (it was counted on its first attempt) and up to `max_retry` failures
    /// from earlier intervals, so both totals may step back by that much. The
    /// deltas then floor at zero.
    pub fn interval_deltas_with_drops(&self, max_retry: u32, dropped: u64) -> Result<(u64, u64)> {
        let f = explained_delta(
            "failures",
            self.failures_cumulative,
            self.prev_failures,
            dropped * max_retry as u64,
        )?;
        let t = explained_delta("successes", self.successes_cumulative, self.prev_successes, dropped)?;
        Ok((f, t))
    }
}

fn explained_delta(what: &str, now: u64, prev: u64, slack: u64) -> Result<u64> {
    if now >= prev {
        Ok(now - prev)
    } else if now + slack >= prev {
        Ok(0)
    } else {
        Err(Error::CounterRegression(format!("{what} {now} < previous {prev}")))
    }
}

/// `R1 / (R0 + R1)`, or `None` while fewer than `threshold` frames were seen.
pub fn estimate_p_obs_with<T: Real>(counters: &BeaconCounters, threshold: u64) -> Option<T> {
    let total = counters.samples();
    if total == 0 || total < threshold {
        return None;
    }
    Some(T::of_u64(counters.r1) / T::of_u64(total))
}

pub fn estimate_p_obs<T: Real>(counters: &BeaconCounters) -> Option<T> {
    estimate_p_obs_with(counters, DEFAULT_DEFER_THRESHOLD)
}

/// `F / (F + T)` over the interval deltas; `None` when nothing was attempted.
/// `dropped` is the number of retry-limit drops in the interval.
pub fn estimate_p_own<T: Real>(
    counters: &BeaconCounters,
    max_retry: u32,
    dropped: u64,
) -> Result<Option<T>> {
    let (f, t) = counters.interval_deltas_with_drops(max_retry, dropped)?;
    if f + t == 0 {
        return Ok(None);
    }
    Ok(Some(T::of_u64(f) / T::of_u64(f + t)))
}
