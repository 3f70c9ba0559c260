//! PHY timing constants and the per-slot durations derived from them.
//!
//! All durations are whole microseconds so the event engine can order events
//! exactly. The analytical helpers return a generic [`Real`] so the same
//! formulas back both the simulator and the fixed-point oracle.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Name of the built-in 802.11a / 24 Mbps profile.
pub const PROFILE_80211A_24: &str = "80211a-24mbps";

/// 802.11a OFDM timing (clause 17), best-effort AIFSN = 3.
mod ofdm {
    pub const SLOT_US: u64 = 9;
    pub const SIFS_US: u64 = 16;
    pub const AIFSN_BE: u64 = 3;
    pub const PLCP_US: u64 = 20;
    pub const SYMBOL_US: u64 = 4;
    /// SERVICE (16) + tail (6) bits wrapped around every PSDU.
    pub const PSDU_OVERHEAD_BITS: u64 = 22;
    pub const ACK_BYTES: u64 = 14;
    pub const LOWEST_MANDATORY_MBPS: u64 = 6;

    /// Airtime of a frame of `bytes` at `mbps` including symbol padding.
    pub const fn airtime_us(bytes: u64, mbps: u64) -> u64 {
        let bits_per_symbol = mbps * SYMBOL_US;
        let bits = PSDU_OVERHEAD_BITS + 8 * bytes;
        PLCP_US + SYMBOL_US * bits.div_ceil(bits_per_symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyProfile {
    /// Idle slot duration `T_e`.
    pub slot_us: u64,
    pub sifs_us: u64,
    pub aifs_us: u64,
    /// PLCP preamble plus header.
    pub plcp_us: u64,
    pub eifs_us: u64,
    pub ack_us: u64,
    /// Channel bit rate `C` in bits per microsecond (= Mbit/s).
    pub bit_rate_mbps: u64,
    pub beacon_interval_us: u64,
    /// Airtime of one beacon frame; zero disables beacon transmission.
    pub beacon_airtime_us: u64,
    pub max_retry: u32,
    pub backoff_stages: u32,
    pub cw_floor: u32,
    pub cw_ceiling: u32,
}

impl Default for PhyProfile {
    fn default() -> Self {
        Self::ieee80211a_24mbps()
    }
}

impl PhyProfile {
    /// 802.11a at 24 Mbit/s with best-effort EDCA parameters.
    ///
    /// EIFS is fixed once as SIFS + ACK at the lowest mandatory rate + AIFS,
    /// giving 16 + 44 + 43 = 103 µs. The ACK answering a data frame is sent at
    /// 24 Mbit/s (28 µs).
    pub fn ieee80211a_24mbps() -> Self {
        let aifs = ofdm::SIFS_US + ofdm::AIFSN_BE * ofdm::SLOT_US;
        let ack_lowest = ofdm::airtime_us(ofdm::ACK_BYTES, ofdm::LOWEST_MANDATORY_MBPS);
        PhyProfile {
            slot_us: ofdm::SLOT_US,
            sifs_us: ofdm::SIFS_US,
            aifs_us: aifs,
            plcp_us: ofdm::PLCP_US,
            eifs_us: ofdm::SIFS_US + ack_lowest + aifs,
            ack_us: ofdm::airtime_us(ofdm::ACK_BYTES, 24),
            bit_rate_mbps: 24,
            beacon_interval_us: 100_000,
            // ~100 byte beacon at 6 Mbit/s
            beacon_airtime_us: ofdm::airtime_us(100, ofdm::LOWEST_MANDATORY_MBPS),
            max_retry: 7,
            backoff_stages: 6,
            cw_floor: 16,
            cw_ceiling: 1024,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            PROFILE_80211A_24 => Some(Self::ieee80211a_24mbps()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("phy.slot_us", self.slot_us),
            ("phy.sifs_us", self.sifs_us),
            ("phy.aifs_us", self.aifs_us),
            ("phy.plcp_us", self.plcp_us),
            ("phy.eifs_us", self.eifs_us),
            ("phy.ack_us", self.ack_us),
            ("phy.bit_rate_mbps", self.bit_rate_mbps),
            ("phy.beacon_interval_us", self.beacon_interval_us),
        ];
        for (field, v) in positive {
            if v == 0 {
                return Err(Error::config(field, "must be strictly positive"));
            }
        }
        if self.beacon_interval_us < 1000 * self.slot_us {
            return Err(Error::config(
                "phy.beacon_interval_us",
                "beacon interval must span at least 1000 slots",
            ));
        }
        if self.eifs_us <= self.aifs_us {
            return Err(Error::config("phy.eifs_us", "EIFS must exceed AIFS"));
        }
        if !self.cw_floor.is_power_of_two() {
            return Err(Error::config("phy.cw_floor", "must be a power of two"));
        }
        if !self.cw_ceiling.is_power_of_two() {
            return Err(Error::config("phy.cw_ceiling", "must be a power of two"));
        }
        if self.cw_floor >= self.cw_ceiling {
            return Err(Error::config("phy.cw_ceiling", "must exceed cw_floor"));
        }
        if self.backoff_stages == 0 || self.backoff_stages > 16 {
            return Err(Error::config("phy.backoff_stages", "must be in 1..=16"));
        }
        Ok(())
    }

    /// PIFS, used by the AP to grab the medium for beacons.
    pub fn pifs_us(&self) -> u64 {
        self.sifs_us + self.slot_us
    }

    /// How long a transmitter waits for an ACK before declaring failure.
    /// Together with AIFS this spans exactly one EIFS.
    pub fn ack_timeout_us(&self) -> u64 {
        self.eifs_us - self.aifs_us
    }

    /// Whole-microsecond airtime of a data frame, used by the event engine.
    pub fn data_airtime_us(&self, payload_bytes: u32) -> u64 {
        self.plcp_us + (8 * payload_bytes as u64).div_ceil(self.bit_rate_mbps)
    }

    /// Largest contention window reachable from `cw_min` by doubling:
    /// `2^m · cw_min`, capped at the profile ceiling.
    pub fn cw_max_for(&self, cw_min: u32) -> u32 {
        let doubled = (cw_min as u64) << self.backoff_stages;
        doubled.min(self.cw_ceiling as u64).max(cw_min as u64) as u32
    }

    fn payload_time<T: Real>(&self, payload_bytes: u32) -> T {
        T::of_u64(8 * payload_bytes as u64) / T::of_u64(self.bit_rate_mbps)
    }

    /// `T_c = T_PLCP + L/C + EIFS` for the longest frame `L` in the collision.
    pub fn collision_duration<T: Real>(&self, longest_payload: u32) -> T {
        T::of_u64(self.plcp_us) + self.payload_time(longest_payload) + T::of_u64(self.eifs_us)
    }

    /// Data + SIFS + ACK + AIFS.
    pub fn success_duration<T: Real>(&self, payload: u32) -> T {
        T::of_u64(self.plcp_us)
            + self.payload_time(payload)
            + T::of_u64(self.sifs_us + self.ack_us + self.aifs_us)
    }

    pub fn slot_duration<T: Real>(&self) -> T {
        T::of_u64(self.slot_us)
    }
}

/// A data frame as queued by a station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameSpec {
    pub payload_bytes: u32,
    pub requires_ack: bool,
}

impl FrameSpec {
    pub fn new(payload_bytes: u32) -> Result<Self> {
        if payload_bytes == 0 {
            return Err(Error::InvalidInput("frame payload must be positive".into()));
        }
        Ok(FrameSpec { payload_bytes, requires_ack: true })
    }
}

/// Expected length of the longest frame involved in a collision.
///
/// `payloads` lists one frame length per station, sorted ascending. Each
/// station transmits independently with probability `tau` in a slot; the
/// result is conditioned on the slot holding a collision (two or more
/// transmitters). Station `i` sets the maximum when it transmits, at least
/// one shorter station transmits, and no longer station does.
pub fn expected_collision_length<T: Real>(tau: T, payloads: &[u32]) -> Result<T> {
    let n = payloads.len();
    if n < 2 {
        return Err(Error::InvalidInput("collision needs at least two stations".into()));
    }
    if !(tau > T::zero() && tau < T::one()) {
        return Err(Error::InvalidInput("tau must lie in (0, 1)".into()));
    }
    if payloads.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("payloads must be sorted ascending".into()));
    }
    if payloads[0] == 0 {
        return Err(Error::InvalidInput("payloads must be positive".into()));
    }
    let q = T::one() - tau;
    let idle = q.powi(n as i32);
    let single = T::of_u64(n as u64) * tau * q.powi(n as i32 - 1);
    let p_collision = T::one() - idle - single;

    let mut acc = T::zero();
    for (idx, &len) in payloads.iter().enumerate() {
        let shorter = idx as i32;
        let longer = (n - idx - 1) as i32;
        let weight = tau * (T::one() - q.powi(shorter)) * q.powi(longer);
        acc = acc + weight * T::of_u64(len as u64);
    }
    Ok(acc / p_collision)
}
