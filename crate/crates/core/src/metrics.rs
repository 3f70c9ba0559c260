//! Throughput, fairness and delay statistics.

use crate::error::{Error, Result};
use crate::mac::TraceRecord;
use crate::scalar::Real;

/// `(Σx)² / (n·Σx²)`.
pub fn jain_index<T: Real>(xs: &[T]) -> Result<T> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("fairness index of an empty set".into()));
    }
    if xs.iter().any(|x| !(*x >= T::zero()) || !x.is_finite()) {
        return Err(Error::InvalidInput("fairness index needs finite non-negative rates".into()));
    }
    let sum = xs.iter().fold(T::zero(), |a, &x| a + x);
    let sq = xs.iter().fold(T::zero(), |a, &x| a + x * x);
    if sq == T::zero() {
        return Err(Error::InvalidInput("fairness index of an all-zero allocation".into()));
    }
    Ok(sum * sum / (T::of_u64(xs.len() as u64) * sq))
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for fewer than two values.
pub fn stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Pearson correlation; `None` if either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub seed: u64,
    pub snr_db: Vec<f64>,
    pub delivered_bytes: Vec<u64>,
    pub throughput_mbps: Vec<f64>,
    pub total_mbps: f64,
    pub jfi: Option<f64>,
    pub trace: Vec<TraceRecord>,
    /// Completed burst transfer times per station, seconds.
    pub transfer_delays_s: Vec<Vec<f64>>,
    pub drops: u64,
}

impl RunMetrics {
    pub fn from_delivery(
        seed: u64,
        snr_db: Vec<f64>,
        delivered_bytes: Vec<u64>,
        duration_us: u64,
        trace: Vec<TraceRecord>,
        transfer_delays_s: Vec<Vec<f64>>,
        drops: u64,
    ) -> Self {
        let secs = duration_us as f64 * 1e-6;
        let throughput_mbps: Vec<f64> =
            delivered_bytes.iter().map(|&b| b as f64 * 8.0 / secs / 1e6).collect();
        let total_mbps = throughput_mbps.iter().sum();
        let jfi = jain_index(&throughput_mbps).ok();
        RunMetrics {
            seed,
            snr_db,
            delivered_bytes,
            throughput_mbps,
            total_mbps,
            jfi,
            trace,
            transfer_delays_s,
            drops,
        }
    }

    pub fn snr_correlation(&self) -> Option<f64> {
        pearson(&self.snr_db, &self.throughput_mbps)
    }
}

/// Mean and sample standard deviation over replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub stddev: f64,
}

impl Aggregate {
    pub fn of(xs: &[f64]) -> Self {
        Aggregate { mean: mean(xs), stddev: stddev(xs) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentMetrics {
    pub scenario: String,
    pub runs: Vec<RunMetrics>,
}

impl ExperimentMetrics {
    pub fn total_mbps(&self) -> Aggregate {
        Aggregate::of(&self.runs.iter().map(|r| r.total_mbps).collect::<Vec<_>>())
    }

    pub fn jfi(&self) -> Aggregate {
        Aggregate::of(&self.runs.iter().filter_map(|r| r.jfi).collect::<Vec<_>>())
    }

    /// Per-station mean throughput across replications.
    pub fn station_mean_mbps(&self) -> Vec<f64> {
        let n = self.runs.first().map_or(0, |r| r.throughput_mbps.len());
        (0..n)
            .map(|i| mean(&self.runs.iter().map(|r| r.throughput_mbps[i]).collect::<Vec<_>>()))
            .collect()
    }

    /// Correlation of mean per-station throughput with SNR.
    pub fn snr_correlation(&self) -> Option<f64> {
        let snr = &self.runs.first()?.snr_db;
        pearson(snr, &self.station_mean_mbps())
    }

    /// All completed transfer delays, seconds, per station across replications.
    pub fn station_delays_s(&self) -> Vec<Vec<f64>> {
        let n = self.runs.first().map_or(0, |r| r.transfer_delays_s.len());
        (0..n)
            .map(|i| self.runs.iter().flat_map(|r| r.transfer_delays_s[i].iter().copied()).collect())
            .collect()
    }
}
