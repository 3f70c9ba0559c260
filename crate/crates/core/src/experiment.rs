//! Replications and parameter sweeps.
//!
//! Every replication owns its world and RNG streams. Results are collected in
//! seed order regardless of which thread finishes first.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mac::{CaptureMode, TrafficModel, World};
use crate::metrics::{ExperimentMetrics, RunMetrics};
use crate::scenario::{ControllerKind, Scenario};

pub fn run_replication(scenario: &Scenario, seed: u64) -> Result<RunMetrics> {
    let mut world = World::new(scenario.world_config(seed))?;
    let n = scenario.stations();
    let intervals = scenario.beacon_intervals();
    let mut delivered = vec![0u64; n];
    let mut trace = Vec::with_capacity(intervals as usize * (n + 1));
    let mut drops = 0;
    for _ in 0..intervals {
        let report = world.run_beacon_interval();
        for (d, b) in delivered.iter_mut().zip(&report.delivered_bytes) {
            *d += b;
        }
        drops += report.drops;
        trace.extend(report.trace);
    }
    let elapsed_us = intervals * scenario.profile.beacon_interval_us;
    let delays = world
        .transfer_delays_us()
        .iter()
        .map(|d| d.iter().map(|&us| us as f64 * 1e-6).collect())
        .collect();
    Ok(RunMetrics::from_delivery(
        seed,
        scenario.snr_db.clone(),
        delivered,
        elapsed_us,
        trace,
        delays,
        drops,
    ))
}

pub fn run_experiment(scenario: &Scenario) -> Result<ExperimentMetrics> {
    scenario.validate()?;
    let runs = (0..scenario.replications)
        .into_par_iter()
        .map(|i| run_replication(scenario, scenario.replication_seed(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentMetrics { scenario: scenario.name.clone(), runs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    NStations,
    CaptureThreshold,
    /// Values are mean silence durations `1/λ` in seconds.
    Lambda,
    Controller,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "n_stations" => Ok(SweepAxis::NStations),
            "capture_threshold" => Ok(SweepAxis::CaptureThreshold),
            "lambda" => Ok(SweepAxis::Lambda),
            "controller" => Ok(SweepAxis::Controller),
            _ => Err(Error::config(
                "axis",
                format!("`{s}` is not one of n_stations, capture_threshold, lambda, controller"),
            )),
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            SweepAxis::NStations => "n_stations",
            SweepAxis::CaptureThreshold => "capture_threshold",
            SweepAxis::Lambda => "lambda",
            SweepAxis::Controller => "controller",
        }
    }
}

/// One scenario per sweep value, validated up front.
pub fn sweep_points(base: &Scenario, axis: SweepAxis, values: &[String]) -> Result<Vec<Scenario>> {
    if values.is_empty() {
        return Err(Error::config("values", "sweep needs at least one value"));
    }
    let field = |i: usize| format!("values[{}]", i + 1);
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let bad = |what: &str| Error::config(field(i), format!("`{v}` is not {what}"));
            let mut s = match axis {
                SweepAxis::NStations => {
                    let n: usize = v.parse().map_err(|_| bad("a station count"))?;
                    base.with_stations(n).map_err(|e| match e {
                        Error::Config { message, .. } => Error::config(field(i), message),
                        e => e,
                    })?
                }
                SweepAxis::CaptureThreshold => {
                    let db: f64 = v.parse().map_err(|_| bad("a threshold in dB"))?;
                    let mut s = base.clone();
                    s.capture.mode = CaptureMode::Threshold;
                    s.capture.threshold_db = db;
                    s
                }
                SweepAxis::Lambda => {
                    let secs: f64 = v.parse().map_err(|_| bad("a mean silence in seconds"))?;
                    let mut s = base.clone();
                    s.onoff_mean_silence_s = secs;
                    for t in &mut s.traffic {
                        *t = TrafficModel::OnOff { burst_bytes: s.onoff_burst_bytes, mean_silence_s: secs };
                    }
                    s
                }
                SweepAxis::Controller => {
                    let c = ControllerKind::parse(v).ok_or_else(|| bad("edca-static, cac or dac"))?;
                    base.with_controller(c)
                }
            };
            s.name = format!("{}:{}={}", base.name, axis.keyword(), v);
            s.validate()?;
            Ok(s)
        })
        .collect()
}

pub fn sweep(base: &Scenario, axis: SweepAxis, values: &[String]) -> Result<Vec<(Scenario, ExperimentMetrics)>> {
    let points = sweep_points(base, axis, values)?;
    points
        .into_par_iter()
        .map(|s| {
            let m = run_experiment(&s)?;
            Ok((s, m))
        })
        .collect()
}
