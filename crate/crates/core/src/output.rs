//! CSV and lock-file emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::mac::TraceRecord;
use crate::metrics::ExperimentMetrics;
use crate::oracle::FixedPointSolution;
use crate::scenario::Scenario;

pub const SUMMARY_HEADER: [&str; 6] = ["scenario", "seed", "station", "snr_db", "throughput_mbps", "jfi"];
pub const TRACE_HEADER: [&str; 8] =
    ["seed", "t_ms", "node", "p_obs", "p_own", "error", "cw_real", "cw_quantized"];
pub const DELAY_HEADER: [&str; 4] = ["scenario", "seed", "station", "delay_s"];
pub const SWEEP_HEADER: [&str; 9] = [
    "axis",
    "value",
    "stations",
    "replications",
    "total_mbps_mean",
    "total_mbps_stddev",
    "jfi_mean",
    "jfi_stddev",
    "snr_correlation",
];
pub const ORACLE_HEADER: [&str; 5] = ["n", "cw_min", "tau", "p", "throughput_mbps"];

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn summary_rows(metrics: &ExperimentMetrics) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for run in &metrics.runs {
        for (i, (snr, thr)) in run.snr_db.iter().zip(&run.throughput_mbps).enumerate() {
            rows.push(vec![
                metrics.scenario.clone(),
                run.seed.to_string(),
                (i + 1).to_string(),
                format!("{snr}"),
                format!("{thr:.6}"),
                opt(run.jfi),
            ]);
        }
    }
    rows
}

pub fn trace_row(seed: u64, r: &TraceRecord) -> Vec<String> {
    vec![
        seed.to_string(),
        r.t_ms.to_string(),
        r.node.to_string(),
        opt(r.p_obs),
        opt(r.p_own),
        opt(r.error),
        opt(r.cw_real),
        r.cw_quantized.to_string(),
    ]
}

/// Files written for one experiment.
#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub summary: PathBuf,
    pub trace: PathBuf,
    pub lock: PathBuf,
    pub delays: Option<PathBuf>,
}

/// `summary.csv`, `trace.csv`, `scenario.lock`, and `delays.csv` when any
/// transfer completed.
pub fn emit_outputs(scenario: &Scenario, metrics: &ExperimentMetrics, dir: &Path) -> Result<OutputPaths> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = OutputPaths {
        summary: dir.join("summary.csv"),
        trace: dir.join("trace.csv"),
        lock: dir.join("scenario.lock"),
        delays: None,
    };
    write_rows(&paths.summary, &SUMMARY_HEADER, summary_rows(metrics))?;
    write_rows(
        &paths.trace,
        &TRACE_HEADER,
        metrics.runs.iter().flat_map(|run| run.trace.iter().map(move |r| trace_row(run.seed, r))),
    )?;
    let mut lock = fs::File::create(&paths.lock).map_err(|e| Error::io(&paths.lock, e))?;
    lock.write_all(scenario.emit().as_bytes()).map_err(|e| Error::io(&paths.lock, e))?;

    let delay_rows: Vec<Vec<String>> = metrics
        .runs
        .iter()
        .flat_map(|run| {
            run.transfer_delays_s.iter().enumerate().flat_map(move |(i, ds)| {
                ds.iter().map(move |d| {
                    vec![metrics.scenario.clone(), run.seed.to_string(), (i + 1).to_string(), format!("{d:.6}")]
                })
            })
        })
        .collect();
    if delay_rows.is_empty() {
        return Ok(paths);
    }
    let delays = dir.join("delays.csv");
    write_rows(&delays, &DELAY_HEADER, delay_rows)?;
    Ok(OutputPaths { delays: Some(delays), ..paths })
}

pub fn sweep_row(axis: &str, value: &str, scenario: &Scenario, metrics: &ExperimentMetrics) -> Vec<String> {
    let total = metrics.total_mbps();
    let jfi = metrics.jfi();
    vec![
        axis.to_string(),
        value.to_string(),
        scenario.stations().to_string(),
        metrics.runs.len().to_string(),
        format!("{:.6}", total.mean),
        format!("{:.6}", total.stddev),
        format!("{:.6}", jfi.mean),
        format!("{:.6}", jfi.stddev),
        opt(metrics.snr_correlation()),
    ]
}

pub fn write_sweep(path: &Path, rows: Vec<Vec<String>>) -> Result<()> {
    write_rows(path, &SWEEP_HEADER, rows)
}

/// One summary file covering several experiments, e.g. every point of a sweep.
pub fn write_summary<'a, I>(path: &Path, experiments: I) -> Result<()>
where
    I: IntoIterator<Item = &'a ExperimentMetrics>,
{
    write_rows(path, &SUMMARY_HEADER, experiments.into_iter().flat_map(summary_rows))
}

/// Oracle grid as CSV on any writer (stdout or a file).
pub fn write_oracle_grid<W: Write>(out: W, grid: &[FixedPointSolution<f64>]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ORACLE_HEADER)?;
    for s in grid {
        w.write_record([
            s.n.to_string(),
            s.cw_min.to_string(),
            format!("{:.9}", s.tau),
            format!("{:.9}", s.p),
            format!("{:.6}", s.throughput_mbps),
        ])?;
    }
    w.flush()
}
