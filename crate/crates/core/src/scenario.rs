//! Scenario files and built-in presets.
//!
//! A scenario is a flat `key = value` text file. Units live in the key names
//! (`duration_s`, `snr_db`, `phy.slot_us`). Lists are comma-separated, `#`
//! starts a comment. Station indices in keys are 1-based.
//!
//! ```text
//! name = two_hidden
//! snr_db = 30, 30
//! hidden_pairs = 1:2
//! controller = cac
//! duration_s = 30
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimators::DEFAULT_DEFER_THRESHOLD;
use crate::mac::{CaptureMode, CaptureModel, ControlMode, HearingMatrix, TrafficModel, WorldConfig};
use crate::phy::{PhyProfile, PROFILE_80211A_24};

pub const DEFAULT_DURATION_S: f64 = 120.0;
pub const DEFAULT_REPLICATIONS: u32 = 10;
const MAX_PAYLOAD_BYTES: u32 = 2304;
const MIN_BEACON_INTERVALS: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerKind {
    EdcaStatic,
    Cac,
    Dac,
}

impl ControllerKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            ControllerKind::EdcaStatic => "edca-static",
            ControllerKind::Cac => "cac",
            ControllerKind::Dac => "dac",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "edca-static" | "edca" => Some(ControllerKind::EdcaStatic),
            "cac" => Some(ControllerKind::Cac),
            "dac" => Some(ControllerKind::Dac),
            _ => None,
        }
    }
}

/// Order in which a station-count sweep draws stations from the SNR list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrOrder {
    Listed,
    Ascending,
    Descending,
}

impl SnrOrder {
    pub fn keyword(&self) -> &'static str {
        match self {
            SnrOrder::Listed => "listed",
            SnrOrder::Ascending => "ascending",
            SnrOrder::Descending => "descending",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "listed" => Some(SnrOrder::Listed),
            "ascending" => Some(SnrOrder::Ascending),
            "descending" => Some(SnrOrder::Descending),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub profile_name: String,
    pub profile: PhyProfile,
    pub payload_bytes: u32,
    pub snr_db: Vec<f64>,
    pub snr_order: SnrOrder,
    pub hearing: HearingMatrix,
    pub hearing_asymmetric: bool,
    pub capture: CaptureModel,
    pub controller: ControllerKind,
    pub static_cw: u32,
    pub gains: Option<(f64, f64)>,
    pub defer_threshold: u64,
    pub traffic: Vec<TrafficModel>,
    pub onoff_burst_bytes: u64,
    pub onoff_mean_silence_s: f64,
    pub duration_s: f64,
    pub replications: u32,
    pub seed: u64,
}

impl Scenario {
    /// Saturated, fully connected, EDCA with CW_min at the floor.
    pub fn homogeneous(name: &str, stations: usize, snr_db: f64) -> Self {
        let profile = PhyProfile::default();
        Scenario {
            name: name.to_string(),
            profile_name: PROFILE_80211A_24.to_string(),
            static_cw: profile.cw_floor,
            profile,
            payload_bytes: 1500,
            snr_db: vec![snr_db; stations],
            snr_order: SnrOrder::Listed,
            hearing: HearingMatrix::full(stations),
            hearing_asymmetric: false,
            capture: CaptureModel::none(),
            controller: ControllerKind::EdcaStatic,
            gains: None,
            defer_threshold: DEFAULT_DEFER_THRESHOLD,
            traffic: vec![TrafficModel::Saturated; stations],
            onoff_burst_bytes: 10_000_000,
            onoff_mean_silence_s: 30.0,
            duration_s: DEFAULT_DURATION_S,
            replications: DEFAULT_REPLICATIONS,
            seed: 1,
        }
    }

    pub fn stations(&self) -> usize {
        self.snr_db.len()
    }

    pub fn duration_us(&self) -> u64 {
        (self.duration_s * 1e6).round() as u64
    }

    pub fn beacon_intervals(&self) -> u64 {
        self.duration_us() / self.profile.beacon_interval_us
    }

    pub fn with_controller(&self, controller: ControllerKind) -> Self {
        Scenario { controller, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        let n = self.stations();
        if n == 0 {
            return Err(Error::config("snr_db", "at least one station required"));
        }
        if let Some(i) = self.snr_db.iter().position(|s| !s.is_finite()) {
            return Err(Error::config(format!("snr_db[{}]", i + 1), "must be finite"));
        }
        if self.hearing.stations() != n {
            return Err(Error::config(
                "hearing",
                format!("matrix covers {} stations, snr_db lists {n}", self.hearing.stations()),
            ));
        }
        if !self.hearing_asymmetric && !self.hearing.is_symmetric() {
            return Err(Error::config("hearing", "asymmetric rows need hearing_asymmetric = true"));
        }
        if self.traffic.len() != n {
            return Err(Error::config("traffic", "one traffic model per station required"));
        }
        if self.payload_bytes == 0 || self.payload_bytes > MAX_PAYLOAD_BYTES {
            return Err(Error::config("payload_bytes", format!("must be in 1..={MAX_PAYLOAD_BYTES}")));
        }
        if !self.static_cw.is_power_of_two()
            || self.static_cw < self.profile.cw_floor
            || self.static_cw > self.profile.cw_ceiling
        {
            return Err(Error::config(
                "static_cw",
                format!(
                    "{} is not a power of two in {}..={}",
                    self.static_cw, self.profile.cw_floor, self.profile.cw_ceiling
                ),
            ));
        }
        if let Some((kp, ki)) = self.gains {
            if !(kp.is_finite() && kp > 0.0) {
                return Err(Error::config("gains.kp", "must be finite and positive"));
            }
            if !(ki.is_finite() && ki > 0.0) {
                return Err(Error::config("gains.ki", "must be finite and positive"));
            }
        }
        if self.capture.mode == CaptureMode::Threshold
            && !(self.capture.threshold_db.is_finite() && self.capture.threshold_db > 0.0)
        {
            return Err(Error::config("capture_threshold_db", "must be positive and finite"));
        }
        if self.traffic.iter().any(|t| matches!(t, TrafficModel::OnOff { .. })) {
            if self.onoff_burst_bytes == 0 {
                return Err(Error::config("onoff.burst_bytes", "must be positive"));
            }
            if !(self.onoff_mean_silence_s.is_finite() && self.onoff_mean_silence_s >= 0.0) {
                return Err(Error::config("onoff.mean_silence_s", "must be finite and non-negative"));
            }
        }
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::config("duration_s", "must be finite and positive"));
        }
        if self.beacon_intervals() < MIN_BEACON_INTERVALS {
            return Err(Error::config(
                "duration_s",
                format!(
                    "must cover at least {MIN_BEACON_INTERVALS} beacon intervals ({} s)",
                    MIN_BEACON_INTERVALS as f64 * self.profile.beacon_interval_us as f64 * 1e-6
                ),
            ));
        }
        Ok(())
    }

    /// Seed of replication `index` (0-based).
    pub fn replication_seed(&self, index: u32) -> u64 {
        self.seed.wrapping_add(index as u64)
    }

    pub fn world_config(&self, seed: u64) -> WorldConfig {
        let control = match self.controller {
            ControllerKind::EdcaStatic => ControlMode::Static { cw: self.static_cw },
            ControllerKind::Cac => ControlMode::Cac,
            ControllerKind::Dac => ControlMode::Dac,
        };
        WorldConfig {
            profile: self.profile.clone(),
            payload_bytes: self.payload_bytes,
            snr_db: self.snr_db.clone(),
            hearing: self.hearing.clone(),
            capture: self.capture,
            traffic: self.traffic.clone(),
            control,
            gains_override: self.gains,
            defer_threshold: self.defer_threshold,
            seed,
        }
    }

    /// Station indices in the order a size sweep adds them.
    pub fn station_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.stations()).collect();
        match self.snr_order {
            SnrOrder::Listed => {}
            SnrOrder::Ascending => idx.sort_by(|&a, &b| self.snr_db[a].total_cmp(&self.snr_db[b])),
            SnrOrder::Descending => idx.sort_by(|&a, &b| self.snr_db[b].total_cmp(&self.snr_db[a])),
        }
        idx
    }

    /// The first `n` stations in sweep order, keeping their SNR, traffic and
    /// mutual hearing.
    pub fn with_stations(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.stations() {
            return Err(Error::config(
                "n_stations",
                format!("{n} outside 1..={} (length of snr_db)", self.stations()),
            ));
        }
        let mut picked = self.station_order();
        picked.truncate(n);
        let mut rows = vec![vec![true; n + 1]; n + 1];
        let node = |k: usize| if k == 0 { 0 } else { picked[k - 1] + 1 };
        for (v, row) in rows.iter_mut().enumerate() {
            for (u, cell) in row.iter_mut().enumerate() {
                *cell = v == u || self.hearing.hears(node(v), node(u));
            }
        }
        Ok(Scenario {
            snr_db: picked.iter().map(|&i| self.snr_db[i]).collect(),
            traffic: picked.iter().map(|&i| self.traffic[i]).collect(),
            hearing: HearingMatrix::from_rows(&rows, self.hearing_asymmetric)?,
            snr_order: SnrOrder::Listed,
            ..self.clone()
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parse a scenario file. Unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::config(format!("line {}", lineno + 1), "expected `key = value`"));
            };
            let key = k.trim().to_string();
            if kv.insert(key.clone(), (lineno + 1, v.trim().to_string())).is_some() {
                return Err(Error::config(key, "given more than once"));
            }
        }
        let mut p = Parser { kv };
        let s = p.scenario()?;
        if let Some(key) = p.kv.keys().next() {
            return Err(Error::config(key.clone(), "unknown key"));
        }
        s.validate()?;
        Ok(s)
    }

    /// Fully resolved form; `parse(emit(s)) == s`.
    pub fn emit(&self) -> String {
        let mut o = String::new();
        let p = &self.profile;
        let _ = writeln!(o, "name = {}", self.name);
        let _ = writeln!(o, "profile = {}", self.profile_name);
        for (k, v) in [
            ("slot_us", p.slot_us),
            ("sifs_us", p.sifs_us),
            ("aifs_us", p.aifs_us),
            ("plcp_us", p.plcp_us),
            ("eifs_us", p.eifs_us),
            ("ack_us", p.ack_us),
            ("bit_rate_mbps", p.bit_rate_mbps),
            ("beacon_interval_us", p.beacon_interval_us),
            ("beacon_airtime_us", p.beacon_airtime_us),
            ("max_retry", p.max_retry as u64),
            ("backoff_stages", p.backoff_stages as u64),
            ("cw_floor", p.cw_floor as u64),
            ("cw_ceiling", p.cw_ceiling as u64),
        ] {
            let _ = writeln!(o, "phy.{k} = {v}");
        }
        let _ = writeln!(o, "payload_bytes = {}", self.payload_bytes);
        let _ = writeln!(o, "stations = {}", self.stations());
        let _ = writeln!(o, "snr_db = {}", join(&self.snr_db));
        let _ = writeln!(o, "snr_order = {}", self.snr_order.keyword());
        if self.hearing.is_full() {
            let _ = writeln!(o, "hearing = full");
        } else {
            let _ = writeln!(o, "hearing = rows");
            for (v, row) in self.hearing.rows().iter().enumerate() {
                let label = if v == 0 { "ap".to_string() } else { v.to_string() };
                let cells: Vec<&str> = row.iter().map(|&h| if h { "1" } else { "0" }).collect();
                let _ = writeln!(o, "hearing.{label} = {}", cells.join(" "));
            }
        }
        let _ = writeln!(o, "hearing_asymmetric = {}", self.hearing_asymmetric);
        match self.capture.mode {
            CaptureMode::None => {
                let _ = writeln!(o, "capture = none");
            }
            CaptureMode::Threshold => {
                let _ = writeln!(o, "capture = threshold");
            }
        }
        let _ = writeln!(o, "capture_threshold_db = {}", self.capture.threshold_db);
        let _ = writeln!(o, "controller = {}", self.controller.keyword());
        let _ = writeln!(o, "static_cw = {}", self.static_cw);
        if let Some((kp, ki)) = self.gains {
            let _ = writeln!(o, "gains.kp = {kp}");
            let _ = writeln!(o, "gains.ki = {ki}");
        }
        let _ = writeln!(o, "defer_threshold = {}", self.defer_threshold);
        let first = self.traffic[0].keyword();
        if self.traffic.iter().all(|t| t.keyword() == first) {
            let _ = writeln!(o, "traffic = {first}");
        } else {
            let _ = writeln!(o, "traffic = saturated");
            for (i, t) in self.traffic.iter().enumerate() {
                let _ = writeln!(o, "traffic.{} = {}", i + 1, t.keyword());
            }
        }
        let _ = writeln!(o, "onoff.burst_bytes = {}", self.onoff_burst_bytes);
        let _ = writeln!(o, "onoff.mean_silence_s = {}", self.onoff_mean_silence_s);
        let _ = writeln!(o, "duration_s = {}", self.duration_s);
        let _ = writeln!(o, "replications = {}", self.replications);
        let _ = writeln!(o, "seed = {}", self.seed);
        o
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

struct Parser {
    kv: BTreeMap<String, (usize, String)>,
}

impl Parser {
    fn take(&mut self, key: &str) -> Option<String> {
        self.kv.remove(key).map(|(_, v)| v)
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.kv.remove(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|_| {
                Error::config(key, format!("line {line}: cannot parse `{v}` as a number"))
            }),
        }
    }

    fn flag(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key).as_deref() {
            None => Ok(None),
            Some("true" | "yes" | "1") => Ok(Some(true)),
            Some("false" | "no" | "0") => Ok(Some(false)),
            Some(v) => Err(Error::config(key, format!("expected true or false, got `{v}`"))),
        }
    }

    fn scenario(&mut self) -> Result<Scenario> {
        let profile_name = self.take("profile").unwrap_or_else(|| PROFILE_80211A_24.to_string());
        let mut profile = PhyProfile::by_name(&profile_name)
            .ok_or_else(|| Error::config("profile", format!("unknown profile `{profile_name}`")))?;
        macro_rules! phy {
            ($($field:ident),*) => {$(
                if let Some(v) = self.num(concat!("phy.", stringify!($field)))? {
                    profile.$field = v;
                }
            )*};
        }
        phy!(
            slot_us, sifs_us, aifs_us, plcp_us, eifs_us, ack_us, bit_rate_mbps, beacon_interval_us,
            beacon_airtime_us, max_retry, backoff_stages, cw_floor, cw_ceiling
        );

        let stations: Option<usize> = self.num("stations")?;
        let mut snr_db = match self.take("snr_db") {
            Some(v) => v
                .split(',')
                .enumerate()
                .map(|(i, s)| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::config(format!("snr_db[{}]", i + 1), format!("cannot parse `{}`", s.trim()))
                    })
                })
                .collect::<Result<Vec<f64>>>()?,
            None => return Err(Error::config("snr_db", "required")),
        };
        match stations {
            Some(n) if snr_db.len() == 1 && n > 1 => snr_db = vec![snr_db[0]; n],
            Some(n) if n != snr_db.len() => {
                return Err(Error::config(
                    "stations",
                    format!("{n} stations but snr_db lists {}", snr_db.len()),
                ));
            }
            _ => {}
        }
        let n = snr_db.len();
        let snr_order = match self.take("snr_order") {
            None => SnrOrder::Listed,
            Some(v) => SnrOrder::parse(&v)
                .ok_or_else(|| Error::config("snr_order", format!("unknown order `{v}`")))?,
        };

        let hearing_asymmetric = self.flag("hearing_asymmetric")?.unwrap_or(false);
        let hearing = self.hearing(n, hearing_asymmetric)?;

        let threshold = self.num("capture_threshold_db")?.unwrap_or(CaptureModel::DEFAULT_THRESHOLD_DB);
        let capture = match self.take("capture").as_deref() {
            None | Some("threshold") => CaptureModel { mode: CaptureMode::Threshold, threshold_db: threshold },
            Some("none") => CaptureModel { mode: CaptureMode::None, threshold_db: threshold },
            Some(v) => return Err(Error::config("capture", format!("unknown capture model `{v}`"))),
        };

        let controller = match self.take("controller") {
            None => ControllerKind::EdcaStatic,
            Some(v) => ControllerKind::parse(&v)
                .ok_or_else(|| Error::config("controller", format!("unknown controller `{v}`")))?,
        };
        let static_cw = self.num("static_cw")?.unwrap_or(profile.cw_floor);
        let gains = match (self.num::<f64>("gains.kp")?, self.num::<f64>("gains.ki")?) {
            (None, None) => None,
            (Some(kp), Some(ki)) => Some((kp, ki)),
            (Some(_), None) => return Err(Error::config("gains.ki", "required with gains.kp")),
            (None, Some(_)) => return Err(Error::config("gains.kp", "required with gains.ki")),
        };
        let defer_threshold = self.num("defer_threshold")?.unwrap_or(DEFAULT_DEFER_THRESHOLD);

        let onoff_burst_bytes = self.num("onoff.burst_bytes")?.unwrap_or(10_000_000);
        let onoff_mean_silence_s = self.num("onoff.mean_silence_s")?.unwrap_or(30.0);
        let traffic_of = |key: &str, v: &str| -> Result<TrafficModel> {
            match v {
                "saturated" => Ok(TrafficModel::Saturated),
                "onoff" => Ok(TrafficModel::OnOff {
                    burst_bytes: onoff_burst_bytes,
                    mean_silence_s: onoff_mean_silence_s,
                }),
                "off" => Ok(TrafficModel::Silent),
                _ => Err(Error::config(key, format!("unknown traffic model `{v}`"))),
            }
        };
        let base = match self.take("traffic") {
            None => TrafficModel::Saturated,
            Some(v) => traffic_of("traffic", &v)?,
        };
        let mut traffic = vec![base; n];
        for (i, t) in traffic.iter_mut().enumerate() {
            let key = format!("traffic.{}", i + 1);
            if let Some(v) = self.take(&key) {
                *t = traffic_of(&key, &v)?;
            }
        }

        Ok(Scenario {
            name: self.take("name").unwrap_or_else(|| "scenario".to_string()),
            profile_name,
            payload_bytes: self.num("payload_bytes")?.unwrap_or(1500),
            snr_db,
            snr_order,
            hearing,
            hearing_asymmetric,
            capture,
            controller,
            static_cw,
            gains,
            defer_threshold,
            traffic,
            onoff_burst_bytes,
            onoff_mean_silence_s,
            duration_s: self.num("duration_s")?.unwrap_or(DEFAULT_DURATION_S),
            replications: self.num("replications")?.unwrap_or(DEFAULT_REPLICATIONS),
            seed: self.num("seed")?.unwrap_or(1),
            profile,
        })
    }

    fn hearing(&mut self, n: usize, asymmetric: bool) -> Result<HearingMatrix> {
        let mode = self.take("hearing").unwrap_or_else(|| "full".to_string());
        let pairs = self.take("hidden_pairs");
        let mut m = match mode.as_str() {
            "full" => HearingMatrix::full(n),
            "rows" => {
                let mut rows = Vec::with_capacity(n + 1);
                for v in 0..=n {
                    let key = if v == 0 { "hearing.ap".to_string() } else { format!("hearing.{v}") };
                    let line = self.take(&key).ok_or_else(|| Error::config(&key, "row missing"))?;
                    let row = line
                        .split_whitespace()
                        .map(|c| match c {
                            "1" => Ok(true),
                            "0" => Ok(false),
                            _ => Err(Error::config(&key, format!("cells are 0 or 1, got `{c}`"))),
                        })
                        .collect::<Result<Vec<bool>>>()?;
                    rows.push(row);
                }
                HearingMatrix::from_rows(&rows, asymmetric)?
            }
            other => return Err(Error::config("hearing", format!("expected full or rows, got `{other}`"))),
        };
        if let Some(list) = pairs {
            let mut parsed = Vec::new();
            for item in list.split(',') {
                let bad = || Error::config("hidden_pairs", format!("expected `a:b`, got `{}`", item.trim()));
                let (a, b) = item.trim().split_once(':').ok_or_else(bad)?;
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a == 0 || b == 0 {
                    return Err(bad());
                }
                parsed.push((a - 1, b - 1));
            }
            let hidden = HearingMatrix::with_hidden_pairs(n, &parsed)?;
            for v in 0..=n {
                for u in 0..=n {
                    if !hidden.hears(v, u) {
                        m.set(v, u, false);
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Approximate per-link SNR (dB) of the 17 stations, strongest first.
/// Read off a measured testbed profile; values are indicative only.
pub const TESTBED_SNR_DB: [f64; 17] = [
    45.0, 43.0, 41.0, 39.0, 38.0, 36.0, 35.0, 33.0, 31.0, 30.0, 28.0, 27.0, 25.0, 23.0, 21.0, 19.0,
    17.0,
];

pub const PRESETS: [(&str, &str); 6] = [
    ("fig5_cac_point_of_operation", "10 homogeneous saturated stations under CAC, 1 x 120 s"),
    ("fig7_udp_total", "10 saturated stations with heterogeneous SNR and capture, CAC"),
    ("fig9_snr_correlation", "per-station throughput vs SNR, 10 stations with capture, CAC"),
    ("fig10_hidden", "2 mutually hidden saturated stations, CAC"),
    ("fig11_sweep_n", "18 homogeneous stations, no capture; sweep n_stations 2..18"),
    ("fig12_delay", "10 stations sending 10 MB bursts with exponential silences, CAC"),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Built-in scenario by name. Desk scale: 3 replications of 30 s unless noted.
pub fn preset(name: &str) -> Option<Scenario> {
    let desk = |mut s: Scenario| {
        s.duration_s = 30.0;
        s.replications = 3;
        s
    };
    let testbed = |name: &str, n: usize| {
        let mut s = Scenario::homogeneous(name, n, 30.0);
        s.snr_db = TESTBED_SNR_DB[..n].to_vec();
        s.capture = CaptureModel { mode: CaptureMode::Threshold, threshold_db: CaptureModel::DEFAULT_THRESHOLD_DB };
        s.controller = ControllerKind::Cac;
        s
    };
    let s = match name {
        "fig5_cac_point_of_operation" => {
            let mut s = Scenario::homogeneous(name, 10, 30.0);
            s.controller = ControllerKind::Cac;
            s.duration_s = 120.0;
            s.replications = 1;
            s
        }
        "fig7_udp_total" | "fig9_snr_correlation" => desk(testbed(name, 10)),
        "fig10_hidden" => {
            let mut s = Scenario::homogeneous(name, 2, 30.0);
            s.hearing = HearingMatrix::with_hidden_pairs(2, &[(0, 1)]).expect("valid pair");
            s.capture = CaptureModel { mode: CaptureMode::Threshold, threshold_db: CaptureModel::DEFAULT_THRESHOLD_DB };
            s.controller = ControllerKind::Cac;
            desk(s)
        }
        "fig11_sweep_n" => {
            let mut s = desk(Scenario::homogeneous(name, 18, 30.0));
            s.controller = ControllerKind::Cac;
            s
        }
        "fig12_delay" => {
            let mut s = testbed(name, 10);
            s.traffic = vec![
                TrafficModel::OnOff { burst_bytes: s.onoff_burst_bytes, mean_silence_s: s.onoff_mean_silence_s };
                10
            ];
            s.duration_s = 300.0;
            s.replications = 3;
            s
        }
        _ => return None,
    };
    Some(s)
}

/// A preset name or a path to a scenario file.
pub fn load(spec: &str) -> Result<Scenario> {
    if let Some(s) = preset(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::config(
            "scenario",
            format!("`{spec}` is neither a preset nor an existing file"),
        ));
    }
    Scenario::from_file(path)
}
