//! Event-driven EDCA simulator.
//!
//! Time is an integer microsecond clock. Every node keeps its own view of the
//! medium (which transmissions it can hear), so stations that cannot sense
//! each other run independent slot grids and their frames overlap at the AP
//! in continuous time. In a fully connected network all grids coincide and
//! the engine reproduces [`run_slot`](super::slotted::run_slot) exactly.
//!
//! Node 0 is the AP; node `i + 1` is station `i`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::control::{compute_gains, compute_p_opt, CacController, ControllerState, CwBounds, DacController, PiGains};
use crate::error::{Error, Result};
use crate::estimators::{estimate_p_obs_with, estimate_p_own, BeaconCounters};
use crate::phy::{FrameSpec, PhyProfile};

use super::slotted::CaptureModel;
use super::station::{FailureOutcome, StationState};
use super::topology::HearingMatrix;
use super::traffic::TrafficModel;

const AP: usize = 0;
const STREAM_MAC: u64 = 0;
const STREAM_TRAFFIC: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Ap,
    Station(usize),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Ap => write!(f, "ap"),
            NodeId::Station(i) => write!(f, "sta{}", i + 1),
        }
    }
}

/// Which controller sets CW_min.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    /// Fixed CW_min for every station.
    Static { cw: u32 },
    /// PI controller at the AP, announced in beacons.
    Cac,
    /// Independent PI controller at every station.
    Dac,
}

#[derive(Debug, Clone)]
pub struct WorldConfig {
    pub profile: PhyProfile,
    pub payload_bytes: u32,
    pub snr_db: Vec<f64>,
    pub hearing: HearingMatrix,
    pub capture: CaptureModel,
    pub traffic: Vec<TrafficModel>,
    pub control: ControlMode,
    /// `(K_P, K_I)` replacing the closed-form gains.
    pub gains_override: Option<(f64, f64)>,
    pub defer_threshold: u64,
    pub seed: u64,
}

/// Controller internals for one node at the end of one beacon interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t_ms: u64,
    pub node: NodeId,
    pub p_obs: Option<f64>,
    pub p_own: Option<f64>,
    pub error: Option<f64>,
    pub cw_real: Option<f64>,
    pub cw_quantized: u32,
}

#[derive(Debug, Clone)]
pub struct BeaconReport {
    pub index: u64,
    pub t_us: u64,
    /// AP row first, then one row per station.
    pub trace: Vec<TraceRecord>,
    /// Payload bytes acknowledged per station during the interval.
    pub delivered_bytes: Vec<u64>,
    pub drops: u64,
    pub drops_by_station: Vec<u64>,
    /// Sniffer tallies at the AP for the interval.
    pub ap_counters: BeaconCounters,
    /// Sniffer tallies and driver snapshots per station for the interval.
    pub station_counters: Vec<BeaconCounters>,
    /// CW_min in force at every station for the next interval.
    pub committed_cw: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    NoFrame,
    Contending,
    Transmitting,
    AwaitingAck,
}

#[derive(Debug, Clone, Copy)]
struct Sense {
    busy: u32,
    /// The current busy period held an undecodable reception.
    corrupt: bool,
    idle_since: u64,
    ifs: u64,
}

#[derive(Debug, Clone)]
struct StationMac {
    phase: Phase,
    epoch: u64,
    /// First slot boundary of the running countdown and the transmit time.
    countdown: Option<(u64, u64)>,
}

#[derive(Debug, Clone)]
struct TrafficState {
    model: TrafficModel,
    frames_left: u64,
    burst_start: u64,
    rng: ChaCha8Rng,
}

#[derive(Debug, Clone, Copy)]
enum TxKind {
    Data { station: usize, retry: bool },
    Ack { to: usize },
    Beacon,
}

#[derive(Debug, Clone)]
struct Transmission {
    sender: usize,
    kind: TxKind,
    /// Strongest overlapping station frame as seen by the AP, dB.
    interferer_db: f64,
    /// The AP transmitted while this frame was on the air.
    ap_overlap: bool,
}

// Variant order is the processing order for events sharing a timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    TxEnd { tx: usize },
    AckTimeout { station: usize, epoch: u64 },
    BeaconTick,
    AckStart { station: usize },
    BeaconAttempt,
    TrafficOn { station: usize },
    TxStart { station: usize, epoch: u64 },
}

impl EventKind {
    fn rank(&self) -> u8 {
        match self {
            EventKind::TxEnd { .. } => 0,
            EventKind::AckTimeout { .. } => 1,
            EventKind::BeaconTick => 2,
            EventKind::AckStart { .. } => 3,
            EventKind::BeaconAttempt => 4,
            EventKind::TrafficOn { .. } => 5,
            EventKind::TxStart { .. } => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Event {
    time: u64,
    rank: u8,
    seq: u64,
    kind: EventKind,
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (time, rank, seq)
        (other.time, other.rank, other.seq).cmp(&(self.time, self.rank, self.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

enum Control {
    Static,
    Cac(CacController<f64>),
    Dac(Vec<DacController<f64>>),
}

pub struct World {
    profile: PhyProfile,
    payload: u32,
    hearing: HearingMatrix,
    capture: CaptureModel,
    defer_threshold: u64,
    p_opt: f64,
    gains: PiGains<f64>,
    now: u64,
    queue: BinaryHeap<Event>,
    seq: u64,
    stations: Vec<StationState>,
    macs: Vec<StationMac>,
    traffic: Vec<TrafficState>,
    sense: Vec<Sense>,
    txs: Vec<Option<Transmission>>,
    free_tx: Vec<usize>,
    active: Vec<usize>,
    control: Control,
    beacon_pending: bool,
    beacon_index: u64,
    ap_counters: BeaconCounters,
    sta_counters: Vec<BeaconCounters>,
    interval_bytes: Vec<u64>,
    interval_drops: u64,
    interval_drops_by: Vec<u64>,
    delays_us: Vec<Vec<u64>>,
    ap_beacons_sent: u64,
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

impl World {
    pub fn new(config: WorldConfig) -> Result<Self> {
        let WorldConfig {
            profile,
            payload_bytes,
            snr_db,
            hearing,
            capture,
            traffic,
            control,
            gains_override,
            defer_threshold,
            seed,
        } = config;
        profile.validate()?;
        let n = snr_db.len();
        if n == 0 {
            return Err(Error::config("stations", "at least one station required"));
        }
        if hearing.stations() != n {
            return Err(Error::config(
                "hearing",
                format!("matrix covers {} stations, scenario has {n}", hearing.stations()),
            ));
        }
        if traffic.len() != n {
            return Err(Error::config("traffic", "one traffic model per station required"));
        }
        if payload_bytes == 0 {
            return Err(Error::config("payload_bytes", "must be positive"));
        }

        let op = compute_p_opt::<f64>(&profile, payload_bytes);
        let gains = match gains_override {
            Some((k_p, k_i)) => PiGains { k_p, k_i, m: profile.backoff_stages },
            None => compute_gains(op.p_opt, profile.backoff_stages)?,
        };
        let bounds = CwBounds::new(profile.cw_floor, profile.cw_ceiling)?;

        let mut stations: Vec<StationState> = snr_db
            .iter()
            .enumerate()
            .map(|(i, &snr)| StationState::new(i, snr, &profile, stream(seed, STREAM_MAC + i as u64)))
            .collect();

        let control = match control {
            ControlMode::Static { cw } => {
                if !cw.is_power_of_two() || cw < profile.cw_floor || cw > profile.cw_ceiling {
                    return Err(Error::config(
                        "static_cw",
                        format!("{cw} is not a power of two within the CW bounds"),
                    ));
                }
                for st in &mut stations {
                    st.set_cw_min(cw, &profile);
                }
                Control::Static
            }
            ControlMode::Cac => Control::Cac(CacController::new(
                ControllerState::cold_start(gains, bounds),
                op.p_opt,
                defer_threshold,
            )),
            ControlMode::Dac => Control::Dac(
                (0..n)
                    .map(|_| {
                        DacController::new(
                            ControllerState::cold_start(gains, bounds),
                            op.p_opt,
                            defer_threshold,
                        )
                    })
                    .collect(),
            ),
        };

        let traffic = traffic
            .into_iter()
            .enumerate()
            .map(|(i, model)| TrafficState {
                model,
                frames_left: 0,
                burst_start: 0,
                rng: stream(seed, STREAM_TRAFFIC + i as u64),
            })
            .collect();

        let nodes = n + 1;
        let mut world = World {
            payload: payload_bytes,
            hearing,
            capture,
            defer_threshold,
            p_opt: op.p_opt,
            gains,
            now: 0,
            queue: BinaryHeap::new(),
            seq: 0,
            stations,
            macs: vec![StationMac { phase: Phase::NoFrame, epoch: 0, countdown: None }; n],
            traffic,
            sense: vec![
                Sense { busy: 0, corrupt: false, idle_since: 0, ifs: profile.aifs_us };
                nodes
            ],
            txs: Vec::new(),
            free_tx: Vec::new(),
            active: Vec::new(),
            control,
            beacon_pending: false,
            beacon_index: 0,
            ap_counters: BeaconCounters::default(),
            sta_counters: vec![BeaconCounters::default(); n],
            interval_bytes: vec![0; n],
            interval_drops: 0,
            interval_drops_by: vec![0; n],
            delays_us: vec![Vec::new(); n],
            ap_beacons_sent: 0,
            profile,
        };
        world.bootstrap();
        Ok(world)
    }

    fn bootstrap(&mut self) {
        for s in 0..self.stations.len() {
            match self.traffic[s].model {
                TrafficModel::Saturated => {
                    let frame = self.frame();
                    self.stations[s].enqueue(frame);
                    self.macs[s].phase = Phase::Contending;
                    self.schedule_countdown(s);
                }
                TrafficModel::OnOff { mean_silence_s, .. } => {
                    let wait = self.draw_silence(s, mean_silence_s);
                    self.push(wait, EventKind::TrafficOn { station: s });
                }
                TrafficModel::Silent => {}
            }
        }
        self.push(self.profile.beacon_interval_us, EventKind::BeaconTick);
    }

    fn frame(&self) -> FrameSpec {
        FrameSpec { payload_bytes: self.payload, requires_ack: true }
    }

    fn draw_silence(&mut self, s: usize, mean_s: f64) -> u64 {
        if mean_s <= 0.0 {
            return 0;
        }
        let exp = Exp::new(1.0 / mean_s).expect("positive rate");
        let secs: f64 = exp.sample(&mut self.traffic[s].rng);
        (secs * 1e6).round() as u64
    }

    fn push(&mut self, delay: u64, kind: EventKind) {
        self.push_at(self.now + delay, kind);
    }

    fn push_at(&mut self, time: u64, kind: EventKind) {
        self.seq += 1;
        self.queue.push(Event { time, rank: kind.rank(), seq: self.seq, kind });
    }

    pub fn now_us(&self) -> u64 {
        self.now
    }

    pub fn profile(&self) -> &PhyProfile {
        &self.profile
    }

    pub fn stations(&self) -> &[StationState] {
        &self.stations
    }

    pub fn p_opt(&self) -> f64 {
        self.p_opt
    }

    pub fn gains(&self) -> PiGains<f64> {
        self.gains
    }

    /// Completed burst transfer times per station (on-off traffic only).
    pub fn transfer_delays_us(&self) -> &[Vec<u64>] {
        &self.delays_us
    }

    pub fn beacons_sent(&self) -> u64 {
        self.ap_beacons_sent
    }

    /// Advance to the next beacon boundary and run the controllers there.
    pub fn run_beacon_interval(&mut self) -> BeaconReport {
        loop {
            let ev = self.queue.pop().expect("beacon ticks keep the queue non-empty");
            debug_assert!(ev.time >= self.now);
            self.now = ev.time;
            match ev.kind {
                EventKind::BeaconTick => return self.on_beacon_tick(),
                EventKind::TxStart { station, epoch } => self.on_tx_start(station, epoch),
                EventKind::TxEnd { tx } => self.on_tx_end(tx),
                EventKind::AckStart { station } => self.on_ack_start(station),
                EventKind::AckTimeout { station, epoch } => self.on_ack_timeout(station, epoch),
                EventKind::BeaconAttempt => self.on_beacon_attempt(),
                EventKind::TrafficOn { station } => self.on_traffic_on(station),
            }
        }
    }

    /// Run whole beacon intervals covering `duration_us`.
    pub fn run_for(&mut self, duration_us: u64) -> Vec<BeaconReport> {
        let intervals = duration_us / self.profile.beacon_interval_us;
        (0..intervals).map(|_| self.run_beacon_interval()).collect()
    }

    // ---- medium ---------------------------------------------------------

    fn start_tx(&mut self, sender: usize, kind: TxKind, airtime: u64) -> usize {
        let mut tx = Transmission {
            sender,
            kind,
            interferer_db: f64::NEG_INFINITY,
            ap_overlap: false,
        };
        let ap_hears_sender = sender == AP || self.hearing.hears(AP, sender);
        if ap_hears_sender {
            for &other in &self.active {
                let o = self.txs[other].as_mut().expect("active tx");
                if sender == AP {
                    if matches!(o.kind, TxKind::Data { .. }) {
                        o.ap_overlap = true;
                    }
                } else if o.sender == AP {
                    tx.ap_overlap = true;
                } else if self.hearing.hears(AP, o.sender) {
                    let sender_snr = self.stations[sender - 1].snr_db;
                    let other_snr = self.stations[o.sender - 1].snr_db;
                    tx.interferer_db = tx.interferer_db.max(other_snr);
                    o.interferer_db = o.interferer_db.max(sender_snr);
                }
            }
        }

        let id = match self.free_tx.pop() {
            Some(id) => {
                self.txs[id] = Some(tx);
                id
            }
            None => {
                self.txs.push(Some(tx));
                self.txs.len() - 1
            }
        };
        self.active.push(id);

        for v in 0..self.hearing.nodes() {
            if v == sender {
                let s = &mut self.sense[v];
                s.busy += 1;
                if matches!(kind, TxKind::Data { .. }) {
                    // no ACK heard yet: EIFS applies unless one arrives
                    s.corrupt = true;
                }
            } else if self.hearing.hears(v, sender) {
                self.become_busy(v);
            }
        }
        self.push(airtime, EventKind::TxEnd { tx: id });
        id
    }

    fn become_busy(&mut self, v: usize) {
        let s = &mut self.sense[v];
        s.busy += 1;
        if s.busy >= 2 {
            s.corrupt = true;
        }
        if s.busy == 1 && v != AP {
            self.freeze(v - 1);
        }
    }

    fn become_idle(&mut self, v: usize) {
        let s = &mut self.sense[v];
        s.idle_since = self.now;
        s.ifs = if s.corrupt { self.profile.eifs_us } else { self.profile.aifs_us };
        s.corrupt = false;
        if v == AP {
            if self.beacon_pending {
                self.push(self.profile.pifs_us(), EventKind::BeaconAttempt);
            }
        } else if self.macs[v - 1].phase == Phase::Contending {
            self.schedule_countdown(v - 1);
        }
    }

    /// Stop a running countdown because the medium turned busy at `now`.
    /// Slot boundaries up to and including `now` have already been consumed.
    fn freeze(&mut self, s: usize) {
        let mac = &mut self.macs[s];
        if mac.phase != Phase::Contending {
            return;
        }
        let Some((first_boundary, tx_at)) = mac.countdown else { return };
        if tx_at <= self.now {
            // transmits in this very boundary
            return;
        }
        if self.now >= first_boundary {
            let consumed = (self.now - first_boundary) / self.profile.slot_us + 1;
            let st = &mut self.stations[s];
            debug_assert!(consumed <= st.backoff as u64);
            st.backoff -= consumed as u32;
        }
        mac.countdown = None;
        mac.epoch += 1;
    }

    /// Start counting down on station `s`'s slot grid; the medium must be idle.
    fn schedule_countdown(&mut self, s: usize) {
        let node = s + 1;
        let sense = self.sense[node];
        if sense.busy > 0 {
            return;
        }
        let slot = self.profile.slot_us;
        let mut first = sense.idle_since + sense.ifs;
        if first < self.now {
            first += (self.now - first).div_ceil(slot) * slot;
        }
        let tx_at = first + self.stations[s].backoff as u64 * slot;
        let mac = &mut self.macs[s];
        mac.epoch += 1;
        mac.countdown = Some((first, tx_at));
        let epoch = mac.epoch;
        self.push_at(tx_at, EventKind::TxStart { station: s, epoch });
    }

    // ---- event handlers -------------------------------------------------

    fn on_tx_start(&mut self, s: usize, epoch: u64) {
        let mac = &mut self.macs[s];
        if mac.epoch != epoch || mac.phase != Phase::Contending {
            return;
        }
        mac.phase = Phase::Transmitting;
        mac.countdown = None;
        let st = &mut self.stations[s];
        st.backoff = 0;
        let retry = st.begin_attempt();
        let airtime = self.profile.data_airtime_us(st.pending.expect("contending").payload_bytes);
        self.start_tx(s + 1, TxKind::Data { station: s, retry }, airtime);
    }

    fn on_tx_end(&mut self, id: usize) {
        let tx = self.txs[id].take().expect("live transmission");
        self.free_tx.push(id);
        self.active.retain(|&a| a != id);

        match tx.kind {
            TxKind::Data { station, retry } => {
                let snr = self.stations[station].snr_db;
                let decoded = self.hearing.hears(AP, tx.sender)
                    && !tx.ap_overlap
                    && (tx.interferer_db == f64::NEG_INFINITY
                        || self.capture.captures(snr, tx.interferer_db));
                log::trace!(
                    "t={} sta{} retry={} decoded={} interferer={:.1}",
                    self.now,
                    station + 1,
                    retry,
                    decoded,
                    tx.interferer_db
                );
                let mac = &mut self.macs[station];
                mac.phase = Phase::AwaitingAck;
                mac.epoch += 1;
                let epoch = mac.epoch;
                self.push(self.profile.ack_timeout_us(), EventKind::AckTimeout { station, epoch });
                if decoded {
                    self.push(self.profile.sifs_us, EventKind::AckStart { station });
                    self.ap_counters.record_sniffed(retry);
                    for v in 0..self.stations.len() {
                        if v != station && self.hearing.hears(v + 1, tx.sender) {
                            self.sta_counters[v].record_sniffed(retry);
                        }
                    }
                }
            }
            TxKind::Ack { to } => {
                if self.macs[to].phase == Phase::AwaitingAck && self.hearing.hears(to + 1, AP) {
                    let bytes = self.stations[to].on_success();
                    self.interval_bytes[to] += bytes as u64;
                    self.macs[to].epoch += 1;
                    self.frame_done(to);
                }
            }
            TxKind::Beacon => {}
        }

        for v in 0..self.hearing.nodes() {
            if v == tx.sender || self.hearing.hears(v, tx.sender) {
                let s = &mut self.sense[v];
                s.busy -= 1;
                if s.busy == 0 {
                    self.become_idle(v);
                }
            }
        }
    }

    fn on_ack_start(&mut self, station: usize) {
        self.start_tx(AP, TxKind::Ack { to: station }, self.profile.ack_us);
    }

    fn on_ack_timeout(&mut self, s: usize, epoch: u64) {
        let mac = &self.macs[s];
        if mac.epoch != epoch || mac.phase != Phase::AwaitingAck {
            return;
        }
        match self.stations[s].on_failure() {
            FailureOutcome::Retry => {
                self.macs[s].phase = Phase::Contending;
                self.schedule_countdown(s);
            }
            FailureOutcome::Dropped => {
                self.interval_drops += 1;
                self.interval_drops_by[s] += 1;
                self.frame_done(s);
            }
        }
    }

    /// The current frame left the queue (acknowledged or dropped).
    fn frame_done(&mut self, s: usize) {
        let next = match self.traffic[s].model {
            TrafficModel::Saturated => true,
            TrafficModel::Silent => false,
            TrafficModel::OnOff { mean_silence_s, .. } => {
                let t = &mut self.traffic[s];
                t.frames_left = t.frames_left.saturating_sub(1);
                if t.frames_left > 0 {
                    true
                } else {
                    let delay = self.now - t.burst_start;
                    self.delays_us[s].push(delay);
                    let wait = self.draw_silence(s, mean_silence_s);
                    self.push(wait, EventKind::TrafficOn { station: s });
                    false
                }
            }
        };
        if next {
            let frame = self.frame();
            self.stations[s].enqueue(frame);
            self.macs[s].phase = Phase::Contending;
            self.schedule_countdown(s);
        } else {
            self.macs[s].phase = Phase::NoFrame;
        }
    }

    fn on_traffic_on(&mut self, s: usize) {
        let TrafficModel::OnOff { burst_bytes, .. } = self.traffic[s].model else { return };
        if self.macs[s].phase != Phase::NoFrame {
            return;
        }
        let t = &mut self.traffic[s];
        t.frames_left = burst_bytes.div_ceil(self.payload as u64).max(1);
        t.burst_start = self.now;
        let frame = self.frame();
        self.stations[s].enqueue(frame);
        self.macs[s].phase = Phase::Contending;
        self.schedule_countdown(s);
    }

    fn on_beacon_attempt(&mut self) {
        let sense = self.sense[AP];
        if !self.beacon_pending || sense.busy > 0 {
            return;
        }
        if self.now < sense.idle_since + self.profile.pifs_us() {
            return;
        }
        self.beacon_pending = false;
        self.ap_beacons_sent += 1;
        self.start_tx(AP, TxKind::Beacon, self.profile.beacon_airtime_us);
    }

    fn on_beacon_tick(&mut self) -> BeaconReport {
        self.beacon_index += 1;
        let t_ms = self.now / 1000;
        let n = self.stations.len();
        let max_retry = self.profile.max_retry;

        for (c, st) in self.sta_counters.iter_mut().zip(&self.stations) {
            c.load_driver(&st.driver, max_retry);
        }

        let mut trace = Vec::with_capacity(n + 1);
        let ap_p_obs = estimate_p_obs_with::<f64>(&self.ap_counters, self.defer_threshold);
        match &mut self.control {
            Control::Cac(cac) => {
                let out = cac.step(&self.ap_counters);
                trace.push(TraceRecord {
                    t_ms,
                    node: NodeId::Ap,
                    p_obs: out.p_obs,
                    p_own: None,
                    error: out.error,
                    cw_real: Some(cac.state.cw_real),
                    cw_quantized: out.broadcast_cw,
                });
                for st in &mut self.stations {
                    st.set_cw_min(out.broadcast_cw, &self.profile);
                }
            }
            _ => trace.push(TraceRecord {
                t_ms,
                node: NodeId::Ap,
                p_obs: ap_p_obs,
                p_own: None,
                error: None,
                cw_real: None,
                cw_quantized: self.stations[0].cw_min,
            }),
        }

        for s in 0..n {
            let counters = self.sta_counters[s];
            let record = match &mut self.control {
                Control::Dac(ctrls) => {
                    let ctrl = &mut ctrls[s];
                    let out = ctrl
                        .step(&counters, max_retry, self.interval_drops_by[s])
                        .expect("driver accounting is consistent");
                    self.stations[s].set_cw_min(out.local_cw, &self.profile);
                    TraceRecord {
                        t_ms,
                        node: NodeId::Station(s),
                        p_obs: out.p_obs,
                        p_own: out.p_own,
                        error: out.error,
                        cw_real: Some(ctrl.state.cw_real),
                        cw_quantized: out.local_cw,
                    }
                }
                _ => TraceRecord {
                    t_ms,
                    node: NodeId::Station(s),
                    p_obs: estimate_p_obs_with::<f64>(&counters, self.defer_threshold),
                    p_own: estimate_p_own::<f64>(&counters, max_retry, self.interval_drops_by[s])
                        .expect("driver accounting is consistent"),
                    error: None,
                    cw_real: None,
                    cw_quantized: self.stations[s].cw_min,
                },
            };
            trace.push(record);
        }

        if self.interval_drops > 0 {
            log::debug!(
                "interval {}: {} frames exceeded the retry limit",
                self.beacon_index,
                self.interval_drops
            );
        }

        let report = BeaconReport {
            index: self.beacon_index,
            t_us: self.now,
            trace,
            delivered_bytes: std::mem::replace(&mut self.interval_bytes, vec![0; n]),
            drops: std::mem::take(&mut self.interval_drops),
            drops_by_station: std::mem::replace(&mut self.interval_drops_by, vec![0; n]),
            ap_counters: self.ap_counters,
            station_counters: self.sta_counters.clone(),
            committed_cw: self.stations.iter().map(|s| s.cw_min).collect(),
        };

        self.ap_counters.roll();
        for c in &mut self.sta_counters {
            c.roll();
        }

        if self.profile.beacon_airtime_us > 0 {
            self.beacon_pending = true;
            let sense = self.sense[AP];
            if sense.busy == 0 {
                let at = self.now.max(sense.idle_since + self.profile.pifs_us());
                self.push_at(at, EventKind::BeaconAttempt);
            }
        }
        self.push(self.profile.beacon_interval_us, EventKind::BeaconTick);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, control: ControlMode) -> WorldConfig {
        WorldConfig {
            profile: PhyProfile::default(),
            payload_bytes: 1500,
            snr_db: vec![30.0; n],
            hearing: HearingMatrix::full(n),
            capture: CaptureModel::none(),
            traffic: vec![TrafficModel::Saturated; n],
            control,
            gains_override: None,
            defer_threshold: 20,
            seed: 7,
        }
    }

    #[test]
    fn lone_station_never_sees_retries() {
        let mut w = World::new(config(1, ControlMode::Static { cw: 16 })).unwrap();
        for r in w.run_for(2_000_000) {
            assert_eq!(r.ap_counters.r1, 0);
            assert_eq!(r.station_counters[0].r1, 0);
        }
        assert_eq!(w.stations()[0].dropped, 0);
        assert_eq!(w.stations()[0].driver.tx_longretry, 0);
    }

    #[test]
    fn silent_network_defers_cac() {
        let mut cfg = config(3, ControlMode::Cac);
        cfg.traffic = vec![TrafficModel::Silent; 3];
        let mut w = World::new(cfg).unwrap();
        for r in w.run_for(1_000_000) {
            assert_eq!(r.ap_counters, BeaconCounters::default());
            assert_eq!(r.trace[0].p_obs, None);
            assert_eq!(r.trace[0].cw_quantized, 16);
            assert!(r.committed_cw.iter().all(|&c| c == 16));
        }
        // the tenth tick's beacon is still queued
        assert_eq!(w.beacons_sent(), 9);
    }

    #[test]
    fn unreachable_station_delivers_nothing() {
        let mut cfg = config(2, ControlMode::Static { cw: 16 });
        let mut rows = HearingMatrix::full(2).rows();
        for v in 0..3 {
            if v != 2 {
                rows[v][2] = false;
                rows[2][v] = false;
            }
        }
        cfg.hearing = HearingMatrix::from_rows(&rows, false).unwrap();
        let mut w = World::new(cfg).unwrap();
        w.run_for(2_000_000);
        assert_eq!(w.stations()[1].acked, 0);
        assert!(w.stations()[1].attempts > 0);
        assert!(w.stations()[0].acked > 0);
    }

    #[test]
    fn rejects_bad_static_cw() {
        assert!(World::new(config(2, ControlMode::Static { cw: 48 })).is_err());
        assert!(World::new(config(2, ControlMode::Static { cw: 8 })).is_err());
    }
}
