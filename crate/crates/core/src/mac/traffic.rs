/// Offered load of one station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrafficModel {
    /// Always has a frame queued.
    Saturated,
    /// Alternates bursts of `burst_bytes` sent at MAC saturation rate with
    /// exponentially distributed silences of mean `mean_silence_s`.
    OnOff { burst_bytes: u64, mean_silence_s: f64 },
    /// Never transmits.
    Silent,
}

impl TrafficModel {
    pub fn keyword(&self) -> &'static str {
        match self {
            TrafficModel::Saturated => "saturated",
            TrafficModel::OnOff { .. } => "onoff",
            TrafficModel::Silent => "off",
        }
    }
}
