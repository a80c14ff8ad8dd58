//! Sliding-window bandwidth meter.
//!
//! The window is half-open: a record stamped `t` counts toward a query at
//! `now` iff `now - mi < t <= now`.

use std::collections::VecDeque;

use crate::model::{MeterDecision, SimTime};

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthMeterState {
    window: VecDeque<(SimTime, u32)>,
    window_bytes: u64,
    mi: SimTime,
    b_thr: f64,
}

/// Scales a byte total over an interval to bits/second.
pub fn window_rate(bytes: u64, mi: SimTime) -> f64 {
    (bytes * 8) as f64 / mi.as_secs_f64()
}

impl BandwidthMeterState {
    /// `mi` must be non-zero.
    pub fn new(mi: SimTime, b_thr: f64) -> Self {
        assert!(mi > SimTime::ZERO, "measurement interval must be positive");
        BandwidthMeterState {
            window: VecDeque::new(),
            window_bytes: 0,
            mi,
            b_thr,
        }
    }

    pub fn mi(&self) -> SimTime {
        self.mi
    }

    pub fn threshold(&self) -> f64 {
        self.b_thr
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &(SimTime, u32)> {
        self.window.iter()
    }

    fn evict(&mut self, now: SimTime) {
        while let Some(&(ts, bytes)) = self.window.front() {
            if ts + self.mi <= now {
                self.window.pop_front();
                self.window_bytes -= u64::from(bytes);
            } else {
                break;
            }
        }
    }

    /// Appends a record. Timestamps must not go backwards.
    pub fn record(&mut self, now: SimTime, bytes: u32) {
        debug_assert!(self.window.back().is_none_or(|&(ts, _)| ts <= now));
        self.window.push_back((now, bytes));
        self.window_bytes += u64::from(bytes);
    }

    pub fn measure(&mut self, now: SimTime) -> f64 {
        self.evict(now);
        window_rate(self.window_bytes, self.mi)
    }

    pub fn on_arrival(&mut self, size_bytes: u32, now: SimTime) -> MeterDecision {
        self.record(now, size_bytes);
        if self.measure(now) > self.b_thr {
            MeterDecision::Mark
        } else {
            MeterDecision::Forward
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MI: SimTime = SimTime::from_millis(100);

    #[test]
    fn empty_is_zero() {
        let mut bm = BandwidthMeterState::new(MI, 1e6);
        assert_eq!(bm.measure(SimTime::from_secs(3)), 0.0);
    }

    #[test]
    fn single_record() {
        let mut bm = BandwidthMeterState::new(MI, 1e6);
        bm.record(SimTime::from_millis(50), 1040);
        assert_eq!(bm.measure(SimTime::from_millis(60)), 83_200.0);
    }

    #[test]
    fn record_at_exact_age_mi_is_excluded() {
        let mut bm = BandwidthMeterState::new(MI, 1e6);
        bm.record(SimTime::from_millis(50), 1040);
        assert_eq!(bm.measure(SimTime::from_micros(149_999)), 83_200.0);
        assert_eq!(bm.measure(SimTime::from_millis(150)), 0.0);
        assert!(bm.is_empty());
    }

    #[test]
    fn load_below_threshold_forwards() {
        // 100 pkt/s of 1040 B is 832 kbit/s; threshold twice that.
        let mut bm = BandwidthMeterState::new(MI, 2.0 * 832_000.0);
        for i in 0..1000u64 {
            let d = bm.on_arrival(1040, SimTime::from_millis(10 * i));
            assert_eq!(d, MeterDecision::Forward);
        }
    }

    #[test]
    fn load_above_threshold_marks_after_warmup() {
        let mut bm = BandwidthMeterState::new(MI, 832_000.0 / 2.0);
        for i in 0..1000u64 {
            let now = SimTime::from_millis(10 * i);
            let d = bm.on_arrival(1040, now);
            if now >= MI {
                assert_eq!(d, MeterDecision::Mark, "at {now}");
            }
        }
    }

    #[test]
    fn lone_packet_after_idle_forwards() {
        let mut bm = BandwidthMeterState::new(MI, 100_000.0);
        for i in 0..50u64 {
            bm.on_arrival(1040, SimTime::from_millis(i));
        }
        assert_eq!(bm.on_arrival(1040, SimTime::from_secs(10)), MeterDecision::Forward);
        assert_eq!(bm.len(), 1);
    }
}
