use crate::model::SimTime;

const MICROS_PER_SEC: u64 = 1_000_000;

/// Constant-bit-rate spacing with the division remainder carried forward,
/// so that `rate` departures always span exactly one second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CbrClock {
    rate: u32,
    carry: u64,
}

impl CbrClock {
    pub fn new(rate: u32) -> Self {
        assert!(rate > 0, "packet rate must be positive");
        CbrClock { rate, carry: 0 }
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    pub fn next_spacing(&mut self) -> SimTime {
        let total = MICROS_PER_SEC + self.carry;
        let rate = u64::from(self.rate);
        self.carry = total % rate;
        SimTime::from_micros(total / rate)
    }
}

/// Periodic global generator pause: active for `interval`, then silent for
/// `length`, repeating from time zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauseSchedule {
    pub interval: SimTime,
    pub length: SimTime,
}

impl PauseSchedule {
    pub fn new(interval: SimTime, length: SimTime) -> Self {
        PauseSchedule { interval, length }
    }

    fn enabled(&self) -> bool {
        self.interval > SimTime::ZERO && self.length > SimTime::ZERO
    }

    fn period(&self) -> u64 {
        self.interval.as_micros() + self.length.as_micros()
    }

    /// End of the pause containing `t`, if `t` falls inside one.
    pub fn pause_end_at(&self, t: SimTime) -> Option<SimTime> {
        if !self.enabled() {
            return None;
        }
        let period = self.period();
        let phase = t.as_micros() % period;
        (phase >= self.interval.as_micros()).then(|| SimTime::from_micros(t.as_micros() - phase + period))
    }

    pub fn is_paused(&self, t: SimTime) -> bool {
        self.pause_end_at(t).is_some()
    }

    /// Pause windows `[start, end)` that begin before `horizon`.
    pub fn windows_before(&self, horizon: SimTime) -> Vec<(SimTime, SimTime)> {
        if !self.enabled() {
            return Vec::new();
        }
        let period = self.period();
        (0..)
            .map(|k| k * period + self.interval.as_micros())
            .take_while(|&start| start < horizon.as_micros())
            .map(|start| {
                (
                    SimTime::from_micros(start),
                    SimTime::from_micros(start + self.length.as_micros()),
                )
            })
            .collect()
    }
}

/// Next CBR departure after `now`, deferred to the pause end when it would
/// land inside a pause window.
pub fn cbr_next_departure(clock: &mut CbrClock, now: SimTime, pauses: &PauseSchedule) -> SimTime {
    let t = now + clock.next_spacing();
    pauses.pause_end_at(t).unwrap_or(t)
}
