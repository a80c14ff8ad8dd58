//! Additional-buffer technique: rate classification into two priorities,
//! a shared bounded buffer, and a weighted deficit round robin scheduler.

use std::collections::VecDeque;

use super::bandwidth::BandwidthMeterState;
use crate::error::{Error, Result};
use crate::model::{Packet, Priority, SimTime};

pub const DEFAULT_BUFFER_CAPACITY: usize = 50;

/// Bytes of credit a weight of 1.0 earns per scheduling turn.
const BASE_QUANTUM: f64 = 10.0 * 1040.0;

/// Threshold rate `Tr`: midpoint of the admissible and objective rates.
pub fn ab_compute_threshold(ar: f64, or: f64) -> Result<f64> {
    if ar > or {
        return Err(Error::AdmissibleAboveObjective { ar, or });
    }
    Ok((ar + or) / 2.0)
}

/// `(Wd, Wb)` with `Wb = Tr/Or` and `Wd = 1 - Wb`.
pub fn ab_weights(tr: f64, or: f64) -> Result<(f64, f64)> {
    if !(or > 0.0 && tr > 0.0 && tr <= or) {
        return Err(Error::InvalidThresholdRate { tr, or });
    }
    let wb = tr / or;
    let wd = 1.0 - wb;
    Ok((wd, wb))
}

#[derive(Debug, Clone, PartialEq)]
pub enum AbArrival {
    Enqueued(Priority),
    Dropped(Packet),
}

#[derive(Debug, Clone)]
pub struct AdditionalBufferState {
    tr: f64,
    wd: f64,
    wb: f64,
    accepted: VecDeque<Packet>,
    degraded: VecDeque<Packet>,
    capacity: usize,
    rate_estimator: BandwidthMeterState,
    deficit: [f64; 2],
    current: Priority,
    turn_open: bool,
}

fn slot(p: Priority) -> usize {
    match p {
        Priority::Accepted => 0,
        Priority::Degraded => 1,
    }
}

fn other(p: Priority) -> Priority {
    match p {
        Priority::Accepted => Priority::Degraded,
        Priority::Degraded => Priority::Accepted,
    }
}

impl AdditionalBufferState {
    pub fn new(ar: f64, or: f64, capacity: usize, mi: SimTime) -> Result<Self> {
        let tr = ab_compute_threshold(ar, or)?;
        let (wd, wb) = ab_weights(tr, or)?;
        if capacity == 0 {
            return Err(Error::InvalidScenario(
                "additional buffer capacity must be positive".into(),
            ));
        }
        Ok(AdditionalBufferState {
            tr,
            wd,
            wb,
            accepted: VecDeque::new(),
            degraded: VecDeque::new(),
            capacity,
            rate_estimator: BandwidthMeterState::new(mi, tr),
            deficit: [0.0; 2],
            current: Priority::Accepted,
            turn_open: false,
        })
    }

    pub fn threshold_rate(&self) -> f64 {
        self.tr
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.wd, self.wb)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.accepted.len() + self.degraded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn queue_len(&self, p: Priority) -> usize {
        match p {
            Priority::Accepted => self.accepted.len(),
            Priority::Degraded => self.degraded.len(),
        }
    }

    fn queue_mut(&mut self, p: Priority) -> &mut VecDeque<Packet> {
        match p {
            Priority::Accepted => &mut self.accepted,
            Priority::Degraded => &mut self.degraded,
        }
    }

    fn quantum(&self, p: Priority) -> f64 {
        match p {
            Priority::Accepted => self.wb * BASE_QUANTUM,
            Priority::Degraded => self.wd * BASE_QUANTUM,
        }
    }

    pub fn on_arrival(&mut self, mut pkt: Packet, now: SimTime) -> AbArrival {
        self.rate_estimator.record(now, pkt.size_bytes);
        let rate = self.rate_estimator.measure(now);
        let class = if rate <= self.tr {
            Priority::Accepted
        } else {
            Priority::Degraded
        };
        if self.len() >= self.capacity {
            return AbArrival::Dropped(pkt);
        }
        pkt.priority = class;
        if class == Priority::Degraded {
            pkt.mark();
        }
        self.queue_mut(class).push_back(pkt);
        AbArrival::Enqueued(class)
    }

    /// Next packet to transmit, or `None` when both queues are empty.
    pub fn schedule_next(&mut self) -> Option<Packet> {
        match (self.accepted.is_empty(), self.degraded.is_empty()) {
            (true, true) => {
                self.deficit = [0.0; 2];
                self.turn_open = false;
                None
            }
            (false, true) => {
                self.deficit[slot(Priority::Degraded)] = 0.0;
                self.accepted.pop_front()
            }
            (true, false) => {
                self.deficit[slot(Priority::Accepted)] = 0.0;
                self.degraded.pop_front()
            }
            (false, false) => loop {
                let q = self.current;
                if !self.turn_open {
                    self.deficit[slot(q)] += self.quantum(q);
                    self.turn_open = true;
                }
                let head = f64::from(self.queue_mut(q).front().map_or(0, |p| p.size_bytes));
                if self.deficit[slot(q)] >= head {
                    self.deficit[slot(q)] -= head;
                    return self.queue_mut(q).pop_front();
                }
                self.current = other(q);
                self.turn_open = false;
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EcnCodepoint, FlowId};
    use proptest::prelude::*;

    fn pkt(id: u64) -> Packet {
        Packet::new(id, FlowId(0), 1040, EcnCodepoint::Ect0, SimTime::ZERO)
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(ab_compute_threshold(100.0, 100.0).unwrap(), 100.0);
        assert_eq!(ab_compute_threshold(60e6, 100e6).unwrap(), 80e6);
        assert_eq!(ab_compute_threshold(0.0, 100.0).unwrap(), 50.0);
        assert!(ab_compute_threshold(101.0, 100.0).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(ab_weights(100.0, 100.0).unwrap(), (0.0, 1.0));
        let (wd, wb) = ab_weights(80.0, 100.0).unwrap();
        assert!((wd - 0.2).abs() < 1e-12 && (wb - 0.8).abs() < 1e-12);
        assert!(ab_weights(120.0, 100.0).is_err());
        assert!(ab_weights(10.0, 0.0).is_err());
    }

    fn state(ar: f64, or: f64, cap: usize) -> AdditionalBufferState {
        AdditionalBufferState::new(ar, or, cap, SimTime::from_millis(100)).unwrap()
    }

    #[test]
    fn full_buffer_drops() {
        let mut ab = state(1e9, 1e9, 3);
        for i in 0..3 {
            assert_eq!(
                ab.on_arrival(pkt(i), SimTime::ZERO),
                AbArrival::Enqueued(Priority::Accepted)
            );
        }
        assert!(matches!(ab.on_arrival(pkt(3), SimTime::ZERO), AbArrival::Dropped(p) if p.id == 3));
        assert_eq!(ab.len(), 3);
    }

    #[test]
    fn classification_by_rate() {
        // 10 kbit/s threshold: the first 1040 B packet already measures 83.2 kbit/s.
        let mut ab = state(6_000.0, 14_000.0, 10);
        assert_eq!(
            ab.on_arrival(pkt(0), SimTime::ZERO),
            AbArrival::Enqueued(Priority::Degraded)
        );
        let out = ab.schedule_next().unwrap();
        assert!(out.pcn_marked());
        assert_eq!(out.priority, Priority::Degraded);

        let mut ab = state(1e6, 1e6, 10);
        assert_eq!(
            ab.on_arrival(pkt(0), SimTime::ZERO),
            AbArrival::Enqueued(Priority::Accepted)
        );
        assert!(!ab.schedule_next().unwrap().pcn_marked());
    }

    #[test]
    fn scheduler_empty_and_single_queue() {
        let mut ab = state(6_000.0, 14_000.0, 10);
        assert!(ab.schedule_next().is_none());
        let mut ab = state(1e9, 1e9, 10);
        ab.on_arrival(pkt(7), SimTime::ZERO);
        assert_eq!(ab.schedule_next().unwrap().id, 7);
        assert!(ab.schedule_next().is_none());
    }

    #[test]
    fn zero_weight_queue_still_drains_alone() {
        let mut ab = state(6_000.0, 14_000.0, 10);
        ab.wb = 1.0;
        ab.wd = 0.0;
        ab.on_arrival(pkt(1), SimTime::ZERO);
        assert_eq!(ab.schedule_next().unwrap().id, 1);
    }

    /// Pushes directly into both queues and counts which one each dequeue serves.
    fn saturated_share(wd: f64, wb: f64, dequeues: usize) -> f64 {
        let mut ab = state(1e6, 1e6, usize::MAX);
        ab.wd = wd;
        ab.wb = wb;
        for i in 0..dequeues as u64 {
            let mut a = pkt(i);
            a.priority = Priority::Accepted;
            ab.accepted.push_back(a);
            let mut d = pkt(i);
            d.priority = Priority::Degraded;
            ab.degraded.push_back(d);
        }
        let served_accepted = (0..dequeues)
            .filter(|_| ab.schedule_next().unwrap().priority == Priority::Accepted)
            .count();
        served_accepted as f64 / dequeues as f64
    }

    #[test]
    fn weighted_share_under_saturation() {
        let share = saturated_share(0.2, 0.8, 1000);
        assert!((share - 0.8).abs() <= 0.02, "share {share}");
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(ar in 0.0f64..1e9, extra in 0.0f64..1e9) {
            let or = ar + extra;
            prop_assume!(or > 0.0);
            let tr = ab_compute_threshold(ar, or).unwrap();
            let (wd, wb) = ab_weights(tr, or).unwrap();
            prop_assert_eq!(wd + wb, 1.0);
            prop_assert!((0.0..=1.0).contains(&wd));
            prop_assert!((0.0..=1.0).contains(&wb));
        }

        #[test]
        fn share_tracks_weight(wb in 0.3f64..0.95) {
            let share = saturated_share(1.0 - wb, wb, 2000);
            prop_assert!((share - wb).abs() <= 0.02, "wb {} share {}", wb, share);
        }

        #[test]
        fn occupancy_bounded(arrivals in proptest::collection::vec((0u64..5_000, any::<bool>()), 1..400), cap in 1usize..60) {
            let mut ab = state(4e6, 6e6, cap);
            let mut now = 0u64;
            let mut enq = 0usize;
            let mut dropped = 0usize;
            let mut served = 0usize;
            for (gap, serve) in arrivals {
                now += gap;
                match ab.on_arrival(pkt(now), SimTime::from_micros(now)) {
                    AbArrival::Enqueued(_) => enq += 1,
                    AbArrival::Dropped(_) => dropped += 1,
                }
                if serve && ab.schedule_next().is_some() {
                    served += 1;
                }
                prop_assert!(ab.len() <= cap);
            }
            prop_assert_eq!(enq, served + ab.len());
            let _ = dropped;
        }
    }
}
