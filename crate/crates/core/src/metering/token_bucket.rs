//! Aggregate token bucket meter.
//!
//! Tokens are bytes and refill continuously at `fill_rate`, computed lazily
//! on each access. Arrivals drain the bucket (never below zero) and are
//! marked while the level sits under `mark_threshold`.

use crate::error::{Error, Result};
use crate::model::{MeterDecision, SimTime};

#[derive(Debug, Clone, PartialEq)]
pub struct TokenBucketState {
    tokens: f64,
    capacity: f64,
    fill_rate: f64,
    mark_threshold: f64,
    last_refill: SimTime,
    /// Burst length `L` in seconds. Descriptive only.
    pub burst_length: Option<f64>,
    /// Generating rate `G` in bytes/second. Descriptive only.
    pub generating_rate: Option<f64>,
}

impl TokenBucketState {
    /// An empty bucket with its clock at zero.
    pub fn new(capacity: f64, fill_rate: f64, mark_threshold: f64) -> Result<Self> {
        if !(capacity > 0.0 && capacity.is_finite()) {
            return Err(Error::InvalidScenario(format!(
                "bucket capacity must be positive, got {capacity}"
            )));
        }
        if !(fill_rate > 0.0 && fill_rate.is_finite()) {
            return Err(Error::InvalidScenario(format!(
                "token rate must be positive, got {fill_rate}"
            )));
        }
        if !(0.0..=capacity).contains(&mark_threshold) {
            return Err(Error::InvalidScenario(format!(
                "mark threshold {mark_threshold} must lie in [0, {capacity}]"
            )));
        }
        Ok(TokenBucketState {
            tokens: 0.0,
            capacity,
            fill_rate,
            mark_threshold,
            last_refill: SimTime::ZERO,
            burst_length: None,
            generating_rate: None,
        })
    }

    pub fn with_tokens(mut self, tokens: f64) -> Self {
        self.tokens = tokens.clamp(0.0, self.capacity);
        self
    }

    pub fn with_clock(mut self, now: SimTime) -> Self {
        self.last_refill = now;
        self
    }

    pub fn tokens(&self) -> f64 {
        self.tokens
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn fill_rate(&self) -> f64 {
        self.fill_rate
    }

    pub fn mark_threshold(&self) -> f64 {
        self.mark_threshold
    }

    pub fn last_refill(&self) -> SimTime {
        self.last_refill
    }

    /// A `now` earlier than the last refill counts as zero elapsed time.
    pub fn refill(&mut self, now: SimTime) {
        let elapsed = now.saturating_sub(self.last_refill).as_secs_f64();
        if elapsed > 0.0 {
            self.tokens = (self.tokens + self.fill_rate * elapsed).min(self.capacity);
        }
        self.last_refill = self.last_refill.max(now);
    }

    pub fn on_arrival(&mut self, size_bytes: u32, now: SimTime) -> MeterDecision {
        self.refill(now);
        self.tokens = (self.tokens - f64::from(size_bytes)).max(0.0);
        if self.tokens < self.mark_threshold {
            MeterDecision::Mark
        } else {
            MeterDecision::Forward
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refill_examples() {
        let mut tb = TokenBucketState::new(10_000.0, 1000.0, 5000.0)
            .unwrap()
            .with_tokens(10_000.0);
        tb.refill(SimTime::from_secs(7));
        assert_eq!(tb.tokens(), 10_000.0);

        let mut tb = TokenBucketState::new(10_000.0, 1000.0, 5000.0).unwrap();
        tb.refill(SimTime::from_millis(500));
        assert_eq!(tb.tokens(), 500.0);
        assert_eq!(tb.last_refill(), SimTime::from_millis(500));

        tb.refill(SimTime::from_millis(500));
        assert_eq!(tb.tokens(), 500.0);
    }

    #[test]
    fn arrival_floors_at_zero() {
        let mut tb = TokenBucketState::new(10_000.0, 1000.0, 500.0)
            .unwrap()
            .with_tokens(600.0);
        assert_eq!(tb.on_arrival(1040, SimTime::ZERO), MeterDecision::Mark);
        assert_eq!(tb.tokens(), 0.0);
    }

    #[test]
    fn backwards_clock_is_ignored() {
        let mut tb = TokenBucketState::new(100.0, 10.0, 50.0)
            .unwrap()
            .with_clock(SimTime::from_secs(5));
        tb.refill(SimTime::from_secs(1));
        assert_eq!(tb.tokens(), 0.0);
        assert_eq!(tb.last_refill(), SimTime::from_secs(5));
    }

    #[test]
    fn rejects_threshold_above_capacity() {
        assert!(TokenBucketState::new(100.0, 10.0, 150.0).is_err());
        assert!(TokenBucketState::new(0.0, 10.0, 0.0).is_err());
        assert!(TokenBucketState::new(100.0, 0.0, 50.0).is_err());
    }
}
