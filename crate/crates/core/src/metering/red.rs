//! Random Early Detection over an EWMA of the instantaneous queue length.
//!
//! Queue length is counted in packets. The marking probability rises
//! linearly from zero at `min_thr` to `max_p` at `max_thr`, and is then
//! spread out by the number of arrivals since the last mark.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::MeterDecision;

pub const DEFAULT_W_Q: f64 = 0.002;
pub const DEFAULT_MIN_THR: f64 = 5.0;
pub const DEFAULT_MAX_THR: f64 = 15.0;
pub const DEFAULT_MAX_P: f64 = 0.1;

/// Which branch of the arrival procedure a given average selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedRegime {
    BelowMin,
    Probabilistic,
    AboveMax,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RedState {
    avg: f64,
    w_q: f64,
    min_thr: f64,
    max_thr: f64,
    max_p: f64,
    count: i64,
}

impl Default for RedState {
    fn default() -> Self {
        RedState::new(DEFAULT_W_Q, DEFAULT_MIN_THR, DEFAULT_MAX_THR, DEFAULT_MAX_P).expect("defaults are valid")
    }
}

impl RedState {
    pub fn new(w_q: f64, min_thr: f64, max_thr: f64, max_p: f64) -> Result<Self> {
        if !(w_q > 0.0 && w_q <= 1.0) {
            return Err(Error::InvalidScenario(format!("red w_q must be in (0, 1], got {w_q}")));
        }
        if !(0.0 < min_thr && min_thr < max_thr && max_thr.is_finite()) {
            return Err(Error::InvalidScenario(format!(
                "red thresholds need 0 < min_thr < max_thr, got {min_thr} / {max_thr}"
            )));
        }
        if !(max_p > 0.0 && max_p <= 1.0) {
            return Err(Error::InvalidScenario(format!(
                "red max_p must be in (0, 1], got {max_p}"
            )));
        }
        Ok(RedState {
            avg: 0.0,
            w_q,
            min_thr,
            max_thr,
            max_p,
            count: -1,
        })
    }

    pub fn avg(&self) -> f64 {
        self.avg
    }

    pub fn count(&self) -> i64 {
        self.count
    }

    pub fn min_thr(&self) -> f64 {
        self.min_thr
    }

    pub fn max_thr(&self) -> f64 {
        self.max_thr
    }

    pub fn max_p(&self) -> f64 {
        self.max_p
    }

    /// Overrides the running average. Negative values clamp to zero.
    pub fn set_avg(&mut self, avg: f64) {
        self.avg = avg.max(0.0);
    }

    pub fn set_count(&mut self, count: i64) {
        self.count = count.max(-1);
    }

    pub fn update_avg(&mut self, instantaneous_queue: usize) -> f64 {
        let q = instantaneous_queue as f64;
        self.avg = (1.0 - self.w_q) * self.avg + self.w_q * q;
        self.avg
    }

    pub fn regime(&self) -> RedRegime {
        if self.avg < self.min_thr {
            RedRegime::BelowMin
        } else if self.avg < self.max_thr {
            RedRegime::Probabilistic
        } else {
            RedRegime::AboveMax
        }
    }

    /// Linear base probability `P_p`; only meaningful in the probabilistic regime.
    pub fn base_probability(&self) -> f64 {
        self.max_p * (self.avg - self.min_thr) / (self.max_thr - self.min_thr)
    }

    /// Count-adjusted probability `P_A`, clamped to 1 once `count * P_p >= 1`.
    pub fn marking_probability(&self) -> f64 {
        let p_b = self.base_probability();
        let spread = self.count as f64 * p_b;
        if spread >= 1.0 {
            1.0
        } else {
            (p_b / (1.0 - spread)).clamp(0.0, 1.0)
        }
    }

    /// One Bernoulli draw at probability `p_a`.
    pub fn draw<R: Rng + ?Sized>(p_a: f64, rng: &mut R) -> MeterDecision {
        if rng.random::<f64>() < p_a {
            MeterDecision::Mark
        } else {
            MeterDecision::Forward
        }
    }

    pub fn on_arrival<R: Rng + ?Sized>(&mut self, queue_len: usize, rng: &mut R) -> MeterDecision {
        self.update_avg(queue_len);
        match self.regime() {
            RedRegime::BelowMin => {
                self.count = -1;
                MeterDecision::Forward
            }
            RedRegime::AboveMax => {
                self.count = 0;
                MeterDecision::Mark
            }
            RedRegime::Probabilistic => {
                self.count += 1;
                let decision = Self::draw(self.marking_probability(), rng);
                if decision == MeterDecision::Mark {
                    self.count = 0;
                }
                decision
            }
        }
    }
}
