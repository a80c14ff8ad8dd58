//! Interior metering and marking disciplines.
//!
//! Every technique answers a packet arrival with a [`MeterDecision`]. The
//! additional-buffer technique also owns the link queue and its scheduler.

pub mod additional_buffer;
pub mod bandwidth;
pub mod ecn;
pub mod red;
pub mod token_bucket;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use additional_buffer::{ab_compute_threshold, ab_weights, AbArrival, AdditionalBufferState};
pub use bandwidth::BandwidthMeterState;
pub use ecn::ecn_on_arrival;
pub use red::{RedRegime, RedState};
pub use token_bucket::TokenBucketState;

use crate::error::{Error, Result};
use crate::model::{LinkConfig, MeterDecision, Packet, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technique {
    AdditionalBuffer,
    Ecn,
    TokenBucket,
    BandwidthMetering,
    Red,
}

impl Technique {
    /// Benchmark table order.
    pub const ALL: [Technique; 5] = [
        Technique::AdditionalBuffer,
        Technique::Ecn,
        Technique::TokenBucket,
        Technique::BandwidthMetering,
        Technique::Red,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Technique::AdditionalBuffer => "ab",
            Technique::Ecn => "ecn",
            Technique::TokenBucket => "tb",
            Technique::BandwidthMetering => "bm",
            Technique::Red => "red",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Technique::AdditionalBuffer => "AB",
            Technique::Ecn => "ECN",
            Technique::TokenBucket => "TB",
            Technique::BandwidthMetering => "BM",
            Technique::Red => "RED",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = match s.trim().to_ascii_lowercase().as_str() {
            "red" => Technique::Red,
            "ecn" => Technique::Ecn,
            "tb" | "token_bucket" => Technique::TokenBucket,
            "bm" | "bandwidth_metering" => Technique::BandwidthMetering,
            "ab" | "additional_buffer" => Technique::AdditionalBuffer,
            _ => {
                return Err(Error::InvalidScenario(format!(
                    "unknown technique `{s}` (expected one of: red, ecn, tb, bm, ab)"
                )))
            }
        };
        Ok(t)
    }
}

/// Tunables for all five meters; each link derives its own instance from these.
#[derive(Debug, Clone, PartialEq)]
pub struct MeterParams {
    pub red_w_q: f64,
    pub red_min_thr: f64,
    pub red_max_thr: f64,
    pub red_max_p: f64,
    /// Bucket depth expressed as time at the token rate.
    pub tb_depth: SimTime,
    /// Marking threshold as a fraction of the bucket depth.
    pub tb_mark_fraction: f64,
    pub bm_mi: SimTime,
    /// `B_Thr` as a fraction of the admissible rate.
    pub bm_threshold_fraction: f64,
    pub ab_capacity: usize,
}

impl Default for MeterParams {
    fn default() -> Self {
        MeterParams {
            red_w_q: red::DEFAULT_W_Q,
            red_min_thr: red::DEFAULT_MIN_THR,
            red_max_thr: red::DEFAULT_MAX_THR,
            red_max_p: red::DEFAULT_MAX_P,
            tb_depth: SimTime::from_millis(100),
            tb_mark_fraction: 0.5,
            bm_mi: SimTime::from_millis(100),
            bm_threshold_fraction: 1.0,
            ab_capacity: additional_buffer::DEFAULT_BUFFER_CAPACITY,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Meter {
    Red(RedState),
    Ecn(RedState),
    TokenBucket(TokenBucketState),
    BandwidthMetering(BandwidthMeterState),
    AdditionalBuffer(AdditionalBufferState),
}

impl Meter {
    pub fn build(technique: Technique, link: &LinkConfig, params: &MeterParams) -> Result<Meter> {
        let red = || RedState::new(params.red_w_q, params.red_min_thr, params.red_max_thr, params.red_max_p);
        let meter = match technique {
            Technique::Red => Meter::Red(red()?),
            Technique::Ecn => Meter::Ecn(red()?),
            Technique::TokenBucket => {
                let rate = link.admissible_rate() / 8.0;
                let depth = rate * params.tb_depth.as_secs_f64();
                if !(0.0..=1.0).contains(&params.tb_mark_fraction) {
                    return Err(Error::InvalidScenario("tb_mark_fraction must be in [0, 1]".into()));
                }
                Meter::TokenBucket(TokenBucketState::new(depth, rate, depth * params.tb_mark_fraction)?)
            }
            Technique::BandwidthMetering => {
                if params.bm_mi == SimTime::ZERO {
                    return Err(Error::InvalidScenario("bm_mi must be positive".into()));
                }
                Meter::BandwidthMetering(BandwidthMeterState::new(
                    params.bm_mi,
                    link.admissible_rate() * params.bm_threshold_fraction,
                ))
            }
            Technique::AdditionalBuffer => Meter::AdditionalBuffer(AdditionalBufferState::new(
                link.admissible_rate(),
                link.objective_rate(),
                params.ab_capacity,
                params.bm_mi,
            )?),
        };
        Ok(meter)
    }

    pub fn technique(&self) -> Technique {
        match self {
            Meter::Red(_) => Technique::Red,
            Meter::Ecn(_) => Technique::Ecn,
            Meter::TokenBucket(_) => Technique::TokenBucket,
            Meter::BandwidthMetering(_) => Technique::BandwidthMetering,
            Meter::AdditionalBuffer(_) => Technique::AdditionalBuffer,
        }
    }

    /// Verdict for the packet-at-a-time techniques. ECN may rewrite the
    /// codepoint. The additional buffer has no plain verdict and returns `None`.
    pub fn decide<R: Rng + ?Sized>(
        &mut self,
        pkt: &mut Packet,
        queue_len: usize,
        now: SimTime,
        rng: &mut R,
    ) -> Option<MeterDecision> {
        let d = match self {
            Meter::Red(red) => red.on_arrival(queue_len, rng),
            Meter::Ecn(red) => ecn_on_arrival(red, pkt, queue_len, rng),
            Meter::TokenBucket(tb) => tb.on_arrival(pkt.size_bytes, now),
            Meter::BandwidthMetering(bm) => bm.on_arrival(pkt.size_bytes, now),
            Meter::AdditionalBuffer(_) => return None,
        };
        Some(d)
    }
}
