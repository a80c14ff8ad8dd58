use crate::error::{Error, Result};
use crate::model::SimTime;

pub const DEFAULT_CLE_WEIGHT: f64 = 0.9;
pub const DEFAULT_ADMIT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Admit,
    Block,
}

/// What the egress tells the ingress.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissionSignal {
    pub verdict: Verdict,
    pub issued_at: SimTime,
    pub cle_snapshot: f64,
}

impl AdmissionSignal {
    /// The signal an ingress assumes before hearing from its egress.
    pub fn initial() -> Self {
        AdmissionSignal {
            verdict: Verdict::Admit,
            issued_at: SimTime::ZERO,
            cle_snapshot: 0.0,
        }
    }
}

/// Congestion level estimator: an EWMA over per-packet mark bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CleEstimator {
    cle: f64,
    cle_w: f64,
    admit_threshold: f64,
}

impl Default for CleEstimator {
    fn default() -> Self {
        CleEstimator::new(DEFAULT_CLE_WEIGHT, DEFAULT_ADMIT_THRESHOLD).expect("defaults are valid")
    }
}

impl CleEstimator {
    pub fn new(cle_w: f64, admit_threshold: f64) -> Result<Self> {
        if !(cle_w > 0.0 && cle_w < 1.0) {
            return Err(Error::InvalidScenario(format!("cle_w must be in (0, 1), got {cle_w}")));
        }
        if !(admit_threshold > 0.0 && admit_threshold < 1.0) {
            return Err(Error::InvalidScenario(format!(
                "admit_threshold must be in (0, 1), got {admit_threshold}"
            )));
        }
        Ok(CleEstimator {
            cle: 0.0,
            cle_w,
            admit_threshold,
        })
    }

    /// Starts from an arbitrary level in `[0, 1]`.
    pub fn with_level(mut self, cle: f64) -> Self {
        self.cle = cle.clamp(0.0, 1.0);
        self
    }

    pub fn cle(&self) -> f64 {
        self.cle
    }

    pub fn weight(&self) -> f64 {
        self.cle_w
    }

    pub fn admit_threshold(&self) -> f64 {
        self.admit_threshold
    }

    /// Folds in one observation; `marked` is the threshold bit.
    pub fn update(&mut self, marked: bool) -> f64 {
        let thr = if marked { 1.0 } else { 0.0 };
        self.cle = thr * (1.0 - self.cle_w) + self.cle_w * self.cle;
        self.cle
    }

    pub fn feedback(&self, now: SimTime) -> AdmissionSignal {
        let verdict = if self.cle >= self.admit_threshold {
            Verdict::Block
        } else {
            Verdict::Admit
        };
        AdmissionSignal {
            verdict,
            issued_at: now,
            cle_snapshot: self.cle,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn update_examples() {
        let mut e = CleEstimator::default();
        assert_eq!(e.update(false), 0.0);

        let mut e = CleEstimator::default().with_level(1.0);
        assert_eq!(e.update(true), 1.0);

        let mut e = CleEstimator::new(0.9, 0.5).unwrap().with_level(0.5);
        assert!((e.update(true) - 0.55).abs() < 1e-12);
    }

    #[test]
    fn feedback_examples() {
        let t = SimTime::from_secs(4);
        assert_eq!(CleEstimator::default().feedback(t).verdict, Verdict::Admit);
        let s = CleEstimator::default().with_level(1.0).feedback(t);
        assert_eq!(s.verdict, Verdict::Block);
        assert_eq!(s.cle_snapshot, 1.0);
        assert_eq!(s.issued_at, t);
        assert_eq!(
            CleEstimator::default().with_level(0.5).feedback(t).verdict,
            Verdict::Block
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CleEstimator::new(1.0, 0.5).is_err());
        assert!(CleEstimator::new(0.0, 0.5).is_err());
        assert!(CleEstimator::new(0.9, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn stays_in_unit_interval(bits in proptest::collection::vec(any::<bool>(), 0..500), w in 0.01f64..0.99, start in 0.0f64..=1.0) {
            let mut e = CleEstimator::new(w, 0.5).unwrap().with_level(start);
            for b in bits {
                let c = e.update(b);
                prop_assert!((0.0..=1.0).contains(&c));
            }
        }

        #[test]
        fn block_iff_snapshot_at_or_above_threshold(level in 0.0f64..=1.0, thr in 0.01f64..0.99) {
            let s = CleEstimator::new(0.9, thr).unwrap().with_level(level).feedback(SimTime::ZERO);
            prop_assert_eq!(s.verdict == Verdict::Block, s.cle_snapshot >= thr);
        }
    }
}
