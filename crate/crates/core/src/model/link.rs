use crate::error::{Error, Result};

/// Capacity and PCN rate thresholds of one interior link, all in bits/second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    capacity_bps: f64,
    admissible_rate: f64,
    supportable_rate: f64,
    objective_rate: f64,
}

impl LinkConfig {
    pub fn new(capacity_bps: f64, admissible_rate: f64, supportable_rate: f64, objective_rate: f64) -> Result<Self> {
        let all_finite = [capacity_bps, admissible_rate, supportable_rate, objective_rate]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidLink("rates must be finite".into()));
        }
        if !(0.0 < admissible_rate && admissible_rate <= supportable_rate && supportable_rate <= capacity_bps) {
            return Err(Error::InvalidLink(format!(
                "need 0 < Ar ({admissible_rate}) <= Sr ({supportable_rate}) <= capacity ({capacity_bps})"
            )));
        }
        if !(admissible_rate <= objective_rate && objective_rate <= capacity_bps) {
            return Err(Error::InvalidLink(format!(
                "need Ar ({admissible_rate}) <= Or ({objective_rate}) <= capacity ({capacity_bps})"
            )));
        }
        Ok(LinkConfig {
            capacity_bps,
            admissible_rate,
            supportable_rate,
            objective_rate,
        })
    }

    /// Thresholds as fractions of capacity.
    pub fn from_fractions(capacity_bps: f64, ar: f64, sr: f64, or: f64) -> Result<Self> {
        LinkConfig::new(capacity_bps, capacity_bps * ar, capacity_bps * sr, capacity_bps * or)
    }

    pub fn capacity_bps(&self) -> f64 {
        self.capacity_bps
    }

    pub fn admissible_rate(&self) -> f64 {
        self.admissible_rate
    }

    pub fn supportable_rate(&self) -> f64 {
        self.supportable_rate
    }

    pub fn objective_rate(&self) -> f64 {
        self.objective_rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_ordered_thresholds() {
        let l = LinkConfig::from_fractions(60e6, 0.7, 0.9, 0.9).unwrap();
        assert_eq!(l.capacity_bps(), 60e6);
        assert!((l.admissible_rate() - 42e6).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_orderings() {
        assert!(LinkConfig::new(100.0, 0.0, 50.0, 50.0).is_err());
        assert!(LinkConfig::new(100.0, 60.0, 50.0, 70.0).is_err());
        assert!(LinkConfig::new(100.0, 60.0, 110.0, 70.0).is_err());
        assert!(LinkConfig::new(100.0, 60.0, 80.0, 50.0).is_err());
        assert!(LinkConfig::new(100.0, 60.0, 80.0, 120.0).is_err());
        assert!(LinkConfig::new(f64::NAN, 60.0, 80.0, 90.0).is_err());
        assert!(LinkConfig::new(100.0, 100.0, 100.0, 100.0).is_ok());
    }
}
