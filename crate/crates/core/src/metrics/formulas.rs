use crate::error::{Error, Result};

/// Bits per second delivered by `buf_bytes` over one round trip.
pub fn throughput(buf_bytes: u64, rtt_s: f64) -> Result<f64> {
    if rtt_s.is_nan() || rtt_s <= 0.0 {
        return Err(Error::NonPositiveRtt(rtt_s));
    }
    Ok((buf_bytes * 8) as f64 / rtt_s)
}

/// Lost packets and the drop rate in percent. An empty run has no loss.
pub fn loss_stats(tsp: u64, tap: u64) -> Result<(u64, f64)> {
    if tap > tsp {
        return Err(Error::AckedExceedsSent { tsp, tap });
    }
    let lp = tsp - tap;
    let pct = if tsp == 0 { 0.0 } else { (lp * 100) as f64 / tsp as f64 };
    Ok((lp, pct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(throughput(1040, 1.0).unwrap(), 8320.0);
        assert_eq!(throughput(0, 0.03).unwrap(), 0.0);
        assert!(throughput(10, 0.0).is_err());
        assert!(throughput(10, -1.0).is_err());
        assert_eq!(loss_stats(100, 90).unwrap(), (10, 10.0));
        assert_eq!(loss_stats(7, 7).unwrap(), (0, 0.0));
        assert_eq!(loss_stats(0, 0).unwrap(), (0, 0.0));
        assert_eq!(
            loss_stats(5, 6).unwrap_err(),
            Error::AckedExceedsSent { tsp: 5, tap: 6 }
        );
    }

    proptest! {
        #[test]
        fn halving_rtt_doubles(buf in 0u64..1_000_000_000, rtt in 1e-6f64..10.0) {
            let a = throughput(buf, rtt).unwrap();
            let b = throughput(buf, rtt / 2.0).unwrap();
            prop_assert!((b - 2.0 * a).abs() <= 1e-9 * b.max(1.0));
        }

        #[test]
        fn loss_bounds(tsp in 0u64..1_000_000, frac in 0.0f64..=1.0) {
            let tap = (tsp as f64 * frac) as u64;
            let (lp, pct) = loss_stats(tsp, tap).unwrap();
            prop_assert_eq!(lp + tap, tsp);
            prop_assert!((0.0..=100.0).contains(&pct));
        }
    }
}
