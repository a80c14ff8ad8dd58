//! Feeds a token bucket below and then above its fill rate and prints how
//! the token level and the verdicts follow the load.

use pcn_sim::metering::TokenBucketState;
use pcn_sim::model::{MeterDecision, SimTime};

fn main() -> pcn_sim::Result<()> {
    // 1 Mbit/s in bytes, 100 ms of depth, marking below half full.
    let rate = 125_000.0;
    let depth = rate * 0.1;
    let mut tb = TokenBucketState::new(depth, rate, depth / 2.0)?;

    let mut now = 0u64;
    for (label, gap_us) in [("0.5 Mbit/s", 16_640u64), ("2 Mbit/s", 4_160)] {
        let mut marked = 0;
        for _ in 0..400 {
            now += gap_us;
            if tb.on_arrival(1040, SimTime::from_micros(now)) == MeterDecision::Mark {
                marked += 1;
            }
        }
        println!(
            "{label:>10}: {marked:>3}/400 marked, tokens {:.0} of {depth:.0}",
            tb.tokens()
        );
    }
    Ok(())
}
