//! Measures a bursty arrival pattern with the sliding-window bandwidth meter.

use pcn_sim::metering::BandwidthMeterState;
use pcn_sim::model::SimTime;

fn main() {
    let mut bm = BandwidthMeterState::new(SimTime::from_millis(100), 1e6);
    let mut now = 0u64;
    for (phase, gap_us, n) in [("idle", 20_000u64, 20), ("burst", 2_000, 200), ("calm", 10_000, 40)] {
        for _ in 0..n {
            now += gap_us;
            bm.on_arrival(1040, SimTime::from_micros(now));
        }
        let rate = bm.measure(SimTime::from_micros(now));
        println!(
            "{phase:>5}: {:>6.3} Mbit/s over the last 100 ms ({} packets held)",
            rate / 1e6,
            bm.len()
        );
    }
}
