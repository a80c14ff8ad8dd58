//! Drives a RED meter with a queue that ramps up and back down, printing the
//! averaged queue, the regime and the share of marked arrivals per phase.

use pcn_sim::metering::red::{DEFAULT_MAX_P, DEFAULT_MAX_THR, DEFAULT_MIN_THR};
use pcn_sim::metering::RedState;
use pcn_sim::model::MeterDecision;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pcn_sim::Result<()> {
    let mut red = RedState::new(0.02, DEFAULT_MIN_THR, DEFAULT_MAX_THR, DEFAULT_MAX_P)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    println!("{:>6} {:>8} {:>14} {:>8}", "queue", "avg", "regime", "marked");
    for queue in [0usize, 4, 8, 12, 16, 20, 12, 4, 0] {
        let marks = (0..500)
            .filter(|_| red.on_arrival(queue, &mut rng) == MeterDecision::Mark)
            .count();
        println!(
            "{queue:>6} {:>8.2} {:>14} {:>7.1}%",
            red.avg(),
            format!("{:?}", red.regime()),
            marks as f64 / 5.0
        );
    }
    Ok(())
}
