//! Pushes 12 Mbit/s through the additional-buffer meter on a 10 Mbit/s line
//! and shows how arrivals split between the accepted and degraded queues.

use pcn_sim::metering::{AbArrival, AdditionalBufferState};
use pcn_sim::model::{EcnCodepoint, FlowId, Packet, Priority, SimTime};

fn main() -> pcn_sim::Result<()> {
    let (ar, or) = (6e6, 10e6);
    let mut ab = AdditionalBufferState::new(ar, or, 50, SimTime::from_millis(100))?;
    let (wd, wb) = ab.weights();
    println!("Tr {:.1} Mbit/s, Wb {wb:.2}, Wd {wd:.2}", ab.threshold_rate() / 1e6);

    let arrival_gap = 693u64; // 1040 B at 12 Mbit/s
    let service_time = 832u64; // 1040 B at 10 Mbit/s
    let (mut accepted, mut degraded, mut dropped) = (0, 0, 0);
    let mut next_service = service_time;
    let mut order = String::new();
    let mut served = [0usize; 2];
    for i in 0..600u64 {
        let now = i * arrival_gap;
        while next_service <= now {
            if let Some(p) = ab.schedule_next() {
                let accepted = p.priority == Priority::Accepted;
                served[usize::from(!accepted)] += 1;
                if order.len() < 40 {
                    order.push(if accepted { 'A' } else { 'd' });
                }
            }
            next_service += service_time;
        }
        let pkt = Packet::new(i, FlowId(i % 4), 1040, EcnCodepoint::Ect0, SimTime::ZERO);
        match ab.on_arrival(pkt, SimTime::from_micros(now)) {
            AbArrival::Enqueued(Priority::Accepted) => accepted += 1,
            AbArrival::Enqueued(Priority::Degraded) => degraded += 1,
            AbArrival::Dropped(_) => dropped += 1,
        }
    }
    println!("arrivals: accepted {accepted} degraded {degraded} dropped {dropped}");
    println!("served: accepted {} degraded {}", served[0], served[1]);
    println!("first departures: {order}");
    Ok(())
}
