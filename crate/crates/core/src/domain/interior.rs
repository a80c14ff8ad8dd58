use rand::Rng;

use crate::metering::{AbArrival, Meter};
use crate::model::{MeterDecision, Packet, Priority, SimTime};

#[derive(Debug, Clone, PartialEq)]
pub enum InteriorOutcome {
    /// Pass on to the link queue, possibly PCN-marked.
    Forwarded(Packet),
    Dropped(Packet),
    /// Taken into the additional buffer, to be released by its scheduler.
    Buffered(Priority),
}

/// Runs the link's meter on an arriving packet and applies the verdict.
///
/// `queue_len` is the instantaneous link queue in packets.
pub fn interior_process<R: Rng + ?Sized>(
    mut pkt: Packet,
    meter: &mut Meter,
    queue_len: usize,
    now: SimTime,
    rng: &mut R,
) -> InteriorOutcome {
    if let Meter::AdditionalBuffer(ab) = meter {
        return match ab.on_arrival(pkt, now) {
            AbArrival::Enqueued(p) => InteriorOutcome::Buffered(p),
            AbArrival::Dropped(p) => InteriorOutcome::Dropped(p),
        };
    }
    match meter.decide(&mut pkt, queue_len, now, rng) {
        Some(MeterDecision::Forward) | None => InteriorOutcome::Forwarded(pkt),
        Some(MeterDecision::Mark) => {
            pkt.mark();
            InteriorOutcome::Forwarded(pkt)
        }
        Some(MeterDecision::Drop) => InteriorOutcome::Dropped(pkt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metering::{RedState, TokenBucketState};
    use crate::model::{EcnCodepoint, FlowId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pkt(cp: EcnCodepoint) -> Packet {
        Packet::new(1, FlowId(2), 1040, cp, SimTime::ZERO)
    }

    #[test]
    fn forward_leaves_packet_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut m = Meter::Red(RedState::new(1.0, 5.0, 15.0, 0.1).unwrap());
        let out = interior_process(pkt(EcnCodepoint::Ect0), &mut m, 0, SimTime::ZERO, &mut rng);
        assert_eq!(out, InteriorOutcome::Forwarded(pkt(EcnCodepoint::Ect0)));
    }

    #[test]
    fn mark_sets_pcn_bit() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut m = Meter::TokenBucket(TokenBucketState::new(10_000.0, 1_000.0, 5_000.0).unwrap());
        match interior_process(pkt(EcnCodepoint::NotEct), &mut m, 0, SimTime::ZERO, &mut rng) {
            InteriorOutcome::Forwarded(p) => assert!(p.pcn_marked()),
            other => panic!("{other:?}"),
        }

        let mut m = Meter::Ecn(RedState::new(1.0, 5.0, 15.0, 0.1).unwrap());
        match interior_process(pkt(EcnCodepoint::Ect1), &mut m, 40, SimTime::ZERO, &mut rng) {
            InteriorOutcome::Forwarded(p) => {
                assert!(p.pcn_marked());
                assert_eq!(p.codepoint, EcnCodepoint::Ce);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ecn_drop_surfaces_as_dropped() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut m = Meter::Ecn(RedState::new(1.0, 5.0, 15.0, 0.1).unwrap());
        let out = interior_process(pkt(EcnCodepoint::NotEct), &mut m, 40, SimTime::ZERO, &mut rng);
        assert!(matches!(out, InteriorOutcome::Dropped(p) if !p.pcn_marked()));
    }
}
