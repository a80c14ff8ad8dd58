use super::{EcnCodepoint, FlowId, SimTime};

pub const DEFAULT_PACKET_SIZE: u32 = 1040;
pub const HEADER_BYTES: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Priority {
    Accepted,
    Degraded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub id: u64,
    pub flow_id: FlowId,
    pub size_bytes: u32,
    pub codepoint: EcnCodepoint,
    pcn_marked: bool,
    pub priority: Priority,
    pub created_at: SimTime,
}

impl Packet {
    /// Sizes below the header length are raised to the header length.
    pub fn new(id: u64, flow_id: FlowId, size_bytes: u32, codepoint: EcnCodepoint, created_at: SimTime) -> Self {
        Packet {
            id,
            flow_id,
            size_bytes: size_bytes.max(HEADER_BYTES),
            codepoint,
            pcn_marked: false,
            priority: Priority::Accepted,
            created_at,
        }
    }

    pub fn pcn_marked(&self) -> bool {
        self.pcn_marked
    }

    /// PCN marks are sticky: there is no way to clear one inside the domain.
    pub fn mark(&mut self) {
        self.pcn_marked = true;
    }

    pub fn size_bits(&self) -> u64 {
        u64::from(self.size_bytes) * 8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_floor_and_sticky_mark() {
        let mut p = Packet::new(1, FlowId(0), 10, EcnCodepoint::Ect0, SimTime::ZERO);
        assert_eq!(p.size_bytes, HEADER_BYTES);
        assert!(!p.pcn_marked());
        p.mark();
        p.mark();
        assert!(p.pcn_marked());
        assert_eq!(
            Packet::new(2, FlowId(0), DEFAULT_PACKET_SIZE, EcnCodepoint::NotEct, SimTime::ZERO).size_bits(),
            8320
        );
    }
}
