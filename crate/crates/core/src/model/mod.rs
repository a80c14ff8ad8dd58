//! Shared vocabulary: simulated time, ECN codepoints, packets, flows and links.

mod ecn;
mod flow;
mod link;
mod packet;
mod time;

pub use ecn::{classify_codepoint, CodepointClass, EcnCodepoint};
pub use flow::{Flow, FlowId, FlowState};
pub use link::LinkConfig;
pub use packet::{Packet, Priority, DEFAULT_PACKET_SIZE, HEADER_BYTES};
pub use time::SimTime;

/// Per-arrival verdict of an interior meter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeterDecision {
    Forward,
    Mark,
    Drop,
}
