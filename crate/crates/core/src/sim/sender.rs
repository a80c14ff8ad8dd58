//! Window-based sender reacting to acknowledgements, mark echoes and losses.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SenderMode {
    FixedRateCbr,
    Aimd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransportSignal {
    Ack,
    MarkEcho,
    Loss,
}

/// Window cap `2 * B * DP` converted to whole packets, at least one.
pub fn optimal_window(bandwidth_bps: f64, delay_product_s: f64, packet_size: u32) -> u32 {
    let window_bits = 2.0 * bandwidth_bps * delay_product_s;
    let packets = (window_bits / (8.0 * f64::from(packet_size))).floor();
    if packets.is_finite() && packets >= 1.0 {
        packets.min(f64::from(u32::MAX)) as u32
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SenderModel {
    window: f64,
    cap: f64,
    pub bandwidth_bps: f64,
    pub delay_product_s: f64,
    pub mode: SenderMode,
}

impl SenderModel {
    pub fn new(mode: SenderMode, bandwidth_bps: f64, delay_product_s: f64, packet_size: u32) -> Self {
        let cap = f64::from(optimal_window(bandwidth_bps, delay_product_s, packet_size));
        SenderModel {
            window: 1.0,
            cap,
            bandwidth_bps,
            delay_product_s,
            mode,
        }
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn with_window(mut self, window: f64) -> Self {
        self.window = window.clamp(1.0, self.cap);
        self
    }

    /// Additive increase of `1/window` per ack, halving on a mark echo or a
    /// loss, kept within `[1, cap]`. CBR senders ignore feedback.
    pub fn on_feedback(&mut self, signal: TransportSignal) -> f64 {
        if self.mode == SenderMode::Aimd {
            self.window = match signal {
                TransportSignal::Ack => self.window + 1.0 / self.window,
                TransportSignal::MarkEcho | TransportSignal::Loss => self.window * 0.5,
            }
            .clamp(1.0, self.cap);
        }
        self.window
    }
}
