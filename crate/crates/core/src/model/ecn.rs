/// The two-bit ECN field carried by every simulated packet.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EcnCodepoint {
    /// `00`
    #[default]
    NotEct,
    /// `10`
    Ect0,
    /// `01`
    Ect1,
    /// `11`, congestion experienced.
    Ce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodepointClass {
    EcnCapable,
    NotEcnCapable,
    CongestionExperienced,
}

impl EcnCodepoint {
    /// Decodes the low two bits, high bit first (`0b10` is ECT(0)).
    pub fn from_bits(bits: u8) -> Self {
        match bits & 0b11 {
            0b00 => EcnCodepoint::NotEct,
            0b10 => EcnCodepoint::Ect0,
            0b01 => EcnCodepoint::Ect1,
            _ => EcnCodepoint::Ce,
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            EcnCodepoint::NotEct => 0b00,
            EcnCodepoint::Ect0 => 0b10,
            EcnCodepoint::Ect1 => 0b01,
            EcnCodepoint::Ce => 0b11,
        }
    }

    pub fn class(self) -> CodepointClass {
        match self {
            EcnCodepoint::Ect0 | EcnCodepoint::Ect1 => CodepointClass::EcnCapable,
            EcnCodepoint::NotEct => CodepointClass::NotEcnCapable,
            EcnCodepoint::Ce => CodepointClass::CongestionExperienced,
        }
    }

    /// Whether a congestion mark can be written into this codepoint.
    pub fn can_carry_mark(self) -> bool {
        self != EcnCodepoint::NotEct
    }

    /// Sets CE. Returns `false`, leaving the codepoint untouched, for Not-ECT.
    pub fn set_ce(&mut self) -> bool {
        if self.can_carry_mark() {
            *self = EcnCodepoint::Ce;
            true
        } else {
            false
        }
    }
}

pub fn classify_codepoint(bits: u8) -> CodepointClass {
    EcnCodepoint::from_bits(bits).class()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_table() {
        assert_eq!(classify_codepoint(0b10), CodepointClass::EcnCapable);
        assert_eq!(classify_codepoint(0b01), CodepointClass::EcnCapable);
        assert_eq!(classify_codepoint(0b00), CodepointClass::NotEcnCapable);
        assert_eq!(classify_codepoint(0b11), CodepointClass::CongestionExperienced);
    }

    #[test]
    fn bits_round_trip() {
        for bits in 0..4u8 {
            assert_eq!(EcnCodepoint::from_bits(bits).bits(), bits);
        }
    }

    #[test]
    fn ce_never_reached_from_not_ect() {
        let mut cp = EcnCodepoint::NotEct;
        assert!(!cp.set_ce());
        assert_eq!(cp, EcnCodepoint::NotEct);

        for start in [EcnCodepoint::Ect0, EcnCodepoint::Ect1] {
            let mut cp = start;
            assert!(cp.set_ce());
            assert_eq!(cp, EcnCodepoint::Ce);
        }
    }
}
