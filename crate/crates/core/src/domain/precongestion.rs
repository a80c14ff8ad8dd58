use crate::model::LinkConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PreCongestionState {
    NoPreCongestion,
    ArPreCongested,
    SrPreCongested,
}

/// Strict inequalities: a rate exactly at a threshold stays in the lower state.
pub fn classify_precongestion(r: f64, link: &LinkConfig) -> PreCongestionState {
    if r > link.supportable_rate() {
        PreCongestionState::SrPreCongested
    } else if r > link.admissible_rate() {
        PreCongestionState::ArPreCongested
    } else {
        PreCongestionState::NoPreCongestion
    }
}
