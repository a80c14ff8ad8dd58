use super::ScenarioConfig;
use crate::error::{Error, Result};
use crate::metering::Meter;
use crate::model::LinkConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone)]
pub struct InteriorLink {
    pub config: LinkConfig,
    pub meter: Meter,
}

/// Ingress and egress joined by equal-share metered interior links.
#[derive(Debug, Clone)]
pub struct Topology {
    pub ingress: NodeId,
    pub egress: NodeId,
    pub links: Vec<InteriorLink>,
}

impl Topology {
    pub fn total_capacity_bps(&self) -> f64 {
        self.links.iter().map(|l| l.config.capacity_bps()).sum()
    }
}

pub fn build_topology(cfg: &ScenarioConfig) -> Result<Topology> {
    if cfg.n_links == 0 {
        return Err(Error::InvalidScenario(
            "topology needs at least one interior link".into(),
        ));
    }
    let share = cfg.bandwidth_bps as f64 / cfg.n_links as f64;
    let links = (0..cfg.n_links)
        .map(|_| {
            let config = LinkConfig::from_fractions(share, cfg.ar_fraction, cfg.sr_fraction, cfg.or_fraction)?;
            let meter = Meter::build(cfg.technique, &config, &cfg.meter)?;
            Ok(InteriorLink { config, meter })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Topology {
        ingress: NodeId(0),
        egress: NodeId(1),
        links,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(bw: u64, n: usize) -> Result<Topology> {
        build_topology(&ScenarioConfig {
            bandwidth_bps: bw,
            n_links: n,
            ..Default::default()
        })
    }

    #[test]
    fn equal_shares() {
        let t = topo(300_000_000, 5).unwrap();
        assert_eq!(t.links.len(), 5);
        assert!(t.links.iter().all(|l| l.config.capacity_bps() == 60e6));
        let t = topo(500_000_000, 5).unwrap();
        assert!(t.links.iter().all(|l| l.config.capacity_bps() == 100e6));
        assert_eq!(t.total_capacity_bps(), 500e6);
        let t = topo(50_000_000, 1).unwrap();
        assert_eq!(t.links[0].config.capacity_bps(), 50e6);
        assert!((t.links[0].config.admissible_rate() - 35e6).abs() < 1e-6);
    }

    #[test]
    fn zero_links_rejected() {
        assert!(topo(50_000_000, 0).is_err());
    }
}
