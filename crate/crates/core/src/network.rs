//! Network parameters shared by the analytic, numeric and simulation layers.

use crate::error::{invalid, Result};

/// Node mobility between slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mobility {
    /// Every node draws a fresh uniform position each slot.
    Reshuffle,
    /// Every node moves a fixed distance `flight` in a uniform direction each slot.
    RandomWalk { flight: f64 },
}

/// Network size, communication area and cache dimensions.
///
/// `area` is `a(n) = R^2`, the fraction of the unit torus a node can reach in
/// one slot. `s` is the per-node cache size in subpackets.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub n: usize,
    pub area: f64,
    pub k: usize,
    pub s: usize,
    /// Guard factor of the protocol interference model.
    pub delta: f64,
    pub mobility: Mobility,
    /// Optional `M = n^beta` annotation, used only when generating sweeps.
    pub beta: Option<f64>,
    /// Optional `K = n^gamma` annotation, used only when generating sweeps.
    pub gamma: Option<f64>,
}

impl NetworkConfig {
    /// Reshuffling network with `S = K` and guard factor 1.
    pub fn new(n: usize, area: f64, k: usize) -> Result<Self> {
        let cfg = NetworkConfig {
            n,
            area,
            k,
            s: k,
            delta: 1.0,
            mobility: Mobility::Reshuffle,
            beta: None,
            gamma: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_cache_size(mut self, s: usize) -> Result<Self> {
        self.s = s;
        self.validate()?;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mobility(mut self, mobility: Mobility) -> Result<Self> {
        self.mobility = mobility;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("node count n must be >= 1"));
        }
        if !(self.area > 0.0 && self.area <= 1.0) {
            return Err(invalid(format!("area must lie in (0, 1], got {}", self.area)));
        }
        if self.k == 0 {
            return Err(invalid("subpacket count K must be >= 1"));
        }
        if self.s == 0 {
            return Err(invalid("cache size S must be >= 1"));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(invalid(format!("guard factor must be >= 0, got {}", self.delta)));
        }
        if let Mobility::RandomWalk { flight } = self.mobility {
            if !(flight > 0.0) || !flight.is_finite() {
                return Err(invalid(format!("flight length must be > 0, got {flight}")));
            }
        }
        Ok(())
    }

    /// Side of the square communication cell, `R = sqrt(a)`.
    pub fn range(&self) -> f64 {
        self.area.sqrt()
    }

    /// Natural logarithm of `n`.
    pub fn log_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// Whether `a >= ln(n)/n`, the regime in which a cell is almost surely occupied.
    pub fn is_connected_regime(&self) -> bool {
        self.area * (1.0 + 1e-9) >= self.log_n() / self.n as f64
    }

    /// Total cache budget `S * n` in subpackets.
    pub fn budget(&self) -> f64 {
        self.s as f64 * self.n as f64
    }

    /// Whether the budget admits one copy of every subpacket: `S n >= K M`.
    pub fn check_budget(&self, m: usize) -> Result<()> {
        if (self.s as u128) * (self.n as u128) < (self.k as u128) * (m as u128) {
            return Err(crate::Error::Infeasible(format!(
                "cache budget S*n = {} cannot hold K*M = {} subpackets",
                self.s * self.n,
                self.k * m
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let cfg = NetworkConfig::new(100, 0.05, 4).unwrap();
        assert_eq!(cfg.s, 4);
        assert_eq!(cfg.mobility, Mobility::Reshuffle);
        assert!(NetworkConfig::new(0, 0.1, 1).is_err());
        assert!(NetworkConfig::new(10, 0.0, 1).is_err());
        assert!(NetworkConfig::new(10, 1.5, 1).is_err());
        assert!(NetworkConfig::new(10, 0.5, 0).is_err());
        assert!(cfg.clone().with_cache_size(0).is_err());
        assert!(cfg.clone().with_delta(-1.0).is_err());
        assert!(cfg.with_mobility(Mobility::RandomWalk { flight: 0.0 }).is_err());
    }

    #[test]
    fn connectivity_flag() {
        let n = 30000usize;
        let a = (n as f64).ln() / n as f64;
        assert!(NetworkConfig::new(n, a, 20).unwrap().is_connected_regime());
        assert!(!NetworkConfig::new(n, a / 2.0, 20).unwrap().is_connected_regime());
    }

    #[test]
    fn budget_check() {
        let cfg = NetworkConfig::new(10, 0.2, 2).unwrap();
        assert!(cfg.check_budget(10).is_ok());
        assert!(matches!(cfg.check_budget(11), Err(crate::Error::Infeasible(_))));
    }
}
