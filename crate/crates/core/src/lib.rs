//! Cache allocation and delivery analysis for subpacketized content in
//! mobile ad hoc networks.
//!
//! Each content object is split into `K` subpackets. Nodes cache either
//! uncoded replicas of subpackets or MDS-coded subpackets, and requesters
//! collect subpackets from whichever cache holders they meet while moving.
//!
//! Modules:
//! - [`popularity`]: Zipf request distribution and harmonic sums.
//! - [`network`] and [`delay`]: network parameters, contact probabilities,
//!   expected delays and throughput.
//! - [`analytic`]: closed-form allocations, regime boundaries and scaling laws.
//! - [`solver`]: numeric water-filling solvers and a brute-force oracle.
//! - [`codec`]: GF(2^8) Vandermonde erasure code.
//! - [`placement`]: load-balanced assignment of copies to node caches.
//! - [`sim`]: slotted mobility simulator and hitting-time estimator.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod codec;
pub mod delay;
mod error;
pub mod network;
pub mod placement;
pub mod popularity;
pub mod sim;
pub mod solver;

pub use analytic::Allocation;
pub use error::{Error, Result};
pub use network::{Mobility, NetworkConfig};
pub use popularity::PopularityModel;

/// Caching and reception strategy.
///
/// `Uncoded` caches replicas of plain subpackets and receives them in index
/// order. `Mds` caches coded subpackets and accepts any `K` distinct ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Uncoded,
    Mds,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Uncoded => "uncoded",
            Strategy::Mds => "mds",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uncoded" | "uncoded_seq" | "seq" => Ok(Strategy::Uncoded),
            "mds" | "mds_random" | "coded" => Ok(Strategy::Mds),
            other => Err(Error::InvalidArgument(format!("unknown strategy `{other}`"))),
        }
    }
}
