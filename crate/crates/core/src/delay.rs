//! Contact probabilities, expected transfer delays and throughput.
//!
//! Every delay is reported twice: with the exact geometric contact
//! probability `1 - (1 - a)^c` and with the order form `min(1, a c)`.

use crate::error::{invalid, Result};
use crate::network::NetworkConfig;
use crate::popularity::PopularityModel;
use crate::Strategy;

/// Expected delay in slots for one allocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    pub exact_slots: f64,
    pub order_slots: f64,
    /// `(lower, upper)` for random-walk mobility.
    pub bounds: Option<(f64, f64)>,
}

fn check_contact_args(area: f64, copies: f64) -> Result<()> {
    if !(area > 0.0 && area <= 1.0) {
        return Err(invalid(format!("area must lie in (0, 1], got {area}")));
    }
    if !(copies >= 0.0) {
        return Err(invalid(format!("copy count must be >= 0, got {copies}")));
    }
    Ok(())
}

/// Probability that at least one of `copies` independently placed holders
/// falls inside a cell of the given area: `1 - (1 - area)^copies`.
pub fn contact_prob(area: f64, copies: f64) -> Result<f64> {
    check_contact_args(area, copies)?;
    Ok(contact_exact(area, copies))
}

/// Order form `min(1, area * copies)`.
pub fn contact_prob_order(area: f64, copies: f64) -> Result<f64> {
    check_contact_args(area, copies)?;
    Ok(contact_order(area, copies))
}

pub(crate) fn contact_exact(area: f64, copies: f64) -> f64 {
    if copies <= 0.0 {
        0.0
    } else if area >= 1.0 {
        1.0
    } else {
        -(copies * (-area).ln_1p()).exp_m1()
    }
}

pub(crate) fn contact_order(area: f64, copies: f64) -> f64 {
    (area * copies).min(1.0)
}

/// Sequential reception of `k` subpackets with `x` holders each.
pub(crate) fn uncoded_term(area: f64, k: usize, x: f64, contact: fn(f64, f64) -> f64) -> f64 {
    k as f64 / contact(area, x)
}

/// Random reception of `k` coded subpackets out of `r` holders.
pub(crate) fn mds_term(area: f64, k: usize, r: f64, contact: fn(f64, f64) -> f64) -> f64 {
    (0..k).map(|j| 1.0 / contact(area, r - j as f64)).sum()
}

fn check_len(pop: &PopularityModel, values: &[f64]) -> Result<()> {
    if values.len() != pop.len() {
        return Err(invalid(format!(
            "allocation has {} entries but the library has {}",
            values.len(),
            pop.len()
        )));
    }
    Ok(())
}

fn weighted(pop: &PopularityModel, values: &[f64], term: impl Fn(f64) -> f64) -> f64 {
    pop.pmf()
        .iter()
        .zip(values)
        .map(|(&p, &v)| p * term(v))
        .collect::<crate::popularity::CompensatedSum>()
        .value()
}

/// Expected delay of sequential reception with `x[m]` replicas of every
/// subpacket of content `m`.
pub fn expected_delay_uncoded(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    x: &[f64],
) -> Result<DelayEstimate> {
    cfg.validate()?;
    check_len(pop, x)?;
    if let Some((i, v)) = x.iter().enumerate().find(|(_, &v)| !(v >= 1.0)) {
        return Err(invalid(format!("content {} has {v} replicas; at least 1 required", i + 1)));
    }
    let a = cfg.area;
    Ok(DelayEstimate {
        exact_slots: weighted(pop, x, |v| uncoded_term(a, cfg.k, v, contact_exact)),
        order_slots: weighted(pop, x, |v| uncoded_term(a, cfg.k, v, contact_order)),
        bounds: None,
    })
}

/// Expected delay of random reception with `r[m]` coded subpackets of
/// content `m` cached on distinct nodes.
pub fn expected_delay_mds(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    r: &[f64],
) -> Result<DelayEstimate> {
    cfg.validate()?;
    check_len(pop, r)?;
    let k = cfg.k as f64;
    if let Some((i, v)) = r.iter().enumerate().find(|(_, &v)| !(v >= k)) {
        return Err(invalid(format!(
            "content {} has {v} coded subpackets; at least K = {} required",
            i + 1,
            cfg.k
        )));
    }
    let a = cfg.area;
    Ok(DelayEstimate {
        exact_slots: weighted(pop, r, |v| mds_term(a, cfg.k, v, contact_exact)),
        order_slots: weighted(pop, r, |v| mds_term(a, cfg.k, v, contact_order)),
        bounds: None,
    })
}

/// Dispatches on the strategy.
pub fn expected_delay(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    values: &[f64],
    strategy: Strategy,
) -> Result<DelayEstimate> {
    match strategy {
        Strategy::Uncoded => expected_delay_uncoded(cfg, pop, values),
        Strategy::Mds => expected_delay_mds(cfg, pop, values),
    }
}

/// Per-node throughput `1 / (n a D)` in contents per slot.
pub fn per_node_throughput(cfg: &NetworkConfig, d_avg: f64) -> Result<f64> {
    cfg.validate()?;
    if !(d_avg > 0.0) || !d_avg.is_finite() {
        return Err(invalid(format!("delay must be positive, got {d_avg}")));
    }
    Ok(1.0 / (cfg.n as f64 * cfg.area * d_avg))
}

/// Order-form bounds under random-walk mobility, given the log factor
/// `log_n >= 1` explicitly.
///
/// The lower bound is the reshuffling order delay. The upper bound divides
/// the area inside every `min(1, .)` by `log_n`.
pub fn random_walk_bounds(
    log_n: f64,
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    alloc: &[f64],
    strategy: Strategy,
) -> Result<(f64, f64)> {
    if !(log_n >= 1.0) || !log_n.is_finite() {
        return Err(invalid(format!("log factor must be >= 1, got {log_n}")));
    }
    let lower = expected_delay(cfg, pop, alloc, strategy)?.order_slots;
    let slow = NetworkConfig {
        area: cfg.area / log_n,
        ..cfg.clone()
    };
    let upper = expected_delay(&slow, pop, alloc, strategy)?.order_slots;
    Ok((lower, upper))
}

/// Reshuffling estimates together with random-walk bounds.
///
/// The log factor is `max(ln n, 1)` so the bracket stays ordered for tiny `n`.
pub fn expected_delay_random_walk(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    alloc: &[f64],
    strategy: Strategy,
) -> Result<DelayEstimate> {
    let base = expected_delay(cfg, pop, alloc, strategy)?;
    let bounds = random_walk_bounds(cfg.log_n().max(1.0), cfg, pop, alloc, strategy)?;
    Ok(DelayEstimate {
        bounds: Some(bounds),
        ..base
    })
}
