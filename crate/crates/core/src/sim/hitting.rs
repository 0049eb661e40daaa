//! First meeting time of two random walkers on the unit torus.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::{mean_and_se, rng_for, torus_dist, uniform_point, wrap01};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingTimeEstimate {
    /// Mean slots to first meeting, censored values counted as `max_slots`.
    pub mean: f64,
    pub std_error: f64,
    pub censored_fraction: f64,
    pub pairs: usize,
}

/// Mean number of slots until two independent walkers come within Euclidean
/// distance `r`. Each walker moves `l` in a uniform direction per slot; the
/// distance is checked after every move, so the earliest hit is slot 1.
///
/// Requires `0.5 <= l / r <= 2`.
pub fn estimate_hitting_time(
    r: f64,
    l: f64,
    n_pairs: usize,
    max_slots: usize,
    seed: u64,
) -> Result<HittingTimeEstimate> {
    if !(r > 0.0) || !(l > 0.0) || !r.is_finite() || !l.is_finite() {
        return Err(invalid(format!("range and flight must be positive, got R = {r}, L = {l}")));
    }
    let ratio = l / r;
    if !(0.5..=2.0).contains(&ratio) {
        return Err(invalid(format!("flight/range ratio {ratio} outside [0.5, 2]")));
    }
    if n_pairs == 0 || max_slots == 0 {
        return Err(invalid("need at least one pair and one slot"));
    }
    let times: Vec<(f64, bool)> = (0..n_pairs)
        .into_par_iter()
        .map(|pair| {
            let mut rng = rng_for(seed, pair as u64);
            let mut a = uniform_point(&mut rng);
            let mut b = uniform_point(&mut rng);
            for slot in 1..=max_slots {
                for p in [&mut a, &mut b] {
                    let th = rng.gen::<f64>() * TAU;
                    p[0] = wrap01(p[0] + l * th.cos());
                    p[1] = wrap01(p[1] + l * th.sin());
                }
                if torus_dist(a, b) <= r {
                    return (slot as f64, false);
                }
            }
            (max_slots as f64, true)
        })
        .collect();
    let values: Vec<f64> = times.iter().map(|t| t.0).collect();
    let (mean, se) = mean_and_se(&values);
    let censored = times.iter().filter(|t| t.1).count();
    Ok(HittingTimeEstimate {
        mean,
        std_error: se,
        censored_fraction: censored as f64 / n_pairs as f64,
        pairs: n_pairs,
    })
}
