//! Numeric allocation solvers and an exhaustive integer oracle.
//!
//! All objectives here are order-form delays unless stated otherwise:
//! a content with `c` holders is met with probability `min(1, a c)`.

use crate::analytic::{Allocation, MdsLayout};
use crate::delay::{self, contact_order};
use crate::error::{invalid, Error, Result};
use crate::network::NetworkConfig;
use crate::popularity::{CompensatedSum, PopularityModel};
use crate::Strategy;

/// Default relative tolerance of the budget equation.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Bisection step cap.
pub const MAX_BISECTION_STEPS: usize = 200;

/// KKT residual below which a solve counts as converged.
pub const KKT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Converged,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub allocation: Allocation,
    /// Order-form expected delay of `allocation`.
    pub objective: f64,
    /// Budget multiplier.
    pub dual_delta: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub status: SolverStatus,
}

/// Which delay the brute-force oracle minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Geometric contact probability `1 - (1 - a)^c`.
    Exact,
    /// `min(1, a c)`.
    Order,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(invalid(format!("tolerance must be > 0, got {tol}")));
    }
    Ok(())
}

fn sum(v: &[f64]) -> f64 {
    v.iter().copied().collect::<CompensatedSum>().value()
}

fn status_of(kkt: f64, budget_gap: f64, hit_limit: bool) -> SolverStatus {
    if !hit_limit && kkt <= KKT_TOL && budget_gap <= KKT_TOL {
        SolverStatus::Converged
    } else {
        SolverStatus::IterationLimit
    }
}

/// Bisects a nonincreasing `total(x)` for `total(x) = target` in log space.
/// Returns the bracket end with `total <= target` and the step count.
fn log_bisect(
    mut lo: f64,
    mut hi: f64,
    target: f64,
    tol: f64,
    total: impl Fn(f64) -> f64,
) -> (f64, usize, bool) {
    // Expand until the bracket straddles the target.
    let mut guard = 0;
    while total(lo) < target && guard < 2000 {
        lo /= 16.0;
        guard += 1;
    }
    while total(hi) > target && guard < 4000 {
        hi *= 16.0;
        guard += 1;
    }
    for step in 1..=MAX_BISECTION_STEPS {
        let mid = (lo * hi).sqrt();
        let t = total(mid);
        if (t - target).abs() <= tol * target {
            return (mid, step, false);
        }
        if t > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            return (hi, step, false);
        }
    }
    (hi, MAX_BISECTION_STEPS, true)
}

/// Water-filling for sequential reception.
///
/// Minimizes `sum_m p_m K / (a X_m)` over `1 <= X_m <= 1/a` with
/// `K sum_m X_m <= S n`. The optimum is `X_m = clip(sqrt(p_m / (a delta)), 1, 1/a)`
/// where `delta` is found by bisection and then polished in closed form on
/// the unclipped set.
pub fn solve_uncoded(
    pop: &PopularityModel,
    cfg: &NetworkConfig,
    tol: f64,
) -> Result<SolverReport> {
    cfg.validate()?;
    check_tol(tol)?;
    cfg.check_budget(pop.len())?;
    let a = cfg.area;
    let cap = 1.0 / a;
    let k = cfg.k as f64;
    let copies = cfg.budget() / k;
    let pmf = pop.pmf();
    let m = pmf.len();

    let x_of = |d: f64| -> Vec<f64> {
        pmf.iter()
            .map(|&p| (p / (a * d)).sqrt().clamp(1.0, cap))
            .collect()
    };

    let (x, delta, iterations, hit_limit) = if m as f64 * cap <= copies * (1.0 + tol) {
        (vec![cap; m], 0.0, 0, false)
    } else {
        let p_min = pmf[m - 1];
        let p_max = pmf[0];
        let lo = p_min * cap * (a / cfg.n as f64).powi(2);
        let hi = p_max / a;
        let (d, steps, limit) = log_bisect(lo, hi, copies, tol, |d| sum(&x_of(d)));
        let mut x = x_of(d);
        let mut delta = d;
        // Closed-form delta on the free set reproduces the budget exactly.
        let (mut fixed, mut w) = (0.0, 0.0);
        for (&xi, &p) in x.iter().zip(pmf) {
            if xi <= 1.0 || xi >= cap {
                fixed += xi;
            } else {
                w += (p / a).sqrt();
            }
        }
        let free = copies - fixed;
        if w > 0.0 && free > 0.0 {
            let polished = (w / free).powi(2);
            let xp = x_of(polished);
            if (sum(&xp) - copies).abs() <= (sum(&x) - copies).abs() {
                x = xp;
                delta = polished;
            }
        }
        (x, delta, steps, limit)
    };

    let kkt = uncoded_kkt(pmf, a, copies, &x, delta);
    let gap = ((sum(&x) - copies) / copies).max(0.0);
    let allocation = Allocation::from_values(Strategy::Uncoded, x, cfg);
    let objective = delay::expected_delay_uncoded(cfg, pop, &allocation.values)?.order_slots;
    Ok(SolverReport {
        allocation,
        objective,
        dual_delta: delta,
        kkt_residual: kkt,
        iterations,
        status: status_of(kkt, gap, hit_limit),
    })
}

/// Relative KKT residual of the uncoded problem, scaled per subpacket.
///
/// Stationarity reads `p/(a X^2) = delta - sigma + mu` with `sigma >= 0`
/// active at `X = 1` and `mu >= 0` active at `X = 1/a`.
pub(crate) fn uncoded_kkt(pmf: &[f64], a: f64, copies: f64, x: &[f64], delta: f64) -> f64 {
    let cap = 1.0 / a;
    let mut worst: f64 = 0.0;
    for (&p, &xi) in pmf.iter().zip(x) {
        let g = p / (a * xi * xi);
        let scale = g.max(delta).max(f64::MIN_POSITIVE);
        let at_floor = xi <= 1.0 * (1.0 + 1e-12);
        let at_cap = xi >= cap * (1.0 - 1e-12);
        let r = if at_floor && at_cap {
            0.0
        } else if at_floor {
            (g - delta).max(0.0) / scale
        } else if at_cap {
            (delta - g).max(0.0) / scale
        } else {
            (g - delta).abs() / scale
        };
        worst = worst.max(r);
    }
    let used = sum(x);
    let primal = ((used - copies) / copies).max(0.0);
    let slack = if delta > 0.0 {
        ((used - copies) / copies).abs()
    } else {
        0.0
    };
    worst.max(primal).max(slack)
}

/// Boundary-pair search over the three-regime coded family.
///
/// For every `1 <= m1 <= m2 <= M + 1` the allocation gives `1/a` to Regime I,
/// `K` to Regime III and a `sqrt(p)`-proportional share of the residual
/// budget to Regime II. Pairs whose Regime II values leave `[K, 1/a]` are
/// discarded. The selection objective sums `K` per Regime I request,
/// `K / (a r)` per Regime II request and `sum_j 1 / min(1, (K - j) a)` per
/// Regime III request. Ties go to the smallest `m1`, then the smallest `m2`.
pub fn solve_mds(pop: &PopularityModel, cfg: &NetworkConfig, tol: f64) -> Result<SolverReport> {
    cfg.validate()?;
    check_tol(tol)?;
    cfg.check_budget(pop.len())?;
    let layout = MdsLayout::new(cfg, pop);
    let m = pop.len();
    let k = layout.k;
    let a = cfg.area;
    let pmf = pop.pmf();

    let mut p_prefix = Vec::with_capacity(m + 1);
    let mut acc = CompensatedSum::default();
    p_prefix.push(0.0);
    for &p in pmf {
        acc.add(p);
        p_prefix.push(acc.value());
    }
    let tail_delay = delay::mds_term(a, cfg.k, k, contact_order);

    let mut best: Option<(f64, usize, usize)> = None;
    let mut evaluated = 0usize;
    for m1 in 1..=m + 1 {
        for m2 in m1..=m + 1 {
            let residual = layout.residual(m1, m2);
            if residual < -1e-9 * layout.budget {
                continue;
            }
            let mut value = k * p_prefix[m1 - 1] + tail_delay * (1.0 - p_prefix[m2 - 1]);
            if m2 > m1 {
                if layout.share(m1, m2, m1) > layout.mid_hi * (1.0 + 1e-12)
                    || layout.share(m1, m2, m2 - 1) < k * (1.0 - 1e-12)
                {
                    continue;
                }
                let w = layout.w_sum(m1, m2);
                value += k * w * w / (a * residual);
            }
            evaluated += 1;
            let better = match best {
                None => true,
                Some((b, _, _)) => value < b * (1.0 - 1e-12),
            };
            if better {
                best = Some((value, m1, m2));
            }
        }
    }
    let (_, m1, m2) = best.ok_or_else(|| {
        Error::Infeasible("no boundary pair satisfies the coded band constraints".into())
    })?;

    let values = layout.build(m1, m2);
    let delta = if m2 > m1 {
        let i = m1 - 1;
        k * pmf[i] / (a * values[i] * values[i])
    } else {
        0.0
    };
    // Proportionality of the middle band is the stationarity condition of
    // the selection objective for a fixed partition.
    let mut kkt: f64 = 0.0;
    for i in m1 - 1..m2 - 1 {
        let g = k * pmf[i] / (a * values[i] * values[i]);
        kkt = kkt.max((g - delta).abs() / g.max(delta));
    }
    let used = sum(&values);
    let gap = ((used - layout.budget) / layout.budget).max(0.0);
    if m2 > m1 {
        kkt = kkt.max(((used - layout.budget) / layout.budget).abs());
    }
    kkt = kkt.max(gap);

    let allocation = Allocation::from_values(Strategy::Mds, values, cfg);
    let objective = delay::expected_delay_mds(cfg, pop, &allocation.values)?.order_slots;
    Ok(SolverReport {
        allocation,
        objective,
        dual_delta: delta,
        kkt_residual: kkt,
        iterations: evaluated,
        status: status_of(kkt, gap, false),
    })
}

/// Active-term sums of `-d/dr sum_j max(1, 1/((r - j) a))`.
///
/// Returns `(right, left)` one-sided slopes; terms within `eps` of their kink
/// count only on the left.
fn mds_slopes(r: f64, k: usize, a: f64, eps: f64) -> (f64, f64) {
    let (mut right, mut left) = (0.0, 0.0);
    for j in 0..k {
        let d = r - j as f64;
        let g = 1.0 / (a * d * d);
        if d * a < 1.0 && d < 1.0 / a - eps {
            right += g;
        }
        if d <= 1.0 / a + eps {
            left += g;
        }
    }
    (right, left)
}

/// Per-content minimizer of `p f(r) + delta r` on `[K, K - 1 + 1/a]`.
fn mds_best_response(p: f64, delta: f64, k: usize, a: f64) -> f64 {
    let lo = k as f64;
    let hi = lo - 1.0 + 1.0 / a;
    if hi <= lo {
        return lo;
    }
    let target = delta / p;
    if mds_slopes(lo, k, a, 0.0).0 <= target {
        return lo;
    }
    let (mut l, mut h) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (l + h);
        if mid <= l || mid >= h {
            break;
        }
        if mds_slopes(mid, k, a, 0.0).0 > target {
            l = mid;
        } else {
            h = mid;
        }
    }
    h
}

/// Convex relaxation of coded caching over real-valued `r_m`.
///
/// Minimizes the full order-form delay `sum_m p_m sum_j max(1, 1/((r_m - j) a))`
/// over `K <= r_m <= 1/a + K` with `sum_m r_m <= S n`. Each content's best
/// response to a budget price is found by bisection on `r`, and the price by
/// an outer bisection on the budget. Its objective lower-bounds every
/// integer allocation in the same box.
pub fn solve_mds_relaxed(
    pop: &PopularityModel,
    cfg: &NetworkConfig,
    tol: f64,
) -> Result<SolverReport> {
    cfg.validate()?;
    check_tol(tol)?;
    cfg.check_budget(pop.len())?;
    let a = cfg.area;
    let k = cfg.k;
    let kf = k as f64;
    let budget = cfg.budget();
    let pmf = pop.pmf();
    let m = pmf.len();
    let r_hi = (kf - 1.0 + 1.0 / a).max(kf);

    let r_of = |d: f64| -> Vec<f64> {
        pmf.iter()
            .map(|&p| mds_best_response(p, d, k, a))
            .collect()
    };

    let (r, delta, iterations, hit_limit) = if m as f64 * r_hi <= budget * (1.0 + tol) {
        (vec![r_hi; m], 0.0, 0, false)
    } else {
        let lo = pmf[m - 1] * a * 1e-6 / (budget * budget);
        let hi = pmf[0] * mds_slopes(kf, k, a, 0.0).1.max(1.0) * 2.0;
        let (d, steps, limit) = log_bisect(lo, hi, budget, tol, |d| sum(&r_of(d)));
        (r_of(d), d, steps, limit)
    };

    let mut kkt: f64 = 0.0;
    for (&p, &ri) in pmf.iter().zip(&r) {
        let eps = 1e-9 * ri;
        let (right, left) = mds_slopes(ri, k, a, eps);
        let (lo_ok, hi_ok) = (p * right, p * left);
        let scale = hi_ok.max(delta).max(f64::MIN_POSITIVE);
        let at_floor = ri <= kf * (1.0 + 1e-12);
        let at_top = ri >= r_hi * (1.0 - 1e-12);
        // delta must lie in [p * right, p * left]; the floor relaxes the
        // upper end and the top relaxes the lower end.
        let below = if at_top { 0.0 } else { (lo_ok - delta).max(0.0) };
        let above = if at_floor { 0.0 } else { (delta - hi_ok).max(0.0) };
        kkt = kkt.max(below.max(above) / scale);
    }
    let used = sum(&r);
    let gap = ((used - budget) / budget).max(0.0);
    kkt = kkt.max(gap);
    if delta > 0.0 {
        kkt = kkt.max(((used - budget) / budget).abs());
    }

    let allocation = Allocation::from_values(Strategy::Mds, r, cfg);
    let objective = delay::expected_delay_mds(cfg, pop, &allocation.values)?.order_slots;
    Ok(SolverReport {
        allocation,
        objective,
        dual_delta: delta,
        kkt_residual: kkt,
        iterations,
        status: status_of(kkt, gap, hit_limit),
    })
}

/// Largest library the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_M: usize = 4;

/// Largest per-content integer cap the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_CAP: usize = 12;

/// Exhaustive search over integer allocations.
///
/// The box is `1..=floor(1/a)` replicas for uncoded caching and
/// `K..=floor(1/a + K)` coded subpackets for MDS caching, intersected with the
/// budget. Ties keep the lexicographically larger vector.
pub fn brute_force(
    pop: &PopularityModel,
    cfg: &NetworkConfig,
    strategy: Strategy,
    objective: Objective,
) -> Result<SolverReport> {
    cfg.validate()?;
    cfg.check_budget(pop.len())?;
    let m = pop.len();
    let k = cfg.k;
    let (lo, hi) = match strategy {
        Strategy::Uncoded => (1usize, (1.0 / cfg.area + 1e-9).floor() as usize),
        Strategy::Mds => (k, (1.0 / cfg.area + k as f64 + 1e-9).floor() as usize),
    };
    if m > BRUTE_FORCE_MAX_M || hi > BRUTE_FORCE_MAX_CAP {
        return Err(Error::SearchSpaceTooLarge(format!(
            "M = {m}, cap = {hi}; limits are M <= {BRUTE_FORCE_MAX_M}, cap <= {BRUTE_FORCE_MAX_CAP}"
        )));
    }
    let unit = match strategy {
        Strategy::Uncoded => k,
        Strategy::Mds => 1,
    };
    let budget = cfg.s * cfg.n;
    let hi = hi.max(lo);

    let eval = |v: &[f64]| -> Result<f64> {
        let d = delay::expected_delay(cfg, pop, v, strategy)?;
        Ok(match objective {
            Objective::Exact => d.exact_slots,
            Objective::Order => d.order_slots,
        })
    };

    let mut cur = vec![lo; m];
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut visited = 0usize;
    loop {
        if cur.iter().sum::<usize>() * unit <= budget {
            visited += 1;
            let v: Vec<f64> = cur.iter().map(|&c| c as f64).collect();
            let val = eval(&v)?;
            let take = match &best {
                None => true,
                Some((b, bv)) => {
                    val < b * (1.0 - 1e-12) || (val <= b * (1.0 + 1e-12) && cur > *bv)
                }
            };
            if take {
                best = Some((val, cur.clone()));
            }
        }
        // Odometer increment.
        let mut i = m;
        loop {
            if i == 0 {
                let (val, v) = best.ok_or_else(|| {
                    Error::Infeasible("no integer allocation fits the budget".into())
                })?;
                let values: Vec<f64> = v.iter().map(|&c| c as f64).collect();
                return Ok(SolverReport {
                    allocation: Allocation::from_values(strategy, values, cfg),
                    objective: val,
                    dual_delta: 0.0,
                    kkt_residual: 0.0,
                    iterations: visited,
                    status: SolverStatus::Converged,
                });
            }
            i -= 1;
            if cur[i] < hi {
                cur[i] += 1;
                break;
            }
            cur[i] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{mds_allocation, uncoded_allocation};
    use crate::popularity::zipf_pmf;
    use approx::assert_relative_eq;

    fn cfg(n: usize, area: f64, k: usize) -> NetworkConfig {
        NetworkConfig::new(n, area, k).unwrap()
    }

    #[test]
    fn uncoded_small_cases() {
        let pop = zipf_pmf(2, 1.0).unwrap();
        // Proportional shares (4.686, 3.314) exceed the cap 1/a = 4.
        let rep = solve_uncoded(&pop, &cfg(8, 0.25, 2), DEFAULT_TOL).unwrap();
        assert_eq!(rep.allocation.values, vec![4.0, 4.0]);
        assert_eq!(rep.status, SolverStatus::Converged);

        let rep = solve_uncoded(&pop, &cfg(8, 0.01, 2), DEFAULT_TOL).unwrap();
        assert_relative_eq!(rep.allocation.values[0], 4.686, max_relative = 1e-3);
        assert_relative_eq!(rep.allocation.values[1], 3.314, max_relative = 1e-3);
        let expect = 2.0 * ((2.0 / 3.0) / (0.01 * rep.allocation.values[0])
            + (1.0 / 3.0) / (0.01 * rep.allocation.values[1]));
        assert_relative_eq!(rep.objective, expect, max_relative = 1e-12);
        assert!(rep.kkt_residual <= KKT_TOL);

        let rep = solve_uncoded(&pop, &cfg(10, 0.2, 3), DEFAULT_TOL).unwrap();
        assert_eq!(rep.allocation.values, vec![5.0, 5.0]);

        let one = zipf_pmf(1, 1.0).unwrap();
        let rep = solve_uncoded(&one, &cfg(50, 0.1, 3), DEFAULT_TOL).unwrap();
        assert_eq!(rep.allocation.values, vec![10.0]);
        assert_eq!(rep.dual_delta, 0.0);
        let rep = solve_uncoded(&one, &cfg(5, 0.1, 3), DEFAULT_TOL).unwrap();
        assert_relative_eq!(rep.allocation.values[0], 5.0, max_relative = 1e-9);
    }

    #[test]
    fn uncoded_infeasible_and_bad_tol() {
        let pop = zipf_pmf(20, 1.0).unwrap();
        assert!(matches!(
            solve_uncoded(&pop, &cfg(10, 0.2, 2), DEFAULT_TOL),
            Err(Error::Infeasible(_))
        ));
        let pop = zipf_pmf(2, 1.0).unwrap();
        assert!(solve_uncoded(&pop, &cfg(10, 0.2, 2), 0.0).is_err());
    }

    #[test]
    fn uncoded_matches_analytic() {
        let n = 30000usize;
        let a = (n as f64).ln() / n as f64;
        for &alpha in &[0.5, 2.0] {
            let pop = zipf_pmf(250, alpha).unwrap();
            let c = cfg(n, a, 20);
            let num = solve_uncoded(&pop, &c, DEFAULT_TOL).unwrap();
            let ana = uncoded_allocation(&c, &pop).unwrap();
            assert_eq!(num.status, SolverStatus::Converged);
            for (x, y) in num.allocation.values.iter().zip(&ana.values) {
                assert_relative_eq!(*x, *y, max_relative = 1e-6);
            }
            let used = 20.0 * num.allocation.values.iter().sum::<f64>();
            assert!(used <= c.budget() * (1.0 + 1e-8));
        }
    }

    #[test]
    fn mds_small_cases() {
        let pop = zipf_pmf(2, 1.0).unwrap();
        let rep = solve_mds(&pop, &cfg(4, 0.25, 2), DEFAULT_TOL).unwrap();
        assert_eq!(rep.allocation.values, vec![4.0, 4.0]);
        assert_relative_eq!(rep.objective, 1.0 + 1.0 / 0.75, max_relative = 1e-12);

        let rep = solve_mds(&pop, &cfg(6, 0.25, 2), DEFAULT_TOL).unwrap();
        assert_eq!(rep.allocation.values, vec![6.0, 6.0]);
        assert_relative_eq!(rep.objective, 2.0, max_relative = 1e-12);

        let one = zipf_pmf(1, 1.0).unwrap();
        let rep = solve_mds(&one, &cfg(100, 0.1, 3), DEFAULT_TOL).unwrap();
        assert_relative_eq!(rep.allocation.values[0], 13.0, max_relative = 1e-12);
        let rep = solve_mds(&one, &cfg(4, 0.01, 3), DEFAULT_TOL).unwrap();
        assert_relative_eq!(rep.allocation.values[0], 12.0, max_relative = 1e-12);
    }

    #[test]
    fn mds_band_is_proportional() {
        let pop = zipf_pmf(100, 0.8).unwrap();
        let c = cfg(3000, 0.004, 3);
        let rep = solve_mds(&pop, &c, DEFAULT_TOL).unwrap();
        let al = &rep.allocation;
        al.check(&c).unwrap();
        let m2 = al.m2.unwrap();
        assert!(m2 > al.m1 + 1);
        let base = al.values[al.m1 - 1] / pop.pmf()[al.m1 - 1].sqrt();
        for i in al.m1 - 1..m2 - 1 {
            let ratio = al.values[i] / pop.pmf()[i].sqrt();
            assert!((ratio / base - 1.0).abs() < 1e-9);
        }
        let ana = mds_allocation(&c, &pop).unwrap();
        assert_eq!((ana.m1, ana.m2), (al.m1, al.m2));
    }

    #[test]
    fn relaxed_mds_kkt_and_bound() {
        let pop = zipf_pmf(3, 1.2).unwrap();
        let c = cfg(5, 0.2, 2);
        let rel = solve_mds_relaxed(&pop, &c, DEFAULT_TOL).unwrap();
        assert_eq!(rel.status, SolverStatus::Converged, "{rel:?}");
        let bf = brute_force(&pop, &c, Strategy::Mds, Objective::Order).unwrap();
        assert!(rel.objective <= bf.objective * (1.0 + 1e-9));
        assert!(bf.objective <= 2.0 * rel.objective);
    }

    #[test]
    fn brute_force_examples() {
        let pop = zipf_pmf(2, 1.0).unwrap();
        let c = NetworkConfig::new(4, 0.25, 1).unwrap();
        let rep = brute_force(&pop, &c, Strategy::Uncoded, Objective::Order).unwrap();
        assert_eq!(rep.allocation.values, vec![2.0, 2.0]);
        assert_relative_eq!(rep.objective, 2.0, max_relative = 1e-12);

        let c = cfg(4, 0.25, 2);
        let rep = brute_force(&pop, &c, Strategy::Mds, Objective::Order).unwrap();
        assert_eq!(rep.allocation.values, vec![4.0, 4.0]);
        assert_relative_eq!(rep.objective, 7.0 / 3.0, max_relative = 1e-12);
        // The geometric contact model favours a skewed split here.
        let rep = brute_force(&pop, &c, Strategy::Mds, Objective::Exact).unwrap();
        assert_eq!(rep.allocation.values, vec![5.0, 3.0]);

        let one = zipf_pmf(1, 1.0).unwrap();
        let rep = brute_force(&one, &cfg(100, 0.1, 2), Strategy::Uncoded, Objective::Exact).unwrap();
        assert_eq!(rep.allocation.values, vec![10.0]);

        let big = zipf_pmf(5, 1.0).unwrap();
        assert!(matches!(
            brute_force(&big, &cfg(100, 0.25, 1), Strategy::Uncoded, Objective::Order),
            Err(Error::SearchSpaceTooLarge(_))
        ));
        assert!(matches!(
            brute_force(&pop, &cfg(100, 0.05, 1), Strategy::Uncoded, Objective::Order),
            Err(Error::SearchSpaceTooLarge(_))
        ));
    }
}
