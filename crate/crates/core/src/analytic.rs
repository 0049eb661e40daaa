//! Closed-form cache allocations, regime boundaries and delay scaling laws.
//!
//! Contents are indexed `m = 1..=M` by decreasing popularity. An allocation
//! splits the library into up to three regimes:
//!
//! - Regime I (`m < m1`): enough copies that a holder is almost always in range.
//! - Regime II (`m1 <= m < m2`): copies proportional to `sqrt(p_m)`.
//! - Regime III (`m >= m2`, coded only): the minimum of `K` coded subpackets.
//!
//! Boundary indices are 1-based and `M + 1` means "empty regime".

use crate::delay::{self, DelayEstimate};
use crate::error::{invalid, Error, Result};
use crate::network::NetworkConfig;
use crate::popularity::{harmonic_class, harmonic_range, CompensatedSum, PopularityModel};
use crate::Strategy;

/// Relative slack used when classifying values at regime edges.
const EDGE_TOL: f64 = 1e-9;

/// Iteration cap of the boundary fixed point.
pub const FIXED_POINT_MAX_ITERS: usize = 1000;

/// Per-content copy counts with regime metadata.
///
/// `values[m - 1]` is `X_m` (replicas of each subpacket) for uncoded caching
/// and `r_m` (coded subpackets) for MDS caching.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub kind: Strategy,
    pub values: Vec<f64>,
    /// First index of Regime II.
    pub m1: usize,
    /// First index of Regime III; `None` for uncoded allocations.
    pub m2: Option<usize>,
    /// `K * sum(X)` for uncoded, `sum(r)` for MDS, in subpackets.
    pub budget_used: f64,
}

impl Allocation {
    /// Wraps raw values, deriving regime boundaries and budget from them.
    ///
    /// A value sitting exactly on a regime edge is counted in the lower-index
    /// regime.
    pub fn from_values(kind: Strategy, values: Vec<f64>, cfg: &NetworkConfig) -> Allocation {
        let m = values.len();
        let a = cfg.area;
        let k = cfg.k as f64;
        match kind {
            Strategy::Uncoded => {
                let m1 = values
                    .iter()
                    .position(|&v| a * v < 1.0 - EDGE_TOL)
                    .map_or(m + 1, |i| i + 1);
                let budget_used = k * sum(&values);
                Allocation {
                    kind,
                    values,
                    m1,
                    m2: None,
                    budget_used,
                }
            }
            Strategy::Mds => {
                let top = regime_one_value(a, k);
                let m1 = values
                    .iter()
                    .position(|&v| v < top * (1.0 - EDGE_TOL))
                    .map_or(m + 1, |i| i + 1);
                let m2 = values
                    .iter()
                    .enumerate()
                    .skip(m1 - 1)
                    .find(|(_, &v)| v <= k * (1.0 + EDGE_TOL))
                    .map_or(m + 1, |(i, _)| i + 1);
                let budget_used = sum(&values);
                Allocation {
                    kind,
                    values,
                    m1,
                    m2: Some(m2),
                    budget_used,
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Integer copy counts actually deployed, `ceil(values)`.
    ///
    /// Values within `1e-9` above an integer round down to it, so that
    /// floating-point noise never adds a copy.
    pub fn copies(&self) -> Vec<usize> {
        self.values.iter().map(|&v| ceil_tol(v)).collect()
    }

    /// Expected delay of this allocation.
    pub fn delay(&self, cfg: &NetworkConfig, pop: &PopularityModel) -> Result<DelayEstimate> {
        delay::expected_delay(cfg, pop, &self.values, self.kind)
    }

    /// [`Allocation::copies`] as floats.
    pub fn deployed_values(&self) -> Vec<f64> {
        self.copies().into_iter().map(|c| c as f64).collect()
    }

    /// Expected delay of the deployed integer copy counts.
    pub fn deployed_delay(&self, cfg: &NetworkConfig, pop: &PopularityModel) -> Result<DelayEstimate> {
        delay::expected_delay(cfg, pop, &self.deployed_values(), self.kind)
    }

    /// Checks monotonicity, the per-content band, the budget and boundary order.
    pub fn check(&self, cfg: &NetworkConfig) -> Result<()> {
        let a = cfg.area;
        let k = cfg.k as f64;
        let m = self.values.len();
        let (lo, hi) = match self.kind {
            Strategy::Uncoded => (1.0, 1.0 / a),
            Strategy::Mds => (k, 1.0 / a + k),
        };
        for (i, &v) in self.values.iter().enumerate() {
            if !v.is_finite() || v < lo * (1.0 - EDGE_TOL) || v > hi * (1.0 + EDGE_TOL) {
                return Err(invalid(format!(
                    "content {} value {v} outside [{lo}, {hi}]",
                    i + 1
                )));
            }
        }
        if let Some(i) = self
            .values
            .windows(2)
            .position(|w| w[1] > w[0] * (1.0 + 1e-12))
        {
            return Err(invalid(format!(
                "allocation increases between contents {} and {}",
                i + 1,
                i + 2
            )));
        }
        let budget = cfg.budget();
        if self.budget_used > budget * (1.0 + 1e-9) + 1e-9 {
            return Err(invalid(format!(
                "allocation uses {} subpackets, budget is {budget}",
                self.budget_used
            )));
        }
        let m2 = self.m2.unwrap_or(m + 1);
        if !(1 <= self.m1 && self.m1 <= m2 && m2 <= m + 1) {
            return Err(invalid(format!(
                "boundaries out of order: m1 = {}, m2 = {m2}, M = {m}",
                self.m1
            )));
        }
        Ok(())
    }
}

pub(crate) fn ceil_tol(v: f64) -> usize {
    (v - 1e-9).ceil().max(0.0) as usize
}

fn sum(v: &[f64]) -> f64 {
    v.iter().copied().collect::<CompensatedSum>().value()
}

/// Copies given to every Regime I content of an MDS allocation before any
/// leftover budget is spent: `max(1/a, K)`.
pub(crate) fn regime_one_value(area: f64, k: f64) -> f64 {
    (1.0 / area).max(k)
}

fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

fn clamp_index(x: f64, m: usize) -> usize {
    if !x.is_finite() || x >= m as f64 {
        m
    } else {
        (round_half_up(x).max(1.0) as usize).min(m)
    }
}

/// Closed-form uncoded boundary `(n a / H_{alpha/2}(M))^{2/alpha}`, rounded
/// and clamped to `[1, M]`; equal to `M` once `a >= M / n`.
pub fn uncoded_boundary(cfg: &NetworkConfig, pop: &PopularityModel) -> usize {
    let m = pop.len();
    let na = cfg.n as f64 * cfg.area;
    if na >= m as f64 {
        return m;
    }
    let raw = (na / pop.h_half_alpha()).powf(2.0 / pop.alpha());
    clamp_index(raw, m)
}

/// Splits `budget` over `w` proportionally, lifting the smallest entries to
/// `floor` and re-normalizing the rest once. Returns all `floor` when the
/// budget is too small to give every entry more than that.
pub(crate) fn proportional_with_floor(w: &[f64], budget: f64, floor: f64) -> Vec<f64> {
    let len = w.len();
    let mut prefix = Vec::with_capacity(len + 1);
    let mut acc = CompensatedSum::default();
    prefix.push(0.0);
    for &x in w {
        acc.add(x);
        prefix.push(acc.value());
    }
    for lifted in 0..len {
        let kept = len - lifted;
        let scale = (budget - floor * lifted as f64) / prefix[kept];
        if w[kept - 1] * scale >= floor {
            let mut out: Vec<f64> = w[..kept].iter().map(|&x| x * scale).collect();
            out.resize(len, floor);
            return out;
        }
    }
    vec![floor; len]
}

/// Uncoded allocation: the most popular contents get `1/a` replicas and the
/// rest share the remaining budget in proportion to `sqrt(p_m)`, never
/// dropping below one replica.
///
/// The boundary is the smallest `m1` whose proportional share stays within
/// the `1/a` cap. The residual budget is `S n / K - (m1 - 1)/a`, which
/// reduces to `n - (m1 - 1)/a` when `S = K`.
pub fn uncoded_allocation(cfg: &NetworkConfig, pop: &PopularityModel) -> Result<Allocation> {
    cfg.validate()?;
    cfg.check_budget(pop.len())?;
    let m = pop.len();
    let cap = 1.0 / cfg.area;
    let per_subpacket = cfg.budget() / cfg.k as f64;
    let w = pop.sqrt_pmf();

    if m as f64 * cap <= per_subpacket {
        return Ok(Allocation::from_values(Strategy::Uncoded, vec![cap; m], cfg));
    }
    for m1 in 1..=m {
        let head = (m1 - 1) as f64 * cap;
        let tail_budget = per_subpacket - head;
        if tail_budget < (m - m1 + 1) as f64 {
            break;
        }
        let tail = proportional_with_floor(&w[m1 - 1..], tail_budget, 1.0);
        if tail[0] <= cap * (1.0 + 1e-12) {
            let mut values = vec![cap; m1 - 1];
            values.extend(tail.into_iter().map(|v| v.min(cap)));
            return Ok(Allocation::from_values(Strategy::Uncoded, values, cfg));
        }
    }
    Err(Error::Infeasible(
        "no uncoded boundary satisfies both the replica cap and the one-copy floor".into(),
    ))
}

/// Closed-form MDS boundaries `(m1, m2)` with unit constants:
///
/// - `alpha > 2`: `m2 = (n - M)^{2/alpha}`, `m1 = (K (n - M) a)^{2/alpha}`;
/// - `alpha <= 2`: `m2 = (n - M) (1/(a K))^{2/alpha - 1}`, `m1 = (n - M) K a`.
///
/// Both are rounded half up, clamped to `[1, M]`, and `m1 <= m2` is enforced.
pub fn mds_boundaries(cfg: &NetworkConfig, pop: &PopularityModel) -> Result<(usize, usize)> {
    cfg.validate()?;
    let m = pop.len();
    if m >= cfg.n {
        return Err(Error::Infeasible(format!(
            "MDS boundaries need M < n (M = {m}, n = {})",
            cfg.n
        )));
    }
    let alpha = pop.alpha();
    let rest = (cfg.n - m) as f64;
    let k = cfg.k as f64;
    let a = cfg.area;
    let (m2, m1) = if alpha > 2.0 {
        (rest.powf(2.0 / alpha), (k * rest * a).powf(2.0 / alpha))
    } else {
        (rest * (1.0 / (a * k)).powf(2.0 / alpha - 1.0), rest * k * a)
    };
    let m2 = clamp_index(m2, m);
    let m1 = clamp_index(m1, m).min(m2);
    Ok((m1, m2))
}

/// Geometry of the three-regime MDS family for one configuration.
pub(crate) struct MdsLayout {
    pub w: Vec<f64>,
    w_prefix: Vec<f64>,
    pub budget: f64,
    pub k: f64,
    /// Copies per Regime I content before leftover is spent.
    pub top: f64,
    /// Upper end of the Regime II band.
    pub mid_hi: f64,
    /// Absolute per-content cap `1/a + K`.
    pub cap: f64,
}

impl MdsLayout {
    pub fn new(cfg: &NetworkConfig, pop: &PopularityModel) -> MdsLayout {
        let w = pop.sqrt_pmf();
        let mut w_prefix = Vec::with_capacity(w.len() + 1);
        let mut acc = CompensatedSum::default();
        w_prefix.push(0.0);
        for &x in &w {
            acc.add(x);
            w_prefix.push(acc.value());
        }
        let k = cfg.k as f64;
        let top = regime_one_value(cfg.area, k);
        MdsLayout {
            w,
            w_prefix,
            budget: cfg.budget(),
            k,
            top,
            mid_hi: top,
            cap: 1.0 / cfg.area + k,
        }
    }

    pub fn m(&self) -> usize {
        self.w.len()
    }

    /// Budget left for Regime II given 1-based boundaries.
    pub fn residual(&self, m1: usize, m2: usize) -> f64 {
        let m = self.m();
        self.budget - (m1 - 1) as f64 * self.top - (m + 1 - m2) as f64 * self.k
    }

    /// `sum_{m1 <= m < m2} sqrt(p_m)`.
    pub fn w_sum(&self, m1: usize, m2: usize) -> f64 {
        self.w_prefix[m2 - 1] - self.w_prefix[m1 - 1]
    }

    /// Regime II share of content `idx` (1-based) under boundaries `(m1, m2)`.
    pub fn share(&self, m1: usize, m2: usize, idx: usize) -> f64 {
        self.w[idx - 1] * self.residual(m1, m2) / self.w_sum(m1, m2)
    }

    /// Materializes the allocation values; leftover budget from an empty
    /// Regime II is spread evenly over Regime I up to the cap.
    pub fn build(&self, m1: usize, m2: usize) -> Vec<f64> {
        let m = self.m();
        let residual = self.residual(m1, m2);
        let mut values = Vec::with_capacity(m);
        let top = if m1 == m2 && m1 > 1 && residual > 0.0 {
            (self.top + residual / (m1 - 1) as f64).min(self.cap)
        } else {
            self.top
        };
        values.extend(std::iter::repeat(top).take(m1 - 1));
        if m2 > m1 {
            let scale = residual / self.w_sum(m1, m2);
            values.extend(
                self.w[m1 - 1..m2 - 1]
                    .iter()
                    .map(|&x| (x * scale).clamp(self.k, self.mid_hi)),
            );
        }
        values.extend(std::iter::repeat(self.k).take(m + 1 - m2));
        values
    }
}

/// Outcome of the boundary fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryFixedPoint {
    pub m1: usize,
    pub m2: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Exact-sum boundary conditions of the MDS family, solved by alternating
/// updates:
///
/// - `m2` is the largest index such that every Regime II share is at least `K`;
/// - `m1` is the smallest index whose Regime II share is at most `1/a`.
///
/// Stops when neither index moves, or after [`FIXED_POINT_MAX_ITERS`] rounds.
pub fn mds_boundary_fixed_point(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
) -> Result<BoundaryFixedPoint> {
    cfg.validate()?;
    cfg.check_budget(pop.len())?;
    let layout = MdsLayout::new(cfg, pop);
    Ok(fixed_point(&layout))
}

fn fixed_point(layout: &MdsLayout) -> BoundaryFixedPoint {
    let m = layout.m();
    let (mut m1, mut m2) = (1usize, m + 1);
    for iter in 1..=FIXED_POINT_MAX_ITERS {
        let mut n2 = m + 1;
        while n2 > m1
            && (layout.residual(m1, n2) < 0.0 || layout.share(m1, n2, n2 - 1) < layout.k)
        {
            n2 -= 1;
        }
        let mut n1 = 1;
        while n1 < n2 && layout.share(n1, n2, n1) > layout.mid_hi {
            n1 += 1;
        }
        while n1 > 1 && layout.residual(n1, n2) < 0.0 {
            n1 -= 1;
        }
        if (n1, n2) == (m1, m2) {
            return BoundaryFixedPoint {
                m1,
                m2,
                iterations: iter,
                converged: true,
            };
        }
        m1 = n1;
        m2 = n2;
    }
    BoundaryFixedPoint {
        m1,
        m2,
        iterations: FIXED_POINT_MAX_ITERS,
        converged: false,
    }
}

/// MDS allocation: Regime I contents get `1/a` coded subpackets, Regime II
/// shares the residual budget `S n - (m1 - 1)/a - (M - m2 + 1) K` in
/// proportion to `sqrt(p_m)`, and Regime III keeps `K`.
///
/// Boundaries come from [`mds_boundary_fixed_point`]. When Regime II is empty,
/// any residual budget raises Regime I toward the `1/a + K` cap.
pub fn mds_allocation(cfg: &NetworkConfig, pop: &PopularityModel) -> Result<Allocation> {
    cfg.validate()?;
    cfg.check_budget(pop.len())?;
    let layout = MdsLayout::new(cfg, pop);
    let fp = fixed_point(&layout);
    Ok(Allocation::from_values(
        Strategy::Mds,
        layout.build(fp.m1, fp.m2),
        cfg,
    ))
}

/// Which term of a delay scaling law dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominantTerm {
    /// The `K` floor: every subpacket needs its own slot.
    Subpackets,
    /// The popularity term built from harmonic sums.
    Popularity,
    /// The `log K / a` term of a large Regime III.
    RegimeThree,
}

/// Case of the coded scaling law, keyed on the closed-form boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdsCase {
    /// `m1` reaches `M`: the whole library is fully replicated.
    RegimeOneOnly,
    /// `m2` reaches `M` but `m1` does not.
    NoRegimeThree,
    /// `m2 < M`.
    WithRegimeThree,
}

/// Scaling-law evaluation with unit constants.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayScaling {
    pub dominant: DominantTerm,
    /// Symbolic growth class of the delay, e.g. `K·M^0.5/(n·a)`.
    pub class: String,
    pub value: f64,
    pub throughput: f64,
    pub throughput_class: String,
    pub case: Option<MdsCase>,
}

fn fmt_exp(x: f64) -> String {
    let s = format!("{:.6}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Symbolic monomial `var^pow (log var)^logp`, split into numerator and
/// denominator factors.
fn monomial(var: &str, pow: f64, logp: i32, num: &mut Vec<String>, den: &mut Vec<String>) {
    if pow.abs() > 1e-12 {
        let e = pow.abs();
        let f = if (e - 1.0).abs() < 1e-12 {
            var.to_string()
        } else {
            format!("{var}^{}", fmt_exp(e))
        };
        if pow > 0.0 { num.push(f) } else { den.push(f) }
    }
    if logp != 0 {
        let e = logp.abs();
        let f = if e == 1 {
            format!("log {var}")
        } else {
            format!("(log {var})^{e}")
        };
        if logp > 0 { num.push(f) } else { den.push(f) }
    }
}

fn fraction(num: Vec<String>, den: Vec<String>) -> String {
    let top = if num.is_empty() { "1".to_string() } else { num.join("·") };
    match den.len() {
        0 => top,
        1 => format!("{top}/{}", den[0]),
        _ => format!("{top}/({})", den.join("·")),
    }
}

fn throughput_class(class: &str) -> String {
    if class.contains('/') || class.contains('·') {
        format!("1/(n·a·({class}))")
    } else {
        format!("1/(n·a·{class})")
    }
}

/// Popularity factor `H_{alpha/2}(var)^2 / H_alpha(M)` as a symbolic class.
fn popularity_class(alpha: f64, var: &str, num: &mut Vec<String>, den: &mut Vec<String>) {
    let (p_half, l_half) = harmonic_class(alpha, true).exponents();
    let (p_full, l_full) = harmonic_class(alpha, false).exponents();
    if var == "M" {
        monomial("M", 2.0 * p_half - p_full, 2 * l_half - l_full, num, den);
    } else {
        monomial(var, 2.0 * p_half, 2 * l_half, num, den);
        monomial("M", -p_full, -l_full, num, den);
    }
}

/// Delay scaling law for the given strategy, evaluated with exact harmonic
/// sums and unit constants, together with the matching throughput `1/(n a D)`.
pub fn delay_scaling(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    strategy: Strategy,
) -> Result<DelayScaling> {
    cfg.validate()?;
    let k = cfg.k as f64;
    let na = cfg.n as f64 * cfg.area;
    let alpha = pop.alpha();
    let (dominant, value, class, case) = match strategy {
        Strategy::Uncoded => {
            let second = k * pop.h_half_alpha().powi(2) / (na * pop.h_alpha());
            if second > k {
                let (mut num, mut den) = (vec!["K".to_string()], vec!["n".into(), "a".into()]);
                popularity_class(alpha, "M", &mut num, &mut den);
                (DominantTerm::Popularity, second, fraction(num, den), None)
            } else {
                (DominantTerm::Subpackets, k, "K".to_string(), None)
            }
        }
        Strategy::Mds => {
            let m = pop.len();
            let (m1, m2) = mds_boundaries(cfg, pop)?;
            if m1 >= m {
                (DominantTerm::Subpackets, k, "K".to_string(), Some(MdsCase::RegimeOneOnly))
            } else if m2 >= m {
                let second = pop.h_half_alpha().powi(2) / (pop.h_alpha() * na);
                if second > k {
                    let (mut num, mut den) = (vec![], vec!["n".into(), "a".into()]);
                    popularity_class(alpha, "M", &mut num, &mut den);
                    (DominantTerm::Popularity, second, fraction(num, den), Some(MdsCase::NoRegimeThree))
                } else {
                    (DominantTerm::Subpackets, k, "K".to_string(), Some(MdsCase::NoRegimeThree))
                }
            } else {
                let h_m2 = harmonic_range(1, m2, alpha / 2.0);
                let second = h_m2.powi(2) / (cfg.area * pop.h_alpha() * (cfg.n - m) as f64);
                let third = k.ln() / cfg.area;
                let case = Some(MdsCase::WithRegimeThree);
                if second >= third && second > k {
                    let (mut num, mut den) = (vec![], vec!["(n-M)".into(), "a".into()]);
                    popularity_class(alpha, "m2", &mut num, &mut den);
                    (DominantTerm::Popularity, second, fraction(num, den), case)
                } else if third > k {
                    (DominantTerm::RegimeThree, third, "log K/a".to_string(), case)
                } else {
                    (DominantTerm::Subpackets, k, "K".to_string(), case)
                }
            }
        }
    };
    let throughput = delay::per_node_throughput(cfg, value)?;
    Ok(DelayScaling {
        dominant,
        throughput_class: throughput_class(&class),
        class,
        value,
        throughput,
        case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::popularity::{harmonic_sum, zipf_pmf};
    use approx::assert_relative_eq;

    fn cfg(n: usize, area: f64, k: usize) -> NetworkConfig {
        NetworkConfig::new(n, area, k).unwrap()
    }

    /// Dual bisection on the box-constrained uncoded problem, used as an
    /// independent oracle for the closed form.
    fn dual_oracle(pop: &PopularityModel, a: f64, copies: f64) -> Vec<f64> {
        let x_of = |d: f64| -> Vec<f64> {
            pop.pmf()
                .iter()
                .map(|&p| (p / (a * d)).sqrt().clamp(1.0, 1.0 / a))
                .collect()
        };
        let total = |d: f64| x_of(d).iter().sum::<f64>();
        if total(1e-300) <= copies {
            return x_of(1e-300);
        }
        let (mut lo, mut hi) = (1e-300f64, 1e300f64);
        for _ in 0..4000 {
            let mid = (lo * hi).sqrt();
            if total(mid) > copies {
                lo = mid
            } else {
                hi = mid
            }
        }
        x_of(hi)
    }

    #[test]
    fn uncoded_boundary_examples() {
        let one = zipf_pmf(1, 1.0).unwrap();
        assert_eq!(uncoded_boundary(&cfg(100, 0.05, 2), &one), 1);

        let pop = zipf_pmf(1000, 4.0).unwrap();
        assert_relative_eq!(pop.h_half_alpha(), 1.6439, max_relative = 1e-4);
        assert_eq!(uncoded_boundary(&cfg(10000, 0.01, 2), &pop), 8);

        let n = 30000usize;
        let pop = zipf_pmf(250, 0.5).unwrap();
        let a = (n as f64).ln() / n as f64;
        assert_eq!(uncoded_boundary(&cfg(n, a, 20), &pop), 1);

        let pop = zipf_pmf(50, 1.0).unwrap();
        assert_eq!(uncoded_boundary(&cfg(1000, 0.06, 2), &pop), 50);
    }

    #[test]
    fn uncoded_allocation_small_cases() {
        let pop = zipf_pmf(2, 1.0).unwrap();
        // Proportional split 4.686 : 3.314 overshoots the cap of 4, so both
        // contents are capped and the budget of 8 is used exactly.
        let al = uncoded_allocation(&cfg(8, 0.25, 2), &pop).unwrap();
        assert_eq!(al.values, vec![4.0, 4.0]);
        assert_eq!(al.m1, 3);
        let oracle = dual_oracle(&pop, 0.25, 8.0);
        for (v, o) in al.values.iter().zip(&oracle) {
            assert_relative_eq!(*v, *o, max_relative = 1e-9);
        }

        let al = uncoded_allocation(&cfg(10, 0.2, 3), &pop).unwrap();
        assert_eq!(al.values, vec![5.0, 5.0]);
        assert_eq!(al.m1, 3);

        let one = zipf_pmf(1, 0.7).unwrap();
        let al = uncoded_allocation(&cfg(50, 0.1, 4), &one).unwrap();
        assert_eq!(al.values, vec![10.0]);
        assert_eq!(al.m1, 2);
    }

    #[test]
    fn uncoded_allocation_proportional_when_uncapped() {
        // Small area: cap 1/a is far above any share, so the split is the
        // plain sqrt(p) proportion of the budget n.
        let pop = zipf_pmf(2, 1.0).unwrap();
        let al = uncoded_allocation(&cfg(8, 0.01, 2), &pop).unwrap();
        let w = [(2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()];
        assert_relative_eq!(al.values[0], 8.0 * w[0] / (w[0] + w[1]), max_relative = 1e-12);
        assert_relative_eq!(al.values[0], 4.686, max_relative = 1e-3);
        assert_relative_eq!(al.values[1], 3.314, max_relative = 1e-3);
        assert_eq!(al.m1, 1);
    }

    #[test]
    fn uncoded_allocation_matches_dual_oracle() {
        for &(m, alpha, n, area, k) in &[
            (250usize, 2.0, 30000usize, 0.002775, 20usize),
            (250, 0.5, 30000, 3.4e-4, 20),
            (40, 1.2, 500, 0.02, 3),
            (10, 3.0, 200, 0.05, 4),
        ] {
            let pop = zipf_pmf(m, alpha).unwrap();
            let c = cfg(n, area, k);
            let al = uncoded_allocation(&c, &pop).unwrap();
            al.check(&c).unwrap();
            let oracle = dual_oracle(&pop, area, c.budget() / k as f64);
            for (v, o) in al.values.iter().zip(&oracle) {
                assert_relative_eq!(*v, *o, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn uncoded_allocation_infeasible_budget() {
        let pop = zipf_pmf(20, 1.0).unwrap();
        let c = cfg(10, 0.2, 2);
        assert!(matches!(uncoded_allocation(&c, &pop), Err(Error::Infeasible(_))));
    }

    #[test]
    fn proportional_floor_lifts_tail() {
        let w = [1.0, 0.5, 0.01, 0.001];
        let v = proportional_with_floor(&w, 10.0, 1.0);
        assert_eq!(&v[2..], &[1.0, 1.0]);
        assert_relative_eq!(v[0] + v[1], 8.0, max_relative = 1e-12);
        assert_relative_eq!(v[0] / v[1], 2.0, max_relative = 1e-12);
        assert_eq!(proportional_with_floor(&w, 2.0, 1.0), vec![1.0; 4]);
    }

    #[test]
    fn mds_boundary_examples() {
        let pop = zipf_pmf(100, 1.0).unwrap();
        // m1 = 9900 * 10 * 1e-4 = 9.9 -> 10; m2 = 9900 * 1000 -> clamped to 100.
        assert_eq!(mds_boundaries(&cfg(10000, 1e-4, 10), &pop).unwrap(), (10, 100));

        let pop = zipf_pmf(1000, 3.0).unwrap();
        // m2 = 9000^{2/3} = 432.67; m1 = (10 * 9000 * 0.01)^{2/3} = 900^{2/3} = 93.22.
        let (m1, m2) = mds_boundaries(&cfg(10000, 0.01, 10), &pop).unwrap();
        assert_eq!(m2, (9000f64.powf(2.0 / 3.0) + 0.5).floor() as usize);
        assert_eq!((m1, m2), (93, 433));

        let one = zipf_pmf(1, 1.0).unwrap();
        assert_eq!(mds_boundaries(&cfg(10, 0.1, 2), &one).unwrap(), (1, 1));

        let pop = zipf_pmf(10, 1.0).unwrap();
        assert!(matches!(mds_boundaries(&cfg(10, 0.1, 2), &pop), Err(Error::Infeasible(_))));
    }

    #[test]
    fn mds_allocation_small_cases() {
        let pop = zipf_pmf(2, 1.0).unwrap();
        let al = mds_allocation(&cfg(6, 0.25, 2), &pop).unwrap();
        assert_eq!(al.values, vec![6.0, 6.0]);
        assert_eq!(al.m1, 3);

        let al = mds_allocation(&cfg(4, 0.25, 2), &pop).unwrap();
        assert_eq!(al.values, vec![4.0, 4.0]);

        let one = zipf_pmf(1, 1.0).unwrap();
        let big = mds_allocation(&cfg(20, 0.25, 2), &one).unwrap();
        assert_eq!(big.values, vec![6.0]);
        let small = mds_allocation(&cfg(2, 0.05, 2), &one).unwrap();
        assert_eq!(small.values, vec![4.0]);
    }

    #[test]
    fn mds_allocation_regimes() {
        let pop = zipf_pmf(200, 0.8).unwrap();
        let c = cfg(5000, 0.002, 3);
        let al = mds_allocation(&c, &pop).unwrap();
        al.check(&c).unwrap();
        let m2 = al.m2.unwrap();
        assert!(al.values[m2 - 1..].iter().all(|&v| v == 3.0));
        assert!(al.values[..al.m1 - 1].iter().all(|&v| v >= 1.0 / c.area));
        let fp = mds_boundary_fixed_point(&c, &pop).unwrap();
        assert!(fp.converged);
    }

    #[test]
    fn scaling_uncoded() {
        let n = 30000usize;
        let a = (n as f64).ln() / n as f64;
        let pop = zipf_pmf(250, 1.5).unwrap();
        let s = delay_scaling(&cfg(n, a, 20), &pop, Strategy::Uncoded).unwrap();
        assert_eq!(s.dominant, DominantTerm::Popularity);
        assert_eq!(s.class, "K·M^0.5/(n·a)");
        let h_half = harmonic_sum(250, 0.75).unwrap();
        let h = harmonic_sum(250, 1.5).unwrap();
        assert_relative_eq!(s.value, 20.0 * h_half * h_half / (n as f64 * a * h), max_relative = 1e-12);
        assert_relative_eq!(s.throughput, 1.0 / (n as f64 * a * s.value), max_relative = 1e-12);

        let pop = zipf_pmf(250, 3.0).unwrap();
        let s = delay_scaling(&cfg(n, a, 20), &pop, Strategy::Uncoded).unwrap();
        assert_eq!(s.dominant, DominantTerm::Subpackets);
        assert_eq!(s.value, 20.0);
        assert_eq!(s.class, "K");
    }

    #[test]
    fn scaling_mds_cases() {
        let n = 30000usize;
        let pop = zipf_pmf(250, 1.5).unwrap();
        // Tiny area: m2 reaches M, m1 stays small, popularity term dominates.
        let c = cfg(n, 1e-5, 3);
        let s = delay_scaling(&c, &pop, Strategy::Mds).unwrap();
        assert_eq!(s.case, Some(MdsCase::NoRegimeThree));
        assert_eq!(s.dominant, DominantTerm::Popularity);
        assert_eq!(s.class, "M^0.5/(n·a)");

        let pop3 = zipf_pmf(250, 3.0).unwrap();
        let c = cfg(n, 0.05, 20);
        let s = delay_scaling(&c, &pop3, Strategy::Mds).unwrap();
        assert_eq!(s.case, Some(MdsCase::RegimeOneOnly));
        assert_eq!(s.dominant, DominantTerm::Subpackets);

        // alpha > 2 with a large library: Regime III exists.
        let pop = zipf_pmf(5000, 3.0).unwrap();
        let s = delay_scaling(&cfg(20000, 1e-3, 4), &pop, Strategy::Mds).unwrap();
        assert_eq!(s.case, Some(MdsCase::WithRegimeThree));
        assert!(s.value >= 4.0);
    }

    #[test]
    fn class_strings() {
        let (mut num, mut den) = (vec!["K".to_string()], vec!["n".to_string(), "a".to_string()]);
        popularity_class(1.0, "M", &mut num, &mut den);
        assert_eq!(fraction(num, den), "K·M/(n·a·log M)");
        let (mut num, mut den) = (vec!["K".to_string()], vec!["n".to_string(), "a".to_string()]);
        popularity_class(2.0, "M", &mut num, &mut den);
        assert_eq!(fraction(num, den), "K·(log M)^2/(n·a)");
    }
}
