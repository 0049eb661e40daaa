//! Slotted Monte Carlo simulation of content delivery on the unit torus.
//!
//! A node reaches every other node inside the axis-aligned square of side
//! `R = sqrt(a)` centred on it, so a uniformly placed holder is in range with
//! probability exactly `a`. Requesters collect one subpacket per slot.

mod hitting;

pub use hitting::{estimate_hitting_time, HittingTimeEstimate};

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::delay::contact_exact;
use crate::error::{invalid, Result};
use crate::network::{Mobility, NetworkConfig};
use crate::placement::CacheAssignment;
use crate::popularity::{CompensatedSum, PopularityModel};
use crate::Strategy;

/// How deliveries are granted each slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Every requester with a source in range receives a subpacket.
    DelayOnly,
    /// At most one link per active scheduling cell.
    Scheduled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: SimMode,
    pub strategy: Strategy,
    pub slots: usize,
    pub warmup: usize,
    /// Fraction of nodes issuing requests; node `i` requests iff `i < ceil(f n)`.
    pub requester_fraction: f64,
    /// Extra slots allowed for requests still open at `slots`.
    pub drain_slots: usize,
}

impl SimConfig {
    pub fn new(mode: SimMode, strategy: Strategy, slots: usize, warmup: usize) -> Self {
        SimConfig {
            mode,
            strategy,
            slots,
            warmup,
            requester_fraction: 1.0,
            drain_slots: slots.max(1000),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.slots <= self.warmup {
            return Err(invalid(format!(
                "slots ({}) must exceed warmup ({})",
                self.slots, self.warmup
            )));
        }
        if !(self.requester_fraction > 0.0 && self.requester_fraction <= 1.0) {
            return Err(invalid(format!(
                "requester fraction must lie in (0, 1], got {}",
                self.requester_fraction
            )));
        }
        Ok(())
    }
}

/// Metrics of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    /// Mean over requesters of each requester's mean delay.
    pub d_avg_empirical: f64,
    /// Mean over all completed requests.
    pub d_avg_pooled: f64,
    /// Standard error of `d_avg_empirical` across requesters.
    pub std_error: f64,
    /// Completed contents per slot per requester inside the window.
    pub throughput_empirical: f64,
    /// Delay samples indexed by content (0-based).
    pub per_content_delays: Vec<Vec<f64>>,
    /// `holders -> (slots observed, slots with a holder in range)` for
    /// requesters that cache none of what they need.
    pub contact_counters: BTreeMap<usize, (u64, u64)>,
    pub completed: usize,
    /// Counted requests still open when the drain limit ran out.
    pub censored: usize,
    pub links: u64,
    pub protocol_violations: u64,
}

/// Uniform grid over the torus for neighbourhood queries.
struct Grid {
    g: usize,
    start: Vec<usize>,
    nodes: Vec<usize>,
}

impl Grid {
    fn new(g: usize, n: usize) -> Self {
        Grid {
            g,
            start: vec![0; g * g + 1],
            nodes: vec![0; n],
        }
    }

    fn cell_of(&self, p: [f64; 2]) -> usize {
        let cx = ((p[0] * self.g as f64) as usize).min(self.g - 1);
        let cy = ((p[1] * self.g as f64) as usize).min(self.g - 1);
        cy * self.g + cx
    }

    fn rebuild(&mut self, pos: &[[f64; 2]]) {
        self.start.iter_mut().for_each(|s| *s = 0);
        for &p in pos {
            let c = self.cell_of(p);
            self.start[c + 1] += 1;
        }
        for c in 0..self.g * self.g {
            self.start[c + 1] += self.start[c];
        }
        let mut fill = self.start.clone();
        for (i, &p) in pos.iter().enumerate() {
            let c = self.cell_of(p);
            self.nodes[fill[c]] = i;
            fill[c] += 1;
        }
    }

    /// Calls `f` for every node in the 3x3 block of cells around `p`, or for
    /// every node when the grid is too coarse for the block to be distinct.
    fn for_near(&self, p: [f64; 2], mut f: impl FnMut(usize)) {
        if self.g < 3 {
            self.nodes.iter().for_each(|&j| f(j));
            return;
        }
        let g = self.g as isize;
        let c = self.cell_of(p) as isize;
        let (cx, cy) = (c % g, c / g);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let x = (cx + dx).rem_euclid(g);
                let y = (cy + dy).rem_euclid(g);
                let cell = (y * g + x) as usize;
                for &j in &self.nodes[self.start[cell]..self.start[cell + 1]] {
                    f(j);
                }
            }
        }
    }
}

#[inline]
fn wrap_delta(d: f64) -> f64 {
    let d = d.abs();
    d.min(1.0 - d)
}

/// Whether `q` lies in the square of side `side` centred at `p` on the torus.
#[inline]
pub(crate) fn in_square(p: [f64; 2], q: [f64; 2], side: f64) -> bool {
    let h = 0.5 * side;
    wrap_delta(p[0] - q[0]) <= h && wrap_delta(p[1] - q[1]) <= h
}

#[inline]
pub(crate) fn torus_dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    wrap_delta(p[0] - q[0]).hypot(wrap_delta(p[1] - q[1]))
}

#[inline]
pub(crate) fn wrap01(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform_point(rng: &mut ChaCha8Rng) -> [f64; 2] {
    [rng.gen::<f64>(), rng.gen::<f64>()]
}

fn move_nodes(pos: &mut [[f64; 2]], mobility: Mobility, rng: &mut ChaCha8Rng) {
    match mobility {
        Mobility::Reshuffle => pos.iter_mut().for_each(|p| *p = uniform_point(rng)),
        Mobility::RandomWalk { flight } => {
            for p in pos.iter_mut() {
                let th = rng.gen::<f64>() * TAU;
                p[0] = wrap01(p[0] + flight * th.cos());
                p[1] = wrap01(p[1] + flight * th.sin());
            }
        }
    }
}

/// Per-node caches sorted for lookup, plus holder counts per item.
struct CacheIndex {
    per_node: Vec<Vec<(usize, usize)>>,
    /// `holders[m][s]`: nodes holding subpacket (or coded subpacket) `s` of `m`.
    holders: Vec<Vec<u32>>,
}

impl CacheIndex {
    fn new(caches: &CacheAssignment, m: usize, k: usize, strategy: Strategy) -> Result<Self> {
        let mut per_node = caches.per_node.clone();
        let mut holders: Vec<Vec<u32>> = vec![Vec::new(); m];
        for items in per_node.iter_mut() {
            items.sort_unstable();
            items.dedup();
            for &(c, s) in items.iter() {
                if c >= m {
                    return Err(invalid(format!("cache holds content {c} outside 0..{m}")));
                }
                if strategy == Strategy::Uncoded && s >= k {
                    return Err(invalid(format!("cache holds subpacket {s} outside 0..{k}")));
                }
                let h = &mut holders[c];
                if h.len() <= s {
                    h.resize(s + 1, 0);
                }
                h[s] += 1;
            }
        }
        for (c, h) in holders.iter().enumerate() {
            let ok = match strategy {
                Strategy::Uncoded => h.len() == k && h.iter().all(|&x| x > 0),
                Strategy::Mds => h.iter().filter(|&&x| x > 0).count() >= k,
            };
            if !ok {
                return Err(invalid(format!(
                    "caches cannot serve content {c}: too few distinct subpackets"
                )));
            }
        }
        Ok(CacheIndex { per_node, holders })
    }

    fn has(&self, node: usize, item: (usize, usize)) -> bool {
        self.per_node[node].binary_search(&item).is_ok()
    }

    /// Coded subpackets of content `m` on `node`.
    fn coded_on(&self, node: usize, m: usize) -> &[(usize, usize)] {
        let items = &self.per_node[node];
        let lo = items.partition_point(|e| e.0 < m);
        let hi = items.partition_point(|e| e.0 <= m);
        &items[lo..hi]
    }
}

#[derive(Debug, Clone)]
struct Request {
    content: usize,
    start: usize,
    /// Uncoded: next subpacket index. Coded: number received.
    progress: usize,
    received: Vec<bool>,
    counted: bool,
    active: bool,
}

/// Outcome of scanning a requester's neighbourhood.
struct Scan {
    self_serves: Option<usize>,
    /// Randomly chosen remote source and the subpacket it would send.
    remote: Option<(usize, usize)>,
    holders: usize,
}

struct Trial<'a> {
    cfg: &'a NetworkConfig,
    pop: &'a PopularityModel,
    sim: &'a SimConfig,
    index: CacheIndex,
    rng: ChaCha8Rng,
    pos: Vec<[f64; 2]>,
    grid: Grid,
    side: f64,
}

impl Trial<'_> {
    fn new_request(&mut self, slot: usize) -> Request {
        let content = self.pop.sample(&mut self.rng);
        let width = match self.sim.strategy {
            Strategy::Uncoded => 0,
            Strategy::Mds => self.index.holders[content].len(),
        };
        Request {
            content,
            start: slot,
            progress: 0,
            received: vec![false; width],
            counted: slot >= self.sim.warmup && slot < self.sim.slots,
            active: true,
        }
    }

    fn scan(&mut self, node: usize, req: &Request) -> Scan {
        let m = req.content;
        let strategy = self.sim.strategy;
        let mut self_serves = None;
        let holders = match strategy {
            Strategy::Uncoded => {
                if self.index.has(node, (m, req.progress)) {
                    self_serves = Some(req.progress);
                }
                self.index.holders[m][req.progress] as usize
            }
            Strategy::Mds => {
                for &(_, s) in self.index.coded_on(node, m) {
                    if !req.received[s] {
                        self_serves = Some(s);
                    }
                }
                self.index.holders[m]
                    .iter()
                    .zip(&req.received)
                    .filter(|(_, &r)| !r)
                    .map(|(&h, _)| h as usize)
                    .sum()
            }
        };
        let p = self.pos[node];
        let side = self.side;
        let mut seen = 0u32;
        let mut remote = None;
        let (index, pos, rng) = (&self.index, &self.pos, &mut self.rng);
        self.grid.for_near(p, |j| {
            if j == node || !in_square(p, pos[j], side) {
                return;
            }
            let offer = match strategy {
                Strategy::Uncoded => index.has(j, (m, req.progress)).then_some(req.progress),
                Strategy::Mds => index
                    .coded_on(j, m)
                    .iter()
                    .map(|e| e.1)
                    .find(|&s| !req.received[s]),
            };
            if let Some(s) = offer {
                seen += 1;
                if rng.gen_range(0..seen) == 0 {
                    remote = Some((j, s));
                }
            }
        });
        Scan {
            self_serves,
            remote,
            holders,
        }
    }
}

/// Scheduling grid for the protocol-model TDMA.
struct Schedule {
    /// Colour period along each axis.
    period: usize,
    /// Cells per axis (a multiple of `period`), or 1 for a single global cell.
    cells: usize,
}

impl Schedule {
    fn new(range: f64, delta: f64) -> Self {
        let period = (2.0 + delta + std::f64::consts::FRAC_1_SQRT_2).ceil() as usize;
        let g = (1.0 / range).floor() as usize;
        let cells = if g < period { 1 } else { period * (g / period) };
        Schedule { period, cells }
    }

    fn active_cell(&self, p: [f64; 2], slot: usize) -> Option<usize> {
        let g = self.cells;
        let cx = ((p[0] * g as f64) as usize).min(g - 1);
        let cy = ((p[1] * g as f64) as usize).min(g - 1);
        if g > 1 {
            let phase = slot % (self.period * self.period);
            if cx % self.period != phase % self.period || cy % self.period != phase / self.period {
                return None;
            }
        }
        Some(cy * g + cx)
    }
}

/// Runs one trial.
///
/// Requests started in `[warmup, slots)` are counted; they are followed for
/// at most `drain_slots` slots past `slots`, and any still open are reported
/// as censored.
pub fn run_trial(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    caches: &CacheAssignment,
    sim: &SimConfig,
    seed: u64,
) -> Result<TrialMetrics> {
    run_trial_stream(cfg, pop, caches, sim, seed, 0)
}

fn run_trial_stream(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    caches: &CacheAssignment,
    sim: &SimConfig,
    seed: u64,
    stream: u64,
) -> Result<TrialMetrics> {
    cfg.validate()?;
    sim.validate()?;
    let n = cfg.n;
    if caches.n() != n {
        return Err(invalid(format!(
            "cache assignment covers {} nodes, network has {n}",
            caches.n()
        )));
    }
    let k = cfg.k;
    let index = CacheIndex::new(caches, pop.len(), k, sim.strategy)?;
    let side = cfg.range();
    let g = ((2.0 / side).floor() as usize).max(1);
    let mut rng = rng_for(seed, stream);
    let pos: Vec<[f64; 2]> = (0..n).map(|_| uniform_point(&mut rng)).collect();
    let mut t = Trial {
        cfg,
        pop,
        sim,
        index,
        rng,
        pos,
        grid: Grid::new(g, n),
        side,
    };
    let schedule = Schedule::new(side, cfg.delta);
    let requesters = ((sim.requester_fraction * n as f64).ceil() as usize).clamp(1, n);

    let mut reqs: Vec<Request> = (0..requesters).map(|_| t.new_request(0)).collect();
    let mut per_node: Vec<(CompensatedSum, usize)> = vec![(CompensatedSum::default(), 0); requesters];
    let mut per_content: Vec<Vec<f64>> = vec![Vec::new(); pop.len()];
    let mut counters: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    let mut in_window = 0usize;
    let mut links = 0u64;
    let mut violations = 0u64;
    let horizon = sim.slots + sim.drain_slots;
    let mut cell_pick: Vec<(u32, usize, usize, usize)> = Vec::new();

    let mut slot = 0usize;
    while slot < horizon {
        if slot >= sim.slots && !reqs.iter().any(|r| r.active && r.counted) {
            break;
        }
        if slot > 0 {
            move_nodes(&mut t.pos, t.cfg.mobility, &mut t.rng);
        }
        t.grid.rebuild(&t.pos);

        // (requester, subpacket) pairs delivered this slot.
        let mut delivered: Vec<(usize, usize)> = Vec::new();
        if sim.mode == SimMode::Scheduled {
            cell_pick.clear();
            cell_pick.resize(schedule.cells * schedule.cells, (0, usize::MAX, 0, 0));
        }
        for (i, req) in reqs.iter().enumerate().take(requesters) {
            if !req.active {
                continue;
            }
            let scan = t.scan(i, req);
            if scan.self_serves.is_none() {
                let e = counters.entry(scan.holders).or_default();
                e.0 += 1;
                e.1 += scan.remote.is_some() as u64;
            }
            if let Some(s) = scan.self_serves {
                delivered.push((i, s));
                continue;
            }
            let Some((src, s)) = scan.remote else { continue };
            match sim.mode {
                SimMode::DelayOnly => delivered.push((i, s)),
                SimMode::Scheduled => {
                    if let Some(cell) = schedule.active_cell(t.pos[i], slot) {
                        let slot_entry = &mut cell_pick[cell];
                        slot_entry.0 += 1;
                        if t.rng.gen_range(0..slot_entry.0) == 0 {
                            *slot_entry = (slot_entry.0, i, src, s);
                        }
                    }
                }
            }
        }
        if sim.mode == SimMode::Scheduled {
            let active: Vec<(usize, usize, usize)> = cell_pick
                .iter()
                .filter(|e| e.1 != usize::MAX)
                .map(|e| (e.1, e.2, e.3))
                .collect();
            let guard = (1.0 + cfg.delta) * side;
            for (a, &(rx, _, _)) in active.iter().enumerate() {
                for (b, &(_, tx, _)) in active.iter().enumerate() {
                    if a != b && torus_dist(t.pos[rx], t.pos[tx]) <= guard {
                        violations += 1;
                    }
                }
            }
            links += active.len() as u64;
            delivered.extend(active.into_iter().map(|(rx, _, s)| (rx, s)));
        } else {
            links += delivered.len() as u64;
        }

        for (i, s) in delivered {
            let req = &mut reqs[i];
            let done = match sim.strategy {
                Strategy::Uncoded => {
                    req.progress += 1;
                    req.progress == k
                }
                Strategy::Mds => {
                    if !req.received[s] {
                        req.received[s] = true;
                        req.progress += 1;
                    }
                    req.progress == k
                }
            };
            if !done {
                continue;
            }
            let delay = (slot + 1 - req.start) as f64;
            if req.counted {
                per_node[i].0.add(delay);
                per_node[i].1 += 1;
                per_content[req.content].push(delay);
            }
            if slot >= sim.warmup && slot < sim.slots {
                in_window += 1;
            }
            if slot + 1 < sim.slots {
                *req = t.new_request(slot + 1);
            } else {
                req.active = false;
            }
        }
        slot += 1;
    }

    let censored = reqs.iter().filter(|r| r.active && r.counted).count();
    let means: Vec<f64> = per_node
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(s, c)| s.value() / *c as f64)
        .collect();
    let completed: usize = per_node.iter().map(|(_, c)| c).sum();
    let (d_avg, std_error) = mean_and_se(&means);
    let pooled = if completed > 0 {
        per_node.iter().map(|(s, _)| s.value()).sum::<f64>() / completed as f64
    } else {
        f64::NAN
    };
    let window = (sim.slots - sim.warmup) as f64;
    Ok(TrialMetrics {
        d_avg_empirical: d_avg,
        d_avg_pooled: pooled,
        std_error,
        throughput_empirical: in_window as f64 / (requesters as f64 * window),
        per_content_delays: per_content,
        contact_counters: counters,
        completed,
        censored,
        links,
        protocol_violations: violations,
    })
}

pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs `trials` independent trials in parallel, trial `t` on RNG stream `t`.
/// Results are in trial order.
pub fn run_trials(
    cfg: &NetworkConfig,
    pop: &PopularityModel,
    caches: &CacheAssignment,
    sim: &SimConfig,
    trials: usize,
    seed: u64,
) -> Result<Vec<TrialMetrics>> {
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial_stream(cfg, pop, caches, sim, seed, t as u64))
        .collect()
}

/// Empirical contact frequency for one content.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactFrequency {
    pub content: usize,
    pub copies: usize,
    pub hits: u64,
    pub slots: u64,
    pub frequency: f64,
    /// Binomial standard error at the predicted probability.
    pub sigma: f64,
    /// `1 - (1 - a)^copies`.
    pub predicted: f64,
}

/// Probes a uniformly placed point each reshuffled slot and records whether
/// any of the first `copies_by_content[m]` holders of `(m, 0)` is in range.
pub fn empirical_contact_check(
    cfg: &NetworkConfig,
    caches: &CacheAssignment,
    copies_by_content: &[usize],
    slots: usize,
    seed: u64,
) -> Result<Vec<ContactFrequency>> {
    cfg.validate()?;
    if cfg.mobility != Mobility::Reshuffle {
        return Err(invalid("contact check needs reshuffling mobility"));
    }
    if caches.n() != cfg.n {
        return Err(invalid(format!(
            "cache assignment covers {} nodes, network has {}",
            caches.n(),
            cfg.n
        )));
    }
    if slots == 0 {
        return Err(invalid("contact check needs at least one slot"));
    }
    let holders: Vec<Vec<usize>> = copies_by_content
        .iter()
        .enumerate()
        .map(|(m, &c)| caches.holders(m, 0).into_iter().take(c).collect())
        .collect();
    let side = cfg.range();
    let mut rng = rng_for(seed, 0);
    let mut pos = vec![[0.0f64; 2]; cfg.n];
    let mut hits = vec![0u64; holders.len()];
    for _ in 0..slots {
        move_nodes(&mut pos, Mobility::Reshuffle, &mut rng);
        let probe = uniform_point(&mut rng);
        for (h, list) in hits.iter_mut().zip(&holders) {
            if list.iter().any(|&j| in_square(probe, pos[j], side)) {
                *h += 1;
            }
        }
    }
    Ok(holders
        .iter()
        .zip(hits)
        .enumerate()
        .map(|(m, (list, h))| {
            let predicted = contact_exact(cfg.area, list.len() as f64);
            ContactFrequency {
                content: m,
                copies: list.len(),
                hits: h,
                slots: slots as u64,
                frequency: h as f64 / slots as f64,
                sigma: (predicted * (1.0 - predicted) / slots as f64).sqrt(),
                predicted,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_helpers() {
        assert!((torus_dist([0.05, 0.5], [0.95, 0.5]) - 0.1).abs() < 1e-12);
        assert!(in_square([0.01, 0.01], [0.99, 0.99], 0.05));
        assert!(!in_square([0.01, 0.01], [0.9, 0.99], 0.05));
        assert_eq!(wrap01(-0.25), 0.75);
        assert_eq!(wrap01(1.0), 0.0);
    }

    #[test]
    fn grid_finds_all_neighbours() {
        let mut rng = rng_for(3, 0);
        let pos: Vec<[f64; 2]> = (0..500).map(|_| uniform_point(&mut rng)).collect();
        let side = 0.1;
        let mut grid = Grid::new((2.0 / side) as usize, pos.len());
        grid.rebuild(&pos);
        for i in 0..50 {
            let mut near = Vec::new();
            grid.for_near(pos[i], |j| {
                if in_square(pos[i], pos[j], side) {
                    near.push(j)
                }
            });
            near.sort_unstable();
            let brute: Vec<usize> = (0..pos.len()).filter(|&j| in_square(pos[i], pos[j], side)).collect();
            assert_eq!(near, brute);
        }
    }

    #[test]
    fn schedule_period_and_cells() {
        let s = Schedule::new(0.05, 1.0);
        assert_eq!(s.period, 4);
        assert_eq!(s.cells, 20);
        let coarse = Schedule::new(0.5, 1.0);
        assert_eq!(coarse.cells, 1);
        assert!(coarse.active_cell([0.3, 0.7], 5).is_some());
    }

    #[test]
    fn colour_period_keeps_guard_distance() {
        let mut rng = rng_for(12, 0);
        for &(range, delta) in &[(0.05, 1.0), (0.02, 0.5), (0.1, 2.0)] {
            let s = Schedule::new(range, delta);
            let g = s.cells as f64;
            let guard = (1.0 + delta) * range;
            for _ in 0..20_000 {
                // Two receivers in distinct cells of the same colour.
                let pick = |rng: &mut ChaCha8Rng| {
                    let cx = rng.gen_range(0..s.cells / s.period) * s.period;
                    let cy = rng.gen_range(0..s.cells / s.period) * s.period;
                    [(cx as f64 + rng.gen::<f64>()) / g, (cy as f64 + rng.gen::<f64>()) / g]
                };
                let (r1, r2) = (pick(&mut rng), pick(&mut rng));
                if s.active_cell(r1, 0) == s.active_cell(r2, 0) {
                    continue;
                }
                let h = 0.5 * range;
                let t2 = [
                    wrap01(r2[0] + rng.gen_range(-h..=h)),
                    wrap01(r2[1] + rng.gen_range(-h..=h)),
                ];
                assert!(torus_dist(r1, t2) > guard);
            }
        }
    }

    #[test]
    fn mean_se() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
