//! Load-balanced placement of cached copies onto nodes.
//!
//! Copies are placed one `(content, subpacket)` step at a time, always on the
//! currently least-loaded nodes with ties broken uniformly at random. Loads
//! then never differ by more than one across nodes.

use std::fmt::Write as _;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::{ceil_tol, Allocation};
use crate::error::{invalid, Error, Result};
use crate::network::NetworkConfig;
use crate::Strategy;

/// Cache contents of every node.
///
/// Entries are `(content_id, subpacket_id)`, both 0-based. For coded caching
/// the subpacket id is the index of the coded subpacket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheAssignment {
    pub per_node: Vec<Vec<(usize, usize)>>,
    pub load: Vec<usize>,
}

impl CacheAssignment {
    pub fn empty(n: usize) -> Self {
        CacheAssignment {
            per_node: vec![Vec::new(); n],
            load: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.per_node.len()
    }

    pub fn max_load(&self) -> usize {
        self.per_node.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_load(&self) -> usize {
        self.per_node.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.per_node.iter().map(Vec::len).sum()
    }

    /// Nodes holding `(content, subpacket)`.
    pub fn holders(&self, content: usize, subpacket: usize) -> Vec<usize> {
        self.per_node
            .iter()
            .enumerate()
            .filter(|(_, items)| items.contains(&(content, subpacket)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Line format: a `# nodes <n>` header, then `node content subpacket` per
    /// cached item in node order.
    pub fn to_text(&self) -> String {
        let mut out = format!("# nodes {}\n", self.n());
        for (node, items) in self.per_node.iter().enumerate() {
            for &(m, s) in items {
                let _ = writeln!(out, "{node} {m} {s}");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("nodes") {
                    let v = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| {
                        Error::Parse(format!("line {}: bad node-count header", lineno + 1))
                    })?;
                    n = Some(v);
                }
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if nums.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected `node content subpacket`",
                    lineno + 1
                )));
            }
            entries.push((nums[0], nums[1], nums[2]));
        }
        let n = n.unwrap_or_else(|| entries.iter().map(|e| e.0 + 1).max().unwrap_or(0));
        let mut out = CacheAssignment::empty(n);
        for (node, m, s) in entries {
            if node >= n {
                return Err(Error::Parse(format!("node {node} outside 0..{n}")));
            }
            out.per_node[node].push((m, s));
            out.load[node] += 1;
        }
        Ok(out)
    }
}

/// Nodes grouped by load; all loads are `base` or `base + 1`.
struct LoadBuckets {
    low: Vec<usize>,
    high: Vec<usize>,
}

impl LoadBuckets {
    /// Picks `c` distinct least-loaded nodes and raises each by one.
    fn take(&mut self, c: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        if c < self.low.len() {
            let picked = pick(&mut self.low, c, rng);
            self.high.extend_from_slice(&picked);
            picked
        } else {
            let mut picked = std::mem::take(&mut self.low);
            let extra = pick(&mut self.high, c - picked.len(), rng);
            // Former low nodes now share the new base with untouched high ones.
            self.low = std::mem::take(&mut self.high);
            self.low.extend_from_slice(&picked);
            self.high = extra.clone();
            picked.extend(extra);
            picked
        }
    }
}

/// Removes a uniformly random `c`-subset from `pool`.
fn pick(pool: &mut Vec<usize>, c: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx = index::sample(rng, pool.len(), c).into_vec();
    idx.sort_unstable_by(|a, b| b.cmp(a));
    idx.into_iter().map(|i| pool.swap_remove(i)).collect()
}

/// Places `ceil(X_m)` replicas of every subpacket (uncoded) or `ceil(r_m)`
/// coded subpackets of every content (MDS) on distinct nodes.
///
/// Contents are processed in ascending order; within a content, uncoded
/// subpackets go in index order and coded subpackets are placed together so
/// that no node receives two of them.
pub fn place(alloc: &Allocation, cfg: &NetworkConfig, seed: u64) -> Result<CacheAssignment> {
    cfg.validate()?;
    let n = cfg.n;
    let copies = alloc.copies();
    let steps_per_content = match alloc.kind {
        Strategy::Uncoded => cfg.k,
        Strategy::Mds => 1,
    };
    if let Some((m, &c)) = copies.iter().enumerate().find(|(_, &c)| c > n) {
        return Err(Error::Infeasible(format!(
            "content {} needs {c} distinct nodes but n = {n}",
            m + 1
        )));
    }
    let total: usize = copies.iter().map(|c| c * steps_per_content).sum();
    if total > 2 * cfg.s * n {
        return Err(Error::Infeasible(format!(
            "{total} cached copies exceed twice the cache budget 2*S*n = {}",
            2 * cfg.s * n
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buckets = LoadBuckets {
        low: (0..n).collect(),
        high: Vec::new(),
    };
    let mut out = CacheAssignment::empty(n);
    for (m, &c) in copies.iter().enumerate() {
        match alloc.kind {
            Strategy::Uncoded => {
                for s in 0..cfg.k {
                    for node in buckets.take(c, &mut rng) {
                        out.per_node[node].push((m, s));
                        out.load[node] += 1;
                    }
                }
            }
            Strategy::Mds => {
                let mut nodes = buckets.take(c, &mut rng);
                nodes.sort_unstable();
                for (j, node) in nodes.into_iter().enumerate() {
                    out.per_node[node].push((m, j));
                    out.load[node] += 1;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlacementError {
    /// A node holds the same item twice, or two coded subpackets of one content.
    Duplicate { node: usize, content: usize, subpacket: usize },
    /// Wrong number of distinct holders for an item or content.
    CopyCount { content: usize, subpacket: Option<usize>, expected: usize, found: usize },
    /// Item outside the allocation's library or subpacket range.
    UnknownItem { node: usize, content: usize, subpacket: usize },
    Overloaded { node: usize, load: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementReport {
    pub max_load: usize,
    pub min_load: usize,
    pub errors: Vec<PlacementError>,
}

impl PlacementReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Recomputes loads and copy counts from `per_node` and lists every
/// violated invariant. Never fails.
pub fn verify(assign: &CacheAssignment, alloc: &Allocation, k: usize, s: usize) -> PlacementReport {
    let copies = alloc.copies();
    let m_len = copies.len();
    let mut errors = Vec::new();
    let limit = 2 * s;

    // Dense holder counters: item `(m, sp)` sits at `offset[m] + sp`.
    let mut offset = Vec::with_capacity(m_len + 1);
    offset.push(0usize);
    for &c in &copies {
        let width = match alloc.kind {
            Strategy::Uncoded => k,
            Strategy::Mds => c,
        };
        offset.push(offset.last().unwrap() + width);
    }
    let mut item_holders = vec![0usize; *offset.last().unwrap()];
    let mut content_holders = vec![0usize; m_len];
    let mut keys = Vec::new();
    for (node, items) in assign.per_node.iter().enumerate() {
        keys.clear();
        for &(m, sp) in items {
            let valid = m < m_len
                && match alloc.kind {
                    Strategy::Uncoded => sp < k,
                    Strategy::Mds => sp < copies[m],
                };
            if !valid {
                errors.push(PlacementError::UnknownItem { node, content: m, subpacket: sp });
                continue;
            }
            // A coded node may hold one subpacket per content.
            let key = match alloc.kind {
                Strategy::Uncoded => (m, sp),
                Strategy::Mds => (m, 0),
            };
            keys.push((key, sp));
        }
        keys.sort_unstable();
        for (i, &((m, _), sp)) in keys.iter().enumerate() {
            if i > 0 && keys[i - 1].0 == keys[i].0 {
                errors.push(PlacementError::Duplicate { node, content: m, subpacket: sp });
                continue;
            }
            item_holders[offset[m] + sp] += 1;
            content_holders[m] += 1;
        }
        if items.len() > limit {
            errors.push(PlacementError::Overloaded { node, load: items.len(), limit });
        }
    }

    match alloc.kind {
        Strategy::Uncoded => {
            for (m, &c) in copies.iter().enumerate() {
                for sp in 0..k {
                    let found = item_holders[offset[m] + sp];
                    if found != c {
                        errors.push(PlacementError::CopyCount {
                            content: m,
                            subpacket: Some(sp),
                            expected: c,
                            found,
                        });
                    }
                }
            }
        }
        Strategy::Mds => {
            for (m, &c) in copies.iter().enumerate() {
                let found = content_holders[m];
                if found != c {
                    errors.push(PlacementError::CopyCount {
                        content: m,
                        subpacket: None,
                        expected: c,
                        found,
                    });
                }
                for j in 0..c {
                    let h = item_holders[offset[m] + j];
                    if h != 1 {
                        errors.push(PlacementError::CopyCount {
                            content: m,
                            subpacket: Some(j),
                            expected: 1,
                            found: h,
                        });
                    }
                }
            }
        }
    }

    PlacementReport {
        max_load: assign.max_load(),
        min_load: assign.min_load(),
        errors,
    }
}

/// Copy counts `ceil(X_m)` or `ceil(r_m)` for arbitrary raw values.
pub fn ceil_copies(values: &[f64]) -> Result<Vec<usize>> {
    values
        .iter()
        .map(|&v| {
            if v.is_finite() && v >= 0.0 {
                Ok(ceil_tol(v))
            } else {
                Err(invalid(format!("copy count must be finite and >= 0, got {v}")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::uncoded_allocation;
    use crate::popularity::zipf_pmf;

    fn alloc(kind: Strategy, values: &[f64], cfg: &NetworkConfig) -> Allocation {
        Allocation::from_values(kind, values.to_vec(), cfg)
    }

    #[test]
    fn small_trace() {
        let cfg = NetworkConfig::new(4, 0.25, 1).unwrap();
        let al = alloc(Strategy::Uncoded, &[2.0, 1.0], &cfg);
        let a = place(&al, &cfg, 1).unwrap();
        assert_eq!(a.total(), 3);
        assert_eq!(a.max_load(), 1);
        assert!(verify(&a, &al, 1, 1).is_ok());
    }

    #[test]
    fn single_node() {
        let cfg = NetworkConfig::new(1, 1.0, 1).unwrap();
        let al = alloc(Strategy::Uncoded, &[1.0], &cfg);
        let a = place(&al, &cfg, 0).unwrap();
        assert_eq!(a.per_node, vec![vec![(0, 0)]]);
    }

    #[test]
    fn loads_stay_within_one() {
        let cfg = NetworkConfig::new(37, 0.1, 3).unwrap();
        let al = alloc(Strategy::Uncoded, &[10.0, 7.2, 5.0, 3.0, 1.0], &cfg);
        for seed in 0..20 {
            let a = place(&al, &cfg, seed).unwrap();
            assert!(a.max_load() - a.min_load() <= 1);
            assert!(verify(&a, &al, 3, 3).is_ok());
        }
    }

    #[test]
    fn mds_distinct_nodes() {
        let cfg = NetworkConfig::new(20, 0.1, 3).unwrap();
        let al = alloc(Strategy::Mds, &[13.0, 9.5, 3.0], &cfg);
        let a = place(&al, &cfg, 9).unwrap();
        let rep = verify(&a, &al, 3, 3);
        assert!(rep.is_ok(), "{:?}", rep.errors);
        assert_eq!(a.total(), 13 + 10 + 3);
        assert_eq!(a.holders(1, 9).len(), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = NetworkConfig::new(50, 0.05, 2).unwrap();
        let al = alloc(Strategy::Uncoded, &[9.0, 4.0, 2.0], &cfg);
        assert_eq!(place(&al, &cfg, 5).unwrap(), place(&al, &cfg, 5).unwrap());
        assert_ne!(place(&al, &cfg, 5).unwrap(), place(&al, &cfg, 6).unwrap());
    }

    #[test]
    fn injected_duplicate_is_one_error() {
        let cfg = NetworkConfig::new(10, 0.2, 2).unwrap();
        for kind in [Strategy::Uncoded, Strategy::Mds] {
            let al = alloc(kind, &[4.0, 2.0], &cfg);
            let mut a = place(&al, &cfg, 3).unwrap();
            let node = (0..10).find(|&i| !a.per_node[i].is_empty()).unwrap();
            let item = a.per_node[node][0];
            a.per_node[node].push(item);
            let rep = verify(&a, &al, 2, 2);
            assert_eq!(rep.errors.len(), 1, "{kind}: {:?}", rep.errors);
            assert!(matches!(rep.errors[0], PlacementError::Duplicate { .. }));
        }
    }

    #[test]
    fn infeasible_requests() {
        let cfg = NetworkConfig::new(3, 0.2, 1).unwrap();
        let al = alloc(Strategy::Uncoded, &[5.0], &cfg);
        assert!(matches!(place(&al, &cfg, 0), Err(Error::Infeasible(_))));
        let al = alloc(Strategy::Uncoded, &[3.0, 3.0, 1.0], &cfg);
        assert!(matches!(place(&al, &cfg, 0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn text_roundtrip() {
        let cfg = NetworkConfig::new(30, 0.1, 2).unwrap();
        let pop = zipf_pmf(5, 1.0).unwrap();
        let al = uncoded_allocation(&cfg, &pop).unwrap();
        let a = place(&al, &cfg, 11).unwrap();
        let text = a.to_text();
        assert!(text.starts_with("# nodes 30\n"));
        assert_eq!(CacheAssignment::from_text(&text).unwrap(), a);
        assert!(CacheAssignment::from_text("0 1").is_err());
        assert!(CacheAssignment::from_text("# nodes 2\n5 0 0").is_err());
    }
}
