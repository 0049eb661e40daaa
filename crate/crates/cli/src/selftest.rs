//! Built-in oracle checks: brute-force equivalence of the solvers, exhaustive
//! codec subsets and placement load bounds.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subcache::codec::{Gf256, MdsCodec};
use subcache::placement::{place, verify};
use subcache::solver::{
    brute_force, solve_mds_relaxed, solve_uncoded, Objective, SolverStatus, BRUTE_FORCE_MAX_M,
    DEFAULT_TOL, KKT_TOL,
};
use subcache::{NetworkConfig, PopularityModel, Strategy};

use crate::runner::analytic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct Options {
    /// Largest library size for brute-force instances.
    pub brute_force_m: usize,
    /// Antilog entry to corrupt in the codec check.
    pub codec_fault: Option<usize>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            brute_force_m: BRUTE_FORCE_MAX_M,
            codec_fault: None,
            seed: 1,
        }
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> (Status, String)) -> CheckResult {
    let t = Instant::now();
    let (status, detail) = f();
    CheckResult {
        name,
        status,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn brute_force_check(opts: &Options) -> (Status, String) {
    if opts.brute_force_m == 0 || opts.brute_force_m > BRUTE_FORCE_MAX_M {
        return (
            Status::Skipped,
            format!(
                "warning: instance limit M = {} outside the brute-force range 1..={BRUTE_FORCE_MAX_M}",
                opts.brute_force_m
            ),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut solved = 0;
    let mut failures = Vec::new();
    let mut worst = 1.0f64;
    while solved < 60 {
        let m = rng.gen_range(1..=opts.brute_force_m);
        let k = rng.gen_range(1..=3usize);
        let strategy = if solved % 2 == 0 { Strategy::Uncoded } else { Strategy::Mds };
        let c = match strategy {
            Strategy::Uncoded => rng.gen_range(2..=12usize),
            Strategy::Mds => rng.gen_range(1..=12 - k),
        };
        let n = rng.gen_range(2..=4 * m * c);
        let alpha = rng.gen_range(0.3..2.5);
        let Ok(cfg) = NetworkConfig::new(n, 1.0 / c as f64, k) else { continue };
        if cfg.check_budget(m).is_err() {
            continue;
        }
        let pop = PopularityModel::zipf(m, alpha).expect("valid zipf");
        let relaxed = match strategy {
            Strategy::Uncoded => solve_uncoded(&pop, &cfg, DEFAULT_TOL),
            Strategy::Mds => solve_mds_relaxed(&pop, &cfg, DEFAULT_TOL),
        };
        let exact = brute_force(&pop, &cfg, strategy, Objective::Order);
        solved += 1;
        let label = format!("{strategy} M={m} K={k} n={n} a=1/{c} alpha={alpha:.3}");
        match (relaxed, exact) {
            (Ok(r), Ok(b)) => {
                if r.status == SolverStatus::Converged && r.kkt_residual > KKT_TOL {
                    failures.push(format!("{label}: KKT residual {:.2e}", r.kkt_residual));
                }
                let gap = b.objective / r.objective;
                worst = worst.max(gap);
                if !(1.0 - 1e-9..=2.0).contains(&gap) {
                    failures.push(format!("{label}: integer/continuous = {gap:.4}"));
                }
            }
            (r, b) => failures.push(format!("{label}: {:?} / {:?}", r.err(), b.err())),
        }
    }
    if failures.is_empty() {
        (Status::Pass, format!("{solved} instances, worst integer/continuous {worst:.3}"))
    } else {
        (Status::Fail, format!("{} of {solved} failed; first: {}", failures.len(), failures[0]))
    }
}

/// Calls `f` on every `k`-subset of `0..r`.
fn for_each_subset(r: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + r - k) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn codec_check(opts: &Options) -> (Status, String) {
    let mut gf = Gf256::new();
    if let Some(i) = opts.codec_fault {
        gf.inject_fault(i);
    }
    let codec = MdsCodec::with_field(gf);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut decodes = 0usize;
    let mut failures = 0usize;
    let mut first = None;
    for k in 1..=4 {
        for r in k..=8 {
            for _ in 0..5 {
                let data: Vec<Vec<u8>> = (0..k).map(|_| (0..16).map(|_| rng.gen()).collect()).collect();
                let coded = match codec.encode(0, &data, r) {
                    Ok(c) => c,
                    Err(e) => {
                        failures += 1;
                        first.get_or_insert(format!("encode K={k} r={r}: {e}"));
                        continue;
                    }
                };
                for_each_subset(r, k, |subset| {
                    decodes += 1;
                    let pick: Vec<_> = subset.iter().map(|&i| coded[i].clone()).collect();
                    match codec.decode(k, &pick) {
                        Ok(d) if d == data => {}
                        other => {
                            failures += 1;
                            first.get_or_insert(format!(
                                "K={k} r={r} subset {subset:?}: {}",
                                match other {
                                    Ok(_) => "wrong payload".to_string(),
                                    Err(e) => e.to_string(),
                                }
                            ));
                        }
                    }
                });
            }
        }
    }
    match first {
        None => (Status::Pass, format!("{decodes} subset decodes")),
        Some(f) => (Status::Fail, format!("{failures} of {decodes} decodes failed; first: {f}")),
    }
}

fn placement_check(opts: &Options) -> (Status, String) {
    let n = 30000usize;
    let area = (n as f64).ln() / n as f64;
    let mut worst = 0usize;
    let mut runs = 0usize;
    for (strategy, k) in [(Strategy::Uncoded, 20usize), (Strategy::Mds, 3)] {
        for alpha in [0.5, 2.0] {
            let cfg = NetworkConfig::new(n, area, k).expect("valid network");
            let pop = PopularityModel::zipf(250, alpha).expect("valid zipf");
            let alloc = match analytic(&cfg, &pop, strategy) {
                Ok(a) => a,
                Err(e) => return (Status::Fail, format!("{strategy} alpha={alpha}: {e}")),
            };
            for s in 0..2u64 {
                let seed = opts.seed.wrapping_add(s);
                let assign = match place(&alloc, &cfg, seed) {
                    Ok(a) => a,
                    Err(e) => return (Status::Fail, format!("{strategy} alpha={alpha} seed {seed}: {e}")),
                };
                let rep = verify(&assign, &alloc, cfg.k, cfg.s);
                runs += 1;
                worst = worst.max(rep.max_load);
                if !rep.is_ok() || rep.max_load > 2 * cfg.s {
                    return (
                        Status::Fail,
                        format!(
                            "{strategy} alpha={alpha} seed {seed}: max load {} (limit {}), {} errors",
                            rep.max_load,
                            2 * cfg.s,
                            rep.errors.len()
                        ),
                    );
                }
            }
        }
    }
    (Status::Pass, format!("{runs} placements, worst max load {worst}"))
}

pub fn run(opts: &Options) -> Vec<CheckResult> {
    vec![
        timed("brute-force equivalence", || brute_force_check(opts)),
        timed("codec exhaustive subsets", || codec_check(opts)),
        timed("placement load bounds", || placement_check(opts)),
    ]
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}

pub fn table(results: &[CheckResult]) -> String {
    let mut s = format!("{:<26} {:<8} {:>8}  {}\n", "check", "status", "seconds", "detail");
    for r in results {
        s.push_str(&format!("{:<26} {:<8} {:>8.2}  {}\n", r.name, r.status, r.seconds, r.detail));
    }
    s
}
