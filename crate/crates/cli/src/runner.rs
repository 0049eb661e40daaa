//! Sweep execution and CSV output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use subcache::analytic::{mds_allocation, uncoded_allocation};
use subcache::delay::per_node_throughput;
use subcache::placement::place;
use subcache::sim::{run_trials, SimConfig};
use subcache::solver::{solve_mds, solve_uncoded, DEFAULT_TOL};
use subcache::{Allocation, NetworkConfig, PopularityModel, Strategy};

use crate::spec::{AreaSpec, Engine, ExperimentSpec};

pub const RESULTS_FILE: &str = "results.csv";

pub const COLUMNS: [&str; 16] = [
    "preset", "alpha", "area", "M", "K", "n", "S", "strategy", "engine", "m1", "m2", "d_avg_order",
    "d_avg_exact", "throughput", "seed", "trials",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub alpha: f64,
    pub area_tag: AreaSpec,
    pub area: f64,
    pub m: usize,
    pub n: usize,
}

impl SweepPoint {
    pub fn label(&self) -> String {
        format!(
            "p{} alpha={} area={} ({}) M={} n={}",
            self.index, self.alpha, self.area_tag, self.area, self.m, self.n
        )
    }
}

pub fn sweep_points(spec: &ExperimentSpec) -> Vec<SweepPoint> {
    let mut out = Vec::new();
    for &alpha in &spec.alphas {
        for &area_tag in &spec.areas {
            for &m in &spec.ms {
                for &n in &spec.ns {
                    out.push(SweepPoint {
                        index: out.len(),
                        alpha,
                        area_tag,
                        area: area_tag.resolve(m, n),
                        m,
                        n,
                    });
                }
            }
        }
    }
    out
}

/// One output row. `d_avg_order` is empty for simulated rows, whose
/// empirical mean delay is reported as `d_avg_exact`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: usize,
    pub alpha: f64,
    pub area: f64,
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub strategy: Strategy,
    pub engine: Engine,
    pub m1: usize,
    pub m2: Option<usize>,
    pub d_avg_order: Option<f64>,
    pub d_avg_exact: f64,
    pub throughput: f64,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub points: Vec<SweepPoint>,
    pub rows: Vec<Row>,
    /// Allocation behind each row, same order as `rows`.
    pub allocations: Vec<Allocation>,
}

/// Mixes the root seed with a task index.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn network_for(spec: &ExperimentSpec, p: &SweepPoint) -> subcache::Result<NetworkConfig> {
    NetworkConfig::new(p.n, p.area, spec.k)?.with_cache_size(spec.cache_size())
}

pub fn analytic(cfg: &NetworkConfig, pop: &PopularityModel, strategy: Strategy) -> subcache::Result<Allocation> {
    match strategy {
        Strategy::Uncoded => uncoded_allocation(cfg, pop),
        Strategy::Mds => mds_allocation(cfg, pop),
    }
}

pub fn numeric(cfg: &NetworkConfig, pop: &PopularityModel, strategy: Strategy) -> subcache::Result<Allocation> {
    let rep = match strategy {
        Strategy::Uncoded => solve_uncoded(pop, cfg, DEFAULT_TOL)?,
        Strategy::Mds => solve_mds(pop, cfg, DEFAULT_TOL)?,
    };
    Ok(rep.allocation)
}

fn run_task(
    spec: &ExperimentSpec,
    p: &SweepPoint,
    strategy: Strategy,
    engine: Engine,
    task: u64,
) -> Result<(Row, Allocation)> {
    let cfg = network_for(spec, p)?;
    let pop = PopularityModel::zipf(p.m, p.alpha)?;
    let alloc = match engine {
        Engine::Analytic | Engine::Simulate => analytic(&cfg, &pop, strategy)?,
        Engine::Numeric => numeric(&cfg, &pop, strategy)?,
    };
    alloc
        .check(&cfg)
        .context("allocation failed validation before output")?;
    let mut row = Row {
        point: p.index,
        alpha: p.alpha,
        area: p.area,
        m: p.m,
        k: spec.k,
        n: p.n,
        s: spec.cache_size(),
        strategy,
        engine,
        m1: alloc.m1,
        m2: alloc.m2,
        d_avg_order: None,
        d_avg_exact: 0.0,
        throughput: 0.0,
        seed: spec.seed,
        trials: 1,
    };
    match engine {
        Engine::Analytic | Engine::Numeric => {
            let d = alloc.delay(&cfg, &pop)?;
            row.d_avg_order = Some(d.order_slots);
            row.d_avg_exact = d.exact_slots;
            row.throughput = per_node_throughput(&cfg, d.exact_slots)?;
            Ok((row, alloc))
        }
        Engine::Simulate => {
            let caches = place(&alloc, &cfg, derive_seed(spec.seed, 2 * task))?;
            let sim = SimConfig::new(spec.mode, strategy, spec.slots, spec.warmup);
            let trials = run_trials(&cfg, &pop, &caches, &sim, spec.trials, derive_seed(spec.seed, 2 * task + 1))?;
            let t = trials.len() as f64;
            row.d_avg_exact = trials.iter().map(|m| m.d_avg_empirical).sum::<f64>() / t;
            row.throughput = trials.iter().map(|m| m.throughput_empirical).sum::<f64>() / t;
            row.trials = trials.len();
            let deployed = Allocation::from_values(strategy, alloc.deployed_values(), &cfg);
            row.m1 = deployed.m1;
            row.m2 = deployed.m2;
            Ok((row, deployed))
        }
    }
}

/// Evaluates every (point, strategy, engine) combination. Tasks run in
/// parallel; results keep sweep order.
pub fn run(spec: &ExperimentSpec) -> Result<RunOutput> {
    spec.validate()?;
    let points = sweep_points(spec);
    let mut tasks = Vec::new();
    for p in &points {
        for &strategy in &spec.strategies {
            for &engine in &spec.engines {
                tasks.push((p, strategy, engine));
            }
        }
    }
    let results: Vec<(Row, Allocation)> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, &(p, strategy, engine))| {
            run_task(spec, p, strategy, engine, i as u64)
                .with_context(|| format!("{} strategy={strategy} engine={engine}", p.label()))
        })
        .collect::<Result<_>>()?;
    let (rows, allocations) = results.into_iter().unzip();
    Ok(RunOutput {
        points,
        rows,
        allocations,
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn record(spec: &ExperimentSpec, r: &Row) -> Vec<String> {
    vec![
        spec.preset.to_string(),
        r.alpha.to_string(),
        r.area.to_string(),
        r.m.to_string(),
        r.k.to_string(),
        r.n.to_string(),
        r.s.to_string(),
        r.strategy.to_string(),
        r.engine.to_string(),
        r.m1.to_string(),
        opt(r.m2),
        opt(r.d_avg_order),
        r.d_avg_exact.to_string(),
        r.throughput.to_string(),
        r.seed.to_string(),
        r.trials.to_string(),
    ]
}

/// The reproducible part of the results file: metadata comments, header and
/// rows.
pub fn results_body(spec: &ExperimentSpec, out: &RunOutput) -> Result<String> {
    let mut text = String::new();
    for note in &spec.notes {
        writeln!(text, "# note: {note}")?;
    }
    for p in &out.points {
        writeln!(text, "# point {}", p.label())?;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in &out.rows {
        w.write_record(record(spec, r))?;
    }
    text.push_str(std::str::from_utf8(&w.into_inner()?)?);
    Ok(text)
}

pub fn alloc_file_name(spec: &ExperimentSpec, r: &Row) -> String {
    format!("alloc_{}_p{}_{}_{}.csv", spec.preset, r.point, r.strategy, r.engine)
}

pub fn alloc_csv(alloc: &Allocation) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "value"])?;
    for (i, v) in alloc.values.iter().enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes `results.csv` and one allocation file per row. Only the first line
/// of `results.csv` depends on the wall clock.
pub fn write_outputs(dir: &Path, spec: &ExperimentSpec, out: &RunOutput) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut written = Vec::new();
    let results = dir.join(RESULTS_FILE);
    let text = format!(
        "# subcache {} generated_unix={stamp}\n{}",
        env!("CARGO_PKG_VERSION"),
        results_body(spec, out)?
    );
    std::fs::write(&results, text).with_context(|| format!("writing {}", results.display()))?;
    written.push(results);
    for (r, alloc) in out.rows.iter().zip(&out.allocations) {
        let path = dir.join(alloc_file_name(spec, r));
        std::fs::write(&path, alloc_csv(alloc)?).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

/// Drops the timestamp line from a results file.
pub fn strip_header(text: &str) -> &str {
    match text.split_once('\n') {
        Some((first, rest)) if first.starts_with("# subcache") => rest,
        _ => text,
    }
}

/// Plain-text summary for the terminal.
pub fn summary(spec: &ExperimentSpec, out: &RunOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<5} {:>6} {:>11} {:>6} {:>7} {:<8} {:<9} {:>5} {:>5} {:>12} {:>12}",
        "point", "alpha", "area", "M", "n", "strategy", "engine", "m1", "m2", "d_order", "d_exact"
    );
    for r in &out.rows {
        let _ = writeln!(
            s,
            "{:<5} {:>6} {:>11.4e} {:>6} {:>7} {:<8} {:<9} {:>5} {:>5} {:>12} {:>12.4}",
            format!("p{}", r.point),
            r.alpha,
            r.area,
            r.m,
            r.n,
            r.strategy,
            r.engine,
            r.m1,
            opt(r.m2),
            r.d_avg_order.map(|d| format!("{d:.4}")).unwrap_or_else(|| "-".into()),
            r.d_avg_exact
        );
    }
    for note in &spec.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Preset;

    #[test]
    fn sweep_order_is_alpha_area_m_n() {
        let mut spec = ExperimentSpec::preset(Preset::Custom);
        spec.alphas = vec![0.5, 1.0];
        spec.areas = vec![AreaSpec::Value(0.1), AreaSpec::LogNOverN];
        spec.ms = vec![5];
        spec.ns = vec![100, 200];
        let pts = sweep_points(&spec);
        assert_eq!(pts.len(), 8);
        assert_eq!((pts[1].alpha, pts[1].n, pts[1].area), (0.5, 200, 0.1));
        assert_eq!(pts[2].area, (100f64).ln() / 100.0);
        assert_eq!(pts[4].alpha, 1.0);
        assert!(pts.iter().enumerate().all(|(i, p)| p.index == i));
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(9, 4), derive_seed(9, 4));
    }

    #[test]
    fn header_strip() {
        assert_eq!(strip_header("# subcache 0.1 generated_unix=5\nbody\n"), "body\n");
        assert_eq!(strip_header("body\n"), "body\n");
    }
}
