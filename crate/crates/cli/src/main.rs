use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use subcache::analytic::delay_scaling;
use subcache::codec::{self, CodedSubpacket};
use subcache::delay::{expected_delay_random_walk, per_node_throughput};
use subcache::placement::{place, CacheAssignment};
use subcache::sim::{estimate_hitting_time, run_trials, SimConfig, SimMode};
use subcache::{Allocation, Mobility, NetworkConfig, PopularityModel, Strategy};
use subcache_cli::runner::{self, analytic, numeric};
use subcache_cli::selftest;
use subcache_cli::spec::{mode_str, parse_mode, AreaSpec, Engine, ExperimentSpec, Preset};

#[derive(Parser)]
#[command(name = "subcache", version, about = "Cache allocation, delay analysis and simulation for subpacketized content")]
struct Cli {
    /// Experiment spec file (`key = value` lines).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Root RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct NetArgs {
    /// Zipf exponent.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Library size M.
    #[arg(short = 'M', long = "contents")]
    m: usize,
    /// Subpackets per content K.
    #[arg(short = 'K', long = "subpackets")]
    k: usize,
    /// Node count n.
    #[arg(short = 'n', long = "nodes")]
    n: usize,
    /// Cache size S per node in subpackets (default K).
    #[arg(short = 'S', long = "cache-size")]
    s: Option<usize>,
    /// Area: a number in (0, 1], `log_n_over_n` or `pow:M^e/n`.
    #[arg(long, default_value = "log_n_over_n")]
    area: String,
    #[arg(long, default_value = "uncoded")]
    strategy: Strategy,
}

impl NetArgs {
    fn network(&self) -> Result<(NetworkConfig, PopularityModel)> {
        let (tag, corrected) = AreaSpec::parse_tag(&self.area).map_err(|e| anyhow::anyhow!("--area: {e}"))?;
        if corrected {
            eprintln!("note: area n_over_log_n exceeds 1 and is read as log_n_over_n");
        }
        let cfg = NetworkConfig::new(self.n, tag.resolve(self.m, self.n), self.k)?
            .with_cache_size(self.s.unwrap_or(self.k))?;
        Ok((cfg, PopularityModel::zipf(self.m, self.alpha)?))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a cache allocation as `m,value` rows.
    Alloc {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value = "analytic")]
        engine: Engine,
    },
    /// Expected delay, throughput and scaling class of an allocation.
    Delay {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value = "analytic")]
        engine: Engine,
        /// Random-walk flight length; adds delay bounds for that mobility.
        #[arg(long)]
        flight: Option<f64>,
    },
    /// Monte Carlo simulation of the analytic allocation, one row per trial.
    Simulate {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 2000)]
        slots: usize,
        #[arg(long, default_value_t = 200)]
        warmup: usize,
        /// `delay_only` or `scheduled`.
        #[arg(long, default_value = "delay_only", value_parser = parse_mode)]
        mode: SimMode,
        /// Random-walk flight length (default: reshuffling).
        #[arg(long)]
        flight: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        requester_fraction: f64,
        /// Read the cache assignment from this file instead of placing one.
        #[arg(long)]
        caches: Option<PathBuf>,
        /// Write the cache assignment used to this file.
        #[arg(long)]
        save_caches: Option<PathBuf>,
    },
    /// Mean first meeting time of two random walkers on the unit torus.
    HittingTime {
        /// Meeting distance R.
        #[arg(long)]
        range: f64,
        /// Flight length per slot (default R).
        #[arg(long)]
        flight: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_slots: usize,
    },
    /// Erasure-code a file or recover it from coded subpackets.
    Codec {
        #[command(subcommand)]
        op: CodecOp,
    },
    /// Run an experiment sweep and write CSV files.
    Run {
        /// Preset to run when no --spec is given.
        #[arg(long)]
        preset: Option<Preset>,
    },
    /// Run the built-in oracle checks.
    Selftest {
        /// Largest library size for brute-force instances.
        #[arg(long)]
        brute_force_m: Option<usize>,
        /// Corrupt one antilog table entry before the codec check.
        #[arg(long, num_args = 0..=1, default_missing_value = "1")]
        inject_codec_fault: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CodecOp {
    /// Split a file into K subpackets and write r coded ones as CSV.
    Encode {
        #[arg(short = 'K')]
        k: usize,
        #[arg(short = 'r')]
        r: usize,
        #[arg(long, default_value_t = 0)]
        content: usize,
        input: PathBuf,
    },
    /// Recover a file from the first K rows of an encoded CSV.
    Decode {
        #[arg(short = 'K')]
        k: usize,
        input: PathBuf,
        /// Destination file (default: hex on stdout).
        #[arg(long)]
        to: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(subcache_cli::exit_code(&e))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let seed = cli.seed.unwrap_or(1);
    match cli.cmd {
        Cmd::Alloc { net, engine } => {
            let (cfg, pop) = net.network()?;
            let alloc = allocation(&cfg, &pop, net.strategy, engine)?;
            eprintln!(
                "m1={} m2={} budget_used={} of {}",
                alloc.m1,
                alloc.m2.map_or("-".into(), |v| v.to_string()),
                alloc.budget_used,
                cfg.budget()
            );
            emit(cli.out.as_deref(), "alloc.csv", &runner::alloc_csv(&alloc)?)?;
        }
        Cmd::Delay { net, engine, flight } => {
            let (mut cfg, pop) = net.network()?;
            let alloc = allocation(&cfg, &pop, net.strategy, engine)?;
            let d = alloc.delay(&cfg, &pop)?;
            let scaling = delay_scaling(&cfg, &pop, net.strategy)?;
            let bounds = match flight {
                Some(l) => {
                    cfg = cfg.with_mobility(Mobility::RandomWalk { flight: l })?;
                    expected_delay_random_walk(&cfg, &pop, &alloc.values, net.strategy)?.bounds
                }
                None => None,
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "strategy", "engine", "area", "m1", "m2", "d_avg_order", "d_avg_exact", "throughput",
                "scaling_class", "scaling_value", "throughput_class", "rw_lower", "rw_upper",
            ])?;
            w.write_record([
                net.strategy.to_string(),
                engine.to_string(),
                cfg.area.to_string(),
                alloc.m1.to_string(),
                alloc.m2.map(|v| v.to_string()).unwrap_or_default(),
                d.order_slots.to_string(),
                d.exact_slots.to_string(),
                per_node_throughput(&cfg, d.exact_slots)?.to_string(),
                scaling.class,
                scaling.value.to_string(),
                scaling.throughput_class,
                bounds.map(|b| b.0.to_string()).unwrap_or_default(),
                bounds.map(|b| b.1.to_string()).unwrap_or_default(),
            ])?;
            emit(cli.out.as_deref(), "delay.csv", &String::from_utf8(w.into_inner()?)?)?;
        }
        Cmd::Simulate {
            net,
            trials,
            slots,
            warmup,
            mode,
            flight,
            requester_fraction,
            caches,
            save_caches,
        } => {
            let (mut cfg, pop) = net.network()?;
            if let Some(l) = flight {
                cfg = cfg.with_mobility(Mobility::RandomWalk { flight: l })?;
            }
            let alloc = analytic(&cfg, &pop, net.strategy)?;
            let assign = match caches {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    CacheAssignment::from_text(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                None => place(&alloc, &cfg, seed)?,
            };
            if let Some(path) = save_caches {
                std::fs::write(&path, assign.to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
            let mut sim = SimConfig::new(mode, net.strategy, slots, warmup);
            sim.requester_fraction = requester_fraction;
            let metrics = run_trials(&cfg, &pop, &assign, &sim, trials, seed)?;
            let predicted = Allocation::from_values(net.strategy, alloc.deployed_values(), &cfg).delay(&cfg, &pop)?;
            eprintln!("predicted d_avg_exact for the deployed copies: {}", predicted.exact_slots);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "trial", "seed", "strategy", "mode", "d_avg_empirical", "d_avg_pooled", "std_error",
                "throughput", "completed", "censored", "links", "protocol_violations",
            ])?;
            for (t, m) in metrics.iter().enumerate() {
                w.write_record([
                    t.to_string(),
                    seed.to_string(),
                    net.strategy.to_string(),
                    mode_str(mode).to_string(),
                    m.d_avg_empirical.to_string(),
                    m.d_avg_pooled.to_string(),
                    m.std_error.to_string(),
                    m.throughput_empirical.to_string(),
                    m.completed.to_string(),
                    m.censored.to_string(),
                    m.links.to_string(),
                    m.protocol_violations.to_string(),
                ])?;
            }
            emit(cli.out.as_deref(), "simulate.csv", &String::from_utf8(w.into_inner()?)?)?;
        }
        Cmd::HittingTime {
            range,
            flight,
            pairs,
            max_slots,
        } => {
            let est = estimate_hitting_time(range, flight.unwrap_or(range), pairs, max_slots, seed)?;
            let text = format!(
                "range,flight,pairs,mean,std_error,censored_fraction,mean_times_r2\n{range},{},{},{},{},{},{}\n",
                flight.unwrap_or(range),
                est.pairs,
                est.mean,
                est.std_error,
                est.censored_fraction,
                est.mean * range * range
            );
            emit(cli.out.as_deref(), "hitting_time.csv", &text)?;
        }
        Cmd::Codec { op } => codec_cmd(op, cli.out.as_deref())?,
        Cmd::Run { preset } => {
            let mut spec = match (&cli.spec, preset) {
                (Some(_), Some(_)) => bail!("give either --spec or --preset, not both"),
                (Some(path), None) => ExperimentSpec::from_file(path)?,
                (None, Some(p)) => ExperimentSpec::preset(p),
                (None, None) => bail!("run needs --spec <file> or --preset <name>"),
            };
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            if let Some(o) = cli.out {
                spec.out = Some(o);
            }
            let dir = spec.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let out = runner::run(&spec)?;
            let files = runner::write_outputs(&dir, &spec, &out)?;
            print!("{}", runner::summary(&spec, &out));
            eprintln!("wrote {} files to {}", files.len(), dir.display());
        }
        Cmd::Selftest {
            brute_force_m,
            inject_codec_fault,
        } => {
            let mut opts = selftest::Options {
                seed,
                codec_fault: inject_codec_fault,
                ..selftest::Options::default()
            };
            if let Some(path) = &cli.spec {
                opts.brute_force_m = ExperimentSpec::from_file(path)?.brute_force_m;
            }
            if let Some(m) = brute_force_m {
                opts.brute_force_m = m;
            }
            let results = selftest::run(&opts);
            print!("{}", selftest::table(&results));
            for r in results.iter().filter(|r| r.status == selftest::Status::Skipped) {
                eprintln!("warning: {} skipped: {}", r.name, r.detail);
            }
            return Ok(if selftest::all_passed(&results) { 0 } else { subcache_cli::EXIT_ERROR });
        }
    }
    Ok(0)
}

fn allocation(cfg: &NetworkConfig, pop: &PopularityModel, strategy: Strategy, engine: Engine) -> Result<Allocation> {
    let alloc = match engine {
        Engine::Analytic => analytic(cfg, pop, strategy)?,
        Engine::Numeric => numeric(cfg, pop, strategy)?,
        Engine::Simulate => bail!("engine must be analytic or numeric here"),
    };
    alloc.check(cfg)?;
    Ok(alloc)
}

/// Writes `text` to `<dir>/<name>` when an output directory is set, stdout otherwise.
fn emit(dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
            let path = d.join(name);
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn codec_cmd(op: CodecOp, out: Option<&Path>) -> Result<()> {
    match op {
        CodecOp::Encode { k, r, content, input } => {
            if k == 0 {
                bail!("K must be >= 1");
            }
            let data = std::fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let len = data.len().div_ceil(k).max(1);
            let mut padded = data.clone();
            padded.resize(len * k, 0);
            let subs: Vec<Vec<u8>> = padded.chunks(len).map(<[u8]>::to_vec).collect();
            let coded = codec::encode(content, &subs, r)?;
            let mut text = format!("# length={}\n", data.len());
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["content", "point", "payload"])?;
            for c in &coded {
                w.write_record([c.content_id.to_string(), c.point.to_string(), hex::encode(&c.payload)])?;
            }
            text.push_str(&String::from_utf8(w.into_inner()?)?);
            emit(out, "coded.csv", &text)?;
        }
        CodecOp::Decode { k, input, to } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let length: usize = text
                .lines()
                .next()
                .and_then(|l| l.strip_prefix("# length="))
                .and_then(|v| v.trim().parse().ok())
                .context("first line must be `# length=<bytes>`")?;
            let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
            let mut coded = Vec::new();
            for (i, rec) in rdr.records().enumerate().take(k) {
                let rec = rec?;
                let field = |j: usize| rec.get(j).with_context(|| format!("row {}: missing column {j}", i + 1));
                coded.push(CodedSubpacket {
                    content_id: field(0)?.parse().with_context(|| format!("row {}: content", i + 1))?,
                    point: field(1)?.parse().with_context(|| format!("row {}: point", i + 1))?,
                    payload: hex::decode(field(2)?).with_context(|| format!("row {}: payload", i + 1))?,
                });
            }
            let mut data: Vec<u8> = codec::decode(k, &coded)?.concat();
            if length > data.len() {
                bail!("declared length {length} exceeds decoded size {}", data.len());
            }
            data.truncate(length);
            match to {
                Some(path) => std::fs::write(&path, &data).with_context(|| format!("writing {}", path.display()))?,
                None => println!("{}", hex::encode(&data)),
            }
        }
    }
    Ok(())
}
