//! Experiment descriptions: presets and the `key = value` spec file format.
//!
//! A spec file holds one `key = value` pair per line. Blank lines and text
//! after `#` are ignored. Lists are comma separated. A `preset` line loads
//! that preset's defaults first, and every other key overrides them
//! regardless of line order.
//!
//! ```text
//! preset = custom
//! alpha = 0.5, 1.5
//! area = log_n_over_n, 0.01, pow:M^0.8/n
//! M = 250
//! K = 20
//! n = 30000
//! strategies = uncoded, mds
//! engines = analytic, numeric
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use subcache::sim::SimMode;
use subcache::solver::BRUTE_FORCE_MAX_M;
use subcache::Strategy;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("cannot read spec file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn field_err(field: &str, reason: impl Into<String>) -> SpecError {
    SpecError::Field {
        field: field.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Custom,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Custom => "custom",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            "custom" => Ok(Preset::Custom),
            other => Err(format!("unknown preset `{other}` (fig3, fig4, fig5, fig6, custom)")),
        }
    }
}

/// Communication area, either fixed or as a function of `M` and `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaSpec {
    /// `ln(n) / n`.
    LogNOverN,
    /// `M^e / n`.
    PowMOverN(f64),
    Value(f64),
}

impl AreaSpec {
    pub fn resolve(self, m: usize, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            AreaSpec::LogNOverN => nf.ln() / nf,
            AreaSpec::PowMOverN(e) => (m as f64).powf(e) / nf,
            AreaSpec::Value(v) => v,
        }
    }

    /// Parses a tag. The second value is true when the tag was the
    /// out-of-range `n_over_log_n`, which is read as `log_n_over_n`.
    pub fn parse_tag(s: &str) -> Result<(AreaSpec, bool), String> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "log_n_over_n" | "logn/n" | "log n/n" => return Ok((AreaSpec::LogNOverN, false)),
            "n_over_log_n" | "n/logn" | "n/log n" => return Ok((AreaSpec::LogNOverN, true)),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("pow:") {
            let e = rest
                .trim()
                .strip_prefix("M^")
                .and_then(|r| r.strip_suffix("/n"))
                .ok_or_else(|| format!("area tag `{t}` should look like pow:M^0.8/n"))?;
            let e: f64 = e.trim().parse().map_err(|_| format!("bad exponent in `{t}`"))?;
            if !e.is_finite() {
                return Err(format!("bad exponent in `{t}`"));
            }
            return Ok((AreaSpec::PowMOverN(e), false));
        }
        let v: f64 = t
            .parse()
            .map_err(|_| format!("`{t}` is not a number or an area tag (log_n_over_n, pow:M^e/n)"))?;
        if !(v > 0.0 && v <= 1.0) {
            return Err(format!("area {v} outside (0, 1]"));
        }
        Ok((AreaSpec::Value(v), false))
    }
}

impl fmt::Display for AreaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AreaSpec::LogNOverN => f.write_str("log_n_over_n"),
            AreaSpec::PowMOverN(e) => write!(f, "pow:M^{e}/n"),
            AreaSpec::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    Analytic,
    Numeric,
    Simulate,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Numeric => "numeric",
            Engine::Simulate => "simulate",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Engine::Analytic),
            "numeric" => Ok(Engine::Numeric),
            "simulate" | "sim" => Ok(Engine::Simulate),
            other => Err(format!("unknown engine `{other}` (analytic, numeric, simulate)")),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<SimMode, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "delay_only" | "delayonly" | "delay" => Ok(SimMode::DelayOnly),
        "scheduled" => Ok(SimMode::Scheduled),
        other => Err(format!("unknown simulation mode `{other}` (delay_only, scheduled)")),
    }
}

pub fn mode_str(mode: SimMode) -> &'static str {
    match mode {
        SimMode::DelayOnly => "delay_only",
        SimMode::Scheduled => "scheduled",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub alphas: Vec<f64>,
    pub areas: Vec<AreaSpec>,
    pub ms: Vec<usize>,
    pub k: usize,
    pub ns: Vec<usize>,
    /// Cache size per node; `None` means `S = K`.
    pub s: Option<usize>,
    pub strategies: Vec<Strategy>,
    pub engines: Vec<Engine>,
    pub trials: usize,
    pub slots: usize,
    pub warmup: usize,
    pub mode: SimMode,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Largest library size the self-test brute force may use.
    pub brute_force_m: usize,
    /// Metadata lines copied into every output file.
    pub notes: Vec<String>,
}

const FIG6_NOTE: &str =
    "area n/log n exceeds 1 for n > 2 and is read as log n/n in this preset";

impl ExperimentSpec {
    pub fn preset(preset: Preset) -> ExperimentSpec {
        let base = ExperimentSpec {
            preset,
            alphas: vec![1.0],
            areas: vec![AreaSpec::LogNOverN],
            ms: vec![250],
            k: 20,
            ns: vec![30000],
            s: None,
            strategies: vec![Strategy::Uncoded, Strategy::Mds],
            engines: vec![Engine::Analytic, Engine::Numeric],
            trials: 4,
            slots: 2000,
            warmup: 200,
            mode: SimMode::DelayOnly,
            seed: 1,
            out: None,
            brute_force_m: BRUTE_FORCE_MAX_M,
            notes: Vec::new(),
        };
        match preset {
            Preset::Fig3 => ExperimentSpec {
                alphas: vec![0.5, 2.0],
                areas: vec![AreaSpec::LogNOverN, AreaSpec::PowMOverN(0.8)],
                strategies: vec![Strategy::Uncoded],
                ..base
            },
            Preset::Fig4 => ExperimentSpec {
                alphas: vec![0.5, 2.0],
                areas: vec![AreaSpec::LogNOverN, AreaSpec::PowMOverN(0.8)],
                k: 3,
                strategies: vec![Strategy::Mds],
                ..base
            },
            Preset::Fig5 => {
                let mut areas = vec![AreaSpec::LogNOverN];
                areas.extend(
                    [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1].map(AreaSpec::Value),
                );
                ExperimentSpec {
                    alphas: vec![0.5, 1.5, 3.0],
                    areas,
                    ..base
                }
            }
            Preset::Fig6 => ExperimentSpec {
                alphas: vec![0.5, 1.25, 2.0, 3.0],
                ms: vec![10, 20, 50, 100, 200, 500, 1000, 2000, 5000],
                k: 5,
                notes: vec![FIG6_NOTE.to_string()],
                ..base
            },
            Preset::Custom => base,
        }
    }

    pub fn from_file(path: &Path) -> Result<ExperimentSpec, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse()
    }

    pub fn cache_size(&self) -> usize {
        self.s.unwrap_or(self.k)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let nonempty = |field: &str, len: usize| {
            if len == 0 {
                Err(field_err(field, "list is empty"))
            } else {
                Ok(())
            }
        };
        nonempty("alpha", self.alphas.len())?;
        nonempty("area", self.areas.len())?;
        nonempty("M", self.ms.len())?;
        nonempty("n", self.ns.len())?;
        nonempty("strategies", self.strategies.len())?;
        nonempty("engines", self.engines.len())?;
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(field_err("alpha", format!("{a} is not a positive exponent")));
        }
        if self.ms.contains(&0) {
            return Err(field_err("M", "library size must be >= 1"));
        }
        if self.ns.contains(&0) {
            return Err(field_err("n", "node count must be >= 1"));
        }
        if self.k == 0 {
            return Err(field_err("K", "must be >= 1"));
        }
        if self.s == Some(0) {
            return Err(field_err("S", "must be >= 1"));
        }
        if self.engines.contains(&Engine::Simulate) {
            if self.trials == 0 {
                return Err(field_err("trials", "simulate engine needs at least one trial"));
            }
            if self.slots <= self.warmup {
                return Err(field_err(
                    "slots",
                    format!("must exceed warmup ({} <= {})", self.slots, self.warmup),
                ));
            }
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), SpecError> {
        fn list<T>(field: &str, v: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, SpecError> {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| f(s).map_err(|e| field_err(field, e)))
                .collect()
        }
        fn num<T: FromStr>(field: &str, v: &str) -> Result<T, SpecError> {
            v.trim()
                .parse()
                .map_err(|_| field_err(field, format!("cannot parse `{}`", v.trim())))
        }
        let parse_usize = |s: &str| s.parse::<usize>().map_err(|_| format!("`{s}` is not a non-negative integer"));
        match key {
            "preset" => {} // applied before the other keys
            "alpha" => {
                self.alphas = list("alpha", value, |s| s.parse().map_err(|_| format!("`{s}` is not a number")))?
            }
            "area" => {
                let mut areas = Vec::new();
                for (area, corrected) in list("area", value, AreaSpec::parse_tag)? {
                    if corrected {
                        let note = "area tag n_over_log_n exceeds 1 and is read as log_n_over_n".to_string();
                        if !self.notes.contains(&note) {
                            self.notes.push(note);
                        }
                    }
                    areas.push(area);
                }
                self.areas = areas;
            }
            "m" => self.ms = list("M", value, parse_usize)?,
            "k" => self.k = num("K", value)?,
            "n" => self.ns = list("n", value, parse_usize)?,
            "s" => self.s = Some(num("S", value)?),
            "strategies" | "strategy" => {
                self.strategies = list("strategies", value, |s| s.parse::<Strategy>().map_err(|e| e.to_string()))?;
                self.strategies.dedup();
            }
            "engines" | "engine" => {
                self.engines = list("engines", value, str::parse)?;
                self.engines.dedup();
            }
            "trials" => self.trials = num("trials", value)?,
            "slots" => self.slots = num("slots", value)?,
            "warmup" => self.warmup = num("warmup", value)?,
            "mode" => self.mode = parse_mode(value).map_err(|e| field_err("mode", e))?,
            "seed" => self.seed = num("seed", value)?,
            "out" | "output" => self.out = Some(PathBuf::from(value.trim())),
            "brute_force_m" => self.brute_force_m = num("brute_force_m", value)?,
            other => {
                return Err(SpecError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
        Ok(())
    }
}

impl FromStr for ExperimentSpec {
    type Err = SpecError;

    fn from_str(text: &str) -> Result<Self, SpecError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| SpecError::Syntax {
                line: i + 1,
                text: line.to_string(),
            })?;
            pairs.push((i + 1, k.trim().to_ascii_lowercase(), v.trim().to_string()));
        }
        let preset = match pairs.iter().find(|(_, k, _)| k == "preset") {
            Some((_, _, v)) => v.parse().map_err(|e| field_err("preset", e))?,
            None => Preset::Custom,
        };
        let mut spec = ExperimentSpec::preset(preset);
        for (line, key, value) in &pairs {
            spec.set(key, value, *line)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}
