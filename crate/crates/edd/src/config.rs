//! Flat `key = value` configuration for the experiment subcommands.
//!
//! Keys mirror the long flag names of the CLI (`width-min`, `n-seeds`, ...);
//! underscores are accepted in place of hyphens. `#` starts a comment.
//! Flags given on the command line override keys from the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use edd_core::{Dataset, EddConfig, LabelScenario, Metric, RangePolicy};

use crate::error::{Error, Result};
use crate::harness::{linspace, SweepConfig};
use crate::report::{on_off, range_name};

pub const KEYS: &[&str] = &[
    "centers",
    "n",
    "widths",
    "width-min",
    "width-max",
    "width-steps",
    "seeds",
    "seed",
    "n-seeds",
    "bins",
    "metric",
    "zscore",
    "range",
    "gdv",
    "scenarios",
    "out",
    "threads",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvConfig(BTreeMap<String, String>);

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let k = normalize(k);
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key {k:?}", i + 1)));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(normalize(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
            })
            .transpose()
    }
}

impl std::fmt::Display for KvConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.0 {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

pub fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<T>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {x:?}")))
        })
        .collect()
}

/// `"x,y;x,y;..."`, one center per `;`-separated group.
pub fn parse_centers(s: &str) -> Result<Dataset> {
    let rows = s
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| parse_list::<f64>("centers", r))
        .collect::<Result<Vec<_>>>()?;
    Dataset::from_rows(&rows).map_err(|e| Error::Config(format!("centers: {e}")))
}

pub fn format_centers(centers: &Dataset) -> String {
    centers
        .rows()
        .map(|r| r.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_on_off(key: &str, s: &str) -> Result<bool> {
    match s {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected on or off, got {s:?}"))),
    }
}

pub fn parse_metric(s: &str) -> Result<Metric> {
    Metric::parse(s).ok_or_else(|| Error::Config(format!("metric: unknown metric {s:?}")))
}

/// `observed` or `lo,hi`.
pub fn parse_range(s: &str) -> Result<RangePolicy> {
    if s == "observed" {
        return Ok(RangePolicy::Observed);
    }
    match parse_list::<f64>("range", s)?.as_slice() {
        &[lo, hi] if lo < hi => Ok(RangePolicy::Fixed { lo, hi }),
        _ => Err(Error::Config(format!("range: expected observed or lo,hi with lo < hi, got {s:?}"))),
    }
}

/// `correct`, `random`, `merged` (classes 0 and 1) or `merged:A:B`.
pub fn parse_scenario(s: &str) -> Result<LabelScenario> {
    let mut parts = s.trim().split(':');
    let kind = parts.next().unwrap_or("");
    let rest: Vec<&str> = parts.collect();
    match (kind, rest.as_slice()) {
        ("correct", []) => Ok(LabelScenario::Correct),
        ("random", []) => Ok(LabelScenario::Random),
        ("merged", []) => Ok(LabelScenario::Merged(0, 1)),
        ("merged", [a, b]) => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok(LabelScenario::Merged(a, b)),
            _ => Err(Error::Config(format!("scenarios: bad class ids in {s:?}"))),
        },
        _ => Err(Error::Config(format!("scenarios: unknown scenario {s:?}"))),
    }
}

pub fn format_scenario(s: LabelScenario) -> String {
    match s {
        LabelScenario::Merged(a, b) => format!("merged:{a}:{b}"),
        other => other.name().to_string(),
    }
}

/// Applies the EDD keys (`bins`, `metric`, `zscore`, `range`) on top of `base`.
pub fn edd_config(kv: &KvConfig, base: EddConfig) -> Result<EddConfig> {
    let mut cfg = base;
    if let Some(b) = kv.parsed::<usize>("bins")? {
        cfg.bins = b;
    }
    if let Some(m) = kv.get("metric") {
        cfg.metric = parse_metric(m)?;
    }
    if let Some(z) = kv.get("zscore") {
        cfg.zscore = parse_on_off("zscore", z)?;
    }
    if let Some(r) = kv.get("range") {
        cfg.range = parse_range(r)?;
    }
    cfg.validate()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    WidthSweep,
    Labeling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Experiment,
    pub sweep: SweepConfig,
    pub scenarios: Vec<LabelScenario>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn defaults(kind: Experiment) -> Self {
        let sweep = match kind {
            Experiment::WidthSweep => SweepConfig::four_corners(),
            Experiment::Labeling => SweepConfig::three_clusters(),
        };
        Self {
            kind,
            sweep,
            scenarios: vec![
                LabelScenario::Correct,
                LabelScenario::Merged(0, 1),
                LabelScenario::Random,
            ],
            out: None,
            threads: None,
        }
    }

    pub fn from_kv(kind: Experiment, kv: &KvConfig) -> Result<Self> {
        let mut cfg = Self::defaults(kind);
        let s = &mut cfg.sweep;
        if let Some(c) = kv.get("centers") {
            s.centers = parse_centers(c)?;
        }
        if let Some(n) = kv.parsed::<usize>("n")? {
            s.points_per_cluster = n;
        }
        if let Some(w) = kv.get("widths") {
            s.widths = parse_list("widths", w)?;
        } else if kv.get("width-min").is_some()
            || kv.get("width-max").is_some()
            || kv.get("width-steps").is_some()
        {
            let lo = kv.parsed("width-min")?.unwrap_or(s.widths[0]);
            let hi = kv.parsed("width-max")?.unwrap_or(*s.widths.last().unwrap());
            let steps = kv.parsed("width-steps")?.unwrap_or(s.widths.len());
            s.widths = linspace(lo, hi, steps);
        }
        if let Some(list) = kv.get("seeds") {
            s.seeds = parse_list("seeds", list)?;
        } else if kv.get("seed").is_some() || kv.get("n-seeds").is_some() {
            let base: u64 = kv.parsed("seed")?.unwrap_or(0);
            let count: u64 = kv.parsed("n-seeds")?.unwrap_or(s.seeds.len() as u64);
            s.seeds = (0..count).map(|i| base.wrapping_add(i)).collect();
        }
        s.edd = edd_config(kv, s.edd)?;
        if let Some(g) = kv.get("gdv") {
            s.compute_gdv = parse_on_off("gdv", g)?;
        }
        if let Some(list) = kv.get("scenarios") {
            cfg.scenarios = list
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(parse_scenario)
                .collect::<Result<_>>()?;
        }
        cfg.out = kv.get("out").map(PathBuf::from);
        cfg.threads = kv.parsed("threads")?;
        cfg.sweep.validate()?;
        Ok(cfg)
    }

    /// Fully expanded configuration, suitable as a provenance sidecar and as
    /// input to a rerun.
    pub fn to_kv(&self) -> KvConfig {
        let s = &self.sweep;
        let mut kv = KvConfig::default();
        kv.set("centers", format_centers(&s.centers));
        kv.set("n", s.points_per_cluster.to_string());
        kv.set("widths", join(&s.widths));
        kv.set("seeds", join(&s.seeds));
        kv.set("bins", s.edd.bins.to_string());
        kv.set("metric", s.edd.metric.name());
        kv.set("zscore", on_off(s.edd.zscore));
        kv.set("range", range_name(s.edd.range));
        match self.kind {
            Experiment::WidthSweep => kv.set("gdv", on_off(s.compute_gdv)),
            Experiment::Labeling => kv.set(
                "scenarios",
                self.scenarios
                    .iter()
                    .map(|&x| format_scenario(x))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        }
        if let Some(out) = &self.out {
            kv.set("out", out.display().to_string());
        }
        kv
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}
