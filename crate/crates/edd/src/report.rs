//! Machine-readable result records and table exports.
//!
//! A record is a single line of space-separated `key=value` pairs. Floats use
//! shortest round-trip formatting so records are stable across runs.

use std::fmt;
use std::io::Write;

use sha2::{Digest, Sha256};

use edd_core::{DistanceHistogram, EddResult, GdvResult, RangePolicy};
use edd_core::gdv::GDV_ZSCORE_FACTOR;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(String, String)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    /// Replaces the value of an existing key, or appends it.
    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        match self.0.iter_mut().find(|(k, _)| k == key) {
            Some((_, v)) => *v = value.to_string(),
            None => self.0.push((key.to_string(), value.to_string())),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.0
    }

    /// Inverse of `Display`.
    pub fn parse(line: &str) -> Option<Self> {
        line.split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
            })
            .collect::<Option<Vec<_>>>()
            .map(Record)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub fn on_off(flag: bool) -> &'static str {
    if flag {
        "on"
    } else {
        "off"
    }
}

pub fn range_name(range: RangePolicy) -> String {
    match range {
        RangePolicy::Observed => "observed".to_string(),
        RangePolicy::Fixed { lo, hi } => format!("{lo},{hi}"),
    }
}

/// First 16 hex digits of SHA-256 over the little-endian edge values.
pub fn edges_digest(edges: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for e in edges {
        hasher.update(e.to_le_bytes());
    }
    hasher.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn edd_record(result: &EddResult) -> Record {
    let cfg = &result.config;
    let mut r = Record::new();
    r.push("edd", result.edd)
        .push("entropy_bits", result.entropy_bits)
        .push("bins", cfg.bins)
        .push("n_points", result.n_points)
        .push("metric", cfg.metric.name())
        .push("zscore", on_off(cfg.zscore))
        .push("range", range_name(cfg.range))
        .push("out_of_range", result.histogram.out_of_range())
        .push("bin_edges_digest", edges_digest(result.histogram.edges()));
    r
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn gdv_record(result: &GdvResult) -> Record {
    let mut r = Record::new();
    r.push("gdv", result.gdv)
        .push("n_points", result.class_sizes.iter().sum::<usize>())
        .push("n_dims", result.n_dims)
        .push("n_classes", result.n_classes)
        .push("class_sizes", join(&result.class_sizes))
        .push("mean_intra", join(&result.mean_intra))
        .push("metric", "euclidean")
        .push("zscore_factor", GDV_ZSCORE_FACTOR);
    r
}

/// Two columns: `bin_center,probability`.
pub fn write_histogram_csv<W: Write>(out: W, hist: &DistanceHistogram) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_center", "probability"])?;
    for (c, p) in hist.centers().zip(hist.probabilities()) {
        w.write_record([c.to_string(), p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// L×L class distance matrix: inter-class means off the diagonal, intra-class
/// means on it. Rows and columns are named by class label when known.
pub fn write_gdv_matrix_csv<W: Write>(
    out: W,
    result: &GdvResult,
    names: Option<&[String]>,
) -> csv::Result<()> {
    let l = result.n_classes;
    let name = |c: usize| names.map_or_else(|| c.to_string(), |n| n[c].clone());
    let mut w = csv::Writer::from_writer(out);
    let mut head = vec!["class".to_string()];
    head.extend((0..l).map(name));
    w.write_record(&head)?;
    let m = result.distance_matrix();
    for a in 0..l {
        let mut row = vec![name(a)];
        row.extend((0..l).map(|b| m[a * l + b].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
