//! Width sweep and labeling-scenario experiments over synthetic Gaussian
//! mixtures.
//!
//! Every `(width, seed)` cell is an independent job on the current rayon
//! pool. Each cell runs the sequential core pipeline, and results are
//! gathered in `(width index, seed index)` order, so the output does not
//! depend on the pool size. Because one seed drives every width, a seed's
//! standard-normal draws are shared across widths and only the scale changes.

use std::io::Write;

use rayon::prelude::*;

use edd_core::synth::{square_corners, triangle_vertices};
use edd_core::{
    apply_scenario, edd, gdv, generate, ClusterSpec, Dataset, EddConfig, LabelScenario, Labels,
};

use crate::error::{Error, Result};

/// Attempts at drawing a random labeling with every class holding two points.
pub const RANDOM_LABEL_RETRIES: u64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// K×D cluster centers.
    pub centers: Dataset,
    pub points_per_cluster: usize,
    /// Strictly ascending, non-negative.
    pub widths: Vec<f64>,
    pub seeds: Vec<u64>,
    pub edd: EddConfig,
    /// Also compute the GDV against the true cluster labels.
    pub compute_gdv: bool,
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

impl SweepConfig {
    /// Four clusters on the corners of a side-4 square, 200 points each,
    /// 20 widths from 0.05 to 3.0, seeds 0..10.
    pub fn four_corners() -> Self {
        Self {
            centers: square_corners(4.0),
            points_per_cluster: 200,
            widths: linspace(0.05, 3.0, 20),
            seeds: (0..10).collect(),
            edd: EddConfig::default(),
            compute_gdv: true,
        }
    }

    /// Three clusters on a side-4 equilateral triangle, 200 points each,
    /// 15 widths from 0.05 to 1.5, seeds 0..10.
    pub fn three_clusters() -> Self {
        Self {
            centers: triangle_vertices(4.0),
            widths: linspace(0.05, 1.5, 15),
            ..Self::four_corners()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.widths.is_empty() {
            return bad("widths must not be empty");
        }
        if self.widths.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return bad("widths must be finite and non-negative");
        }
        if self.widths.windows(2).any(|w| w[0] >= w[1]) {
            return bad("widths must be strictly ascending");
        }
        if self.seeds.is_empty() {
            return bad("seeds must not be empty");
        }
        if self.points_per_cluster == 0 {
            return bad("points per cluster must be positive");
        }
        self.edd.validate()?;
        Ok(())
    }

    fn spec(&self, width: f64, seed: u64) -> ClusterSpec {
        ClusterSpec {
            centers: self.centers.clone(),
            width,
            points_per_cluster: self.points_per_cluster,
            seed,
        }
    }

    fn cells(&self) -> Vec<(usize, u64)> {
        (0..self.widths.len())
            .flat_map(|w| self.seeds.iter().map(move |&s| (w, s)))
            .collect()
    }
}

/// Seed-aggregated statistics at one width (and labeling scenario).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub width: f64,
    pub scenario: Option<LabelScenario>,
    pub edd_mean: Option<f64>,
    pub edd_std: Option<f64>,
    pub gdv_mean: Option<f64>,
    pub gdv_std: Option<f64>,
    /// Seeds for which every requested metric succeeded.
    pub n_seeds: usize,
    /// One message per failed cell.
    pub errors: Vec<String>,
}

impl SweepRow {
    pub fn is_valid(&self) -> bool {
        self.n_seeds > 0
    }
}

/// Mean and population standard deviation; `None` for no samples.
pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

type CellResult = std::result::Result<f64, String>;

struct Cell {
    edd: CellResult,
    gdv: Vec<CellResult>,
}

fn run_cells<F>(config: &SweepConfig, f: F) -> Vec<Cell>
where
    F: Fn(&Dataset, &Labels, u64) -> Vec<CellResult> + Sync,
{
    config
        .cells()
        .into_par_iter()
        .map(|(w, seed)| {
            let width = config.widths[w];
            match generate(&config.spec(width, seed)) {
                Err(e) => Cell {
                    edd: Err(e.to_string()),
                    gdv: Vec::new(),
                },
                Ok((data, labels)) => Cell {
                    edd: edd(&data, &config.edd)
                        .map(|r| r.edd)
                        .map_err(|e| e.to_string()),
                    gdv: f(&data, &labels, seed),
                },
            }
        })
        .collect()
}

/// Aggregates the cells of one width for the GDV column `slot` (if any).
fn aggregate(
    width: f64,
    seeds: &[u64],
    cells: &[Cell],
    scenario: Option<LabelScenario>,
    slot: Option<usize>,
) -> SweepRow {
    let mut edds = Vec::new();
    let mut gdvs = Vec::new();
    let mut errors = Vec::new();
    let mut n_seeds = 0;
    for (seed, cell) in seeds.iter().zip(cells) {
        let g = slot.map(|s| {
            cell.gdv
                .get(s)
                .cloned()
                .unwrap_or_else(|| Err("not computed".to_string()))
        });
        match &cell.edd {
            Ok(v) => edds.push(*v),
            Err(e) => errors.push(format!("width {width} seed {seed}: edd: {e}")),
        }
        match &g {
            Some(Ok(v)) => gdvs.push(*v),
            Some(Err(e)) => errors.push(format!("width {width} seed {seed}: gdv: {e}")),
            None => {}
        }
        if cell.edd.is_ok() && g.as_ref().is_none_or(|g| g.is_ok()) {
            n_seeds += 1;
        }
    }
    let edd = mean_std(&edds);
    let gdv = mean_std(&gdvs);
    SweepRow {
        width,
        scenario,
        edd_mean: edd.map(|s| s.0),
        edd_std: edd.map(|s| s.1),
        gdv_mean: gdv.map(|s| s.0),
        gdv_std: gdv.map(|s| s.1),
        n_seeds,
        errors,
    }
}

/// EDD (and optionally GDV on the true labels) as a function of cluster width.
///
/// Failing cells are reported in the row's `errors` rather than aborting.
pub fn width_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let compute_gdv = config.compute_gdv;
    let cells = run_cells(config, |data, labels, _| {
        if compute_gdv {
            vec![gdv(data, labels).map(|r| r.gdv).map_err(|e| e.to_string())]
        } else {
            Vec::new()
        }
    });
    let per = config.seeds.len();
    Ok(config
        .widths
        .iter()
        .zip(cells.chunks(per))
        .map(|(&w, chunk)| {
            let (scenario, slot) = if compute_gdv {
                (Some(LabelScenario::Correct), Some(0))
            } else {
                (None, None)
            };
            aggregate(w, &config.seeds, chunk, scenario, slot)
        })
        .collect())
}

/// Labels for `scenario`. Random draws that leave a class with fewer than two
/// points are redrawn with sub-seeds `seed + (attempt << 32)`.
pub fn scenario_labels(labels: &Labels, scenario: LabelScenario, seed: u64) -> Result<Labels> {
    if scenario != LabelScenario::Random {
        return Ok(apply_scenario(labels, scenario, seed)?);
    }
    let mut last = None;
    for attempt in 0..RANDOM_LABEL_RETRIES {
        match apply_scenario(labels, scenario, seed.wrapping_add(attempt << 32)) {
            Ok(l) if l.class_sizes().iter().all(|&s| s >= 2) => return Ok(l),
            Ok(l) => {
                let c = l.class_sizes().iter().position(|&s| s < 2).unwrap_or(0);
                last = Some(edd_core::Error::SingletonClass(c));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt").into())
}

/// GDV under each labeling scenario; EDD is label-free and computed once per
/// cell, so it is identical across the scenarios of a width.
///
/// Rows are ordered by width, then by the order of `scenarios`.
pub fn labeling_sweep(config: &SweepConfig, scenarios: &[LabelScenario]) -> Result<Vec<SweepRow>> {
    config.validate()?;
    if scenarios.is_empty() {
        return Err(Error::Config("at least one labeling scenario is required".into()));
    }
    let cells = run_cells(config, |data, labels, seed| {
        scenarios
            .iter()
            .map(|&s| {
                scenario_labels(labels, s, seed)
                    .and_then(|l| Ok(gdv(data, &l)?.gdv))
                    .map_err(|e| e.to_string())
            })
            .collect()
    });
    let per = config.seeds.len();
    let mut rows = Vec::with_capacity(config.widths.len() * scenarios.len());
    for (&w, chunk) in config.widths.iter().zip(cells.chunks(per)) {
        for (slot, &s) in scenarios.iter().enumerate() {
            rows.push(aggregate(w, &config.seeds, chunk, Some(s), Some(slot)));
        }
    }
    Ok(rows)
}

pub const CURVE_COLUMNS: [&str; 7] = [
    "width", "scenario", "edd_mean", "edd_std", "gdv_mean", "gdv_std", "n_seeds",
];

/// Writes the plot-ready curve table. Missing values are empty cells.
pub fn write_curves_csv<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.width.to_string(),
            r.scenario.map(|s| s.name().to_string()).unwrap_or_default(),
            opt(r.edd_mean),
            opt(r.edd_std),
            opt(r.gdv_mean),
            opt(r.gdv_std),
            r.n_seeds.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // Ties share the average of their 1-based ranks.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties. `NaN` when either
/// side is constant or the lengths differ.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    if x.len() != y.len() || x.len() < 2 {
        return f64::NAN;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
