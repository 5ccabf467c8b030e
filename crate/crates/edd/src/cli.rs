//! Command-line driver.
//!
//! Results go to stdout as one `key=value` record per line (or CSV for the
//! sweeps without `--out`); human-readable summaries go to stderr. Exit codes:
//! 0 success, 1 usage error, 2 data error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use edd_core::synth::square_corners;
use edd_core::{gdv, generate, ClusterSpec, EddConfig};

use crate::config::{
    edd_config, parse_centers, Experiment, ExperimentConfig, KvConfig,
};
use crate::csv_io::{load_csv, save_csv};
use crate::dump::{load_distances, save_distances};
use crate::error::{Error, Result};
use crate::harness::{labeling_sweep, width_sweep, write_curves_csv};
use crate::parallel::{edd_par, pairwise_distances_par};
use crate::report::{edd_record, gdv_record, write_gdv_matrix_csv, write_histogram_csv, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Environment fallback for `--threads`.
pub const THREADS_ENV: &str = "EDD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "edd", version, about = "Quantify clustering with and without labels")]
pub struct Cli {
    /// Worker threads for the library calls (falls back to EDD_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label-free EDD of a CSV point cloud.
    Compute(ComputeArgs),
    /// Label-based GDV of a CSV point cloud.
    Gdv(GdvArgs),
    /// Write a seeded Gaussian mixture to CSV.
    Synth(SynthArgs),
    /// EDD and GDV as a function of cluster width.
    Sweep(ExperimentArgs),
    /// GDV under correct, merged and random labelings.
    Labeling(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Input CSV.
    #[arg(required_unless_present = "distances", conflicts_with = "distances")]
    file: Option<PathBuf>,
    /// Read cached distances instead of a CSV.
    #[arg(long)]
    distances: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[arg(long, default_value = "euclidean")]
    metric: String,
    #[arg(long, default_value = "on")]
    zscore: String,
    /// `observed` or `lo,hi`.
    #[arg(long, default_value = "observed")]
    range: String,
    /// Column to exclude as a label (name or 0-based index).
    #[arg(long)]
    label_col: Option<String>,
    /// Write the histogram as `bin_center,probability` CSV.
    #[arg(long)]
    hist_out: Option<PathBuf>,
    /// Cache the pairwise distances in binary form.
    #[arg(long)]
    save_distances: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GdvArgs {
    file: PathBuf,
    /// Label column (name or 0-based index).
    #[arg(long)]
    label_col: String,
    /// Write the L×L class distance matrix as CSV.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Cluster centers as `x,y;x,y;...` (default: corners of a side-4 square).
    #[arg(long)]
    centers: Option<String>,
    #[arg(long)]
    width: f64,
    /// Points per cluster.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Flat `key = value` config file; flags override it.
    config: Option<PathBuf>,
    #[arg(long)]
    centers: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    widths: Option<String>,
    #[arg(long)]
    width_min: Option<String>,
    #[arg(long)]
    width_max: Option<String>,
    #[arg(long)]
    width_steps: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    n_seeds: Option<String>,
    #[arg(long)]
    bins: Option<String>,
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    zscore: Option<String>,
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    gdv: Option<String>,
    #[arg(long)]
    scenarios: Option<String>,
    /// Curve CSV path; a `.cfg` sidecar is written next to it.
    #[arg(long)]
    out: Option<String>,
}

impl ExperimentArgs {
    fn overrides(&self) -> [(&'static str, &Option<String>); 16] {
        [
            ("centers", &self.centers),
            ("n", &self.n),
            ("widths", &self.widths),
            ("width-min", &self.width_min),
            ("width-max", &self.width_max),
            ("width-steps", &self.width_steps),
            ("seeds", &self.seeds),
            ("seed", &self.seed),
            ("n-seeds", &self.n_seeds),
            ("bins", &self.bins),
            ("metric", &self.metric),
            ("zscore", &self.zscore),
            ("range", &self.range),
            ("gdv", &self.gdv),
            ("scenarios", &self.scenarios),
            ("out", &self.out),
        ]
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_DATA
            }
        }
    }
}

fn thread_count(flag: Option<usize>, config: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag.or(config) {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{THREADS_ENV}: cannot parse {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn write_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let flag_threads = cli.threads;
    let out_err = write_err(Path::new("<stdout>"));
    match cli.command {
        Command::Compute(args) => {
            let mut kv = KvConfig::default();
            kv.set("bins", args.bins.to_string());
            kv.set("metric", args.metric.clone());
            kv.set("zscore", args.zscore.clone());
            kv.set("range", args.range.clone());
            let config = edd_config(&kv, EddConfig::default())?;
            let threads = thread_count(flag_threads, None)?;
            let (result, source) = if let Some(dump) = &args.distances {
                let d = load_distances(dump)?;
                (edd_core::edd_from_distances(&d, &config)?, "dump")
            } else {
                let file = args.file.as_ref().expect("clap requires file or --distances");
                let data = load_csv(file, args.label_col.as_deref())?.dataset;
                if let Some(cache) = &args.save_distances {
                    let (prepared, _) = edd_core::prepare(&data, &config)?;
                    let d = with_pool(threads, || pairwise_distances_par(&prepared, config.metric))??;
                    save_distances(cache, &d)?;
                }
                (with_pool(threads, || edd_par(&data, &config))??, "csv")
            };
            let mut record = edd_record(&result);
            if source == "dump" {
                // The dump does not say how the points were preprocessed.
                record.set("zscore", "n/a");
            }
            record.push("source", source);
            writeln!(stdout, "{record}").map_err(out_err)?;
            if let Some(path) = &args.hist_out {
                let f = std::fs::File::create(path).map_err(write_err(path))?;
                write_histogram_csv(f, &result.histogram)?;
            }
            let _ = writeln!(
                stderr,
                "EDD {:.4}: {:.3} of {:.3} bits over {} distances from {} points",
                result.edd,
                result.entropy_bits,
                (config.bins as f64).log2(),
                result.histogram.total(),
                result.n_points
            );
        }
        Command::Gdv(args) => {
            let csv = load_csv(&args.file, Some(&args.label_col))?;
            let labels = csv.labels.expect("label column requested");
            let result = gdv(&csv.dataset, &labels)?;
            writeln!(stdout, "{}", gdv_record(&result)).map_err(out_err)?;
            if let Some(path) = &args.matrix_out {
                let f = std::fs::File::create(path).map_err(write_err(path))?;
                write_gdv_matrix_csv(f, &result, labels.names())?;
            }
            let _ = writeln!(
                stderr,
                "GDV {:.4} over {} classes in {} dimensions",
                result.gdv, result.n_classes, result.n_dims
            );
        }
        Command::Synth(args) => {
            let centers = match &args.centers {
                Some(c) => parse_centers(c)?,
                None => square_corners(4.0),
            };
            let spec = ClusterSpec {
                centers,
                width: args.width,
                points_per_cluster: args.n,
                seed: args.seed,
            };
            spec.validate().map_err(|e| Error::Config(e.to_string()))?;
            let (data, labels) = generate(&spec)?;
            save_csv(&args.out, &data, Some(&labels), None)?;
            let mut r = Record::new();
            r.push("out", args.out.display())
                .push("n_points", data.n_points())
                .push("n_dims", data.n_dims())
                .push("n_clusters", spec.n_clusters())
                .push("width", spec.width)
                .push("seed", spec.seed);
            writeln!(stdout, "{r}").map_err(out_err)?;
        }
        Command::Sweep(args) => run_experiment(Experiment::WidthSweep, &args, flag_threads, stdout, stderr)?,
        Command::Labeling(args) => run_experiment(Experiment::Labeling, &args, flag_threads, stdout, stderr)?,
    }
    Ok(())
}

fn run_experiment(
    kind: Experiment,
    args: &ExperimentArgs,
    flag_threads: Option<usize>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let mut kv = match &args.config {
        Some(path) => KvConfig::load(path)?,
        None => KvConfig::default(),
    };
    for (key, value) in args.overrides() {
        if let Some(v) = value {
            kv.set(key, v.clone());
        }
    }
    let cfg = ExperimentConfig::from_kv(kind, &kv)?;
    let threads = thread_count(flag_threads, cfg.threads)?;
    let rows = with_pool(threads, || match kind {
        Experiment::WidthSweep => width_sweep(&cfg.sweep),
        Experiment::Labeling => labeling_sweep(&cfg.sweep, &cfg.scenarios),
    })??;
    for r in &rows {
        for e in &r.errors {
            let _ = writeln!(stderr, "warning: {e}");
        }
    }
    match &cfg.out {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(write_err(path))?;
            write_curves_csv(std::io::BufWriter::new(f), &rows)?;
            let sidecar = sidecar_path(path);
            std::fs::write(&sidecar, cfg.to_kv().to_string()).map_err(write_err(&sidecar))?;
            let mut r = Record::new();
            r.push("out", path.display())
                .push("config", sidecar.display())
                .push("rows", rows.len());
            writeln!(stdout, "{r}").map_err(write_err(Path::new("<stdout>")))?;
        }
        None => write_curves_csv(&mut *stdout, &rows)?,
    }
    let _ = writeln!(
        stderr,
        "{} rows over {} widths and {} seeds",
        rows.len(),
        cfg.sweep.widths.len(),
        cfg.sweep.seeds.len()
    );
    Ok(())
}

/// `curves.csv` -> `curves.csv.cfg`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".cfg");
    PathBuf::from(s)
}
