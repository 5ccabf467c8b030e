use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use edd::csv_io::load_csv;
use edd::report::Record;
use tempfile::TempDir;

fn edd_bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_edd"));
    cmd.env_remove("EDD_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    edd_bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn compute_two_points_is_zero() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "two.csv", "x,y\n0,0\n3,4\n");
    let out = run(&["compute", &file, "--bins", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = Record::parse(stdout(&out).trim()).unwrap();
    assert_eq!(rec.get("edd"), Some("0"));
    assert_eq!(rec.get("bins"), Some("10"));
    assert_eq!(rec.get("zscore"), Some("on"));
}

#[test]
fn compute_writes_histogram_and_reuses_dump() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("pts.csv");
    let out = run(&["synth", "--width", "0.5", "--n", "20", "--out", p(&data)]);
    assert_eq!(out.status.code(), Some(0));

    let hist = dir.path().join("hist.csv");
    let dump = dir.path().join("d.bin");
    let out = run(&[
        "compute", p(&data), "--label-col", "label", "--hist-out", p(&hist),
        "--save-distances", p(&dump),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let first = Record::parse(stdout(&out).trim()).unwrap();
    let hist_text = fs::read_to_string(&hist).unwrap();
    assert!(hist_text.starts_with("bin_center,probability\n"));
    assert_eq!(hist_text.lines().count(), 101);

    let out = run(&["compute", "--distances", p(&dump)]);
    assert_eq!(out.status.code(), Some(0));
    let again = Record::parse(stdout(&out).trim()).unwrap();
    assert_eq!(again.get("edd"), first.get("edd"));
    assert_eq!(again.get("bin_edges_digest"), first.get("bin_edges_digest"));
}

#[test]
fn gdv_needs_label_column() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "l.csv", "x,label\n0,a\n1,a\n4,b\n5,b\n");
    let out = run(&["gdv", &file]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["gdv", &file, "--label-col", "label"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = Record::parse(stdout(&out).trim()).unwrap();
    let g: f64 = rec.get("gdv").unwrap().parse().unwrap();
    assert!((g + 0.7276068751089988).abs() < 1e-12);
    assert_eq!(rec.get("class_sizes"), Some("2,2"));
}

#[test]
fn unknown_label_column_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "l.csv", "x,label\n0,a\n1,a\n4,b\n5,b\n");
    assert_eq!(run(&["gdv", &file, "--label-col", "nope"]).status.code(), Some(1));
}

#[test]
fn data_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.csv");
    let out = run(&["compute", p(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.csv"));

    let ragged = write(dir.path(), "r.csv", "1,2\n3\n");
    assert_eq!(run(&["compute", &ragged]).status.code(), Some(2));

    let text = write(dir.path(), "t.csv", "1,2\n3,oops\n");
    assert_eq!(run(&["compute", &text]).status.code(), Some(2));

    let constant = write(dir.path(), "c.csv", "1,2\n1,3\n1,4\n");
    let out = run(&["compute", &constant]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ZeroVariance"));

    let singleton = write(dir.path(), "s.csv", "x,label\n0,a\n1,a\n4,b\n");
    assert_eq!(run(&["gdv", &singleton, "--label-col", "label"]).status.code(), Some(2));
}

#[test]
fn bad_flags_exit_one() {
    assert_eq!(run(&["compute"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let file = write(dir.path(), "two.csv", "0,0\n3,4\n");
    assert_eq!(run(&["compute", &file, "--bins", "1"]).status.code(), Some(1));
    assert_eq!(run(&["compute", &file, "--zscore", "maybe"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn synth_round_trips_through_loader() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("s.csv");
    let out = run(&[
        "synth", "--centers", "0,0;5,5;10,0", "--width", "0.3", "--n", "7", "--seed", "4",
        "--out", p(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let data = load_csv(&out_path, Some("label")).unwrap();
    assert_eq!(data.dataset.n_points(), 21);
    assert_eq!(data.dataset.n_dims(), 2);
    assert_eq!(data.labels.unwrap().class_sizes(), &[7, 7, 7]);

    let again = dir.path().join("s2.csv");
    run(&[
        "synth", "--centers", "0,0;5,5;10,0", "--width", "0.3", "--n", "7", "--seed", "4",
        "--out", p(&again),
    ]);
    assert_eq!(fs::read(&out_path).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn sweep_from_config_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "small.cfg",
        "# tiny sweep\nn = 20\nwidths = 0.1, 0.5, 1.0\nn-seeds = 2\nbins = 50\n",
    );
    let csv_path = dir.path().join("curve.csv");
    let out = run(&["sweep", &cfg, "--bins", "20", "--out", p(&csv_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("width,scenario,edd_mean,edd_std,gdv_mean,gdv_std,n_seeds")
    );
    assert_eq!(lines.count(), 3);

    let sidecar = fs::read_to_string(dir.path().join("curve.csv.cfg")).unwrap();
    assert!(sidecar.lines().any(|l| l == "bins = 20"), "{sidecar}");

    // The sidecar alone reproduces the run.
    let replay = dir.path().join("replay.csv");
    let out = run(&[
        "sweep", p(&dir.path().join("curve.csv.cfg")), "--out", p(&replay),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&csv_path).unwrap(), fs::read(&replay).unwrap());
}

#[test]
fn labeling_writes_three_scenarios_to_stdout() {
    let out = run(&["labeling", "--n", "15", "--widths", "0.1,0.4", "--n-seeds", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let scenarios: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(
        scenarios,
        ["correct", "merged", "random", "correct", "merged", "random"]
    );
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "colour = blue\n");
    assert_eq!(run(&["sweep", &cfg]).status.code(), Some(1));
}

#[test]
fn thread_count_from_environment() {
    let args = ["sweep", "--n", "10", "--widths", "0.5", "--n-seeds", "1"];
    let status = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = edd_bin();
        if let Some(v) = env {
            cmd.env("EDD_THREADS", v);
        }
        cmd.args(args).args(extra).output().unwrap()
    };
    assert_eq!(status(Some("0"), &[]).status.code(), Some(1));
    assert_eq!(status(Some("lots"), &[]).status.code(), Some(1));
    // The flag wins over the environment.
    assert_eq!(status(Some("0"), &["--threads", "2"]).status.code(), Some(0));

    let one = status(Some("1"), &[]);
    let three = status(Some("3"), &[]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}
