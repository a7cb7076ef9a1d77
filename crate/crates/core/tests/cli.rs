use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdfa-bench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = r#"
length = 400
oracle = true

[glm]
sizes = [1, 2]

[reservoir]
sizes = [1, 6]

[lstm]
sizes = [1]
epochs = 2
"#;

#[test]
fn enumerate_one_state_writes_three_machines() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(dir.path(), &["enumerate", "--n-states", "1", "--out", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("n=1: 3 topologies"));
    let lib = fs::read_to_string(dir.path().join("out/library.jsonl")).unwrap();
    assert_eq!(lib.lines().count(), 3);
    assert_eq!(fs::read_to_string(dir.path().join("out/topologies.txt")).unwrap().lines().count(), 3);

    let again = bench(dir.path(), &["stats", "--library", "out/library.jsonl", "--out", "out"]);
    assert!(again.status.success(), "{}", stderr(&again));
    assert_eq!(stdout(&again).lines().count(), 4);
}

#[test]
fn stats_for_the_even_process() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(dir.path(), &["stats", "--machine", "even", "--out", "."]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("machine_id,n_states,h_mu,C_mu,A_opt,R_opt"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "even");
    assert_eq!(row[1], "2");
    let num = |i: usize| row[i].parse::<f64>().unwrap();
    assert!((num(2) - 0.462098).abs() < 1e-6);
    assert!((num(3) - 0.636514).abs() < 1e-6);
    assert!((num(4) - 2.0 / 3.0).abs() < 1e-12);
    assert!((num(5) - 0.636514).abs() < 1e-6);
    assert_eq!(fs::read_to_string(dir.path().join("stats.csv")).unwrap(), text);
}

#[test]
fn curve_csv_ends_at_the_optimal_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(dir.path(), &["curve", "--machine", "even:0.4", "--out", "."]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("curves/even_0.4.csv")).unwrap();
    assert!(csv.starts_with("beta,rate_nats,accuracy,kind\n"));
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with(',') && last.ends_with(",optimal"));
}

#[test]
fn report_on_an_empty_store_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(dir.path(), &["report", "--store", "missing.jsonl", "--out", "."]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no records"), "{}", stderr(&o));
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "lenght = 10\n").unwrap();
    let o = bench(dir.path(), &["stats", "--config", "bad.toml", "--machine", "even"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lenght"), "{}", stderr(&o));

    let o = bench(dir.path(), &["stats", "--library", "nowhere.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_prints_one_record_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.toml"), SMALL).unwrap();
    let o = bench(
        dir.path(),
        &["run", "--config", "small.toml", "--machine", "even:0.4", "--families", "glm"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.contains("\"machine_id\":\"even:0.4\"")));
    assert!(lines.last().unwrap().contains("\"family\":\"oracle\""));

    let single = bench(
        dir.path(),
        &["run", "--size", "2", "--config", "small.toml", "--machine", "even:0.4", "--families", "glm"],
    );
    assert!(single.status.success(), "{}", stderr(&single));
    assert_eq!(stdout(&single), format!("{}\n{}\n", lines[1], lines[2]));
}

#[test]
fn suite_resumes_and_reports_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.toml"), SMALL).unwrap();
    let args = [
        "suite",
        "--config",
        "small.toml",
        "--machine",
        "even:0.4",
        "--machine",
        "neven:0.3,0.6",
        "--machine",
        "fair-coin",
        "--out",
        "out",
    ];
    let o = bench(dir.path(), &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let store = fs::read(dir.path().join("out/records.jsonl")).unwrap();
    assert_eq!(String::from_utf8_lossy(&store).lines().count(), 2 * (2 + 2 + 1 + 1));
    let skipped = fs::read_to_string(dir.path().join("out/skipped.csv")).unwrap();
    assert!(skipped.contains("fair-coin"));

    let again = bench(dir.path(), &args);
    assert!(again.status.success(), "{}", stderr(&again));
    assert!(stdout(&again).contains("0 units run"), "{}", stdout(&again));
    assert_eq!(fs::read(dir.path().join("out/records.jsonl")).unwrap(), store);

    let report = |out: &str| {
        let o = bench(dir.path(), &["report", "--store", "out/records.jsonl", "--out", out]);
        assert!(o.status.success(), "{}", stderr(&o));
    };
    report("r1");
    report("r2");
    for name in ["family_stats.csv", "size_trend.csv", "histogram.csv", "regression.csv", "points.csv"] {
        let a = fs::read(dir.path().join("r1").join(name)).unwrap();
        assert_eq!(a, fs::read(dir.path().join("r2").join(name)).unwrap(), "{name}");
        assert!(!a.is_empty());
    }
}
