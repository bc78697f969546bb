use std::path::Path;
use std::process::{Command, Output};

fn cnea(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnea"))
        .args(args)
        .current_dir(cwd)
        .env_remove("CNEA_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_shows_every_function_and_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let o = cnea(&["list", "--json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["functions"].as_array().unwrap().len(), 7);
    assert_eq!(v["algorithms"].as_array().unwrap().len(), 5);
    let o = cnea(&["list", "--function", "griewank"], dir.path());
    assert!(stdout(&o).contains("griewank"));
    assert!(!stdout(&o).contains("rastrigin"));
}

#[test]
fn run_writes_the_default_trace_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = cnea(
        &["run", "--algo", "sea", "--function", "ellipsoid", "--dim", "3", "--generations", "5", "--population", "10", "--seed", "4"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = dir.path().join("sea_ellipsoid_3_seed4.csv");
    let text = std::fs::read_to_string(trace).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(stdout(&o).contains("final error:"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["run", "--function", "ellipsoid", "--generations", "2"];
    let cases: [&[&str]; 4] = [
        &["--algo", "sea", "--dim", "0"],
        &["--algo", "nosuch", "--dim", "2"],
        &["--algo", "sea", "--dim", "2", "--set", "nosuch=1"],
        &["--algo", "cea", "--dim", "2", "--population", "7"],
    ];
    for extra in cases {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        let o = cnea(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = cnea(&["run", "--algo", "sea", "--function", "rot_rastrigin", "--dim", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dump_regions_is_cnea_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = cnea(
        &["run", "--algo", "cnea", "--function", "rastrigin", "--dim", "3", "--generations", "5", "--population", "30", "--dump-regions", "r.jsonl"],
        dir.path(),
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["density"].as_u64().unwrap() >= 2);
    }
    let o = cnea(
        &["run", "--algo", "sea", "--function", "rastrigin", "--dim", "3", "--dump-regions", "r.jsonl"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_then_reports() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.cfg"),
        "# tiny matrix\nalgos = cnea, sea\nfunctions = rastrigin\ndims = 2\nruns = 3\ngenerations = 8\npopulation = 20\n",
    )
    .unwrap();
    let o = cnea(&["sweep", "--config", "m.cfg", "--out", "out", "--workers", "2"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("2 of 2 cells"));

    let o = cnea(&["summarize", "--in", "out"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("Median"));

    let o = cnea(&["ttest", "--a", "out/cnea_rastrigin_2", "--b", "out/sea_rastrigin_2", "--json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["df"], 2);

    let o = cnea(&["diversity-report", "--in", "out"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("cnea"));
}

#[test]
fn sweep_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = cnea(&["sweep", "--config", "missing.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(dir.path().join("bad.cfg"), "colour = blue\n").unwrap();
    let o = cnea(&["sweep", "--config", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(
        dir.path().join("mixed.cfg"),
        "algos = sea\nfunctions = nosuch, ellipsoid\ndims = 2\nruns = 1\ngenerations = 2\npopulation = 10\n",
    )
    .unwrap();
    let o = cnea(&["sweep", "--config", "mixed.cfg", "--out", "o"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("o/sea_ellipsoid_2/summary.csv").exists());
}
