use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gdba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdba"))
        .args(args)
        .env_remove("GDBA_SIGMA")
        .env_remove("GDBA_CONFIG")
        .output()
        .expect("failed to spawn gdba")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(str::to_owned)
        .collect()
}

fn write_toy_csv(dir: &Path) -> String {
    let path = dir.join("toy.csv");
    let out = gdba(&["toy", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    path.to_str().unwrap().to_owned()
}

#[test]
fn score_writes_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy_csv(dir.path());
    let scores = dir.path().join("s.csv");
    let out = gdba(&[
        "score",
        "--dataset",
        &toy,
        "--detector",
        "gdba",
        "--sigma",
        "0.15",
        "--out",
        scores.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&scores).unwrap();
    assert_eq!(text.lines().next(), Some("row_index,score,label"));
    assert_eq!(data_rows(&scores).len(), 31);
    assert!(stderr(&out).contains("AUC"));
}

#[test]
fn score_omits_label_column_when_absent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unlabeled.csv");
    fs::write(&path, "a,b\n0,0\n0.1,0\n5,5\n").unwrap();
    let out = gdba(&["score", "--dataset", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("row_index,score"));
    assert_eq!(text.lines().count(), 4);
    assert!(!stderr(&out).contains("AUC"));
}

#[test]
fn default_sigma_is_0_15() {
    let default = gdba(&["score", "--dataset", "toy"]);
    let explicit = gdba(&["score", "--dataset", "toy", "--sigma", "0.15"]);
    let other = gdba(&["score", "--dataset", "toy", "--sigma", "0.3"]);
    assert!(default.status.success());
    assert_eq!(default.stdout, explicit.stdout);
    assert_ne!(default.stdout, other.stdout);
    assert!(stderr(&default).contains("sigma=0.15"));
}

#[test]
fn unknown_detector_exits_1_with_usage() {
    let out = gdba(&["score", "--dataset", "toy", "--detector", "svm"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("unknown detector"), "{err}");
    assert!(err.contains("--detector"), "{err}");
}

#[test]
fn sweep_grid_gives_five_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = gdba(&[
        "sweep",
        "--dataset",
        "toy",
        "--grid",
        "0.1:0.1:0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(data_rows(&path).len(), 5);
    let json = fs::read_to_string(path.with_extension("json")).unwrap();
    assert!(json.contains("best_sigma"));
}

#[test]
fn toy_sweep_best_row_is_perfect() {
    let out = gdba(&["sweep", "--dataset", "toy", "--grid", "0.05:0.05:1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let best = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert_eq!(best, 1.0);
    let at_01 = stdout(&out)
        .lines()
        .find(|l| l.starts_with("0.1,"))
        .unwrap()
        .to_owned();
    assert_eq!(at_01, "0.1,1");
}

#[test]
fn empty_or_malformed_grid_exits_1() {
    for grid in ["", "0.5:0.1:0.1", "a:b:c", "0.1:0:1"] {
        let out = gdba(&["sweep", "--dataset", "toy", "--grid", grid]);
        assert_eq!(out.status.code(), Some(1), "grid {grid:?}");
        assert!(stderr(&out).starts_with("error:"), "grid {grid:?}");
    }
}

#[test]
fn compare_covers_all_detectors_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cmp.csv");
    let out = gdba(&[
        "compare",
        "--dataset",
        "toy",
        "--k",
        "3",
        "--k-clusters",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = data_rows(&path);
    // 5 detectors x (1 dataset + avg)
    assert_eq!(rows.len(), 10);
    for name in ["gdba", "knn", "kthnn", "lof", "ldcof"] {
        assert!(rows
            .iter()
            .any(|r| r.trim_start_matches('"').starts_with(name)));
    }
    let json = fs::read_to_string(path.with_extension("json")).unwrap();
    assert!(json.contains("seconds"), "{json}");
}

#[test]
fn verify_passes_on_clean_build() {
    let out = gdba(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 12);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_with_fault_names_symmetry_check() {
    let out = gdba(&["verify", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL kernel_symmetry"));
    assert!(stderr(&out).contains("kernel_symmetry"));
}

#[test]
fn runs_are_byte_identical() {
    for args in [
        &[
            "score",
            "--dataset",
            "toy",
            "--detector",
            "ldcof",
            "--k-clusters",
            "3",
            "--seed",
            "7",
        ][..],
        &["sweep", "--dataset", "toy", "--grid", "0.02:0.02:0.4"][..],
        &[
            "compare",
            "--dataset",
            "toy",
            "--k",
            "3",
            "--k-clusters",
            "2",
        ][..],
    ] {
        let a = gdba(args);
        let b = gdba(args);
        assert!(a.status.success(), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let one = gdba(&[
        "--threads",
        "1",
        "sweep",
        "--dataset",
        "toy",
        "--grid",
        "0.1:0.1:1",
    ]);
    let two = gdba(&[
        "--threads",
        "2",
        "sweep",
        "--dataset",
        "toy",
        "--grid",
        "0.1:0.1:1",
    ]);
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn malformed_inputs_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("non_numeric.csv", "a,b,label\n1,2,0\n3,x,1\n"),
        ("ragged.csv", "a,b,label\n1,2,0\n3,1\n"),
        ("bad_label.csv", "a,b,label\n1,2,0\n3,4,2\n"),
        ("overflow.csv", "a,b,label\n1,2,0\n3,1e400,1\n"),
        ("empty.csv", ""),
        ("header_only.csv", "a,b,label\n"),
    ];
    for (name, body) in cases {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        let out = gdba(&["score", "--dataset", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        let err = stderr(&out);
        assert!(err.starts_with("error:"), "{name}: {err}");
        assert!(!err.contains("panicked"), "{name}: {err}");
    }
    let missing = gdba(&["score", "--dataset", "/nonexistent/x.csv"]);
    assert_eq!(missing.status.code(), Some(1));
    let bad_sigma = gdba(&["score", "--dataset", "toy", "--sigma", "-1"]);
    assert_eq!(bad_sigma.status.code(), Some(1));
    let bad_k = gdba(&[
        "score",
        "--dataset",
        "toy",
        "--detector",
        "knn",
        "--k",
        "500",
    ]);
    assert_eq!(bad_k.status.code(), Some(1));
    let no_dataset = gdba(&["score"]);
    assert_eq!(no_dataset.status.code(), Some(1));
}

#[test]
fn missing_required_label_column_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    fs::write(&path, "a,b\n0,0\n1,1\n").unwrap();
    let out = gdba(&[
        "score",
        "--dataset",
        path.to_str().unwrap(),
        "--label-column",
        "y",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_is_used_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gdba.toml");
    fs::write(&cfg, "dataset = [\"toy\"]\nsigma = 0.3\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = gdba(&["--config", cfg, "score"]);
    let explicit = gdba(&["score", "--dataset", "toy", "--sigma", "0.3"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, explicit.stdout);

    let overridden = gdba(&["--config", cfg, "score", "--sigma", "0.1"]);
    let direct = gdba(&["score", "--dataset", "toy", "--sigma", "0.1"]);
    assert_eq!(overridden.stdout, direct.stdout);
}

#[test]
fn environment_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gdba.toml");
    fs::write(&cfg, "sigma = 0.3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gdba"))
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "score",
            "--dataset",
            "toy",
        ])
        .env("GDBA_SIGMA", "0.1")
        .output()
        .unwrap();
    let direct = gdba(&["score", "--dataset", "toy", "--sigma", "0.1"]);
    assert_eq!(out.stdout, direct.stdout);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gdba.toml");
    fs::write(&cfg, "sigmaa = 0.3\n").unwrap();
    let out = gdba(&[
        "--config",
        cfg.to_str().unwrap(),
        "score",
        "--dataset",
        "toy",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = gdba(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verify"));
}
