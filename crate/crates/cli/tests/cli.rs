use std::path::PathBuf;
use std::process::{Command, Output};

fn amsos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amsos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn iris() -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "data", "iris.csv"].iter().collect();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn json_report_on_builtin() {
    let out = amsos(&["run", "--dataset", "synthetic3", "--algorithm", "amsos", "--seed", "2", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["algorithm"], "amsos");
    assert_eq!(report["runs"][0]["input_k"], 17);
    assert_eq!(report["runs"][0]["metrics"]["k"], 3);
    assert_eq!(report["centroids"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_byte_identical() {
    let args = [
        "run", "--dataset", "synthetic2", "--algorithm", "kmeans", "--init", "kmeanspp", "--k", "4", "--seed", "7",
        "--repeats", "5", "--output", "csv",
    ];
    let a = amsos(&args);
    let b = amsos(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().filter(|l| l.starts_with("run,")).count(), 5);
}

#[test]
fn trace_file_is_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let out = amsos(&[
        "run",
        "--dataset",
        "synthetic1",
        "--algorithm",
        "amsos",
        "--output",
        "markdown",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("| Data set | Algorithm |"));
    let text = std::fs::read_to_string(&trace).unwrap();
    let passes: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!passes.is_empty());
    assert_eq!(passes[0]["k_before"], 18);
    assert_eq!(passes.last().unwrap()["k_after"], 2);
}

#[test]
fn csv_dataset_with_label_column() {
    let out = amsos(&[
        "run", "--dataset", &iris(), "--algorithm", "kmeans", "--init", "spss", "--k", "3", "--label-col", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["dataset"], "iris");
}

#[test]
fn generate_writes_labeled_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s2.csv");
    let out = amsos(&["generate", "--dataset", "synthetic2", "--seed", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 400);
    assert!(text.lines().all(|l| l.split(',').count() == 3));

    // the generated file clusters the same way as the builtin it came from
    let from_file = amsos(&["run", "--dataset", path.to_str().unwrap(), "--algorithm", "amsos", "--output", "csv"]);
    let builtin = amsos(&["run", "--dataset", "synthetic2", "--seed", "4", "--algorithm", "amsos", "--output", "csv"]);
    // compare from input_k on; the derived seed column differs and AMSOS ignores it
    let run_row = |o: &Output| {
        let line = stdout(o).lines().find(|l| l.starts_with("run,")).unwrap().to_string();
        line.splitn(6, ',').last().unwrap().to_string()
    };
    assert_eq!(run_row(&from_file), run_row(&builtin));
}

#[test]
fn validation_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["run", "--dataset", "synthetic1", "--algorithm", "amsos", "--k", "2"],
        &["run", "--dataset", "synthetic1", "--algorithm", "kmeans", "--init", "random"],
        &["run", "--dataset", "synthetic1", "--algorithm", "amsos", "--init", "random"],
        &["run", "--dataset", "synthetic1", "--algorithm", "amsos", "--repeats", "0"],
        &["run", "--dataset", "synthetic9", "--algorithm", "amsos"],
        &["run", "--dataset", "synthetic1", "--algorithm", "dbscan"],
    ];
    for args in cases {
        let out = amsos(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn ingestion_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "1,2,a\n3,4,b\n5,b\n").unwrap();
    let non_numeric = dir.path().join("text.csv");
    std::fs::write(&non_numeric, "1,2,a\n3,x,b\n5,6,b\n7,8,a\n").unwrap();
    for path in [dir.path().join("missing.csv"), ragged, non_numeric] {
        let out = amsos(&["run", "--dataset", path.to_str().unwrap(), "--algorithm", "amsos"]);
        assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
