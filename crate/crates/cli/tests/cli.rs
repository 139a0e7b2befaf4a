use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use motifgae::gae::GaeModel;

fn motifgae(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motifgae"))
        .args(args)
        .env_remove("MOTIFGAE_THREADS")
        .env_remove("MOTIFGAE_CONFIG")
        .env_remove("MOTIFGAE_SET")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = motifgae(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = motifgae(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "multi-line error: {err}");
    err
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn files(dir: &Path, suffix: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_str().unwrap().ends_with(suffix))
        .collect();
    v.sort();
    v
}

/// Small data set plus 5-epoch models for every encoder.
fn fixture(root: &Path) -> (PathBuf, PathBuf) {
    let data = root.join("data");
    let models = root.join("models");
    ok(&["generate", "--count", "20", "--seed", "5", "--out", s(&data)]);
    ok(&[
        "--set",
        "train.max_epochs=5",
        "train",
        "--encoder",
        "all",
        "--data",
        s(&data),
        "--out",
        s(&models),
    ]);
    (data, models)
}

#[test]
fn generate_split_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let stdout = ok(&["generate", "--count", "10", "--seed", "7", "--out", s(&a)]);
    assert!(stdout.contains("collector: 8 train / 2 validation"));
    ok(&["generate", "--count", "10", "--seed", "7", "--out", s(&b)]);
    let jsonl = files(&a, ".jsonl");
    assert_eq!(jsonl.len(), 14);
    for f in &jsonl {
        let name = f.file_name().unwrap();
        assert_eq!(fs::read(f).unwrap(), fs::read(b.join(name)).unwrap(), "{name:?}");
    }
    let text = fs::read_to_string(a.join("sink.train.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(a.join("generate.manifest.json").exists());
}

#[test]
fn bad_names_are_listed() {
    let err = fails(&["generate", "--pattern", "zigzag", "--out", "x"]);
    for p in ["collector", "sink", "collusion", "scatter-gather", "gather-scatter", "cyclic", "branching"] {
        assert!(err.contains(p), "{err}");
    }
    let err = fails(&["train", "--encoder", "mlp", "--data", "x", "--out", "y"]);
    assert!(err.contains("gcn|sage|gat"), "{err}");
    let err = fails(&["train", "--data", "/nonexistent/dir", "--out", "y"]);
    assert!(err.contains("missing dataset file"), "{err}");
    let err = fails(&["--set", "train.bogus=1", "generate", "--out", "x"]);
    assert!(err.contains("train.bogus"), "{err}");
}

#[test]
fn train_evaluate_classify_ingest() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, models) = fixture(tmp.path());

    let model_files: Vec<_> = files(&models, ".json")
        .into_iter()
        .filter(|p| !p.to_str().unwrap().ends_with(".report.json") && !p.to_str().unwrap().ends_with(".manifest.json"))
        .collect();
    assert_eq!(model_files.len(), 21);
    let m: GaeModel = serde_json::from_str(&fs::read_to_string(&model_files[0]).unwrap()).unwrap();
    assert!(m.threshold.is_some() && m.trained_pattern.is_some());

    let eval = tmp.path().join("eval");
    let stdout = ok(&["evaluate", "--models", s(&models), "--data", s(&data), "--out", s(&eval)]);
    assert_eq!(stdout.lines().count(), 3);
    let csv = fs::read_to_string(eval.join("gcn-matrix.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0].starts_with("trained,collector,sink"));
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 9);
        assert_eq!(row.matches('*').count(), 1, "{row}");
    }
    let svg = fs::read_to_string(eval.join("sage-matrix.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    let class_count = |c: &str| doc.descendants().filter(|n| n.attribute("class") == Some(c)).count();
    assert_eq!(class_count("cell"), 49);
    assert_eq!(class_count("row-min"), 7);

    let report = tmp.path().join("cls.csv");
    ok(&[
        "classify",
        "--models",
        s(&models),
        "--input",
        s(&data.join("cyclic.validation.jsonl")),
        "--out",
        s(&report),
    ]);
    let text = fs::read_to_string(&report).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 1 + 4);
    assert_eq!(rows[1].split(',').count(), 4 + 7 + 7);

    let tx = tmp.path().join("tx.csv");
    ok(&["export", "--input", s(&data.join("collector.train.jsonl")), "--out", s(&tx)]);
    let scan = tmp.path().join("scan.csv");
    let stdout = ok(&[
        "ingest",
        "--models",
        s(&models),
        "--input",
        s(&tx),
        "--out",
        s(&scan),
        "--min-degree",
        "4",
    ]);
    assert!(stdout.contains("16 candidates scanned"), "{stdout}");
    let rows = fs::read_to_string(&scan).unwrap();
    assert_eq!(rows.lines().count(), 1 + 16);
    assert!(scan.with_extension("csv.manifest.json").exists());

    let dump = tmp.path().join("features.jsonl");
    ok(&["features", "--input", s(&data.join("sink.validation.jsonl")), "--out", s(&dump)]);
    let first: serde_json::Value = serde_json::from_str(fs::read_to_string(&dump).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(first["columns"].as_array().unwrap().len(), 9);
}

#[test]
fn evaluate_reports_missing_patterns() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, models) = fixture(tmp.path());
    fs::remove_file(models.join("gat-cyclic.json")).unwrap();
    fs::remove_file(models.join("gat-sink.json")).unwrap();
    let err = fails(&["evaluate", "--encoder", "gat", "--models", s(&models), "--data", s(&data), "--out", "/tmp/unused"]);
    assert!(err.contains("sink, cyclic"), "{err}");
    let err = fails(&["evaluate", "--models", s(&data), "--data", s(&data), "--out", "/tmp/unused"]);
    assert!(err.contains("run `train` first"), "{err}");
}

#[test]
fn uncalibrated_models_point_to_train() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, models) = fixture(tmp.path());
    let path = models.join("gcn-branching.json");
    let mut m: GaeModel = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    m.threshold = None;
    fs::write(&path, serde_json::to_string(&m).unwrap()).unwrap();
    let err = fails(&[
        "classify",
        "--models",
        s(&models),
        "--input",
        s(&data.join("sink.validation.jsonl")),
        "--out",
        s(&tmp.path().join("x.csv")),
    ]);
    assert!(err.contains("branching") && err.contains("run `train` first"), "{err}");
}

#[test]
fn replay_reproduces_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    let models = tmp.path().join("models");
    ok(&["generate", "--pattern", "cyclic", "--count", "30", "--seed", "2", "--out", s(&data)]);
    ok(&[
        "--threads",
        "1",
        "--set",
        "train.max_epochs=4;train.learning_rate=0.01",
        "train",
        "--pattern",
        "cyclic",
        "--data",
        s(&data),
        "--out",
        s(&models),
    ]);
    let model = models.join("gcn-cyclic.json");
    let first = fs::read(&model).unwrap();
    let manifest = models.join("train.manifest.json");
    let recorded: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(recorded["config"]["train"]["max_epochs"], 4);
    assert_eq!(recorded["threads"], 1);

    fs::remove_file(&model).unwrap();
    ok(&["replay", s(&manifest)]);
    assert_eq!(fs::read(&model).unwrap(), first);
}

#[test]
fn config_file_and_env() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "[generator.collector]\nin_range = [4, 4]\nnoise_prob = 0.0\n").unwrap();
    let out = tmp.path().join("d");
    ok(&["--config", s(&cfg), "generate", "--pattern", "collector", "--count", "5", "--out", s(&out)]);
    let text = fs::read_to_string(out.join("collector.train.jsonl")).unwrap();
    assert!(text.lines().all(|l| l.contains(r#""nodes":5"#)), "{text}");

    let status = Command::new(env!("CARGO_BIN_EXE_motifgae"))
        .args(["generate", "--pattern", "sink", "--count", "5", "--out", s(&out)])
        .env("MOTIFGAE_SET", "generator.sink.out_range=[6,6];generator.sink.noise_prob=0")
        .output()
        .unwrap();
    assert!(status.status.success());
    let text = fs::read_to_string(out.join("sink.train.jsonl")).unwrap();
    assert!(text.lines().all(|l| l.contains(r#""nodes":7"#)), "{text}");
}
