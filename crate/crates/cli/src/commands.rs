use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use motifgae::dataset::{read_dataset_file, write_dataset_file};
use motifgae::eval::{calibrate_threshold, classify, error_matrix, ModelSet};
use motifgae::features::{compute_features, FeatureDump, COLUMN_ORDER, FEATURE_CONVENTION, FEATURE_COUNT};
use motifgae::gae::{EncoderKind, GaeModel, GraphTensors};
use motifgae::generate::{generate_dataset, split_dataset};
use motifgae::ingest::{
    extract_ego_subgraphs_where, parse_transactions, scan, write_scan_csv, write_transactions_csv, ColumnConfig,
};
use motifgae::train::{prepare_all, train_prepared};
use motifgae::{Error, LabeledGraph, PatternLabel};

use crate::args::*;
use crate::config::RunConfig;
use crate::svg;

/// Files a command read and wrote, recorded in its manifest.
#[derive(Debug, Default)]
pub struct Io {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

pub fn train_file(dir: &Path, p: PatternLabel) -> PathBuf {
    dir.join(format!("{p}.train.jsonl"))
}

pub fn validation_file(dir: &Path, p: PatternLabel) -> PathBuf {
    dir.join(format!("{p}.validation.jsonl"))
}

pub fn model_file(dir: &Path, kind: EncoderKind, p: PatternLabel) -> PathBuf {
    dir.join(format!("{kind}-{p}.json"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn read_samples(path: &Path, expect: Option<PatternLabel>) -> Result<Vec<LabeledGraph>> {
    if !path.exists() {
        bail!("missing dataset file {}", path.display());
    }
    let samples = read_dataset_file(path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(p) = expect {
        if let Some(bad) = samples.iter().find(|s| s.label != p) {
            bail!("{}: sample {} is labeled {}, expected {p}", path.display(), bad.id, bad.label);
        }
        if samples.is_empty() {
            bail!("{}: no samples", path.display());
        }
    }
    Ok(samples)
}

pub fn load_model(path: &Path) -> Result<GaeModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let model: GaeModel = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if model.feature_convention != FEATURE_CONVENTION {
        bail!(
            "{}: feature convention `{}` does not match `{FEATURE_CONVENTION}`",
            path.display(),
            model.feature_convention
        );
    }
    if model.dims.input != FEATURE_COUNT {
        bail!("{}: input dimension {} != {FEATURE_COUNT}", path.display(), model.dims.input);
    }
    Ok(model)
}

/// Loads `<kind>-<pattern>.json` for all seven patterns.
pub fn load_model_set(dir: &Path, kind: EncoderKind, io: &mut Io) -> Result<ModelSet> {
    let missing: Vec<&str> = PatternLabel::ALL
        .iter()
        .filter(|&&p| !model_file(dir, kind, p).exists())
        .map(|p| p.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPatterns {
            what: "models",
            patterns: format!("{} ({kind} in {})", missing.join(", "), dir.display()),
        }
        .into());
    }
    let mut models = Vec::with_capacity(PatternLabel::ALL.len());
    for p in PatternLabel::ALL {
        let path = model_file(dir, kind, p);
        let m = load_model(&path)?;
        if m.encoder_kind != kind || m.trained_pattern != Some(p) {
            bail!("{}: file holds a {} model for {:?}", path.display(), m.encoder_kind, m.trained_pattern);
        }
        io.inputs.push(path);
        models.push(m);
    }
    Ok(ModelSet::new(models)?)
}

pub fn generate(a: &GenerateArgs, cfg: &RunConfig) -> Result<Io> {
    let mut io = Io::default();
    for p in a.pattern.patterns() {
        // Patterns draw from disjoint seed blocks so that, e.g., Sink is not the mirror of Collector.
        let base = a.seed.wrapping_add((p.index() as u64) << 32);
        let samples = generate_dataset(p, a.count, base, &cfg.generator)?;
        let (train, validation) = split_dataset(&samples, a.train_fraction, base)?;
        for (path, set) in [(train_file(&a.out, p), &train), (validation_file(&a.out, p), &validation)] {
            fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
            write_dataset_file(&path, set).with_context(|| format!("writing {}", path.display()))?;
            io.outputs.push(path);
        }
        println!("{p}: {} train / {} validation", train.len(), validation.len());
    }
    Ok(io)
}

pub fn train(a: &TrainArgs, cfg: &RunConfig) -> Result<Io> {
    let mut io = Io::default();
    let mut config = cfg.train.clone();
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    for p in a.pattern.patterns() {
        let path = train_file(&a.data, p);
        let samples = read_samples(&path, Some(p))?;
        io.inputs.push(path);
        let prepared = prepare_all(&samples)?;
        for kind in a.encoder.kinds() {
            let (mut model, report) = train_prepared(kind, p, &prepared, &config)?;
            let threshold = calibrate_threshold(&mut model, &prepared, cfg.eval.threshold_percentile)?;
            let out = model_file(&a.out, kind, p);
            write_json(&out, &model)?;
            let report_path = a.out.join(format!("{kind}-{p}.report.json"));
            write_json(&report_path, &report)?;
            let first = report.epochs.first().map_or(f64::NAN, |e| e.early_stop_loss);
            let best = report.epochs[report.best_epoch - 1].early_stop_loss;
            println!(
                "{kind}-{p}: {} epochs (best {}), early-stop loss {first:.4} -> {best:.4}, threshold {threshold:.4}",
                report.stopped_epoch, report.best_epoch
            );
            io.outputs.extend([out, report_path]);
        }
    }
    Ok(io)
}

pub fn evaluate(a: &EvaluateArgs, _cfg: &RunConfig) -> Result<Io> {
    let mut io = Io::default();
    let kinds: Vec<EncoderKind> = match a.encoder {
        EncoderSel::One(k) => vec![k],
        EncoderSel::All => {
            let present: Vec<EncoderKind> = EncoderKind::ALL
                .into_iter()
                .filter(|&k| PatternLabel::ALL.iter().any(|&p| model_file(&a.models, k, p).exists()))
                .collect();
            if present.is_empty() {
                bail!("no model files found in {}; run `train` first", a.models.display());
            }
            present
        }
    };
    let mut validation = BTreeMap::new();
    for p in PatternLabel::ALL {
        let path = validation_file(&a.data, p);
        let samples = read_samples(&path, Some(p))?;
        validation.insert(p, prepare_all(&samples)?);
        io.inputs.push(path);
    }
    for kind in kinds {
        let models = load_model_set(&a.models, kind, &mut io)?;
        let m = error_matrix(&models, &validation)?;
        let csv_path = a.out.join(format!("{kind}-matrix.csv"));
        m.write_csv(create(&csv_path)?)?;
        let svg_path = a.out.join(format!("{kind}-matrix.svg"));
        let mut w = create(&svg_path)?;
        w.write_all(svg::heatmap(&m).as_bytes())?;
        w.flush()?;
        println!("{kind}: row minimum on the diagonal in {}/7 rows", m.diagonal_hits());
        io.outputs.extend([csv_path, svg_path]);
    }
    Ok(io)
}

pub fn classify_cmd(a: &ClassifyArgs, _cfg: &RunConfig) -> Result<Io> {
    let mut io = Io::default();
    let models = load_model_set(&a.models, a.encoder, &mut io)?;
    models.require_calibrated()?;
    let samples = read_samples(&a.input, None)?;
    io.inputs.push(a.input.clone());
    let mut w = csv::Writer::from_writer(create(&a.out)?);
    let mut header = vec!["id".to_string(), "label".into(), "best_label".into(), "best_score".into()];
    header.extend(PatternLabel::ALL.iter().map(|p| format!("score_{p}")));
    header.extend(PatternLabel::ALL.iter().map(|p| format!("flag_{p}")));
    w.write_record(&header)?;
    for s in &samples {
        let gt = GraphTensors::from_graph(&s.graph).with_context(|| format!("graph {}", s.id))?;
        let c = classify(&gt, &models)?;
        let mut row = vec![s.id.clone(), s.label.to_string(), c.best_label.to_string(), format!("{:.6}", c.best_score)];
        row.extend(c.scores.iter().map(|v| format!("{v:.6}")));
        row.extend(c.flags.iter().map(|f| f.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    println!("classified {} graphs", samples.len());
    io.outputs.push(a.out.clone());
    Ok(io)
}

pub fn ingest(a: &IngestArgs, _cfg: &RunConfig) -> Result<Io> {
    let mut io = Io::default();
    let models = load_model_set(&a.models, a.encoder, &mut io)?;
    models.require_calibrated()?;
    let columns = ColumnConfig {
        sender: a.sender_col.clone(),
        receiver: a.receiver_col.clone(),
    };
    let file = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let log = parse_transactions(file, &columns).with_context(|| format!("reading {}", a.input.display()))?;
    io.inputs.push(a.input.clone());
    let min_degree = a.min_degree;
    let extraction = extract_ego_subgraphs_where(&log.records, a.hops, a.max_nodes, |g, c| {
        g.in_degree(c) + g.out_degree(c) >= min_degree
    })?;
    let rows = scan(&extraction.candidates, &models)?;
    write_scan_csv(&rows, create(&a.out)?)?;
    println!(
        "{} transactions ({} self, {} malformed skipped); {} candidates scanned, {} over {} nodes skipped",
        log.records.len(),
        log.self_transactions,
        log.malformed_rows,
        rows.len(),
        extraction.skipped,
        a.max_nodes
    );
    io.outputs.push(a.out.clone());
    Ok(io)
}

pub fn features(a: &FeaturesArgs, _cfg: &RunConfig) -> Result<Io> {
    let samples = read_samples(&a.input, None)?;
    let mut w = create(&a.out)?;
    for s in &samples {
        let fm = compute_features(&s.graph).with_context(|| format!("graph {}", s.id))?;
        let dump = FeatureDump {
            graph_id: &s.id,
            columns: COLUMN_ORDER,
            rows: fm.rows(),
        };
        serde_json::to_writer(&mut w, &dump)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(Io {
        inputs: vec![a.input.clone()],
        outputs: vec![a.out.clone()],
    })
}

pub fn export(a: &ExportArgs, _cfg: &RunConfig) -> Result<Io> {
    let samples = read_samples(&a.input, None)?;
    let graphs: Vec<(String, &motifgae::DiGraph)> = samples.iter().map(|s| (format!("{}:", s.id), &s.graph)).collect();
    write_transactions_csv(&graphs, create(&a.out)?)?;
    Ok(Io {
        inputs: vec![a.input.clone()],
        outputs: vec![a.out.clone()],
    })
}
