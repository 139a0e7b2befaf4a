//! Library side of the `motifgae` binary, so the commands can be driven from tests.

pub mod args;
pub mod commands;
pub mod config;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub use args::{Cli, Command};
pub use config::RunConfig;

/// Everything needed to re-run a command: the resolved command, config and thread count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub config: RunConfig,
    pub threads: Option<usize>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub wall_time_secs: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

fn absolute(p: &mut PathBuf) -> Result<()> {
    *p = std::path::absolute(&*p).with_context(|| format!("resolving {}", p.display()))?;
    Ok(())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Train(_) => "train",
            Command::Evaluate(_) => "evaluate",
            Command::Classify(_) => "classify",
            Command::Ingest(_) => "ingest",
            Command::Features(_) => "features",
            Command::Export(_) => "export",
            Command::Replay(_) => "replay",
        }
    }

    /// Makes every path absolute so a manifest can be replayed from any directory.
    fn absolutize(&mut self) -> Result<()> {
        match self {
            Command::Generate(a) => absolute(&mut a.out),
            Command::Train(a) => {
                absolute(&mut a.data)?;
                absolute(&mut a.out)
            }
            Command::Evaluate(a) => {
                absolute(&mut a.models)?;
                absolute(&mut a.data)?;
                absolute(&mut a.out)
            }
            Command::Classify(a) => {
                absolute(&mut a.models)?;
                absolute(&mut a.input)?;
                absolute(&mut a.out)
            }
            Command::Ingest(a) => {
                absolute(&mut a.models)?;
                absolute(&mut a.input)?;
                absolute(&mut a.out)
            }
            Command::Features(a) => {
                absolute(&mut a.input)?;
                absolute(&mut a.out)
            }
            Command::Export(a) => {
                absolute(&mut a.input)?;
                absolute(&mut a.out)
            }
            Command::Replay(a) => absolute(&mut a.manifest),
        }
    }

    /// Directory outputs get `<dir>/<command>.manifest.json`; file outputs a sibling `<file>.manifest.json`.
    fn manifest_path(&self) -> Option<PathBuf> {
        let sibling = |p: &Path| {
            let mut s = p.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        };
        match self {
            Command::Generate(a) => Some(a.out.join("generate.manifest.json")),
            Command::Train(a) => Some(a.out.join("train.manifest.json")),
            Command::Evaluate(a) => Some(a.out.join("evaluate.manifest.json")),
            Command::Classify(a) => Some(sibling(&a.out)),
            Command::Ingest(a) => Some(sibling(&a.out)),
            Command::Features(a) => Some(sibling(&a.out)),
            Command::Export(a) => Some(sibling(&a.out)),
            Command::Replay(_) => None,
        }
    }
}

fn execute(command: &Command, config: &RunConfig) -> Result<commands::Io> {
    match command {
        Command::Generate(a) => commands::generate(a, config),
        Command::Train(a) => commands::train(a, config),
        Command::Evaluate(a) => commands::evaluate(a, config),
        Command::Classify(a) => commands::classify_cmd(a, config),
        Command::Ingest(a) => commands::ingest(a, config),
        Command::Features(a) => commands::features(a, config),
        Command::Export(a) => commands::export(a, config),
        Command::Replay(_) => unreachable!("replay is resolved before execution"),
    }
}

/// Runs one command inside a pool of `threads` workers and writes its manifest.
pub fn run_resolved(mut command: Command, config: RunConfig, threads: Option<usize>) -> Result<RunManifest> {
    command.absolutize()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .context("starting worker pool")?;
    let io = pool
        .install(|| execute(&command, &config))
        .with_context(|| command.name())?;
    let manifest = RunManifest {
        tool: "motifgae".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config,
        threads,
        inputs: io.inputs,
        outputs: io.outputs,
        wall_time_secs: started.elapsed().as_secs_f64(),
        command,
    };
    if let Some(path) = manifest.command.manifest_path() {
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(manifest)
}

pub fn run(cli: Cli) -> Result<RunManifest> {
    match cli.command {
        Command::Replay(a) => {
            let m = RunManifest::load(&a.manifest)?;
            run_resolved(m.command, m.config, cli.threads.or(m.threads))
        }
        command => {
            let config = RunConfig::resolve(cli.config.as_deref(), &cli.overrides)?;
            run_resolved(command, config, cli.threads)
        }
    }
}
