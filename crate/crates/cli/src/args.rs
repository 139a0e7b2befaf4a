use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use motifgae::gae::EncoderKind;
use motifgae::PatternLabel;
use serde::{Deserialize, Serialize};

/// `all` or one pattern name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PatternSel {
    All,
    One(PatternLabel),
}

impl PatternSel {
    pub fn patterns(self) -> Vec<PatternLabel> {
        match self {
            PatternSel::All => PatternLabel::ALL.to_vec(),
            PatternSel::One(p) => vec![p],
        }
    }
}

impl FromStr for PatternSel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(PatternSel::All);
        }
        s.parse()
            .map(PatternSel::One)
            .map_err(|_| format!("unknown pattern `{s}`; expected all, {}", PatternLabel::valid_names()))
    }
}

impl fmt::Display for PatternSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSel::All => f.write_str("all"),
            PatternSel::One(p) => p.fmt(f),
        }
    }
}

impl From<PatternSel> for String {
    fn from(p: PatternSel) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for PatternSel {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// `all` or one encoder name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum EncoderSel {
    All,
    One(EncoderKind),
}

impl EncoderSel {
    pub fn kinds(self) -> Vec<EncoderKind> {
        match self {
            EncoderSel::All => EncoderKind::ALL.to_vec(),
            EncoderSel::One(k) => vec![k],
        }
    }
}

impl FromStr for EncoderSel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(EncoderSel::All);
        }
        s.parse()
            .map(EncoderSel::One)
            .map_err(|_| format!("unknown encoder `{s}`; expected gcn|sage|gat|all"))
    }
}

impl fmt::Display for EncoderSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncoderSel::All => f.write_str("all"),
            EncoderSel::One(k) => k.fmt(f),
        }
    }
}

impl From<EncoderSel> for String {
    fn from(e: EncoderSel) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for EncoderSel {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

fn parse_encoder(s: &str) -> Result<EncoderKind, String> {
    s.parse().map_err(|_| format!("unknown encoder `{s}`; expected gcn|sage|gat"))
}

#[derive(Debug, Parser)]
#[command(name = "motifgae", version, about = "Transaction-motif generation and graph-autoencoder detection")]
pub struct Cli {
    /// Worker threads; 1 gives a single-threaded reference run.
    #[arg(long, global = true, env = "MOTIFGAE_THREADS")]
    pub threads: Option<usize>,

    /// TOML file with [generator], [train] and [eval] sections.
    #[arg(long, global = true, env = "MOTIFGAE_CONFIG")]
    pub config: Option<PathBuf>,

    /// Config override such as `train.learning_rate=0.005`; repeatable.
    #[arg(long = "set", global = true, env = "MOTIFGAE_SET", value_delimiter = ';')]
    pub overrides: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate labeled motif samples and split them into train/validation JSONL.
    Generate(GenerateArgs),
    /// Train one autoencoder per pattern and calibrate its threshold.
    Train(TrainArgs),
    /// Build the trained-by-evaluated error matrix (CSV and SVG).
    Evaluate(EvaluateArgs),
    /// Score JSONL graphs against a calibrated model set.
    Classify(ClassifyArgs),
    /// Scan a transaction CSV by carving ego subgraphs and scoring them.
    Ingest(IngestArgs),
    /// Dump normalized node features for JSONL graphs.
    Features(FeaturesArgs),
    /// Flatten JSONL graphs into one transaction CSV (`tx_id,sender,receiver,amount`).
    Export(ExportArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[arg(long, default_value = "all")]
    pub pattern: PatternSel,
    /// Samples per pattern before the split.
    #[arg(long, default_value_t = 15_000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TrainArgs {
    #[arg(long, default_value = "gcn")]
    pub encoder: EncoderSel,
    #[arg(long, default_value = "all")]
    pub pattern: PatternSel,
    /// Directory holding `<pattern>.train.jsonl`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides `train.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EvaluateArgs {
    #[arg(long, default_value = "all")]
    pub encoder: EncoderSel,
    #[arg(long)]
    pub models: PathBuf,
    /// Directory holding `<pattern>.validation.jsonl`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[arg(long, default_value = "gcn", value_parser = parse_encoder)]
    pub encoder: EncoderKind,
    #[arg(long)]
    pub models: PathBuf,
    /// JSONL graphs in the dataset format.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV report path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct IngestArgs {
    #[arg(long, default_value = "gcn", value_parser = parse_encoder)]
    pub encoder: EncoderKind,
    #[arg(long)]
    pub models: PathBuf,
    /// Transaction CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV report path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "sender")]
    pub sender_col: String,
    #[arg(long, default_value = "receiver")]
    pub receiver_col: String,
    #[arg(long, default_value_t = 2)]
    pub hops: usize,
    #[arg(long, default_value_t = 200)]
    pub max_nodes: usize,
    /// Only scan accounts with at least this many distinct counterparties (in + out).
    #[arg(long, default_value_t = 0)]
    pub min_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FeaturesArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// JSONL output, one line per graph.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Accounts are named `<graph id>:<node>`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn selections() {
        assert_eq!("all".parse::<PatternSel>().unwrap().patterns().len(), 7);
        assert_eq!(
            "scatter-gather".parse::<PatternSel>().unwrap(),
            PatternSel::One(PatternLabel::ScatterGather)
        );
        let err = "zigzag".parse::<PatternSel>().unwrap_err();
        assert!(err.contains("collector") && err.contains("branching"), "{err}");
        assert!("mlp".parse::<EncoderSel>().unwrap_err().contains("gcn|sage|gat"));
        assert_eq!("all".parse::<EncoderSel>().unwrap().kinds().len(), 3);
    }

    #[test]
    fn command_serde_round_trip() {
        let cli = Cli::try_parse_from(["motifgae", "generate", "--pattern", "sink", "--count", "10", "--out", "d"]).unwrap();
        let json = serde_json::to_string(&cli.command).unwrap();
        assert!(json.contains(r#""command":"generate""#) && json.contains(r#""pattern":"sink""#));
        assert_eq!(serde_json::from_str::<Command>(&json).unwrap(), cli.command);
    }
}
