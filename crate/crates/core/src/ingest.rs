//! Transaction-log ingestion: CSV parsing, ego-subgraph extraction and scanning.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{classify, ModelSet, PATTERNS};
use crate::gae::GraphTensors;
use crate::graph::{DiGraph, PatternLabel};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TransactionRecord {
    pub sender: String,
    pub receiver: String,
}

#[derive(Debug, Clone)]
pub struct ColumnConfig {
    pub sender: String,
    pub receiver: String,
}

impl Default for ColumnConfig {
    fn default() -> Self {
        ColumnConfig {
            sender: "sender".into(),
            receiver: "receiver".into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedLog {
    pub records: Vec<TransactionRecord>,
    pub self_transactions: usize,
    pub malformed_rows: usize,
}

/// Reads sender/receiver pairs; every other column is ignored.
pub fn parse_transactions<R: Read>(source: R, columns: &ColumnConfig) -> Result<ParsedLog> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (s_idx, r_idx) = match (find(&columns.sender), find(&columns.receiver)) {
        (Some(s), Some(r)) => (s, r),
        (s, r) => {
            let mut missing = Vec::new();
            if s.is_none() {
                missing.push(columns.sender.as_str());
            }
            if r.is_none() {
                missing.push(columns.receiver.as_str());
            }
            return Err(Error::MissingColumns(missing.join(", ")));
        }
    };
    let mut log = ParsedLog::default();
    for row in reader.records() {
        let Ok(row) = row else {
            log.malformed_rows += 1;
            continue;
        };
        let (Some(s), Some(r)) = (row.get(s_idx), row.get(r_idx)) else {
            log.malformed_rows += 1;
            continue;
        };
        let (s, r) = (s.trim(), r.trim());
        if s.is_empty() || r.is_empty() {
            log.malformed_rows += 1;
        } else if s == r {
            log.self_transactions += 1;
        } else {
            log.records.push(TransactionRecord {
                sender: s.to_string(),
                receiver: r.to_string(),
            });
        }
    }
    Ok(log)
}

/// Global transaction graph; dense index `i` is the `i`-th external id in sorted order.
#[derive(Debug, Clone)]
pub struct TransactionGraph {
    pub graph: DiGraph,
    pub ids: Vec<String>,
}

impl TransactionGraph {
    pub fn build(records: &[TransactionRecord]) -> Result<Self> {
        let ids: Vec<String> = records
            .iter()
            .flat_map(|r| [&r.sender, &r.receiver])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let graph = DiGraph::from_edges(
            ids.len(),
            records
                .iter()
                .map(|r| (index[r.sender.as_str()], index[r.receiver.as_str()])),
        )?;
        Ok(TransactionGraph { graph, ids })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSubgraph {
    pub center: String,
    pub center_index: usize,
    pub graph: DiGraph,
    /// Local index -> external id.
    pub id_map: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub candidates: Vec<CandidateSubgraph>,
    pub skipped: usize,
}

/// Undirected `hops`-neighborhood of `center`, or `None` if it exceeds `max_nodes`.
fn neighborhood(adj: &[Vec<usize>], center: usize, hops: usize, max_nodes: usize) -> Option<Vec<usize>> {
    let mut seen = BTreeSet::from([center]);
    let mut frontier = vec![center];
    for _ in 0..hops {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in &adj[u] {
                if seen.insert(v) {
                    if seen.len() > max_nodes {
                        return None;
                    }
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Some(seen.into_iter().collect())
}

/// One induced ego subgraph per account over the undirected `hops`-neighborhood.
pub fn extract_ego_subgraphs(records: &[TransactionRecord], hops: usize, max_nodes: usize) -> Result<Extraction> {
    extract_ego_subgraphs_where(records, hops, max_nodes, |_, _| true)
}

/// As [`extract_ego_subgraphs`], only for centers accepted by `keep(global_graph, index)`.
/// Rejected centers are not counted as skipped.
pub fn extract_ego_subgraphs_where<F>(
    records: &[TransactionRecord],
    hops: usize,
    max_nodes: usize,
    keep: F,
) -> Result<Extraction>
where
    F: Fn(&DiGraph, usize) -> bool + Sync,
{
    if !(1..=2).contains(&hops) {
        return Err(Error::param("hops", format!("{hops} not in {{1, 2}}")));
    }
    if max_nodes == 0 {
        return Err(Error::param("max_nodes", "must be >= 1"));
    }
    let tg = TransactionGraph::build(records)?;
    let adj = tg.graph.undirected_adjacency();
    let centers: Vec<usize> = (0..tg.ids.len()).filter(|&c| keep(&tg.graph, c)).collect();
    let found: Vec<Option<CandidateSubgraph>> = centers
        .into_par_iter()
        .map(|c| {
            let Some(nodes) = neighborhood(&adj, c, hops, max_nodes) else {
                return Ok(None);
            };
            let graph = tg.graph.induced(&nodes)?;
            Ok(Some(CandidateSubgraph {
                center: tg.ids[c].clone(),
                center_index: nodes.binary_search(&c).expect("center is in its neighborhood"),
                graph,
                id_map: nodes.iter().map(|&u| tg.ids[u].clone()).collect(),
            }))
        })
        .collect::<Result<_>>()?;
    let mut out = Extraction::default();
    for f in found {
        match f {
            Some(c) => out.candidates.push(c),
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub center: String,
    pub best_label: PatternLabel,
    pub best_score: f64,
    pub flags: [bool; PATTERNS],
}

/// Classifies every candidate; rows come back sorted by ascending best score.
pub fn scan(candidates: &[CandidateSubgraph], models: &ModelSet) -> Result<Vec<ScanRow>> {
    models.require_calibrated()?;
    let mut rows: Vec<ScanRow> = candidates
        .par_iter()
        .map(|c| {
            let gt = GraphTensors::from_graph(&c.graph)?;
            let cls = classify(&gt, models)?;
            Ok(ScanRow {
                center: c.center.clone(),
                best_label: cls.best_label,
                best_score: cls.best_score,
                flags: cls.flags,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| a.best_score.total_cmp(&b.best_score).then_with(|| a.center.cmp(&b.center)));
    Ok(rows)
}

/// `center,best_label,best_score,flag_<pattern>...`
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["center".to_string(), "best_label".into(), "best_score".into()];
    header.extend(PatternLabel::ALL.iter().map(|p| format!("flag_{p}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.center.clone(), r.best_label.to_string(), format!("{:.6}", r.best_score)];
        rec.extend(r.flags.iter().map(|f| f.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a graph's edges as transaction rows, naming nodes `<prefix><index>`.
pub fn write_transactions_csv<W: Write>(graphs: &[(String, &DiGraph)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tx_id", "sender", "receiver", "amount"])?;
    let mut tx = 0usize;
    for (prefix, g) in graphs {
        for (u, v) in g.edges() {
            w.write_record([tx.to_string(), format!("{prefix}{u}"), format!("{prefix}{v}"), "1.00".into()])?;
            tx += 1;
        }
    }
    w.flush()?;
    Ok(())
}
