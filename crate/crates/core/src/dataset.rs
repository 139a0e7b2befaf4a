//! JSON Lines dataset format.
//!
//! One graph per line, keys in the fixed order `id, label, seed, nodes, edges, focal`:
//!
//! ```text
//! {"id":"collector-7","label":"collector","seed":7,"nodes":2,"edges":[[1,0]],"focal":[0]}
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::{DiGraph, LabeledGraph, PatternLabel};

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    label: PatternLabel,
    seed: u64,
    nodes: usize,
    edges: Vec<[usize; 2]>,
    focal: &'a [usize],
}

pub fn write_dataset<W: Write>(samples: &[LabeledGraph], sink: W) -> Result<usize> {
    let mut out = BufWriter::new(sink);
    for s in samples {
        write_record(s, &mut out)?;
    }
    out.flush()?;
    Ok(samples.len())
}

pub fn write_record<W: Write>(sample: &LabeledGraph, out: &mut W) -> Result<()> {
    let record = RecordOut {
        id: &sample.id,
        label: sample.label,
        seed: sample.seed,
        nodes: sample.graph.node_count(),
        edges: sample.graph.edges().map(|(u, v)| [u, v]).collect(),
        focal: &sample.focal_nodes,
    };
    serde_json::to_writer(&mut *out, &record)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_dataset<R: Read>(source: R) -> Result<Vec<LabeledGraph>> {
    let reader = BufReader::new(source);
    let mut samples = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        samples.push(parse_record(&line, i + 1)?);
    }
    Ok(samples)
}

pub fn write_dataset_file(path: &Path, samples: &[LabeledGraph]) -> Result<usize> {
    write_dataset(samples, File::create(path)?)
}

pub fn read_dataset_file(path: &Path) -> Result<Vec<LabeledGraph>> {
    read_dataset(File::open(path)?)
}

fn parse_error(line: usize, field: &str, message: impl ToString) -> Error {
    Error::Parse {
        line,
        field: field.to_string(),
        message: message.to_string(),
    }
}

fn field<T: DeserializeOwned>(obj: &mut Map<String, Value>, name: &str, line: usize) -> Result<T> {
    let value = obj
        .remove(name)
        .ok_or_else(|| parse_error(line, name, "missing"))?;
    serde_json::from_value(value).map_err(|e| parse_error(line, name, e))
}

fn parse_record(text: &str, line: usize) -> Result<LabeledGraph> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(line, "record", e))?;
    let Value::Object(mut obj) = value else {
        return Err(parse_error(line, "record", "expected a JSON object"));
    };
    let id: String = field(&mut obj, "id", line)?;
    let label: PatternLabel = field(&mut obj, "label", line)?;
    let seed: u64 = field(&mut obj, "seed", line)?;
    let nodes: usize = field(&mut obj, "nodes", line)?;
    let edges: Vec<[usize; 2]> = field(&mut obj, "edges", line)?;
    let focal: Vec<usize> = field(&mut obj, "focal", line)?;

    let graph = DiGraph::from_edges(nodes, edges.into_iter().map(|[u, v]| (u, v)))
        .map_err(|e| parse_error(line, "edges", e))?;
    LabeledGraph::with_id(id, graph, label, seed, focal).map_err(|e| parse_error(line, "focal", e))
}
