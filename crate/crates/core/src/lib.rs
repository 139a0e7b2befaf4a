//! Synthetic money-laundering motif generation and detection with graph autoencoders.
//!
//! The pipeline has two halves. [`generate`] produces labeled samples of seven
//! transaction motifs; [`train`] fits one autoencoder per motif on the
//! structural node features from [`features`] and scores unseen graphs by
//! reconstruction error. [`ingest`] carves candidate subgraphs out of a raw
//! transaction log so they can be scored the same way.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod gae;
pub mod generate;
pub mod graph;
pub mod ingest;
pub mod train;

pub use error::{Error, Result};
pub use graph::{DiGraph, LabeledGraph, PatternCategory, PatternLabel};
