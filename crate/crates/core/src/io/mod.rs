//! Graph ingestion and encoding, plus report and certificate persistence.

pub mod edgelist;
pub mod graph6;
pub mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub use edgelist::{parse_edge_list, write_edge_list, EdgeListError};
pub use graph6::{decode as graph6_decode, encode as graph6_encode, Graph6Error};
pub use report::{read_jsonl, write_atomic, write_jsonl, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    /// One graph6 string per line.
    G6,
    /// A single edge list.
    Edges,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("graph {index}: {source}")]
    Graph6 { index: usize, source: Graph6Error },
    #[error(transparent)]
    EdgeList(#[from] EdgeListError),
}

/// Reads every graph in `text`.
pub fn read_graphs(text: &str, format: GraphFormat) -> Result<Vec<Graph>, InputError> {
    match format {
        GraphFormat::G6 => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(index, l)| graph6_decode(l).map_err(|source| InputError::Graph6 { index, source }))
            .collect(),
        GraphFormat::Edges => Ok(vec![parse_edge_list(text)?]),
    }
}
