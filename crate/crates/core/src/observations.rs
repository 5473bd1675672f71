//! Observed first-infection timestamps.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsutil::write_atomically;
use crate::graph::Graph;

/// Distinct observed nodes with their first-infection times.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    nodes: Vec<usize>,
    times: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    node: u64,
    timestamp: f64,
}

impl Observations {
    pub fn new(nodes: Vec<usize>, times: Vec<f64>) -> Result<Self> {
        if nodes.len() != times.len() {
            return Err(Error::InvalidObservations(format!(
                "{} nodes but {} timestamps",
                nodes.len(),
                times.len()
            )));
        }
        let mut seen = HashSet::with_capacity(nodes.len());
        for &v in &nodes {
            if !seen.insert(v) {
                return Err(Error::InvalidObservations(format!("node {v} observed twice")));
            }
        }
        if let Some(t) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidObservations(format!("non-finite timestamp {t}")));
        }
        Ok(Observations { nodes, times })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let (nodes, times) = pairs.into_iter().unzip();
        Self::new(nodes, times)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().copied().zip(self.times.iter().copied())
    }

    /// Per-node timestamp lookup table for a graph with `node_count` nodes.
    pub fn time_table(&self, node_count: usize) -> Vec<Option<f64>> {
        let mut table = vec![None; node_count];
        for (v, t) in self.iter() {
            table[v] = Some(t);
        }
        table
    }

    /// Sub-selection keeping the given nodes (which must be observed), in
    /// the order given.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(keep.len());
        for &v in keep {
            let idx = self
                .nodes
                .iter()
                .position(|&u| u == v)
                .ok_or_else(|| Error::InvalidObservations(format!("node {v} is not observed")))?;
            pairs.push((v, self.times[idx]));
        }
        Self::from_pairs(pairs)
    }

    pub fn validate_against(&self, g: &Graph) -> Result<()> {
        self.nodes.iter().try_for_each(|&v| g.check_node(v))
    }

    /// Applies `f` to every node id (e.g. external to internal id mapping).
    pub fn map_nodes<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<usize>,
    {
        let nodes = self.nodes.iter().map(|&v| f(v)).collect::<Result<Vec<_>>>()?;
        Self::new(nodes, self.times.clone())
    }
}

/// Reads a `node,timestamp` CSV.
pub fn load_observations(path: impl AsRef<Path>) -> Result<Observations> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "node" || &headers[1] != "timestamp" {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "expected header `node,timestamp`".into(),
        });
    }
    let mut pairs = Vec::new();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 2,
            message: e.to_string(),
        })?;
        pairs.push((row.node as usize, row.timestamp));
    }
    Observations::from_pairs(pairs)
}

pub fn save_observations(obs: &Observations, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        writer.write_record(["node", "timestamp"])?;
        for (node, timestamp) in obs.iter() {
            writer.serialize(Row {
                node: node as u64,
                timestamp,
            })?;
        }
        writer.flush()?;
        Ok(())
    })
}
