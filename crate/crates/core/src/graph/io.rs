//! Whitespace-separated edge lists and the external/internal id map.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{EdgeCleanup, Graph};
use crate::error::{Error, Result};
use crate::fsutil::write_atomically;

/// Bijection between external node ids (as found in input files) and dense
/// internal ids. Internal id `i` corresponds to the `i`-th smallest external id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    external: Vec<u64>,
}

impl IdMap {
    /// Map where external and internal ids coincide.
    pub fn identity(node_count: usize) -> Self {
        IdMap {
            external: (0..node_count as u64).collect(),
        }
    }

    fn from_sorted(external: Vec<u64>) -> Self {
        debug_assert!(external.windows(2).all(|w| w[0] < w[1]));
        IdMap { external }
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    pub fn to_external(&self, internal: usize) -> u64 {
        self.external[internal]
    }

    pub fn to_internal(&self, external: u64) -> Option<usize> {
        self.external.binary_search(&external).ok()
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub id_map: IdMap,
    pub cleanup: EdgeCleanup,
}

/// Parses an edge list: one `u v` pair of non-negative integers per line,
/// `#` starts a comment. Ids are compacted to `0..n` in ascending external
/// order; self-loops and duplicate edges are dropped and counted.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    parse_edge_list(reader, path)
}

pub(crate) fn parse_edge_list<R: BufRead>(reader: R, path: &Path) -> Result<LoadedGraph> {
    let mut raw = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(format!(
                "expected two node ids, found {} fields",
                fields.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(format!("invalid node id {s:?}")))
        };
        raw.push((parse(fields[0])?, parse(fields[1])?));
    }
    if raw.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "edge list contains no edges".into(),
        });
    }
    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let id_map = IdMap::from_sorted(ids);
    let edges = raw
        .iter()
        .map(|&(u, v)| (id_map.to_internal(u).unwrap(), id_map.to_internal(v).unwrap()));
    let (graph, cleanup) = Graph::from_edges_lenient(id_map.len(), edges)?;
    if cleanup.duplicates + cleanup.self_loops > 0 {
        log::warn!(
            "{}: dropped {} duplicate edge(s) and {} self-loop(s)",
            path.display(),
            cleanup.duplicates,
            cleanup.self_loops
        );
    }
    Ok(LoadedGraph { graph, id_map, cleanup })
}

/// Writes internal ids, one edge per line with the smaller id first.
pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| {
        writeln!(w, "# nodes {} edges {}", g.node_count(), g.edge_count())?;
        for (u, v) in g.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    })
}

/// Two columns per line: `external_id internal_id`.
pub fn save_id_map(map: &IdMap, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |w| {
        for (internal, external) in map.external.iter().enumerate() {
            writeln!(w, "{external} {internal}")?;
        }
        Ok(())
    })
}

pub fn load_id_map(path: impl AsRef<Path>) -> Result<IdMap> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: &str| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: message.into(),
        };
        let mut it = content.split_whitespace();
        let ext = it.next().and_then(|s| s.parse::<u64>().ok());
        let int = it.next().and_then(|s| s.parse::<usize>().ok());
        match (ext, int, it.next()) {
            (Some(e), Some(i), None) => pairs.push((i, e)),
            _ => return Err(err("expected `external_id internal_id`")),
        }
    }
    pairs.sort_unstable();
    let consistent = pairs.iter().enumerate().all(|(k, &(i, _))| i == k) && pairs.windows(2).all(|w| w[0].1 < w[1].1);
    if !consistent {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "id map must cover 0..n with ascending external ids".into(),
        });
    }
    Ok(IdMap::from_sorted(pairs.into_iter().map(|(_, e)| e).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<LoadedGraph> {
        parse_edge_list(text.as_bytes(), Path::new("mem"))
    }

    #[test]
    fn path_graph() {
        let lg = parse("0 1\n1 2").unwrap();
        assert_eq!(lg.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(lg.cleanup, EdgeCleanup::default());
    }

    #[test]
    fn duplicates_comments_and_compaction() {
        let lg = parse("# header\n10 30\n30 10  # again\n\n30 30\n").unwrap();
        assert_eq!(lg.graph.edge_count(), 1);
        assert_eq!(lg.cleanup.duplicates, 1);
        assert_eq!(lg.cleanup.self_loops, 1);
        assert_eq!(lg.id_map.to_internal(30), Some(1));
        assert_eq!(lg.id_map.to_external(0), 10);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse("# nothing\n").is_err());
    }

    #[test]
    fn id_map_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let lg = parse("7 3\n3 99\n").unwrap();
        let p = dir.path().join("ids.txt");
        save_id_map(&lg.id_map, &p).unwrap();
        assert_eq!(load_id_map(&p).unwrap(), lg.id_map);
    }

    proptest! {
        #[test]
        fn save_load_is_identity_on_compacted_graphs(
            n in 2usize..30,
            raw in proptest::collection::vec((0usize..30, 0usize..30), 1..80),
        ) {
            let edges: Vec<_> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
            let (g, _) = Graph::from_edges_lenient(n, edges).unwrap();
            prop_assume!(g.edge_count() > 0);
            // compact away isolated nodes first: those cannot appear in an edge list
            let used: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
            let (g, _) = g.induced_subgraph(&used).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("g.txt");
            save_edge_list(&g, &p).unwrap();
            let back = load_edge_list(&p).unwrap();
            prop_assert_eq!(back.graph, g.clone());
            prop_assert_eq!(back.id_map, IdMap::identity(g.node_count()));
        }
    }
}
