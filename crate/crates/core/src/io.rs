//! On-disk formats for sampler, curvature and metric outputs, with loaders
//! for each so every file round-trips.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, Subgraph};
use crate::partition::CorePeripheryPartition;
use crate::sampling::{FrequencyCounters, NormCoefficients};

pub const NODES_EXT: &str = "nodes";
pub const EDGES_EXT: &str = "edges";

pub fn subgraph_stem(index: usize) -> String {
    format!("sub_{index:05}")
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_all(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::csv(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_all(path, &text)
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes `graph` as an edge list over its external ids.
pub fn write_edge_list(path: impl AsRef<Path>, graph: &Graph) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "# nodes {} edges {}", graph.node_count(), graph.edge_count()).map_err(io)?;
    for (u, v) in graph.edges() {
        writeln!(w, "{} {}", graph.external_id(u), graph.external_id(v)).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdMapRow {
    pub node_id: usize,
    pub external_id: u64,
}

pub fn write_id_map(path: impl AsRef<Path>, graph: &Graph) -> Result<()> {
    write_rows(
        path.as_ref(),
        graph
            .external_ids()
            .iter()
            .enumerate()
            .map(|(node_id, &external_id)| IdMapRow { node_id, external_id }),
    )
}

pub fn read_id_map(path: impl AsRef<Path>) -> Result<Vec<IdMapRow>> {
    read_rows(path.as_ref())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipRow {
    pub node_id: usize,
    pub external_id: u64,
    pub degree: usize,
    pub core: bool,
}

pub fn write_membership(
    path: impl AsRef<Path>,
    graph: &Graph,
    partition: &CorePeripheryPartition,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        (0..graph.node_count()).map(|v| MembershipRow {
            node_id: v,
            external_id: graph.external_id(v),
            degree: graph.degree(v),
            core: partition.is_core(v),
        }),
    )
}

pub fn read_membership(path: impl AsRef<Path>) -> Result<Vec<MembershipRow>> {
    read_rows(path.as_ref())
}

/// Writes `sub_NNNNN.nodes` (one global id per line) and `sub_NNNNN.edges`
/// (local id pairs) into `dir`.
pub fn write_subgraph(dir: impl AsRef<Path>, index: usize, sub: &Subgraph) -> Result<[PathBuf; 2]> {
    let dir = dir.as_ref();
    let stem = subgraph_stem(index);
    let nodes = dir.join(format!("{stem}.{NODES_EXT}"));
    let edges = dir.join(format!("{stem}.{EDGES_EXT}"));
    let mut text = String::with_capacity(sub.node_count() * 7);
    for &g in sub.global_ids() {
        text.push_str(&g.to_string());
        text.push('\n');
    }
    write_all(&nodes, &text)?;
    text.clear();
    for (i, j) in sub.local_edges() {
        text.push_str(&format!("{i} {j}\n"));
    }
    write_all(&edges, &text)?;
    Ok([nodes, edges])
}

fn parse_ids(path: &Path, text: &str, per_line: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = out.len();
        for tok in line.split_whitespace() {
            let id = tok
                .parse()
                .map_err(|e| Error::parse(path, idx + 1, format!("bad id {tok:?}: {e}")))?;
            out.push(id);
        }
        if out.len() - before != per_line {
            return Err(Error::parse(
                path,
                idx + 1,
                format!("expected {per_line} ids, found {}", out.len() - before),
            ));
        }
    }
    Ok(out)
}

/// Subgraph node files in `dir`, in name order.
pub fn list_subgraph_files(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == NODES_EXT))
        .collect();
    files.sort();
    Ok(files)
}

/// Loads one subgraph written by [`write_subgraph`], re-inducing it on
/// `graph` and checking the stored edges agree.
pub fn read_subgraph(nodes_path: impl AsRef<Path>, graph: &Graph) -> Result<Subgraph> {
    let nodes_path = nodes_path.as_ref();
    let text = fs::read_to_string(nodes_path).map_err(|e| Error::io(nodes_path, e))?;
    let ids = parse_ids(nodes_path, &text, 1)?;
    let sub = induced_subgraph(graph, ids.iter().copied())?;
    if sub.node_count() != ids.len() {
        return Err(Error::Contract(format!(
            "{}: duplicate node ids",
            nodes_path.display()
        )));
    }
    let edges_path = nodes_path.with_extension(EDGES_EXT);
    if edges_path.exists() {
        let text = fs::read_to_string(&edges_path).map_err(|e| Error::io(&edges_path, e))?;
        let pairs = parse_ids(&edges_path, &text, 2)?;
        let stored = pairs.len() / 2;
        let consistent = stored == sub.edge_count()
            && pairs.chunks(2).all(|p| {
                p[0] < sub.node_count() && sub.local_neighbors(p[0]).binary_search(&(p[1] as u32)).is_ok()
            });
        if !consistent {
            return Err(Error::Contract(format!(
                "{}: stored edges do not match the graph",
                edges_path.display()
            )));
        }
    }
    Ok(sub)
}

pub fn read_subgraphs(dir: impl AsRef<Path>, graph: &Graph) -> Result<Vec<Subgraph>> {
    list_subgraph_files(dir)?
        .iter()
        .map(|p| read_subgraph(p, graph))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeCounterRow {
    pub node_id: usize,
    #[serde(rename = "C_v")]
    pub count: u32,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCounterRow {
    pub u: usize,
    pub v: usize,
    #[serde(rename = "C_uv")]
    pub count: u32,
    pub alpha: f64,
}

pub fn write_node_counters(
    path: impl AsRef<Path>,
    counters: &FrequencyCounters,
    coefficients: &NormCoefficients,
) -> Result<()> {
    write_rows(
        path.as_ref(),
        counters
            .node_counts
            .iter()
            .zip(&coefficients.lambda)
            .enumerate()
            .map(|(node_id, (&count, &lambda))| NodeCounterRow {
                node_id,
                count,
                lambda,
            }),
    )
}

pub fn read_node_counters(path: impl AsRef<Path>) -> Result<Vec<NodeCounterRow>> {
    read_rows(path.as_ref())
}

/// One row per sampled edge and direction: `alpha = C_uv / C_v`.
pub fn write_edge_counters(
    path: impl AsRef<Path>,
    graph: &Graph,
    counters: &FrequencyCounters,
    coefficients: &NormCoefficients,
) -> Result<()> {
    let rows = coefficients
        .alpha
        .iter()
        .map(|&(u, v, alpha)| {
            let e = graph.edge_id(u, v).ok_or(Error::EdgeNotFound(u, v))?;
            Ok(EdgeCounterRow {
                u,
                v,
                count: counters.edge_counts[e],
                alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_rows(path.as_ref(), rows)
}

pub fn read_edge_counters(path: impl AsRef<Path>) -> Result<Vec<EdgeCounterRow>> {
    read_rows(path.as_ref())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeValueRow {
    pub u: usize,
    pub v: usize,
    pub value: f64,
}

pub fn write_edge_values(path: impl AsRef<Path>, rows: &[EdgeValueRow]) -> Result<()> {
    write_rows(path.as_ref(), rows)
}

pub fn read_edge_values(path: impl AsRef<Path>) -> Result<Vec<EdgeValueRow>> {
    read_rows(path.as_ref())
}

/// Long-format plot data: one `(x, series, value)` observation per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TidyRow {
    pub x: f64,
    pub series: String,
    pub value: f64,
}

pub fn write_tidy_csv(path: impl AsRef<Path>, rows: &[TidyRow]) -> Result<()> {
    write_rows(path.as_ref(), rows)
}

pub fn read_tidy_csv(path: impl AsRef<Path>) -> Result<Vec<TidyRow>> {
    read_rows(path.as_ref())
}
