use std::path::Path;

use super::{Features, Graph, Labels};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Drop nodes left with degree zero after self-loop removal.
    pub drop_isolated: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            drop_isolated: true,
        }
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
}

/// Reads an edge list (`u v`, `u\tv` or `u,v` per line, `#` comments).
///
/// External ids are densified in ascending order, so permuting the input
/// lines yields the same graph.
pub fn load_edge_list(path: impl AsRef<Path>, options: LoadOptions) -> Result<Graph> {
    let path = path.as_ref();
    parse_edge_list(&read_to_string(path)?, path, options)
}

pub fn parse_edge_list(text: &str, origin: impl AsRef<Path>, options: LoadOptions) -> Result<Graph> {
    let origin = origin.as_ref();
    let mut arcs: Vec<(u64, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = fields(line).collect();
        if toks.len() != 2 {
            return Err(Error::parse(
                origin,
                idx + 1,
                format!("expected two node ids, found {} fields", toks.len()),
            ));
        }
        let mut ids = [0u64; 2];
        for (slot, tok) in ids.iter_mut().zip(&toks) {
            *slot = tok
                .parse()
                .map_err(|e| Error::parse(origin, idx + 1, format!("bad node id {tok:?}: {e}")))?;
        }
        arcs.push((ids[0], ids[1]));
    }

    let mut ids: Vec<u64> = if options.drop_isolated {
        arcs.iter()
            .filter(|(u, v)| u != v)
            .flat_map(|&(u, v)| [u, v])
            .collect()
    } else {
        arcs.iter().flat_map(|&(u, v)| [u, v]).collect()
    };
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() || arcs.iter().all(|(u, v)| u == v) {
        return Err(Error::EmptyGraph);
    }

    let dense = |x: u64| ids.binary_search(&x).ok();
    let edges: Vec<(usize, usize)> = arcs
        .iter()
        .filter_map(|&(u, v)| Some((dense(u)?, dense(v)?)))
        .collect();
    Ok(Graph::from_edges(ids.len(), edges)?.with_external_ids(ids))
}

/// Attaches a feature matrix, recomputing cached norms.
///
/// Files ending in `.bin` or `.f32` are raw little-endian: `rows: u64`,
/// `cols: u64`, then `rows * cols` f32 values row-major. Anything else is
/// parsed as CSV with one row per node in dense id order.
pub fn load_features(path: impl AsRef<Path>, mut graph: Graph) -> Result<Graph> {
    let path = path.as_ref();
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let features = if matches!(ext, "bin" | "f32") {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        decode_binary_features(&bytes, path)?
    } else {
        parse_csv_features(&read_to_string(path)?, path)?
    };
    graph.set_features(features)?;
    Ok(graph)
}

pub(crate) fn decode_binary_features(bytes: &[u8], path: &Path) -> Result<Features> {
    if bytes.len() < 16 {
        return Err(Error::parse(path, 1, "binary feature header truncated"));
    }
    let rows = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::parse(path, 1, "binary feature header overflows"))?;
    if body.len() != expected {
        return Err(Error::Dimension {
            what: "binary feature payload bytes",
            expected,
            found: body.len(),
        });
    }
    let data = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Features::new(rows, cols, data)
}

/// Writes `features` in the binary layout read by [`load_features`].
pub fn write_binary_features(path: impl AsRef<Path>, features: &Features) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_binary_features(features)).map_err(|e| Error::io(path, e))
}

pub(crate) fn encode_binary_features(features: &Features) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 4 * features.as_slice().len());
    out.extend_from_slice(&(features.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(features.cols() as u64).to_le_bytes());
    for x in features.as_slice() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

fn parse_csv_features(text: &str, path: &Path) -> Result<Features> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let before = data.len();
        for tok in fields(line) {
            let x: f32 = tok
                .parse()
                .map_err(|e| Error::parse(path, idx + 1, format!("bad feature {tok:?}: {e}")))?;
            data.push(x);
        }
        let width = data.len() - before;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(Error::parse(
                    path,
                    idx + 1,
                    format!("row has {width} columns, expected {c}"),
                ))
            }
            _ => {}
        }
        rows += 1;
    }
    Features::new(rows, cols.unwrap_or(0), data)
}

/// Attaches labels. Single-class files are `node_id,label` keyed by the
/// external node id; multi-hot files hold one 0/1 row per node in dense order.
pub fn load_labels(path: impl AsRef<Path>, mut graph: Graph, multi_hot: bool) -> Result<Graph> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let labels = if multi_hot {
        let mut out = Vec::new();
        for (line, l) in rows {
            let row = fields(l)
                .map(|t| match t {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    _ => Err(Error::parse(path, line, format!("multi-hot entry {t:?} not 0/1"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            out.push(row);
        }
        let classes = out.first().map_or(0, Vec::len);
        if let Some(bad) = out.iter().find(|r| r.len() != classes) {
            return Err(Error::Dimension {
                what: "multi-hot row width",
                expected: classes,
                found: bad.len(),
            });
        }
        Labels::MultiHot { classes, rows: out }
    } else {
        let mut out = vec![None; graph.node_count()];
        for (line, l) in rows {
            let toks: Vec<&str> = fields(l).collect();
            if toks.len() != 2 {
                return Err(Error::parse(path, line, "expected node_id,label"));
            }
            let ext: u64 = toks[0]
                .parse()
                .map_err(|e| Error::parse(path, line, format!("bad node id: {e}")))?;
            let label: u32 = toks[1]
                .parse()
                .map_err(|e| Error::parse(path, line, format!("bad label: {e}")))?;
            // unknown ids belong to nodes dropped during cleaning
            if let Ok(v) = graph.external_ids().binary_search(&ext) {
                out[v] = Some(label);
            }
        }
        Labels::Single(out)
    };
    graph.set_labels(labels)?;
    Ok(graph)
}
