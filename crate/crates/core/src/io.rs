//! Graph serialization: edge-list text, graph6, and a JSON adjacency dump.
//!
//! Edge-list: one `u v` pair per line, 0-based; blank lines and `#` comments
//! are skipped. An optional leading `n <count>` line pins the vertex count
//! (otherwise it is one more than the largest mentioned id).
//!
//! graph6: the standard format of McKay's gtools; see
//! <https://users.cecs.anu.edu.au/~bdm/data/formats.txt>.

use crate::graph::{Graph, GraphError};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn parse_edge_list(text: &str) -> Result<Graph, IoError> {
    let mut edges = Vec::new();
    let mut n: Option<usize> = None;
    let mut max_id = 0usize;
    let mut saw_vertex = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let a = it.next().unwrap();
        if a == "n" {
            let c = it
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| IoError::Parse { line: i + 1, msg: "expected `n <count>`".into() })?;
            n = Some(c);
            continue;
        }
        let b = it.next().ok_or_else(|| IoError::Parse {
            line: i + 1,
            msg: "expected two vertex ids".into(),
        })?;
        if it.next().is_some() {
            return Err(IoError::Parse { line: i + 1, msg: "expected exactly two vertex ids".into() });
        }
        let u: usize = a
            .parse()
            .map_err(|_| IoError::Parse { line: i + 1, msg: format!("bad vertex id {a:?}") })?;
        let v: usize = b
            .parse()
            .map_err(|_| IoError::Parse { line: i + 1, msg: format!("bad vertex id {b:?}") })?;
        max_id = max_id.max(u).max(v);
        saw_vertex = true;
        edges.push((u, v));
    }
    let n = n.unwrap_or(if saw_vertex { max_id + 1 } else { 0 });
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn graph6_size_bytes(n: usize) -> Vec<u8> {
    if n <= 62 {
        vec![n as u8 + 63]
    } else if n <= 258_047 {
        let mut out = vec![126];
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
        out
    } else {
        let mut out = vec![126, 126];
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
        out
    }
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut bytes = graph6_size_bytes(n);
    let mut bit_acc = 0u8;
    let mut bit_count = 0;
    for v in 1..n {
        for u in 0..v {
            bit_acc <<= 1;
            if g.has_edge(u, v) {
                bit_acc |= 1;
            }
            bit_count += 1;
            if bit_count == 6 {
                bytes.push(bit_acc + 63);
                bit_acc = 0;
                bit_count = 0;
            }
        }
    }
    if bit_count > 0 {
        bit_acc <<= 6 - bit_count;
        bytes.push(bit_acc + 63);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

pub fn parse_graph6(line: &str) -> Result<Graph, IoError> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let data: Vec<u8> = line.bytes().collect();
    for &b in &data {
        if !(63..=126).contains(&b) {
            return Err(IoError::Graph6(format!("byte {b} out of graph6 range")));
        }
    }
    let vals: Vec<u8> = data.iter().map(|&b| b - 63).collect();
    if vals.is_empty() {
        return Err(IoError::Graph6("empty input".into()));
    }
    let (n, header) = if vals[0] != 63 {
        (vals[0] as usize, 1)
    } else if vals.len() >= 4 && vals[1] != 63 {
        (((vals[1] as usize) << 12) | ((vals[2] as usize) << 6) | vals[3] as usize, 4)
    } else if vals.len() >= 8 {
        let mut n = 0usize;
        for &v in &vals[2..8] {
            n = (n << 6) | v as usize;
        }
        (n, 8)
    } else {
        return Err(IoError::Graph6("truncated size header".into()));
    };
    let need_bits = n * n.saturating_sub(1) / 2;
    let need_bytes = need_bits.div_ceil(6);
    if vals.len() < header + need_bytes {
        return Err(IoError::Graph6(format!(
            "need {} payload bytes for n={n}, found {}",
            need_bytes,
            vals.len() - header
        )));
    }
    let mut edges = Vec::new();
    let mut pos = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = vals[header + pos / 6];
            let bit = (byte >> (5 - pos % 6)) & 1;
            if bit == 1 {
                edges.push((u, v));
            }
            pos += 1;
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// JSON adjacency dump.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            n: self.vertex_count(),
            adj: self.vertices().map(|v| self.neighbors(v).to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = GraphJson::deserialize(deserializer)?;
        let mut edges = Vec::new();
        for (u, nb) in json.adj.iter().enumerate() {
            for &v in nb {
                edges.push((u, v));
            }
        }
        Graph::from_edges(json.n, &edges).map_err(|e| D::Error::custom(e.to_string()))
    }
}

pub fn write_json(g: &Graph) -> String {
    let dump = GraphJson {
        n: g.vertex_count(),
        adj: g.vertices().map(|v| g.neighbors(v).to_vec()).collect(),
    };
    serde_json::to_string_pretty(&dump).expect("serializable")
}

pub fn parse_json(text: &str) -> Result<Graph, IoError> {
    let dump: GraphJson = serde_json::from_str(text)?;
    let mut edges = Vec::new();
    for (u, nb) in dump.adj.iter().enumerate() {
        for &v in nb {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(dump.n, &edges)?)
}

/// Supported on-disk graph formats.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
    Json,
}

impl GraphFormat {
    pub fn from_path(path: &str) -> GraphFormat {
        if path.ends_with(".g6") {
            GraphFormat::Graph6
        } else if path.ends_with(".json") {
            GraphFormat::Json
        } else {
            GraphFormat::EdgeList
        }
    }
}

pub fn encode(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Graph6 => {
            let mut s = write_graph6(g);
            s.push('\n');
            s
        }
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Json => write_json(g),
    }
}

pub fn decode(text: &str, format: GraphFormat) -> Result<Graph, IoError> {
    match format {
        GraphFormat::Graph6 => parse_graph6(text.lines().next().unwrap_or("")),
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Json => parse_json(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle, grid};

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let g = grid(3).unwrap().graph;
        let text = write_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back, g);

        let with_isolated = parse_edge_list("n 4\n0 1\n").unwrap();
        assert_eq!(with_isolated.vertex_count(), 4);

        assert!(parse_edge_list("0\n").is_err());
        assert!(parse_edge_list("0 x\n").is_err());
        assert!(parse_edge_list("# comment\n\n0 1").is_ok());
    }

    #[test]
    fn graph6_known_values() {
        // K_4 in graph6 is "C~" and C_5 is "DUW" per gtools conventions.
        assert_eq!(write_graph6(&complete(4)), "C~");
        let c5 = parse_graph6("DUW").unwrap();
        assert!(crate::iso::is_isomorphic(&c5, &cycle(5)));
    }

    #[test]
    fn graph6_roundtrip() {
        for g in [complete(1), complete(7), cycle(6), grid(4).unwrap().graph, Graph::empty(0), Graph::empty(70)] {
            let enc = write_graph6(&g);
            let back = parse_graph6(&enc).unwrap();
            assert_eq!(back, g, "roundtrip failed for {enc:?}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let g = grid(3).unwrap().graph;
        assert_eq!(parse_json(&write_json(&g)).unwrap(), g);
    }
}
