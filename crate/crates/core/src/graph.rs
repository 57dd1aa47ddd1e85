//! Graph containers and wire formats: bipartite graphs with labeled parts,
//! general simple graphs for census and control inputs, graph6 and JSON
//! edge-list codecs, and content digests for certificates.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A simple undirected graph on `0..n`, adjacency lists sorted and
/// duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::GraphShape(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::GraphShape(format!("loop at vertex {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(SimpleGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as sorted pairs `(a, b)` with `a < b`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// 2-coloring. Returns the two color classes (the class of vertex 0
    /// first, components colored from their minimal vertex) or `None` on an
    /// odd cycle.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut color = vec![usize::MAX; self.n];
        for start in 0..self.n {
            if color[start] != usize::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if color[w] == usize::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        let part0 = (0..self.n).filter(|&v| color[v] == 0).collect();
        let part1 = (0..self.n).filter(|&v| color[v] == 1).collect();
        Some((part0, part1))
    }

    /// Relabels vertices: vertex `v` becomes `mapping[v]`.
    pub fn relabeled(&self, mapping: &[usize]) -> SimpleGraph {
        let edges: Vec<(usize, usize)> = self
            .edges()
            .iter()
            .map(|&(a, b)| (mapping[a], mapping[b]))
            .collect();
        SimpleGraph::from_edges(self.n, &edges).expect("relabeling preserves simplicity")
    }

    /// SHA-256 over the canonical JSON edge list, hex-encoded.
    pub fn digest(&self) -> String {
        let canonical = serde_json::json!({ "n": self.n, "edges": self.edges() });
        let bytes = serde_json::to_vec(&canonical).expect("serializable");
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A bipartite graph with labeled parts `U` and `W` and cross-part adjacency
/// only. `adjacency[i]` lists the `W`-indices adjacent to `U`-vertex `i`,
/// sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    u_labels: Vec<String>,
    w_labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(
        u_labels: Vec<String>,
        w_labels: Vec<String>,
        mut adjacency: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if adjacency.len() != u_labels.len() {
            return Err(Error::GraphShape(
                "adjacency rows must match the U part".into(),
            ));
        }
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::GraphShape("repeated edge".into()));
            }
            if list.iter().any(|&w| w >= w_labels.len()) {
                return Err(Error::GraphShape("W-neighbor index out of range".into()));
            }
        }
        Ok(BipartiteGraph {
            u_labels,
            w_labels,
            adjacency,
        })
    }

    pub fn unlabeled(u_size: usize, w_size: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(
            (0..u_size).map(|i| format!("u{i}")).collect(),
            (0..w_size).map(|i| format!("w{i}")).collect(),
            adjacency,
        )
    }

    pub fn u_size(&self) -> usize {
        self.u_labels.len()
    }

    pub fn w_size(&self) -> usize {
        self.w_labels.len()
    }

    pub fn n(&self) -> usize {
        self.u_size() + self.w_size()
    }

    pub fn u_labels(&self) -> &[String] {
        &self.u_labels
    }

    pub fn w_labels(&self) -> &[String] {
        &self.w_labels
    }

    pub fn u_neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn u_degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn w_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.w_size()];
        for row in &self.adjacency {
            for &w in row {
                d[w] += 1;
            }
        }
        d
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|l| l.len()).sum()
    }

    /// Global indexing: `U`-vertex `i` is `i`, `W`-vertex `j` is `u_size + j`.
    pub fn to_simple(&self) -> SimpleGraph {
        let off = self.u_size();
        let edges: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&w| (i, off + w)))
            .collect();
        SimpleGraph::from_edges(self.n(), &edges).expect("bipartite adjacency is simple")
    }

    pub fn digest(&self) -> String {
        self.to_simple().digest()
    }
}

// ---------------------------------------------------------------------------
// graph6
// ---------------------------------------------------------------------------

/// Encodes a simple graph in graph6 (upper-triangle bit stream, 6 bits per
/// printable byte).
pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.n();
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else if n <= 258047 {
        bytes.push(126);
        bytes.push(((n >> 12) & 63) as u8 + 63);
        bytes.push(((n >> 6) & 63) as u8 + 63);
        bytes.push((n & 63) as u8 + 63);
    } else {
        panic!("graph6 encoding limited to 258047 vertices here");
    }
    let mut acc: u8 = 0;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                bytes.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        bytes.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

/// Decodes a graph6 line (optional `>>graph6<<` header tolerated).
pub fn from_graph6(line: &str) -> Result<SimpleGraph> {
    let line = line.trim().trim_start_matches(">>graph6<<");
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Format("empty graph6 line".into()));
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::Format("graph6 graphs beyond 2^18 vertices unsupported".into()));
        }
        if bytes.len() < 4 {
            return Err(Error::Format("truncated graph6 size".into()));
        }
        let n = (((bytes[1] - 63) as usize) << 12)
            | (((bytes[2] - 63) as usize) << 6)
            | ((bytes[3] - 63) as usize);
        (n, 4)
    } else {
        if bytes[0] < 63 || bytes[0] > 125 {
            return Err(Error::Format(format!("bad graph6 size byte {}", bytes[0])));
        }
        ((bytes[0] - 63) as usize, 1)
    };
    let mut edges = Vec::new();
    let mut acc: u8 = 0;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            if nbits == 0 {
                if pos >= bytes.len() {
                    return Err(Error::Format("truncated graph6 bit stream".into()));
                }
                let b = bytes[pos];
                pos += 1;
                if !(63..=126).contains(&b) {
                    return Err(Error::Format(format!("bad graph6 byte {b}")));
                }
                acc = b - 63;
                nbits = 6;
            }
            if acc & (1 << (nbits - 1)) != 0 {
                edges.push((i, j));
            }
            nbits -= 1;
        }
    }
    SimpleGraph::from_edges(n, &edges)
}

// ---------------------------------------------------------------------------
// JSON edge lists
// ---------------------------------------------------------------------------

/// Bipartite JSON edge-list format: `{ "u": n, "w": m, "edges": [[ui, wj], …] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BipartiteJson {
    pub u: usize,
    pub w: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteJson {
    pub fn from_graph(g: &BipartiteGraph) -> Self {
        BipartiteJson {
            u: g.u_size(),
            w: g.w_size(),
            edges: g
                .adjacency
                .iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().map(move |&w| (i, w)))
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<BipartiteGraph> {
        let mut adjacency = vec![Vec::new(); self.u];
        for &(ui, wj) in &self.edges {
            if ui >= self.u || wj >= self.w {
                return Err(Error::Format(format!("edge ({ui}, {wj}) out of range")));
            }
            adjacency[ui].push(wj);
        }
        BipartiteGraph::unlabeled(self.u, self.w, adjacency)
    }
}

/// Side-channel for graph6 exports of bipartite graphs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartsJson {
    pub u_size: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn graph6_known_value() {
        // Path 0-1-2 plus isolated checks against nauty's documented sample:
        // the 5-cycle is "DUW" in graph6? Compute a round trip instead and
        // pin one hand-checked value: K4 on 4 vertices.
        let k4 = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        // bits (0,1)(0,2)(1,2)(0,3)(1,3)(2,3) = 111111 -> byte 63+63=126? No:
        // 0b111111 = 63, +63 = 126 = '~'. Size byte 4+63=67='C'.
        assert_eq!(to_graph6(&k4), "C~");
        let back = from_graph6("C~").unwrap();
        assert_eq!(back, k4);
    }

    #[test]
    fn graph6_round_trip_various() {
        for g in [cycle(3), cycle(6), cycle(63), cycle(100)] {
            let enc = to_graph6(&g);
            let dec = from_graph6(&enc).unwrap();
            assert_eq!(dec, g);
        }
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        assert!(cycle(5).bipartition().is_none());
        let (a, b) = cycle(6).bipartition().unwrap();
        assert_eq!(a, vec![0, 2, 4]);
        assert_eq!(b, vec![1, 3, 5]);
    }

    #[test]
    fn digest_is_label_sensitive_and_deterministic() {
        let g = cycle(6);
        assert_eq!(g.digest(), g.digest());
        let swapped = g.relabeled(&[1, 0, 2, 3, 4, 5]);
        assert_ne!(g.digest(), swapped.digest());
    }

    #[test]
    fn bipartite_json_round_trip() {
        let g = BipartiteGraph::unlabeled(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let json = BipartiteJson::from_graph(&g);
        let back = json.to_graph().unwrap();
        assert_eq!(back, g);
        assert_eq!(g.to_simple().edge_count(), 4);
    }
}
