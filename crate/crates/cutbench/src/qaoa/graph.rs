//! MaxCut problem graphs: construction, file IO, and exact cut arithmetic.

use std::collections::BTreeSet;
use std::path::Path;

use crate::sim::index_to_bitstring;

use super::{GraphFileError, QaoaError};

/// Largest vertex count accepted by the exhaustive MaxCut routines.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Simple undirected graph for MaxCut instances.
///
/// Edges are stored with the smaller endpoint first and sorted
/// lexicographically, so iterating [`Graph::edges`] visits each fragment
/// block's internal edges before the block's hub fans out to the next one
/// on the layered benchmark graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting out-of-range endpoints, self-loops, and
    /// duplicate edges. Endpoint order within a pair does not matter.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Graph, QaoaError> {
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            if a >= num_vertices || b >= num_vertices {
                return Err(QaoaError::EdgeOutOfRange {
                    u: a,
                    v: b,
                    n: num_vertices,
                });
            }
            if a == b {
                return Err(QaoaError::SelfLoop { v: a });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(QaoaError::DuplicateEdge {
                    u: a.min(b),
                    v: a.max(b),
                });
            }
        }
        Ok(Graph {
            num_vertices,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Edges with the smaller endpoint first, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Serializes to the edge-list text format: a vertex-count header line,
    /// then one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.num_vertices);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format produced by [`Graph::to_edge_list`].
    /// Blank lines are ignored.
    pub fn from_edge_list(text: &str) -> Result<Graph, QaoaError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(QaoaError::GraphParse {
            line: 1,
            detail: "missing vertex-count header".into(),
        })?;
        let num_vertices: usize = header.parse().map_err(|_| QaoaError::GraphParse {
            line,
            detail: format!("bad vertex count `{header}`"),
        })?;
        let mut edges = Vec::new();
        for (line, text) in lines {
            let mut fields = text.split_whitespace();
            let parse = |field: Option<&str>| -> Result<usize, QaoaError> {
                field
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| QaoaError::GraphParse {
                        line,
                        detail: format!("expected `u v`, got `{text}`"),
                    })
            };
            let u = parse(fields.next())?;
            let v = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(QaoaError::GraphParse {
                    line,
                    detail: format!("expected `u v`, got `{text}`"),
                });
            }
            edges.push((u, v));
        }
        Graph::new(num_vertices, &edges)
    }

    /// Reads a graph from an edge-list file.
    pub fn load(path: impl AsRef<Path>) -> Result<Graph, GraphFileError> {
        let text = std::fs::read_to_string(path)?;
        Ok(Graph::from_edge_list(&text)?)
    }

    /// Vertices whose removal disconnects the graph, in increasing order.
    /// Isolated vertices are never articulation points.
    pub fn articulation_points(&self) -> Vec<usize> {
        let n = self.num_vertices;
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        // Iterative Tarjan lowpoint search, one DFS per component.
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut root_children = 0;
            // Stack entries: (vertex, parent, next adjacency index).
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let w = adj[v][*next];
                    *next += 1;
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0));
                    } else if w != parent {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[v]);
                        if p != root && low[v] >= disc[p] {
                            is_cut[p] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }
}

/// Layered graph: consecutive layers are joined completely, so a size-1
/// layer acts as a hub every path must pass through. Vertices are numbered
/// consecutively layer by layer.
pub fn layered_graph(layer_sizes: &[usize]) -> Graph {
    assert!(
        layer_sizes.iter().all(|&s| s > 0),
        "layer sizes must be positive"
    );
    let mut edges = Vec::new();
    let mut start = 0;
    for pair in layer_sizes.windows(2) {
        let mid = start + pair[0];
        for u in start..mid {
            for v in mid..mid + pair[1] {
                edges.push((u, v));
            }
        }
        start = mid;
    }
    let n = layer_sizes.iter().sum();
    Graph::new(n, &edges).expect("layered construction yields valid edges")
}

/// The three built-in benchmark graphs. Each alternates wide layers with
/// single-vertex hubs, so a small device limit forces one cut per hub:
///
/// * `A`: layers 3-1-3, 7 vertices, 6 edges, MaxCut 6.
/// * `B`: layers 3-1-2-1-3, 10 vertices, 10 edges, MaxCut 10.
/// * `C`: layers 3-1-2-1-2-1-2, 12 vertices, 13 edges, MaxCut 13.
pub fn default_graph(name: &str) -> Result<Graph, QaoaError> {
    let layers: &[usize] = match name.trim() {
        "A" | "a" => &[3, 1, 3],
        "B" | "b" => &[3, 1, 2, 1, 3],
        "C" | "c" => &[3, 1, 2, 1, 2, 1, 2],
        other => {
            return Err(QaoaError::UnknownGraph {
                name: other.to_string(),
            })
        }
    };
    Ok(layered_graph(layers))
}

/// Number of edges crossing the partition encoded by `assignment`, where
/// character `v` of the bitstring is vertex `v`'s side.
pub fn cut_value(graph: &Graph, assignment: &str) -> Result<u32, QaoaError> {
    if assignment.len() != graph.num_vertices()
        || !assignment.bytes().all(|b| b == b'0' || b == b'1')
    {
        return Err(QaoaError::BadAssignment {
            assignment: assignment.to_string(),
            vertices: graph.num_vertices(),
        });
    }
    let bytes = assignment.as_bytes();
    Ok(graph
        .edges()
        .iter()
        .filter(|&&(u, v)| bytes[u] != bytes[v])
        .count() as u32)
}

/// Exhaustive MaxCut: the optimum value and every assignment achieving it,
/// in lexicographic order. Rejects graphs above [`BRUTE_FORCE_LIMIT`]
/// vertices.
pub fn brute_force_maxcut(graph: &Graph) -> Result<(u32, Vec<String>), QaoaError> {
    let n = graph.num_vertices();
    if n > BRUTE_FORCE_LIMIT {
        return Err(QaoaError::GraphTooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best = 0;
    let mut maximizers = Vec::new();
    for a in 0..(1u64 << n) {
        // Bit n-1-v of the index is vertex v, matching bitstring order.
        let side = |v: usize| (a >> (n - 1 - v)) & 1;
        let value = graph
            .edges()
            .iter()
            .filter(|&&(u, v)| side(u) != side(v))
            .count() as u32;
        if value > best {
            best = value;
            maximizers.clear();
        }
        if value == best {
            maximizers.push(a);
        }
    }
    Ok((
        best,
        maximizers
            .into_iter()
            .map(|a| index_to_bitstring(a, n))
            .collect(),
    ))
}

/// All cut values the graph can realize, sorted descending. Subject to the
/// same size limit as [`brute_force_maxcut`].
pub fn distinct_cut_values(graph: &Graph) -> Result<Vec<u32>, QaoaError> {
    let n = graph.num_vertices();
    if n > BRUTE_FORCE_LIMIT {
        return Err(QaoaError::GraphTooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut values = BTreeSet::new();
    for a in 0..(1u64 << n) {
        let side = |v: usize| (a >> (n - 1 - v)) & 1;
        values.insert(
            graph
                .edges()
                .iter()
                .filter(|&&(u, v)| side(u) != side(v))
                .count() as u32,
        );
    }
    Ok(values.into_iter().rev().collect())
}
