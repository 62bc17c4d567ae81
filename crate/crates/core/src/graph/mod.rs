//! Simple undirected graphs with dense vertex indices.
//!
//! Vertices are `0..n`. Edges are stored once, as `(u, v)` with `u < v`, sorted
//! lexicographically; the position of an edge in that order is its *edge id*.
//! Every colouring in the crate is indexed by vertex index and edge id.

mod dimacs;
mod enumerate;
mod generate;

pub use dimacs::{parse_graph, write_graph};
pub use enumerate::{connected_graphs, labelled_graphs};
pub use generate::{generate, GraphKind};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: malformed line: {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: endpoint {endpoint} out of range 1..={n}")]
    EndpointOutOfRange { line: usize, endpoint: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("header declares {declared} edges but {found} edge lines were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("missing `p edge <n> <m>` header")]
    MissingHeader,
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("inadmissible generator parameters: {0}")]
    Inadmissible(String),
    #[error("regular generator gave up after {attempts} pairings")]
    RetryBudgetExceeded { attempts: usize },
}

/// Immutable simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `adjacency[v]` lists `(neighbour, edge id)` sorted by neighbour.
    adjacency: Vec<Vec<(usize, usize)>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Parallel edges collapse to one; a
    /// self-loop or an out-of-range endpoint is an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line: 0, vertex: u });
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_unique(n, list))
    }

    fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            n,
            edges,
            adjacency,
            max_degree,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Δ(G).
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// `(neighbour, edge id)` pairs around `v`, sorted by neighbour.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(u, _)| u)
    }

    /// Edge id of `uv`, if present.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.binary_search(&(a, b)).ok()
    }

    pub fn other_end(&self, edge: usize, v: usize) -> usize {
        let (a, b) = self.edges[edge];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for u in self.neighbours(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices` (sorted, distinct), relabelled to
    /// `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                let (a, b) = (index[u], index[v]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        Self::from_sorted_unique(vertices.len(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_dedups_and_sorts() {
        let g = Graph::from_edges(3, [(2, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.edge_id(2, 1), Some(1));
        assert_eq!(g.edge_id(0, 2), None);
    }

    #[test]
    fn from_edges_rejects_loops_and_range() {
        assert!(matches!(
            Graph::from_edges(3, [(1, 1)]),
            Err(GraphError::SelfLoop { vertex: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        let h = g.induced(&[3, 4]);
        assert_eq!(h.n(), 2);
        assert_eq!(h.edges(), &[(0, 1)]);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (2, 3)]).unwrap();
        for v in 0..g.n() {
            for (u, e) in g.incident(v).iter().copied() {
                assert!(g.incident(u).contains(&(v, e)));
            }
        }
    }
}
