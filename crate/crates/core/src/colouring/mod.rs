//! Total colourings, weighted degrees and the verifier.
//!
//! The verifier is the acceptance gate for everything else in the crate: a
//! colouring is an NSD proper total colouring iff both [`check_proper`] and
//! [`check_nsd`] return empty lists.

mod io;

pub use io::{parse_colouring, write_colouring};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("expected {expected} {what} colours, got {got}")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{object} has colour {colour} outside 1..={k}")]
    OutOfPalette { object: String, colour: u32, k: u32 },
    #[error("palette bound must be at least 1")]
    EmptyPalette,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Vertex and edge colours of a fixed graph, all in `1..=k`.
///
/// Edge colours are indexed by edge id (see [`Graph::edges`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalColouring {
    vertex: Vec<u32>,
    edge: Vec<u32>,
    k: u32,
}

impl TotalColouring {
    pub fn new(g: &Graph, vertex: Vec<u32>, edge: Vec<u32>, k: u32) -> Result<Self, ColouringError> {
        if k == 0 {
            return Err(ColouringError::EmptyPalette);
        }
        if vertex.len() != g.n() {
            return Err(ColouringError::Length {
                what: "vertex",
                expected: g.n(),
                got: vertex.len(),
            });
        }
        if edge.len() != g.m() {
            return Err(ColouringError::Length {
                what: "edge",
                expected: g.m(),
                got: edge.len(),
            });
        }
        if let Some((v, &c)) = vertex.iter().enumerate().find(|(_, &c)| c == 0 || c > k) {
            return Err(ColouringError::OutOfPalette {
                object: format!("vertex {v}"),
                colour: c,
                k,
            });
        }
        if let Some((e, &c)) = edge.iter().enumerate().find(|(_, &c)| c == 0 || c > k) {
            let (u, v) = g.edge(e);
            return Err(ColouringError::OutOfPalette {
                object: format!("edge {u}-{v}"),
                colour: c,
                k,
            });
        }
        Ok(TotalColouring { vertex, edge, k })
    }

    /// Like [`TotalColouring::new`] with `k` set to the largest colour used.
    pub fn with_span(g: &Graph, vertex: Vec<u32>, edge: Vec<u32>) -> Result<Self, ColouringError> {
        let k = vertex.iter().chain(&edge).copied().max().unwrap_or(1).max(1);
        Self::new(g, vertex, edge, k)
    }

    pub fn vertex_colour(&self, v: usize) -> u32 {
        self.vertex[v]
    }

    pub fn edge_colour(&self, e: usize) -> u32 {
        self.edge[e]
    }

    pub fn vertex_colours(&self) -> &[u32] {
        &self.vertex
    }

    pub fn edge_colours(&self) -> &[u32] {
        &self.edge
    }

    /// Palette bound.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Largest colour actually used.
    pub fn span(&self) -> u32 {
        self.vertex.iter().chain(&self.edge).copied().max().unwrap_or(0)
    }

    /// Sets one colour, keeping the palette invariant. Intended for tests and
    /// mutation experiments.
    pub fn set(&mut self, object: Object, g: &Graph, colour: u32) -> Result<(), ColouringError> {
        if colour == 0 || colour > self.k {
            return Err(ColouringError::OutOfPalette {
                object: format!("{object:?}"),
                colour,
                k: self.k,
            });
        }
        match object {
            Object::Vertex(v) => self.vertex[v] = colour,
            Object::Edge(u, v) => {
                let e = g.edge_id(u, v).ok_or(ColouringError::VertexOutOfRange(u.max(v)))?;
                self.edge[e] = colour;
            }
        }
        Ok(())
    }
}

/// A vertex, or an edge given by its endpoints (smaller first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Object {
    Vertex(usize),
    Edge(usize, usize),
}

impl Object {
    pub fn edge(g: &Graph, id: usize) -> Self {
        let (u, v) = g.edge(id);
        Object::Edge(u, v)
    }

    /// True if `self` is `other`, or one is an edge and the other its endpoint.
    pub fn touches(&self, other: &Object) -> bool {
        match (*self, *other) {
            (Object::Vertex(a), Object::Vertex(b)) => a == b,
            (Object::Edge(a, b), Object::Edge(c, d)) => (a, b) == (c, d),
            (Object::Vertex(x), Object::Edge(a, b)) | (Object::Edge(a, b), Object::Vertex(x)) => {
                x == a || x == b
            }
        }
    }

    fn shifted(self) -> Self {
        match self {
            Object::Vertex(v) => Object::Vertex(v + 1),
            Object::Edge(u, v) => Object::Edge(u + 1, v + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    VertexVertex,
    EdgeEdge,
    VertexEdge,
    SumConflict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witnesses: Vec<Object>,
}

impl Violation {
    /// Same violation with 1-based vertex numbers, as used in files and CLI output.
    pub fn one_based(&self) -> Violation {
        Violation {
            kind: self.kind,
            witnesses: self.witnesses.iter().map(|o| o.shifted()).collect(),
        }
    }
}

/// `s_c(v) = c(v) + Σ_{e∋v} c(e)`.
pub fn weighted_degree(g: &Graph, c: &TotalColouring, v: usize) -> Result<u64, ColouringError> {
    if v >= g.n() {
        return Err(ColouringError::VertexOutOfRange(v));
    }
    Ok(weighted_degree_unchecked(g, c.vertex_colours(), c.edge_colours(), v))
}

pub(crate) fn weighted_degree_unchecked(g: &Graph, vertex: &[u32], edge: &[u32], v: usize) -> u64 {
    u64::from(vertex[v]) + g.incident(v).iter().map(|&(_, e)| u64::from(edge[e])).sum::<u64>()
}

/// Weighted degrees of all vertices.
pub fn weighted_degrees(g: &Graph, c: &TotalColouring) -> Vec<u64> {
    sums_of(g, c.vertex_colours(), c.edge_colours())
}

pub(crate) fn sums_of(g: &Graph, vertex: &[u32], edge: &[u32]) -> Vec<u64> {
    let mut sums: Vec<u64> = vertex.iter().map(|&c| u64::from(c)).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        sums[u] += u64::from(edge[e]);
        sums[v] += u64::from(edge[e]);
    }
    sums
}

/// Every properness violation, each pair listed once.
pub fn check_proper(g: &Graph, c: &TotalColouring) -> Vec<Violation> {
    let mut out = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if c.vertex[u] == c.vertex[v] {
            out.push(Violation {
                kind: ViolationKind::VertexVertex,
                witnesses: vec![Object::Vertex(u), Object::Vertex(v)],
            });
        }
        for w in [u, v] {
            if c.vertex[w] == c.edge[e] {
                out.push(Violation {
                    kind: ViolationKind::VertexEdge,
                    witnesses: vec![Object::Vertex(w), Object::Edge(u, v)],
                });
            }
        }
    }
    // Two distinct edges of a simple graph share at most one endpoint, so
    // grouping per vertex lists each clashing pair exactly once.
    let mut slots: Vec<(u32, usize)> = Vec::new();
    for v in 0..g.n() {
        slots.clear();
        slots.extend(g.incident(v).iter().map(|&(_, e)| (c.edge[e], e)));
        slots.sort_unstable();
        let mut clashes: Vec<(usize, usize)> = Vec::new();
        for ids in slots.chunk_by(|a, b| a.0 == b.0).filter(|ids| ids.len() > 1) {
            for (i, &(_, a)) in ids.iter().enumerate() {
                for &(_, b) in &ids[i + 1..] {
                    clashes.push((a.min(b), a.max(b)));
                }
            }
        }
        clashes.sort_unstable();
        out.extend(clashes.into_iter().map(|(a, b)| Violation {
            kind: ViolationKind::EdgeEdge,
            witnesses: vec![Object::edge(g, a), Object::edge(g, b)],
        }));
    }
    out
}

/// Every edge `uv` with `s(u) = s(v)`.
pub fn check_nsd(g: &Graph, c: &TotalColouring) -> Vec<Violation> {
    let sums = weighted_degrees(g, c);
    g.edges()
        .iter()
        .filter(|&&(u, v)| sums[u] == sums[v])
        .map(|&(u, v)| Violation {
            kind: ViolationKind::SumConflict,
            witnesses: vec![Object::Vertex(u), Object::Vertex(v)],
        })
        .collect()
}

/// Both checks together; empty iff `c` is an NSD proper total colouring.
pub fn verify(g: &Graph, c: &TotalColouring) -> Vec<Violation> {
    let mut all = check_proper(g, c);
    all.extend(check_nsd(g, c));
    all
}
