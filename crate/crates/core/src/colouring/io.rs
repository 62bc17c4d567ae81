use std::fmt::Write as _;

use super::{ColouringError, TotalColouring};
use crate::graph::Graph;

/// Reads the colouring format: a `k <bound>` header, then `v <vertex> <colour>`
/// and `e <u> <v> <colour>` lines with 1-based vertices. Lines starting with
/// `c` are comments. Every vertex and edge of `g` must be coloured exactly once.
pub fn parse_colouring(text: &str, g: &Graph) -> Result<TotalColouring, ColouringError> {
    let mut k: Option<u32> = None;
    let mut vertex = vec![0u32; g.n()];
    let mut edge = vec![0u32; g.m()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let err = |reason: String| ColouringError::Parse { line, reason };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let nums: Vec<usize> = tokens[1..]
            .iter()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| err(format!("non-numeric field in {trimmed:?}")))?;
        match (tokens[0], nums.as_slice()) {
            ("k", &[bound]) => {
                if k.is_some() {
                    return Err(err("duplicate k line".into()));
                }
                k = Some(to_colour(bound).map_err(err)?);
            }
            ("v", &[v, colour]) => {
                if v == 0 || v > g.n() {
                    return Err(err(format!("vertex {v} out of range")));
                }
                if vertex[v - 1] != 0 {
                    return Err(err(format!("vertex {v} coloured twice")));
                }
                vertex[v - 1] = to_colour(colour).map_err(err)?;
            }
            ("e", &[u, v, colour]) => {
                if u == 0 || v == 0 || u > g.n() || v > g.n() {
                    return Err(err(format!("edge {u}-{v} out of range")));
                }
                let id = g
                    .edge_id(u - 1, v - 1)
                    .ok_or_else(|| err(format!("{u}-{v} is not an edge of the graph")))?;
                if edge[id] != 0 {
                    return Err(err(format!("edge {u}-{v} coloured twice")));
                }
                edge[id] = to_colour(colour).map_err(err)?;
            }
            _ => return Err(err(format!("unrecognised line {trimmed:?}"))),
        }
    }
    let k = k.ok_or(ColouringError::Parse {
        line: 0,
        reason: "missing `k <bound>` line".into(),
    })?;
    if let Some(v) = vertex.iter().position(|&c| c == 0) {
        return Err(ColouringError::Parse {
            line: 0,
            reason: format!("vertex {} has no colour", v + 1),
        });
    }
    if let Some(e) = edge.iter().position(|&c| c == 0) {
        let (u, v) = g.edge(e);
        return Err(ColouringError::Parse {
            line: 0,
            reason: format!("edge {}-{} has no colour", u + 1, v + 1),
        });
    }
    if let Some(v) = vertex.iter().position(|&c| c > k) {
        return Err(ColouringError::OutOfPalette {
            object: format!("vertex {}", v + 1),
            colour: vertex[v],
            k,
        });
    }
    if let Some(e) = edge.iter().position(|&c| c > k) {
        let (u, v) = g.edge(e);
        return Err(ColouringError::OutOfPalette {
            object: format!("edge {}-{}", u + 1, v + 1),
            colour: edge[e],
            k,
        });
    }
    TotalColouring::new(g, vertex, edge, k)
}

fn to_colour(x: usize) -> Result<u32, String> {
    match u32::try_from(x) {
        Ok(c) if c >= 1 => Ok(c),
        _ => Err(format!("colour {x} is not a positive 32-bit integer")),
    }
}

/// Writes `c` as read by [`parse_colouring`]: header, vertices in order, then
/// edges in lexicographic order.
pub fn write_colouring(g: &Graph, c: &TotalColouring) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k {}", c.k());
    for v in 0..g.n() {
        let _ = writeln!(out, "v {} {}", v + 1, c.vertex_colour(v));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(out, "e {} {} {}", u + 1, v + 1, c.edge_colour(e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Graph {
        Graph::from_edges(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn round_trip() {
        let g = k2();
        let c = TotalColouring::new(&g, vec![1, 2], vec![3], 3).unwrap();
        let text = write_colouring(&g, &c);
        assert_eq!(text, "k 3\nv 1 1\nv 2 2\ne 1 2 3\n");
        assert_eq!(parse_colouring(&text, &g).unwrap(), c);
    }

    #[test]
    fn accepts_reversed_edge_and_comments() {
        let g = k2();
        let c = parse_colouring("c hi\nk 3\ne 2 1 3\nv 2 2\nv 1 1\n", &g).unwrap();
        assert_eq!(c.edge_colour(0), 3);
    }

    #[test]
    fn rejects_incomplete_or_bad() {
        let g = k2();
        assert!(parse_colouring("k 3\nv 1 1\nv 2 2\n", &g).is_err());
        assert!(parse_colouring("v 1 1\nv 2 2\ne 1 2 3\n", &g).is_err());
        assert!(parse_colouring("k 3\nv 1 1\nv 1 2\nv 2 2\ne 1 2 3\n", &g).is_err());
        assert!(parse_colouring("k 3\nv 1 1\nv 2 2\ne 1 2 4\n", &g).is_err());
        assert!(parse_colouring("k 3\nv 1 0\nv 2 2\ne 1 2 3\n", &g).is_err());
        assert!(parse_colouring("k 3\nv 1 1\nv 3 2\ne 1 2 3\n", &g).is_err());
        assert!(parse_colouring("k 3\nv 1 1\nv 2 2\ne 1 2 x\n", &g).is_err());
    }
}
