use std::fmt::Write as _;

use super::{Graph, GraphError};

/// Parses the DIMACS edge format: `c` comment lines, one `p edge <n> <m>`
/// header, then `m` lines `e <u> <v>` with 1-based endpoints.
///
/// Duplicate edge lines count towards `m` but collapse to one edge.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match tokens.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(GraphError::MalformedHeader {
                        line,
                        reason: "duplicate header".into(),
                    });
                }
                let format = tokens.next();
                if !matches!(format, Some("edge") | Some("col")) {
                    return Err(GraphError::MalformedHeader {
                        line,
                        reason: format!("unknown format {:?}", format.unwrap_or("")),
                    });
                }
                let mut number = |what: &str| -> Result<usize, GraphError> {
                    tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| GraphError::MalformedHeader {
                            line,
                            reason: format!("missing or invalid {what}"),
                        })
                };
                let n = number("vertex count")?;
                let m = number("edge count")?;
                if tokens.next().is_some() {
                    return Err(GraphError::MalformedHeader {
                        line,
                        reason: "trailing tokens".into(),
                    });
                }
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or(GraphError::MissingHeader)?;
                let malformed = || GraphError::MalformedLine {
                    line,
                    text: raw.to_string(),
                };
                let u: usize = tokens.next().and_then(|t| t.parse().ok()).ok_or_else(malformed)?;
                let v: usize = tokens.next().and_then(|t| t.parse().ok()).ok_or_else(malformed)?;
                if tokens.next().is_some() {
                    return Err(malformed());
                }
                for endpoint in [u, v] {
                    if endpoint == 0 || endpoint > n {
                        return Err(GraphError::EndpointOutOfRange { line, endpoint, n });
                    }
                }
                if u == v {
                    return Err(GraphError::SelfLoop { line, vertex: u });
                }
                edges.push((u - 1, v - 1));
            }
            _ => {
                return Err(GraphError::MalformedLine {
                    line,
                    text: raw.to_string(),
                })
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Graph::from_edges(n, edges)
}

/// Writes `g` in the format read by [`parse_graph`], edges in lexicographic order.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    let _ = writeln!(out, "p edge {} {}", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}
