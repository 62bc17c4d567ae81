use std::collections::HashSet;

use super::properize::EdgeColourer;
use crate::colouring::TotalColouring;
use crate::graph::Graph;

/// Plain greedy NSD colouring: Misra–Gries on the edges (at most `Δ + 1`
/// colours), then each vertex in index order takes the smallest colour that
/// avoids its incident edges, its coloured neighbours and their sums.
///
/// A vertex of degree `d` excludes at most `3d` colours, so the span is at
/// most `3Δ + 1`. Coloured neighbours' sums are final, hence the result is
/// always an NSD proper total colouring.
pub fn greedy_nsd(g: &Graph) -> TotalColouring {
    let mut mg = EdgeColourer::new(g);
    for e in 0..g.m() {
        mg.colour_edge(e);
    }
    let edge = mg.colour;
    let edge_sum: Vec<u64> = (0..g.n())
        .map(|v| g.incident(v).iter().map(|&(_, e)| u64::from(edge[e])).sum())
        .collect();
    let mut vertex = vec![0u32; g.n()];
    for v in 0..g.n() {
        let mut taken: HashSet<u32> = g.incident(v).iter().map(|&(_, e)| edge[e]).collect();
        let mut clash: HashSet<u64> = HashSet::new();
        for u in g.neighbours(v).filter(|&u| vertex[u] != 0) {
            taken.insert(vertex[u]);
            clash.insert(edge_sum[u] + u64::from(vertex[u]));
        }
        vertex[v] = (1..)
            .find(|&x: &u32| !taken.contains(&x) && !clash.contains(&(edge_sum[v] + u64::from(x))))
            .expect("finitely many exclusions");
    }
    TotalColouring::with_span(g, vertex, edge).expect("greedy colours are positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::verify;
    use crate::graph::{generate, GraphKind};

    #[test]
    fn greedy_is_valid_and_within_three_delta_plus_one() {
        for kind in [
            GraphKind::Complete { n: 2 },
            GraphKind::Complete { n: 9 },
            GraphKind::Star { leaves: 12 },
            GraphKind::Random { n: 300, p: 0.08, seed: 2 },
            GraphKind::Empty { n: 3 },
        ] {
            let g = generate(&kind).unwrap();
            let c = greedy_nsd(&g);
            assert!(verify(&g, &c).is_empty(), "{kind:?}");
            assert!(c.span() as usize <= 3 * g.max_degree() + 1, "{kind:?}");
        }
    }
}
