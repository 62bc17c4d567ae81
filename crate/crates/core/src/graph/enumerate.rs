use std::collections::BTreeSet;

use super::Graph;

/// Every graph on the labelled vertex set `0..n`, in increasing edge-mask order.
/// `n` is limited to 7 (2^21 graphs).
pub fn labelled_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "labelled enumeration is limited to n <= 7");
    let pairs = all_pairs(n);
    (0u32..1 << pairs.len())
        .map(|mask| graph_from_mask(n, &pairs, mask))
        .collect()
}

/// Connected graphs on exactly `n` vertices, one per isomorphism class.
///
/// De-duplication compares canonical edge masks (minimum over all vertex
/// permutations), so it is only meant for the tiny `n` used in sweeps.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "isomorphism de-duplication is limited to n <= 6");
    let pairs = all_pairs(n);
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let g = graph_from_mask(n, &pairs, mask);
        if !g.is_connected() || n == 0 {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| permuted_mask(&g, p, n))
            .min()
            .unwrap_or(0);
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u32) -> Graph {
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e);
    Graph::from_edges(n, edges).expect("pairs are simple edges")
}

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = (u.min(v), u.max(v));
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

fn permuted_mask(g: &Graph, perm: &[usize], n: usize) -> u32 {
    g.edges()
        .iter()
        .fold(0u32, |acc, &(u, v)| acc | 1 << pair_index(n, perm[u], perm[v]))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut current, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}
