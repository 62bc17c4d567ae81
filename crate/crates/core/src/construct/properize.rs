use std::collections::HashMap;

use serde::Serialize;

use super::state::{ClassLayout, ConstructionState};
use super::ConstructError;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperizeStats {
    /// Colours used by each class, `β = 1..`.
    pub widths: Vec<u32>,
    /// Maximum degree of each class's edge subgraph.
    pub class_max_degree: Vec<usize>,
}

/// Chooses additions class by class, in increasing `β`, so that the total
/// colouring becomes proper.
///
/// Within a class the edges are coloured by Misra–Gries (at most `Δ_β + 1`
/// local colours), then the class's vertices greedily in index order. With
/// `compact` each block is shrunk to the colours its class uses; otherwise a
/// class needing more than `cs.b` colours is an error.
pub fn properize(g: &Graph, cs: &ConstructionState, compact: bool) -> Result<(ConstructionState, ProperizeStats), ConstructError> {
    let classes = cs.layout.classes();
    let mut local_v = vec![0u32; g.n()];
    let mut local_e = vec![0u32; g.m()];
    let mut widths = Vec::with_capacity(classes as usize);
    let mut class_max_degree = Vec::with_capacity(classes as usize);
    let mut mg = EdgeColourer::new(g);
    for beta in 1..=classes {
        let edges: Vec<usize> = (0..g.m()).filter(|&e| cs.class_e[e] == beta).collect();
        let mut degree = HashMap::<usize, usize>::new();
        for &e in &edges {
            let (u, v) = g.edge(e);
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        class_max_degree.push(degree.values().copied().max().unwrap_or(0));
        for &e in &edges {
            mg.colour_edge(e);
        }
        let mut width = 0;
        for &e in &edges {
            local_e[e] = mg.colour[e];
            width = width.max(mg.colour[e]);
        }
        mg.clear(&edges);

        for v in (0..g.n()).filter(|&v| cs.class_v[v] == beta) {
            let mut forbidden: Vec<u32> = g
                .incident(v)
                .iter()
                .filter(|&&(_, e)| cs.class_e[e] == beta)
                .map(|&(_, e)| local_e[e])
                .chain(
                    g.neighbours(v)
                        .filter(|&u| cs.class_v[u] == beta && local_v[u] != 0)
                        .map(|u| local_v[u]),
                )
                .collect();
            forbidden.sort_unstable();
            forbidden.dedup();
            let j = smallest_missing(&forbidden);
            local_v[v] = j;
            width = width.max(j);
        }
        if !compact && width > cs.b {
            return Err(ConstructError::ClassTooWide { class: beta, needed: width, b: cs.b });
        }
        widths.push(width);
    }

    let layout = if compact {
        ClassLayout::from_widths(widths.clone())
    } else {
        cs.layout.clone()
    };
    let out = ConstructionState {
        b: cs.b,
        vertex: (0..g.n()).map(|v| layout.colour(cs.class_v[v], local_v[v])).collect(),
        edge: (0..g.m()).map(|e| layout.colour(cs.class_e[e], local_e[e])).collect(),
        layout,
        class_v: cs.class_v.clone(),
        class_e: cs.class_e.clone(),
    };
    Ok((
        out,
        ProperizeStats {
            widths,
            class_max_degree,
        },
    ))
}

/// Smallest positive integer not in the sorted, deduplicated `xs`.
fn smallest_missing(xs: &[u32]) -> u32 {
    let mut j = 1;
    for &x in xs {
        if x == j {
            j += 1;
        } else if x > j {
            break;
        }
    }
    j
}

/// Misra–Gries edge colouring of a subgraph, one edge at a time.
pub(crate) struct EdgeColourer<'g> {
    g: &'g Graph,
    /// Local colour per edge id, 0 when uncoloured.
    pub(crate) colour: Vec<u32>,
    /// Colour → edge, per vertex.
    at: Vec<HashMap<u32, usize>>,
    /// No colour below this is free at the vertex.
    min_free: Vec<u32>,
}

impl<'g> EdgeColourer<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        EdgeColourer {
            g,
            colour: vec![0; g.m()],
            at: vec![HashMap::new(); g.n()],
            min_free: vec![1; g.n()],
        }
    }

    fn is_free(&self, v: usize, c: u32) -> bool {
        !self.at[v].contains_key(&c)
    }

    fn set(&mut self, e: usize, c: u32) {
        debug_assert_eq!(self.colour[e], 0);
        let (u, v) = self.g.edge(e);
        self.colour[e] = c;
        for x in [u, v] {
            let prev = self.at[x].insert(c, e);
            debug_assert!(prev.is_none(), "colour {c} already at vertex {x}");
            while self.at[x].contains_key(&self.min_free[x]) {
                self.min_free[x] += 1;
            }
        }
    }

    fn unset(&mut self, e: usize) {
        let c = self.colour[e];
        let (u, v) = self.g.edge(e);
        self.colour[e] = 0;
        for x in [u, v] {
            self.at[x].remove(&c);
            self.min_free[x] = self.min_free[x].min(c);
        }
    }

    /// Forget the colours of `edges`, leaving the colourer empty for reuse.
    fn clear(&mut self, edges: &[usize]) {
        for &e in edges {
            let (u, v) = self.g.edge(e);
            self.colour[e] = 0;
            for x in [u, v] {
                // clear() on a large emptied map still walks its capacity
                if !self.at[x].is_empty() {
                    self.at[x] = HashMap::new();
                }
                self.min_free[x] = 1;
            }
        }
    }

    /// Colours the uncoloured edge `e` without exceeding `Δ + 1`, where `Δ`
    /// is the maximum degree of the coloured subgraph including `e`.
    pub(crate) fn colour_edge(&mut self, e: usize) {
        let (u, v) = self.g.edge(e);
        for (a, b) in [(u, v), (v, u)] {
            let c = self.min_free[a];
            if self.is_free(b, c) {
                self.set(e, c);
                return;
            }
        }
        self.misra_gries(u, v, e);
    }

    fn misra_gries(&mut self, u: usize, v: usize, e: usize) {
        let g = self.g;
        // maximal fan at u starting with v
        let mut fan = vec![v];
        let mut fan_edges = vec![e];
        loop {
            let last = *fan.last().expect("fan is never empty");
            let next = g.incident(u).iter().find(|&&(w, f)| {
                let c = self.colour[f];
                c != 0 && !fan.contains(&w) && self.is_free(last, c)
            });
            match next {
                Some(&(w, f)) => {
                    fan.push(w);
                    fan_edges.push(f);
                }
                None => break,
            }
        }
        let last = *fan.last().expect("fan is never empty");
        let c = self.min_free[u];
        let d = self.min_free[last];

        // invert the cd-path from u, which starts with u's d-edge
        if c != d {
            let mut path = Vec::new();
            let (mut x, mut col) = (u, d);
            while let Some(&f) = self.at[x].get(&col) {
                path.push(f);
                x = g.other_end(f, x);
                col = if col == d { c } else { d };
            }
            let old: Vec<u32> = path.iter().map(|&f| self.colour[f]).collect();
            for &f in &path {
                self.unset(f);
            }
            for (&f, &col) in path.iter().zip(&old) {
                self.set(f, if col == d { c } else { d });
            }
        }

        // first fan vertex with d free whose prefix is still a fan
        let mut w = None;
        for i in 0..fan.len() {
            if i > 0 {
                let ci = self.colour[fan_edges[i]];
                if ci == 0 || !self.is_free(fan[i - 1], ci) {
                    break;
                }
            }
            if self.is_free(fan[i], d) {
                w = Some(i);
                break;
            }
        }
        let w = w.expect("Misra–Gries guarantees a rotation point");
        let shifted: Vec<u32> = (0..w).map(|i| self.colour[fan_edges[i + 1]]).collect();
        for &f in &fan_edges[1..=w] {
            self.unset(f);
        }
        for (i, &col) in shifted.iter().enumerate() {
            self.set(fan_edges[i], col);
        }
        self.set(fan_edges[w], d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{check_proper, TotalColouring};
    use crate::construct::state::lift;
    use crate::graph::{generate, GraphKind};
    use crate::lemma::{LemmaState, Stage};

    fn edge_colour_all(g: &Graph) -> Vec<u32> {
        let mut mg = EdgeColourer::new(g);
        for e in 0..g.m() {
            mg.colour_edge(e);
        }
        mg.colour
    }

    fn assert_proper_edge_colouring(g: &Graph, colour: &[u32]) {
        for v in 0..g.n() {
            let mut seen: Vec<u32> = g.incident(v).iter().map(|&(_, e)| colour[e]).collect();
            seen.sort_unstable();
            let len = seen.len();
            seen.dedup();
            assert_eq!(seen.len(), len, "clash at {v}");
        }
        assert!(colour.iter().all(|&c| c >= 1 && c as usize <= g.max_degree() + 1));
    }

    #[test]
    fn misra_gries_within_delta_plus_one() {
        for kind in [
            GraphKind::Complete { n: 7 },
            GraphKind::Complete { n: 8 },
            GraphKind::Cycle { n: 9 },
            GraphKind::Random { n: 80, p: 0.3, seed: 3 },
            GraphKind::Regular { n: 60, d: 11, seed: 5 },
        ] {
            let g = generate(&kind).unwrap();
            assert_proper_edge_colouring(&g, &edge_colour_all(&g));
        }
    }

    #[test]
    fn smallest_missing_cases() {
        assert_eq!(smallest_missing(&[]), 1);
        assert_eq!(smallest_missing(&[1, 2, 4]), 3);
        assert_eq!(smallest_missing(&[2, 3]), 1);
    }

    #[test]
    fn single_edge_class() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let st = LemmaState {
            c1: vec![1, 1],
            c2: vec![1],
            c3v: vec![1, 1],
            c3e: vec![1],
            rng_seed: 0,
            stage: Stage::Two,
        };
        let cs = lift(&st, 1, 5);
        let (out, stats) = properize(&g, &cs, false).unwrap();
        assert_eq!(stats.widths, vec![3]);
        assert!(out.class_confined());
        let c = TotalColouring::with_span(&g, out.vertex.clone(), out.edge.clone()).unwrap();
        assert!(check_proper(&g, &c).is_empty());
    }

    #[test]
    fn too_narrow_class_is_an_error_without_compaction() {
        let g = generate(&GraphKind::Complete { n: 5 }).unwrap();
        let st = LemmaState {
            c1: vec![1; 5],
            c2: vec![1; 10],
            c3v: vec![1; 5],
            c3e: vec![1; 10],
            rng_seed: 0,
            stage: Stage::Two,
        };
        let cs = lift(&st, 1, 3);
        assert!(matches!(properize(&g, &cs, false), Err(ConstructError::ClassTooWide { class: 1, .. })));
        let (out, _) = properize(&g, &cs, true).unwrap();
        let c = TotalColouring::with_span(&g, out.vertex.clone(), out.edge.clone()).unwrap();
        assert!(check_proper(&g, &c).is_empty());
    }
}
