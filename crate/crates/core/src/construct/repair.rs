use std::collections::HashSet;

use rand::Rng as _;
use serde::Serialize;

use super::state::ConstructionState;
use super::ConstructError;
use crate::graph::Graph;
use crate::lemma::LemmaParams;
use crate::rng::{seeded, Rng};

/// The repair subgraph `H`: every large vertex contributes a random pair of
/// its incident edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairGraph {
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    pub max_degree: usize,
    /// `floor(15 · ln Δ · slack)`.
    pub cap: usize,
    pub rounds: usize,
    /// Every `d_H(v)` is within `cap`.
    pub within_cap: bool,
}

impl RepairGraph {
    pub fn degree(&self, g: &Graph, v: usize) -> usize {
        let set: HashSet<usize> = self.edges.iter().copied().collect();
        g.incident(v).iter().filter(|&&(_, e)| set.contains(&e)).count()
    }
}

fn draw_pair(g: &Graph, v: usize, rng: &mut Rng) -> [Option<usize>; 2] {
    let inc = g.incident(v);
    match inc.len() {
        0 => [None, None],
        1 => [Some(inc[0].1), None],
        d => {
            let i = rng.random_range(0..d);
            let mut j = rng.random_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            [Some(inc[i].1), Some(inc[j].1)]
        }
    }
}

/// Draws the pairs for all large vertices in index order, then, while some
/// vertex has `d_H(v) > cap`, redraws the pairs of the large neighbours of the
/// first such vertex.
pub fn select_h(g: &Graph, p: &LemmaParams, seed: u64, max_rounds: usize) -> RepairGraph {
    let mut rng = seeded(seed);
    let cap = (15.0 * p.ln_floor * p.slack).floor() as usize;
    let mut pairs: Vec<[Option<usize>; 2]> = (0..g.n())
        .map(|v| {
            if p.is_large(g.degree(v)) {
                draw_pair(g, v, &mut rng)
            } else {
                [None, None]
            }
        })
        .collect();
    let mut rounds = 0;
    let (edges, degree) = loop {
        let mut chosen = vec![false; g.m()];
        for e in pairs.iter().flatten().flatten() {
            chosen[*e] = true;
        }
        let degree: Vec<usize> = (0..g.n())
            .map(|v| g.incident(v).iter().filter(|&&(_, e)| chosen[e]).count())
            .collect();
        let bad = (0..g.n()).find(|&v| degree[v] > cap);
        match bad {
            Some(v) if rounds < max_rounds => {
                rounds += 1;
                for u in g.neighbours(v).filter(|&u| p.is_large(g.degree(u))) {
                    pairs[u] = draw_pair(g, u, &mut rng);
                }
            }
            _ => break ((0..g.m()).filter(|&e| chosen[e]).collect::<Vec<_>>(), degree),
        }
    };
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    RepairGraph {
        edges,
        max_degree,
        cap,
        rounds,
        within_cap: max_degree <= cap,
    }
}

/// Where reserve colours come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Reserve {
    /// `start..=end`; running out is an error.
    Bounded { start: u32, end: u32 },
    /// `start..`, growing as needed.
    Open { start: u32 },
}

impl Reserve {
    pub fn start(&self) -> u32 {
        match *self {
            Reserve::Bounded { start, .. } | Reserve::Open { start } => start,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecolourStats {
    pub reserve: Reserve,
    /// `max over uv ∈ H of |R_u| + |R_v| + 2Δ(H)`.
    pub required: usize,
    /// Largest reserve colour used, if any.
    pub max_used: Option<u32>,
    /// Extra recolourings spent on pairs `uv ∈ H` left with equal sums.
    pub polish_steps: usize,
}

/// The smallest reserve colour for `e = uv` that differs from every other
/// colour at `u` and `v` and keeps `s(u)` off the sums of `avoid_u` and
/// `s(v)` off those of `avoid_v`.
fn pick(
    g: &Graph,
    cs: &ConstructionState,
    sums: &[u64],
    e: usize,
    avoid_u: &[usize],
    avoid_v: &[usize],
    reserve: Reserve,
) -> Option<u32> {
    let (u, v) = g.edge(e);
    let old = u64::from(cs.edge[e]);
    let mut taken: HashSet<u32> = HashSet::new();
    for x in [u, v] {
        taken.insert(cs.vertex[x]);
        taken.extend(g.incident(x).iter().filter(|&&(_, f)| f != e).map(|&(_, f)| cs.edge[f]));
    }
    let bad_u: HashSet<u64> = avoid_u.iter().map(|&w| sums[w] + old).collect();
    let bad_v: HashSet<u64> = avoid_v.iter().map(|&w| sums[w] + old).collect();
    // s(u) − old + x = s(w)  ⇔  x = s(w) + old − s(u)
    let start = reserve.start();
    let end = match reserve {
        Reserve::Bounded { end, .. } => end,
        Reserve::Open { start } => start.saturating_add((taken.len() + bad_u.len() + bad_v.len()) as u32 + 1),
    };
    (start..=end).find(|&x| {
        let x64 = u64::from(x);
        !taken.contains(&x) && !bad_u.contains(&(sums[u] + x64)) && !bad_v.contains(&(sums[v] + x64))
    })
}

fn apply(g: &Graph, cs: &mut ConstructionState, sums: &mut [u64], e: usize, x: u32) {
    let (u, v) = g.edge(e);
    let old = u64::from(cs.edge[e]);
    let new = u64::from(x);
    cs.edge[e] = x;
    sums[u] = sums[u] - old + new;
    sums[v] = sums[v] - old + new;
}

/// Recolours the edges of `h` in ascending order with reserve colours so that
/// afterwards adjacent large vertices have distinct weighted degrees.
///
/// A `Bounded` reserve must satisfy `|A| ≥ |R_u| + |R_v| + 2Δ(H)` for every
/// `uv ∈ H`; this is checked before any edge is touched.
pub fn recolour_h(
    g: &Graph,
    cs: &mut ConstructionState,
    h: &RepairGraph,
    risky: &[Vec<usize>],
    p: &LemmaParams,
    reserve: Reserve,
) -> Result<RecolourStats, ConstructError> {
    let required = h
        .edges
        .iter()
        .map(|&e| {
            let (u, v) = g.edge(e);
            risky[u].len() + risky[v].len() + 2 * h.max_degree
        })
        .max()
        .unwrap_or(0);
    if let Reserve::Bounded { start, end } = reserve {
        let size = (end + 1).saturating_sub(start) as usize;
        if size < required {
            return Err(ConstructError::ReserveTooSmall { size, required });
        }
    }
    debug_assert!(cs.span() < reserve.start());
    let mut sums = cs.sums(g);
    let mut max_used: Option<u32> = None;
    let mut recolour = |cs: &mut ConstructionState, sums: &mut Vec<u64>, e: usize, extra: Option<usize>| {
        let (u, v) = g.edge(e);
        let mut avoid_u: Vec<usize> = risky[u].iter().copied().filter(|&w| w != v).collect();
        let mut avoid_v: Vec<usize> = risky[v].iter().copied().filter(|&w| w != u).collect();
        if let Some(x) = extra {
            if g.edge_id(u, x).is_some() && x != v {
                avoid_u.push(x);
            }
            if g.edge_id(v, x).is_some() && x != u {
                avoid_v.push(x);
            }
        }
        let x = pick(g, cs, sums, e, &avoid_u, &avoid_v, reserve).ok_or(ConstructError::ReserveExhausted { edge: e })?;
        apply(g, cs, sums, e, x);
        max_used = max_used.max(Some(x));
        Ok::<(), ConstructError>(())
    };
    for &e in &h.edges {
        recolour(cs, &mut sums, e, None)?;
    }

    // an H edge uv shifts s(u) and s(v) alike, so a tie between u and v can
    // survive; move another H edge at one of them
    let in_h: HashSet<usize> = h.edges.iter().copied().collect();
    let mut polish_steps = 0;
    let limit = 2 * h.edges.len() + 10;
    while let Some((u, v)) = large_tie(g, p, &sums) {
        if polish_steps >= limit {
            return Err(ConstructError::LargeTie { u, v });
        }
        polish_steps += 1;
        let other = [(u, v), (v, u)].into_iter().find_map(|(a, b)| {
            g.incident(a)
                .iter()
                .find(|&&(w, f)| w != b && in_h.contains(&f))
                .map(|&(_, f)| (f, b))
        });
        let Some((f, partner)) = other else {
            return Err(ConstructError::LargeTie { u, v });
        };
        recolour(cs, &mut sums, f, Some(partner))?;
    }
    Ok(RecolourStats {
        reserve,
        required,
        max_used,
        polish_steps,
    })
}

/// First edge, in id order, joining two large vertices with equal sums.
pub fn large_tie(g: &Graph, p: &LemmaParams, sums: &[u64]) -> Option<(usize, usize)> {
    g.edges()
        .iter()
        .copied()
        .find(|&(u, v)| p.is_large(g.degree(u)) && p.is_large(g.degree(v)) && sums[u] == sums[v])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairStats {
    pub vertices: usize,
    /// Pool upper end, `span` on entry.
    pub pool: u32,
    /// Vertices that needed a colour above `pool`.
    pub beyond_pool: usize,
}

/// Gives each small vertex, in index order, the smallest colour in
/// `1..=span` that differs from its neighbours' and incident edges' colours
/// and makes its weighted degree differ from every neighbour's. With
/// `extend`, a vertex with no such colour takes the first one above the pool.
pub fn repair_small_degree(g: &Graph, cs: &mut ConstructionState, p: &LemmaParams, extend: bool) -> Result<RepairStats, ConstructError> {
    let pool = cs.span();
    let mut sums = cs.sums(g);
    let mut stats = RepairStats {
        vertices: 0,
        pool,
        beyond_pool: 0,
    };
    for v in (0..g.n()).filter(|&v| !p.is_large(g.degree(v))) {
        stats.vertices += 1;
        let rest = sums[v] - u64::from(cs.vertex[v]);
        let taken: HashSet<u32> = g
            .incident(v)
            .iter()
            .flat_map(|&(u, e)| [cs.vertex[u], cs.edge[e]])
            .collect();
        let clash: HashSet<u64> = g.neighbours(v).map(|u| sums[u]).collect();
        let ok = |x: u32| !taken.contains(&x) && !clash.contains(&(rest + u64::from(x)));
        let x = match (1..=pool).find(|&x| ok(x)) {
            Some(x) => x,
            None if extend => {
                stats.beyond_pool += 1;
                (pool + 1..).find(|&x| ok(x)).expect("finitely many exclusions")
            }
            None => return Err(ConstructError::RepairPoolExhausted { vertex: v, pool }),
        };
        cs.vertex[v] = x;
        sums[v] = rest + u64::from(x);
    }
    Ok(stats)
}
