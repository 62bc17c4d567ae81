use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::params::LemmaParams;
use crate::graph::Graph;
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    One,
    Two,
}

/// The random colourings `c1`, `c2`, `c3`.
///
/// After stage one `c3e[uv] = c1[u] + c1[v] + c2[uv]`; after stage two every
/// `c3e` lies in `1..=r3`. A `c3e` of 0 marks an uncoloured edge and only
/// occurs inside stage two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaState {
    pub c1: Vec<u32>,
    pub c2: Vec<u32>,
    pub c3v: Vec<u32>,
    pub c3e: Vec<u32>,
    pub rng_seed: u64,
    pub stage: Stage,
}

impl LemmaState {
    /// `c1(u) + c1(v) + c2(uv)`.
    pub fn edge_sum(&self, g: &Graph, e: usize) -> u32 {
        let (u, v) = g.edge(e);
        self.c1[u] + self.c1[v] + self.c2[e]
    }

    /// Edge is in `H1`: its sum equals `c3` of an endpoint.
    pub fn in_h1(&self, g: &Graph, e: usize) -> bool {
        let (u, v) = g.edge(e);
        let s = self.edge_sum(g, e);
        s == self.c3v[u] || s == self.c3v[v]
    }

    /// Edge is in `H2`: both endpoints share `c3`.
    pub fn in_h2(&self, g: &Graph, e: usize) -> bool {
        let (u, v) = g.edge(e);
        self.c3v[u] == self.c3v[v]
    }

    /// Edge is in `H3 = H1 ∖ H2`, the edges recoloured at random in stage two.
    pub fn in_h3(&self, g: &Graph, e: usize) -> bool {
        self.in_h1(g, e) && !self.in_h2(g, e)
    }
}

/// Draws `c1` for every vertex, then `c2` for every edge, then `c3` for every
/// vertex, from one stream, and sets `c3e` to the sum formula.
pub(crate) fn sample_with(g: &Graph, p: &LemmaParams, rng: &mut Rng, seed: u64) -> LemmaState {
    let c1: Vec<u32> = (0..g.n()).map(|_| rng.random_range(1..=p.r1)).collect();
    let c2: Vec<u32> = (0..g.m()).map(|_| rng.random_range(1..=p.r2)).collect();
    let c3v: Vec<u32> = (0..g.n()).map(|_| rng.random_range(1..=p.r2)).collect();
    let c3e = g.edges().iter().enumerate().map(|(e, &(u, v))| c1[u] + c1[v] + c2[e]).collect();
    LemmaState {
        c1,
        c2,
        c3v,
        c3e,
        rng_seed: seed,
        stage: Stage::One,
    }
}

pub fn sample_stage_one(g: &Graph, p: &LemmaParams, seed: u64) -> LemmaState {
    let mut rng = crate::rng::seeded(seed);
    sample_with(g, p, &mut rng, seed)
}
