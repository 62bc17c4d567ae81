//! Oracles for the integration tests, written against the definitions rather
//! than the crate's internals. Palettes come from integer root searches,
//! scores from big rationals and binomials, and property counts from ordered
//! maps, so a shared bug would have to be made twice in different ways.

#![allow(dead_code)]

pub mod suites;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use nsd_total::graph::Graph;
use nsd_total::lemma::LemmaState;

pub fn ln_floor(delta: usize) -> f64 {
    (delta.max(1) as f64).ln().max(1.0)
}

/// Smallest `x ≥ 1` with `x^k ≥ target`.
pub fn ceil_root(target: f64, k: i32) -> u64 {
    let mut x = 1u64;
    while (x as f64).powi(k) < target {
        x += 1;
    }
    x
}

/// `(r1, r2, r3)` as the least integers whose 6th and 3rd powers reach `Δ / ln Δ`.
pub fn palettes(delta: usize) -> (u64, u64, u64) {
    let q = delta.max(1) as f64 / ln_floor(delta);
    let r1 = ceil_root(q, 6);
    let r2 = ceil_root(q, 3);
    (r1, r2, 2 * r1 + r2)
}

/// `⌈(Δ² ln Δ)^{1/3}⌉ + 6⌈(Δ ln² Δ)^{1/3}⌉`.
pub fn b_unit(delta: usize) -> u64 {
    let (d, l) = (delta.max(1) as f64, ln_floor(delta));
    ceil_root(d * d * l, 3) + 6 * ceil_root(d * l * l, 3)
}

fn binomial(n: u64, k: u64) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for i in 0..k {
        acc = acc * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
    }
    acc
}

fn big(x: u64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `S = b·d·c1 + b·(d/r1·C(r1+1, 2) + d/r2·C(r2+1, 2))`.
pub fn score(delta: usize, d: usize, c1v: u32) -> BigRational {
    let (r1, r2, _) = palettes(delta);
    let b = big(b_unit(delta));
    let d = big(d as u64);
    let attract = b.clone() * d.clone() * big(u64::from(c1v));
    let r = d.clone() / big(r1) * binomial(r1 + 1, 2) + d / big(r2) * binomial(r2 + 1, 2);
    attract + b * r
}

pub fn interval_len(delta: usize) -> BigRational {
    let d = delta.max(1) as f64;
    BigRational::from_float(d.powf(5.0 / 3.0) * ln_floor(delta).powf(1.0 / 3.0) / 3.0).expect("finite")
}

/// Least `α` with `s ≤ α · len`, for `s > 0`.
pub fn interval(s: &BigRational, delta: usize) -> u64 {
    let q = s / interval_len(delta);
    q.ceil().to_integer().to_u64().expect("small index")
}

/// Caps recomputed from `Δ` and `slack`.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub i: f64,
    pub ii: f64,
    pub vi: f64,
    pub sum_class: f64,
    pub endpoint_match: f64,
    pub c3_neighbours: f64,
    pub non_h3: f64,
    pub h3: f64,
    pub off_formula: f64,
    pub per_c3: f64,
}

pub fn caps(delta: usize, slack: f64) -> Caps {
    let (d, l) = (delta.max(1) as f64, ln_floor(delta));
    let a = d.powf(2.0 / 3.0) * l.powf(1.0 / 3.0);
    let b = d.powf(1.0 / 3.0) * l.powf(2.0 / 3.0);
    Caps {
        i: slack * d.sqrt(),
        ii: slack * 3.0 * b,
        vi: slack * (d.powf(5.0 / 6.0) * l.powf(1.0 / 6.0) + d.sqrt()),
        sum_class: slack * (a + 3.0 * b),
        endpoint_match: slack * (2.0 * a + 5.0 * b),
        c3_neighbours: slack * (a + 3.0 * b),
        non_h3: slack * (a + 3.0 * b),
        h3: slack * 2.0 * b,
        off_formula: slack * (3.0 * a + 8.0 * b),
        per_c3: slack * (a + 5.0 * b),
    }
}

fn exceeds(count: usize, cap: f64) -> bool {
    count as f64 > cap
}

/// `|count − d/r| > cap`, decided in exact rationals.
fn deviates(count: usize, d: usize, r: u64, cap: f64) -> bool {
    let dev = (big(count as u64) - big(d as u64) / big(r)).abs();
    dev > BigRational::from_float(cap).expect("finite cap")
}

fn histogram(values: impl Iterator<Item = u64>) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for x in values {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// Ids of the properties that fail on `st`, counted from scratch. Stage-two
/// properties are included when `stage_two` is set.
pub fn failing_properties(g: &Graph, st: &LemmaState, slack: f64, stage_two: bool) -> BTreeSet<&'static str> {
    let delta = g.max_degree();
    let (r1, r2, _) = palettes(delta);
    let cap = caps(delta, slack);
    let threshold = delta.div_ceil(3);
    let mut fail = BTreeSet::new();
    let adj: Vec<Vec<(usize, usize)>> = {
        let mut adj = vec![Vec::new(); g.n()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    };
    let sum = |e: usize| {
        let (u, v) = g.edges()[e];
        u64::from(st.c1[u] + st.c1[v] + st.c2[e])
    };
    let alpha: Vec<Option<u64>> = (0..g.n())
        .map(|u| {
            let d = adj[u].len();
            (d > 0 && d >= threshold).then(|| interval(&score(delta, d, st.c1[u]), delta))
        })
        .collect();

    for v in 0..g.n() {
        let d = adj[v].len();
        if d >= threshold {
            let c1 = histogram(adj[v].iter().map(|&(u, _)| u64::from(st.c1[u])));
            if (1..=r1).any(|x| deviates(c1.get(&x).copied().unwrap_or(0), d, r1, cap.i)) {
                fail.insert("I");
            }
            let c2 = histogram(adj[v].iter().map(|&(_, e)| u64::from(st.c2[e])));
            if (1..=r2).any(|x| deviates(c2.get(&x).copied().unwrap_or(0), d, r2, cap.ii)) {
                fail.insert("II");
            }
            let by_alpha = histogram(adj[v].iter().filter_map(|&(u, _)| alpha[u]));
            if by_alpha.values().any(|&c| exceeds(c, cap.vi)) {
                fail.insert("VI");
            }
        }
        let sums = histogram(adj[v].iter().map(|&(_, e)| sum(e)));
        let matched = adj[v]
            .iter()
            .filter(|&&(u, e)| sum(e) == u64::from(st.c3v[u]) || sum(e) == u64::from(st.c3v[v]))
            .count();
        if sums.values().any(|&c| exceeds(c, cap.sum_class)) || exceeds(matched, cap.endpoint_match) {
            fail.insert("1°");
        }
        let c3 = histogram(adj[v].iter().map(|&(u, _)| u64::from(st.c3v[u])));
        if c3.values().any(|&c| exceeds(c, cap.c3_neighbours)) {
            fail.insert("2°");
        }
        if !stage_two {
            continue;
        }
        let off = adj[v].iter().filter(|&&(_, e)| u64::from(st.c3e[e]) != sum(e)).count();
        if exceeds(off, cap.off_formula) {
            fail.insert("III");
        }
        if histogram(adj[v].iter().map(|&(_, e)| u64::from(st.c3e[e]))).values().any(|&c| exceeds(c, cap.per_c3)) {
            fail.insert("IV");
        }
        let in_h3 = |u: usize, e: usize| {
            let s = sum(e);
            let h1 = s == u64::from(st.c3v[u]) || s == u64::from(st.c3v[v]);
            h1 && st.c3v[u] != st.c3v[v]
        };
        let h3 = histogram(adj[v].iter().filter(|&&(u, e)| in_h3(u, e)).map(|&(_, e)| u64::from(st.c3e[e])));
        let rest = histogram(adj[v].iter().filter(|&&(u, e)| !in_h3(u, e)).map(|&(_, e)| u64::from(st.c3e[e])));
        if h3.values().any(|&c| exceeds(c, cap.h3)) {
            fail.insert("4°");
        }
        if rest.values().any(|&c| exceeds(c, cap.non_h3)) {
            fail.insert("3°");
        }
    }
    if stage_two
        && g
            .edges()
            .iter()
            .enumerate()
            .any(|(e, &(u, v))| st.c3v[u] == st.c3v[v] && st.c3e[e] != st.c3v[u])
    {
        fail.insert("V");
    }
    fail
}

/// `Σ_v s(v)` computed as `Σ c(v) + 2 Σ c(e)`.
pub fn total_weight(vertex: &[u32], edge: &[u32]) -> u64 {
    vertex.iter().map(|&c| u64::from(c)).sum::<u64>() + 2 * edge.iter().map(|&c| u64::from(c)).sum::<u64>()
}

/// Random simple graphs on `1..=max_n` vertices.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&p, _)| p);
            Graph::from_edges(n, edges).expect("simple")
        })
    })
}

/// A graph together with colours in `1..=k` for every vertex and edge.
pub fn arb_coloured(max_n: usize, k: u32) -> impl Strategy<Value = (Graph, Vec<u32>, Vec<u32>)> {
    arb_graph(max_n).prop_flat_map(move |g| {
        let (n, m) = (g.n(), g.m());
        (
            Just(g),
            proptest::collection::vec(1..=k, n),
            proptest::collection::vec(1..=k, m),
        )
    })
}
