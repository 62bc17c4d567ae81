//! Exact χ''_Σ for small graphs.
//!
//! [`solve_exact`] is a backtracking search; [`brute_force_chi`] enumerates
//! every assignment and checks it with the verifier, and exists to validate the
//! backtracker. The two share nothing but the graph type.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{self, TotalColouring};
use crate::graph::{write_graph, Graph};

/// Enumeration guard for [`brute_force_chi`]: `(n + m) * log2(k_max)` bits.
pub const BRUTE_FORCE_MAX_BITS: f64 = 40.0;

/// Palettes above this size are not supported by the backtracker's bitsets.
pub const MAX_EXACT_K: u32 = 63;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub chi_sum_total: u32,
    pub witness: TotalColouring,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(SolveResult),
    /// No NSD proper total colouring with palette `k_max` exists.
    ExceedsKmax { k_max: u32, nodes_explored: u64 },
}

impl SolveOutcome {
    pub fn chi(&self) -> Option<u32> {
        match self {
            SolveOutcome::Solved(r) => Some(r.chi_sum_total),
            SolveOutcome::ExceedsKmax { .. } => None,
        }
    }

    pub fn nodes_explored(&self) -> u64 {
        match self {
            SolveOutcome::Solved(r) => r.nodes_explored,
            SolveOutcome::ExceedsKmax { nodes_explored, .. } => *nodes_explored,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("brute force over {objects} objects with k_max = {k_max} needs {bits:.1} bits (limit {BRUTE_FORCE_MAX_BITS})")]
    Guard { objects: usize, k_max: u32, bits: f64 },
    #[error("search gave up after {0} nodes")]
    NodeBudget(u64),
    #[error("k_max = {0} exceeds the supported palette size {MAX_EXACT_K}")]
    PaletteTooLarge(u32),
}

/// Tries `k = Δ+1, Δ+2, …, k_max`, enumerating all `k^(n+m)` assignments for
/// each, and returns the first `k` admitting an NSD proper total colouring.
pub fn brute_force_chi(g: &Graph, k_max: u32) -> Result<SolveOutcome, SolveError> {
    let objects = g.n() + g.m();
    let bits = objects as f64 * f64::from(k_max.max(1)).log2();
    if bits > BRUTE_FORCE_MAX_BITS {
        return Err(SolveError::Guard { objects, k_max, bits });
    }
    let mut nodes = 0u64;
    let lower = g.max_degree() as u32 + 1;
    for k in lower..=k_max {
        let mut assignment = vec![1u32; objects];
        loop {
            nodes += 1;
            let (vertex, edge) = assignment.split_at(g.n());
            if let Ok(c) = TotalColouring::new(g, vertex.to_vec(), edge.to_vec(), k) {
                if colouring::verify(g, &c).is_empty() {
                    return Ok(SolveOutcome::Solved(SolveResult {
                        chi_sum_total: k,
                        witness: c,
                        nodes_explored: nodes,
                    }));
                }
            }
            if !odometer_step(&mut assignment, k) {
                break;
            }
        }
    }
    Ok(SolveOutcome::ExceedsKmax {
        k_max,
        nodes_explored: nodes,
    })
}

fn odometer_step(digits: &mut [u32], k: u32) -> bool {
    for d in digits.iter_mut() {
        if *d < k {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}

/// Backtracking search for χ''_Σ(g), at most `k_max`. Components are solved
/// separately and the maximum taken.
pub fn solve_exact(g: &Graph, k_max: u32) -> SolveOutcome {
    match solve_exact_with_budget(g, k_max, None) {
        Ok(outcome) => outcome,
        Err(SolveError::PaletteTooLarge(_)) => solve_exact(g, MAX_EXACT_K),
        Err(e) => unreachable!("no budget was set: {e}"),
    }
}

/// [`solve_exact`] with an optional cap on explored nodes.
pub fn solve_exact_with_budget(
    g: &Graph,
    k_max: u32,
    node_budget: Option<u64>,
) -> Result<SolveOutcome, SolveError> {
    if k_max > MAX_EXACT_K {
        return Err(SolveError::PaletteTooLarge(k_max));
    }
    let mut vertex = vec![0u32; g.n()];
    let mut edge = vec![0u32; g.m()];
    let mut chi = 1u32;
    let mut nodes = 0u64;
    for comp in g.components() {
        let sub = g.induced(&comp);
        let mut search = Search::new(&sub, node_budget.map(|b| b.saturating_sub(nodes)));
        let mut found = None;
        for k in sub.max_degree() as u32 + 1..=k_max {
            if search.run(k)? {
                found = Some(k);
                break;
            }
        }
        nodes += search.nodes;
        let Some(k) = found else {
            return Ok(SolveOutcome::ExceedsKmax {
                k_max,
                nodes_explored: nodes,
            });
        };
        chi = chi.max(k);
        for (i, &v) in comp.iter().enumerate() {
            vertex[v] = search.vertex[i];
        }
        for (e, &(a, b)) in sub.edges().iter().enumerate() {
            let id = g.edge_id(comp[a], comp[b]).expect("induced edge exists");
            edge[id] = search.edge[e];
        }
    }
    let witness = TotalColouring::new(g, vertex, edge, chi).expect("search colours lie in 1..=chi");
    Ok(SolveOutcome::Solved(SolveResult {
        chi_sum_total: chi,
        witness,
        nodes_explored: nodes,
    }))
}

#[derive(Clone, Copy)]
enum Slot {
    Vertex(usize),
    Edge(usize),
}

struct Search<'g> {
    g: &'g Graph,
    order: Vec<Slot>,
    vertex: Vec<u32>,
    edge: Vec<u32>,
    /// Bitmask of colours on coloured edges around each vertex.
    edge_mask: Vec<u64>,
    /// Uncoloured objects among `v` and its incident edges.
    pending: Vec<usize>,
    sum: Vec<u64>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, budget: Option<u64>) -> Self {
        Search {
            g,
            order: object_order(g),
            vertex: vec![0; g.n()],
            edge: vec![0; g.m()],
            edge_mask: vec![0; g.n()],
            pending: (0..g.n()).map(|v| g.degree(v) + 1).collect(),
            sum: vec![0; g.n()],
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self, k: u32) -> Result<bool, SolveError> {
        self.extend(0, k)
    }

    fn extend(&mut self, depth: usize, k: u32) -> Result<bool, SolveError> {
        if depth == self.order.len() {
            return Ok(true);
        }
        match self.order[depth] {
            Slot::Vertex(v) => {
                for x in 1..=k {
                    if self.edge_mask[v] >> x & 1 == 1
                        || self.g.neighbours(v).any(|u| self.vertex[u] == x)
                    {
                        continue;
                    }
                    self.tick()?;
                    self.vertex[v] = x;
                    self.sum[v] += u64::from(x);
                    self.pending[v] -= 1;
                    let ok = self.pending[v] > 0 || self.sum_ok(v);
                    if ok && self.extend(depth + 1, k)? {
                        return Ok(true);
                    }
                    self.pending[v] += 1;
                    self.sum[v] -= u64::from(x);
                    self.vertex[v] = 0;
                }
            }
            Slot::Edge(e) => {
                let (a, b) = self.g.edge(e);
                let blocked = self.edge_mask[a] | self.edge_mask[b];
                for x in 1..=k {
                    if blocked >> x & 1 == 1 || self.vertex[a] == x || self.vertex[b] == x {
                        continue;
                    }
                    self.tick()?;
                    self.edge[e] = x;
                    for w in [a, b] {
                        self.edge_mask[w] |= 1 << x;
                        self.sum[w] += u64::from(x);
                        self.pending[w] -= 1;
                    }
                    let ok = (self.pending[a] > 0 || self.sum_ok(a)) && (self.pending[b] > 0 || self.sum_ok(b));
                    if ok && self.extend(depth + 1, k)? {
                        return Ok(true);
                    }
                    for w in [a, b] {
                        self.edge_mask[w] &= !(1 << x);
                        self.sum[w] -= u64::from(x);
                        self.pending[w] += 1;
                    }
                    self.edge[e] = 0;
                }
            }
        }
        Ok(false)
    }

    /// `v` has just completed its sum: compare with completed neighbours.
    fn sum_ok(&self, v: usize) -> bool {
        self.g
            .neighbours(v)
            .all(|u| self.pending[u] > 0 || self.sum[u] != self.sum[v])
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        match self.budget {
            Some(b) if self.nodes > b => Err(SolveError::NodeBudget(b)),
            _ => Ok(()),
        }
    }
}

/// BFS from a maximum-degree vertex, higher-degree neighbours first; each
/// vertex is followed immediately by its not-yet-listed incident edges.
fn object_order(g: &Graph) -> Vec<Slot> {
    let mut order = Vec::with_capacity(g.n() + g.m());
    let mut seen = vec![false; g.n()];
    let mut edge_done = vec![false; g.m()];
    let mut starts: Vec<usize> = (0..g.n()).collect();
    starts.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for &start in &starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(Slot::Vertex(v));
            let mut next: Vec<(usize, usize)> = g.incident(v).to_vec();
            next.sort_by_key(|&(u, _)| (std::cmp::Reverse(g.degree(u)), u));
            for (u, e) in next {
                if !edge_done[e] {
                    edge_done[e] = true;
                    order.push(Slot::Edge(e));
                }
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

/// One row of a conjecture sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "graph-id")]
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "Δ")]
    pub delta: usize,
    /// Empty when χ''_Σ > Δ+3 or the solver failed.
    #[serde(rename = "χ''_Σ")]
    pub chi: Option<u32>,
    #[serde(rename = "Δ+3")]
    pub delta_plus_3: u32,
    pub verdict: Verdict,
    /// DIMACS text of the graph, filled for violations only.
    #[serde(skip)]
    pub witness_graph: Option<String>,
    #[serde(skip)]
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Violation,
    Error(String),
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Violation => f.write_str("violation"),
            Verdict::Error(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn violations(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Violation)
    }

    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.verdict, Verdict::Error(_))).count()
    }

    /// CSV with columns `graph-id,n,m,Δ,χ''_Σ,Δ+3,verdict`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.write_record([
                row.graph_id.clone(),
                row.n.to_string(),
                row.m.to_string(),
                row.delta.to_string(),
                row.chi.map(|c| c.to_string()).unwrap_or_default(),
                row.delta_plus_3.to_string(),
                row.verdict.to_string(),
            ])
            .expect("writing to memory");
        }
        let body = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8");
        format!("graph-id,n,m,Δ,χ''_Σ,Δ+3,verdict\n{body}")
    }
}

/// Checks χ''_Σ(G) ≤ Δ(G)+3 on each graph by solving with `k_max = Δ+3`.
/// Graphs run in parallel; rows come back in input order.
pub fn conjecture_sweep(family: &[(String, Graph)], node_budget: Option<u64>) -> SweepReport {
    let rows = family
        .par_iter()
        .map(|(id, g)| sweep_one(id, g, node_budget))
        .collect();
    SweepReport { rows }
}

fn sweep_one(id: &str, g: &Graph, node_budget: Option<u64>) -> SweepRow {
    let bound = g.max_degree() as u32 + 3;
    let mut row = SweepRow {
        graph_id: id.to_string(),
        n: g.n(),
        m: g.m(),
        delta: g.max_degree(),
        chi: None,
        delta_plus_3: bound,
        verdict: Verdict::Pass,
        witness_graph: None,
        nodes_explored: 0,
    };
    match solve_exact_with_budget(g, bound, node_budget) {
        Ok(SolveOutcome::Solved(r)) => {
            debug_assert!(colouring::verify(g, &r.witness).is_empty());
            row.chi = Some(r.chi_sum_total);
            row.nodes_explored = r.nodes_explored;
        }
        Ok(SolveOutcome::ExceedsKmax { nodes_explored, .. }) => {
            row.verdict = Verdict::Violation;
            row.witness_graph = Some(write_graph(g));
            row.nodes_explored = nodes_explored;
        }
        Err(e) => row.verdict = Verdict::Error(e.to_string()),
    }
    row
}
