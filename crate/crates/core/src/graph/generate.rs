use std::collections::HashSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};
use crate::rng::seeded;

/// Deterministic graph families. Random kinds are pure functions of their seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphKind {
    Empty { n: usize },
    Complete { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    /// `K_{1,leaves}`; the centre is vertex 0.
    Star { leaves: usize },
    /// Erdős–Rényi `G(n, p)`.
    Random { n: usize, p: f64, seed: u64 },
    /// Uniform-ish `d`-regular graph by randomised stub pairing.
    Regular { n: usize, d: usize, seed: u64 },
}

const REGULAR_RESTARTS: usize = 1000;

pub fn generate(kind: &GraphKind) -> Result<Graph, GraphError> {
    match *kind {
        GraphKind::Empty { n } => Ok(Graph::empty(n)),
        GraphKind::Complete { n } => {
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, edges)
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(GraphError::Inadmissible(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        GraphKind::Star { leaves } => Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))),
        GraphKind::Random { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::Inadmissible(format!("p = {p} outside [0, 1]")));
            }
            let mut rng = seeded(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        GraphKind::Regular { n, d, seed } => regular(n, d, seed),
    }
}

/// Pairs stubs one random pair at a time, rejecting loops and repeated pairs,
/// and restarts from scratch when the remaining stubs admit no valid pair.
fn regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if (n > 0 && d >= n) || (n == 0 && d > 0) {
        return Err(GraphError::Inadmissible(format!("regular needs d < n, got n={n} d={d}")));
    }
    if (n * d) % 2 != 0 {
        return Err(GraphError::Inadmissible(format!("regular needs n*d even, got n={n} d={d}")));
    }
    let mut rng = seeded(seed);
    for _ in 0..REGULAR_RESTARTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
        let mut stuck = false;
        while !stubs.is_empty() {
            let mut paired = false;
            for _ in 0..50 {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || present.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                present.insert((u.min(v), u.max(v)));
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                paired = true;
                break;
            }
            if !paired && !has_valid_pair(&stubs, &present) {
                stuck = true;
                break;
            }
        }
        if !stuck {
            return Graph::from_edges(n, present);
        }
    }
    Err(GraphError::RetryBudgetExceeded {
        attempts: REGULAR_RESTARTS,
    })
}

fn has_valid_pair(stubs: &[usize], present: &HashSet<(usize, usize)>) -> bool {
    stubs.iter().enumerate().any(|(i, &u)| {
        stubs[i + 1..]
            .iter()
            .any(|&v| u != v && !present.contains(&(u.min(v), u.max(v))))
    })
}
