use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

use crate::graph::Graph;
use crate::lemma::{s_of, LemmaParams, LemmaState, SParams};

/// Width of the window `K_v` around `S(v)` inside which a large neighbour may
/// still end up with the same weighted degree as `v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskParams {
    /// Bound on `|s(v) − S(v)|` before repairs; default `(11/2)·Δ^{5/3} ln^{1/3} Δ`.
    pub fault_cap: f64,
    /// Shift of `s(v)` from recolouring repair edges: `16 Δ ln Δ`.
    pub repair_slack: f64,
    /// Half-width of `K_v`: both endpoints drift, so `2·(fault_cap + repair_slack)`.
    pub window: f64,
    /// `⌈2·window / interval_len⌉ + 1`.
    pub covered_intervals: u64,
    /// `covered_intervals` times the (VI) cap: the bound `|R_v|` is audited against.
    pub audit_cap: f64,
}

impl RiskParams {
    pub fn new(p: &LemmaParams, sp: &SParams, fault_cap: Option<f64>) -> Self {
        let fault_cap = fault_cap.unwrap_or_else(|| 5.5 * p.power(5.0 / 3.0, 1.0 / 3.0));
        let repair_slack = 16.0 * p.delta.max(1) as f64 * p.ln_floor;
        let window = 2.0 * (fault_cap + repair_slack);
        let covered_intervals = (2.0 * window / sp.interval_len).ceil() as u64 + 1;
        RiskParams {
            fault_cap,
            repair_slack,
            window,
            covered_intervals,
            audit_cap: covered_intervals as f64 * p.caps().vi,
        }
    }
}

/// `R_v`: neighbours `u` of a large vertex `v` with `u` large and
/// `|S(u) − S(v)| ≤ window`. Empty for small `v`.
pub fn compute_risky(g: &Graph, st: &LemmaState, sp: &SParams, p: &LemmaParams, rp: &RiskParams) -> Vec<Vec<usize>> {
    let window = crate::lemma::exact_ratio(rp.window);
    let score: Vec<Option<Ratio<i128>>> = (0..g.n())
        .map(|v| p.is_large(g.degree(v)).then(|| s_of(g.degree(v), st.c1[v], sp)))
        .collect();
    (0..g.n())
        .map(|v| match score[v] {
            None => Vec::new(),
            Some(sv) => g
                .neighbours(v)
                .filter(|&u| score[u].is_some_and(|su| (su - sv).abs() <= window))
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::lemma::{sample_stage_one, Mode};

    #[test]
    fn asymptotic_scale_window_covers_about_68_intervals() {
        let p = LemmaParams::new(400_000, Mode::Strict, 1.0).unwrap();
        let rp = RiskParams::new(&p, &SParams::new(&p), None);
        assert!((67..=69).contains(&rp.covered_intervals), "{}", rp.covered_intervals);
    }

    #[test]
    fn equal_scores_are_risky_and_small_degrees_are_not() {
        // K4 plus a pendant: Δ = 4, threshold 2, vertex 4 has degree 1
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]).unwrap();
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 1.0).unwrap();
        let sp = SParams::new(&p);
        let mut st = sample_stage_one(&g, &p, 1);
        st.c1 = vec![1; 5];
        let rp = RiskParams {
            window: 0.0,
            ..RiskParams::new(&p, &sp, None)
        };
        let r = compute_risky(&g, &st, &sp, &p, &rp);
        assert_eq!(r[1], vec![2, 3]);
        assert_eq!(r[0], Vec::<usize>::new());
        assert!(r[4].is_empty());
        assert!(!r[0].contains(&4));
    }

    #[test]
    fn desk_scale_window_takes_every_large_neighbour() {
        let g = generate(&GraphKind::Random { n: 300, p: 0.1, seed: 8 }).unwrap();
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 2.0).unwrap();
        let sp = SParams::new(&p);
        let st = sample_stage_one(&g, &p, 1);
        let rp = RiskParams::new(&p, &sp, None);
        let r = compute_risky(&g, &st, &sp, &p, &rp);
        for v in (0..g.n()).filter(|&v| p.is_large(g.degree(v))) {
            let large = g.neighbours(v).filter(|&u| p.is_large(g.degree(u))).count();
            assert_eq!(r[v].len(), large);
        }
    }
}
