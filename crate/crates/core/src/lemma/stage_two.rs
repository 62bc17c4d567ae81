use rand::Rng as _;
use serde::Serialize;

use super::params::LemmaParams;
use super::properties::{check_properties, PropertyReport};
use super::score::SParams;
use super::state::{LemmaState, Stage};
use crate::graph::Graph;
use crate::rng::{seeded, Rng};

#[derive(Clone, Debug, Serialize)]
pub struct StageTwoOutcome {
    pub state: LemmaState,
    pub report: PropertyReport,
    /// Resampling steps spent on `L_v` events.
    pub rounds: usize,
    /// Every `L_v` event was avoided within the budget.
    pub l_events_clear: bool,
    pub e1: usize,
    pub e2: usize,
    pub e1_or_e2: usize,
    pub h1_max_degree: usize,
    pub h2_max_degree: usize,
    pub h3_max_degree: usize,
}

/// Uncolours `E1`, sets `c3` on `E2` to the common endpoint value, draws the
/// edges of `H3 = E1 ∖ E2` uniformly from `1..=r3` and redraws the `H3` edges
/// at the first vertex breaking (4°) until none does or `max_rounds` steps
/// were taken.
///
/// `c1`, `c2` and `c3v` are never touched.
pub fn stage_two(g: &Graph, st: &LemmaState, p: &LemmaParams, sp: &SParams, seed: u64, max_rounds: usize) -> StageTwoOutcome {
    let mut out = st.clone();
    out.stage = Stage::Two;
    let in_e1: Vec<bool> = (0..g.m()).map(|e| st.in_h1(g, e)).collect();
    let in_e2: Vec<bool> = (0..g.m()).map(|e| st.in_h2(g, e)).collect();
    for e in 0..g.m() {
        if in_e1[e] {
            out.c3e[e] = 0;
        }
        if in_e2[e] {
            out.c3e[e] = out.c3v[g.edge(e).0];
        }
    }
    let h3: Vec<bool> = (0..g.m()).map(|e| in_e1[e] && !in_e2[e]).collect();

    let mut rng = seeded(seed);
    for e in (0..g.m()).filter(|&e| h3[e]) {
        out.c3e[e] = rng.random_range(1..=p.r3);
    }
    let limit = p.caps().four.floor() as usize;
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut rounds = 0;
    let mut clear = false;
    for round in 0..=max_rounds {
        let bad = l_violations(g, &out.c3e, &h3, p.r3, limit);
        if bad.is_empty() {
            clear = true;
            rounds = round;
            break;
        }
        if best.as_ref().is_none_or(|(c, _)| bad.len() < *c) {
            best = Some((bad.len(), out.c3e.clone()));
        }
        rounds = round;
        if round == max_rounds {
            break;
        }
        redraw_at(g, &mut out.c3e, &h3, bad[0], p.r3, &mut rng);
    }
    if !clear {
        out.c3e = best.expect("at least one round ran").1;
    }
    debug_assert!(out.c3e.iter().all(|&c| c >= 1 && c <= p.r3));

    let degree_in = |flags: &[bool]| {
        (0..g.n())
            .map(|v| g.incident(v).iter().filter(|&&(_, e)| flags[e]).count())
            .max()
            .unwrap_or(0)
    };
    let union: Vec<bool> = (0..g.m()).map(|e| in_e1[e] || in_e2[e]).collect();
    let report = check_properties(g, &out, sp, p, Stage::Two);
    StageTwoOutcome {
        report,
        rounds,
        l_events_clear: clear,
        e1: in_e1.iter().filter(|&&b| b).count(),
        e2: in_e2.iter().filter(|&&b| b).count(),
        e1_or_e2: union.iter().filter(|&&b| b).count(),
        h1_max_degree: degree_in(&in_e1),
        h2_max_degree: degree_in(&in_e2),
        h3_max_degree: degree_in(&h3),
        state: out,
    }
}

/// Vertices at which some colour occurs on more than `limit` `H3` edges.
fn l_violations(g: &Graph, c3e: &[u32], h3: &[bool], r3: u32, limit: usize) -> Vec<usize> {
    let mut counts = vec![0usize; r3 as usize + 1];
    (0..g.n())
        .filter(|&v| {
            counts.iter_mut().for_each(|c| *c = 0);
            for &(_, e) in g.incident(v) {
                if h3[e] {
                    counts[c3e[e] as usize] += 1;
                }
            }
            counts.iter().any(|&c| c > limit)
        })
        .collect()
}

fn redraw_at(g: &Graph, c3e: &mut [u32], h3: &[bool], v: usize, r3: u32, rng: &mut Rng) {
    for &(_, e) in g.incident(v) {
        if h3[e] {
            c3e[e] = rng.random_range(1..=r3);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma::{sample_stage_one, Mode, Property};

    fn setup(g: &Graph) -> (LemmaParams, SParams) {
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 2.0).unwrap();
        let sp = SParams::new(&p);
        (p, sp)
    }

    #[test]
    fn nothing_to_do_leaves_colours() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (p, sp) = setup(&g);
        let mut st = sample_stage_one(&g, &p, 0);
        st.c1 = vec![1, 1];
        st.c2 = vec![1];
        st.c3e = vec![3];
        st.c3v = vec![1, 2];
        let out = stage_two(&g, &st, &p, &sp, 0, 5);
        assert_eq!((out.e1, out.e2), (0, 0));
        assert_eq!(out.state.c3e, st.c3e);
        assert!(out.report.verdict(Property::III).unwrap());
    }

    #[test]
    fn equal_endpoint_values_force_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (p, sp) = setup(&g);
        let mut st = sample_stage_one(&g, &p, 0);
        st.c1 = vec![1, 1];
        st.c2 = vec![1];
        st.c3e = vec![3];
        st.c3v = vec![2, 2];
        let out = stage_two(&g, &st, &p, &sp, 0, 5);
        assert_eq!(out.state.c3e, vec![2]);
        assert!(out.report.verdict(Property::V).unwrap());
    }

    #[test]
    fn no_sentinel_survives() {
        let g = crate::graph::generate(&crate::graph::GraphKind::Random { n: 400, p: 0.05, seed: 1 }).unwrap();
        let (p, sp) = setup(&g);
        let st = sample_stage_one(&g, &p, 3);
        let out = stage_two(&g, &st, &p, &sp, 4, 50);
        assert!(out.state.c3e.iter().all(|&c| (1..=p.r3).contains(&c)));
        assert!(out.report.verdict(Property::V).unwrap());
        assert_eq!(out.state.c1, st.c1);
        assert_eq!(out.state.c2, st.c2);
        assert_eq!(out.state.c3v, st.c3v);
    }
}
