use rand::Rng as _;
use serde::Serialize;

use super::params::LemmaParams;
use super::properties::{check_properties, Property, PropertyReport, Violator};
use super::score::SParams;
use super::state::{sample_with, LemmaState, Stage};
use crate::graph::Graph;
use crate::rng::{seeded, Rng};

/// Stage-one bad events at a vertex `v`, in the order they are examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Event {
    /// (I) fails at `v`.
    A,
    /// (II) fails at `v`.
    B,
    /// (2°) fails at `v`.
    C,
    /// (1°) fails at `v` for some sum value.
    D,
    /// (1°) fails at `v` for endpoint matches.
    E,
    /// (VI) fails at `v`.
    F,
}

/// Variables an event depends on, i.e. what resampling it redraws.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scope {
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub c3v: Vec<usize>,
}

impl Event {
    pub fn scope(self, g: &Graph, v: usize) -> Scope {
        let neighbours: Vec<usize> = g.neighbours(v).collect();
        let incident: Vec<usize> = g.incident(v).iter().map(|&(_, e)| e).collect();
        let closed = || {
            let mut c = neighbours.clone();
            c.push(v);
            c.sort_unstable();
            c
        };
        match self {
            Event::A | Event::F => Scope {
                c1: neighbours,
                ..Scope::default()
            },
            Event::B => Scope {
                c2: incident,
                ..Scope::default()
            },
            Event::C => Scope {
                c3v: neighbours,
                ..Scope::default()
            },
            Event::D => Scope {
                c1: closed(),
                c2: incident,
                ..Scope::default()
            },
            Event::E => Scope {
                c1: closed(),
                c2: incident,
                c3v: closed(),
            },
        }
    }
}

/// First violated event in vertex order, events at one vertex in [`Event`] order.
pub fn first_violated(report: &PropertyReport) -> Option<(usize, Event)> {
    let mut best: Option<(usize, Event)> = None;
    for check in &report.checks {
        for viol in &check.violators {
            let event = match (check.property, viol) {
                (Property::I, _) => Event::A,
                (Property::II, _) => Event::B,
                (Property::Two, _) => Event::C,
                (Property::One, Violator::Count { .. }) => Event::D,
                (Property::One, _) => Event::E,
                (Property::VI, _) => Event::F,
                _ => continue,
            };
            let key = (viol.vertex(), event);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    best
}

/// Redraws every variable in `scope` from `rng`: `c1` first, then `c2`, then
/// `c3v`, each in the scope's order. Keeps `c3e` equal to the sum formula.
pub fn resample_scope(g: &Graph, st: &mut LemmaState, p: &LemmaParams, scope: &Scope, rng: &mut Rng) {
    for &u in &scope.c1 {
        st.c1[u] = rng.random_range(1..=p.r1);
    }
    for &e in &scope.c2 {
        st.c2[e] = rng.random_range(1..=p.r2);
    }
    for &u in &scope.c3v {
        st.c3v[u] = rng.random_range(1..=p.r2);
    }
    let touched = scope
        .c1
        .iter()
        .flat_map(|&u| g.incident(u).iter().map(|&(_, e)| e))
        .chain(scope.c2.iter().copied());
    for e in touched {
        st.c3e[e] = st.edge_sum(g, e);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResampleOutcome {
    pub state: LemmaState,
    pub report: PropertyReport,
    /// Resampling steps performed.
    pub rounds: usize,
    /// All stage-one properties hold for `state`.
    pub valid: bool,
}

/// Samples stage one from `seed` and resamples violated events until every
/// stage-one property holds or `max_rounds` steps were taken.
///
/// Each step resamples the scope of the first violated event only. On budget
/// exhaustion the state with the fewest violators seen is returned.
pub fn resample_until_valid(g: &Graph, p: &LemmaParams, sp: &SParams, seed: u64, max_rounds: usize) -> ResampleOutcome {
    let mut rng = seeded(seed);
    let mut st = sample_with(g, p, &mut rng, seed);
    let mut best: Option<(usize, LemmaState, PropertyReport)> = None;
    for round in 0..=max_rounds {
        let report = check_properties(g, &st, sp, p, Stage::One);
        if report.all_pass() {
            return ResampleOutcome {
                state: st,
                report,
                rounds: round,
                valid: true,
            };
        }
        let count = report.violation_count();
        let (v, event) = first_violated(&report).expect("a failing report names a violator");
        if best.as_ref().is_none_or(|(c, _, _)| count < *c) {
            best = Some((count, st.clone(), report));
        }
        if round == max_rounds {
            break;
        }
        log::debug!("round {round}: resampling {event:?} at vertex {v} ({count} violators)");
        resample_scope(g, &mut st, p, &event.scope(g, v), &mut rng);
    }
    let (_, state, report) = best.expect("at least one round ran");
    ResampleOutcome {
        state,
        report,
        rounds: max_rounds,
        valid: false,
    }
}
