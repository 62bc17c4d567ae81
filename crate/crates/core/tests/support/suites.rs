//! Property suites, each run for a fixed number of generated cases with a
//! deterministic generator. Shared by the `invariants` tests and the
//! acceptance harness.

#![allow(dead_code)]

use std::sync::atomic::{AtomicU32, Ordering};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use nsd_total::colouring::{check_proper, verify, weighted_degree, weighted_degrees, Object, TotalColouring};
use nsd_total::construct::{
    construct, greedy_nsd, lift, properize, recolour_h, repair_small_degree, RepairGraph, Reserve, RunConfig,
};
use nsd_total::graph::Graph;
use nsd_total::lemma::{
    b_unit, interval_index, resample_scope, run_lemma, s_of, sample_stage_one, Event, LemmaParams, Mode, SParams,
};
use nsd_total::rng::seeded;

use super::{arb_coloured, arb_graph, interval, score};

pub const CASES: u32 = 1000;

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: [Suite; 8] = [
    ("sum identity", sum_identity),
    ("verifier mutation detection", mutation_detection),
    ("forced collisions are reported", forced_collision),
    ("resampling scope discipline", scope_discipline),
    ("class confinement", class_confinement),
    ("sum-shift locality", sum_shift_locality),
    ("S(v) locality", score_locality),
    ("construct output is always valid", construct_always_valid),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let ran = AtomicU32::new(0);
    runner(cases)
        .run(&strategy, |value| {
            ran.fetch_add(1, Ordering::Relaxed);
            test(value)
        })
        .map_err(|e| e.to_string())?;
    match ran.into_inner() {
        n if n >= cases => Ok(()),
        n => Err(format!("only {n} of {cases} cases ran")),
    }
}

/// Weighted degrees add up to `Σ c(v) + 2 Σ c(e)` and match a per-vertex sum.
pub fn sum_identity(cases: u32) -> Result<(), String> {
    run(cases, arb_coloured(9, 15), |(g, vertex, edge)| {
        let c = TotalColouring::new(&g, vertex.clone(), edge.clone(), 15).unwrap();
        let sums = weighted_degrees(&g, &c);
        prop_assert_eq!(sums.iter().sum::<u64>(), super::total_weight(&vertex, &edge));
        for v in 0..g.n() {
            let by_hand = u64::from(vertex[v])
                + g.edges()
                    .iter()
                    .zip(&edge)
                    .filter(|(&(a, b), _)| a == v || b == v)
                    .map(|(_, &x)| u64::from(x))
                    .sum::<u64>();
            prop_assert_eq!(weighted_degree(&g, &c, v).unwrap(), by_hand);
            prop_assert_eq!(sums[v], by_hand);
        }
        Ok(())
    })
}

fn objects(g: &Graph) -> Vec<Object> {
    (0..g.n()).map(Object::Vertex).chain((0..g.m()).map(|e| Object::edge(g, e))).collect()
}

fn recoloured(g: &Graph, c: &TotalColouring, x: Object, colour: u32, k: u32) -> TotalColouring {
    let mut out = TotalColouring::new(g, c.vertex_colours().to_vec(), c.edge_colours().to_vec(), k).unwrap();
    out.set(x, g, colour).unwrap();
    out
}

/// Changing one colour of a valid colouring only produces violations that
/// involve the changed object.
pub fn mutation_detection(cases: u32) -> Result<(), String> {
    let strategy = arb_graph(9).prop_flat_map(|g| {
        let count = g.n() + g.m();
        (Just(g), 0..count, 1u32..=40)
    });
    run(cases, strategy, |(g, pick, colour)| {
        let c = greedy_nsd(&g);
        prop_assert!(verify(&g, &c).is_empty());
        let x = objects(&g)[pick];
        let bad = recoloured(&g, &c, x, colour, 40.max(c.span()));
        for v in verify(&g, &bad) {
            prop_assert!(v.witnesses.iter().any(|w| w.touches(&x)), "{:?} after changing {:?}", v, x);
        }
        Ok(())
    })
}

/// Copying a colour between two objects that must differ is always reported,
/// with both objects among the witnesses.
pub fn forced_collision(cases: u32) -> Result<(), String> {
    let strategy = arb_graph(9)
        .prop_filter("needs an edge", |g| g.m() > 0)
        .prop_flat_map(|g| {
            let m = g.m();
            (Just(g), 0..m, 0..5usize)
        });
    run(cases, strategy, |(g, e, how)| {
        let c = greedy_nsd(&g);
        let (u, v) = g.edge(e);
        let edge = Object::edge(&g, e);
        let (x, y) = match how {
            0 => (Object::Vertex(u), Object::Vertex(v)),
            1 => (Object::Vertex(u), edge),
            2 => (edge, Object::Vertex(v)),
            _ => {
                // another edge at u or v, if any
                let other = g
                    .incident(u)
                    .iter()
                    .chain(g.incident(v))
                    .map(|&(_, f)| f)
                    .find(|&f| f != e);
                match other {
                    Some(f) => (edge, Object::edge(&g, f)),
                    None => (Object::Vertex(u), edge),
                }
            }
        };
        let colour = match y {
            Object::Vertex(w) => c.vertex_colour(w),
            Object::Edge(a, b) => c.edge_colour(g.edge_id(a, b).unwrap()),
        };
        let bad = recoloured(&g, &c, x, colour, c.span());
        let found = check_proper(&g, &bad)
            .iter()
            .any(|viol| viol.witnesses.contains(&x) && viol.witnesses.contains(&y));
        prop_assert!(found, "{:?} = {:?} not reported", x, y);
        Ok(())
    })
}

const EVENTS: [Event; 6] = [Event::A, Event::B, Event::C, Event::D, Event::E, Event::F];

/// One resampling step changes only the variables in the event's scope, and
/// `c3` on edges only where the edge's sum changed.
pub fn scope_discipline(cases: u32) -> Result<(), String> {
    let strategy = arb_graph(10).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), 0..n, 0..6usize, any::<u64>(), any::<u64>())
    });
    run(cases, strategy, |(g, v, event, seed, step)| {
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 1.0).unwrap();
        let before = sample_stage_one(&g, &p, seed);
        let scope = EVENTS[event].scope(&g, v);
        let mut after = before.clone();
        resample_scope(&g, &mut after, &p, &scope, &mut seeded(step));
        for u in 0..g.n() {
            if !scope.c1.contains(&u) {
                prop_assert_eq!(before.c1[u], after.c1[u]);
            }
            if !scope.c3v.contains(&u) {
                prop_assert_eq!(before.c3v[u], after.c3v[u]);
            }
        }
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if !scope.c2.contains(&e) {
                prop_assert_eq!(before.c2[e], after.c2[e]);
            }
            prop_assert_eq!(after.c3e[e], after.c1[a] + after.c1[b] + after.c2[e]);
            let untouched = !scope.c2.contains(&e) && !scope.c1.contains(&a) && !scope.c1.contains(&b);
            if untouched {
                prop_assert_eq!(before.c3e[e], after.c3e[e]);
            }
        }
        Ok(())
    })
}

fn in_class(layout_top: u32, width: u32, colour: u32) -> bool {
    colour <= layout_top && colour + width > layout_top
}

/// Lifting puts every object at the top of its class; properizing keeps every
/// object in its class and yields a proper colouring.
pub fn class_confinement(cases: u32) -> Result<(), String> {
    let strategy = (arb_graph(18), any::<u64>(), any::<bool>());
    run(cases, strategy, |(g, seed, compact)| {
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 2.0).unwrap();
        let lemma = run_lemma(&g, &p, seed, 20);
        let st = lemma.state();
        let b = b_unit(p.delta) as u32;
        let lifted = lift(st, p.r3, b);
        for v in 0..g.n() {
            prop_assert_eq!(lifted.vertex[v], b * st.c3v[v]);
        }
        for e in 0..g.m() {
            prop_assert_eq!(lifted.edge[e], b * st.c3e[e]);
        }
        let (cs, _) = match properize(&g, &lifted, compact) {
            Ok(x) => x,
            Err(e) => {
                prop_assert!(!compact, "compact properize failed: {}", e);
                return Ok(());
            }
        };
        prop_assert_eq!(&cs.class_v, &lifted.class_v);
        prop_assert_eq!(&cs.class_e, &lifted.class_e);
        for v in 0..g.n() {
            let beta = cs.class_v[v];
            prop_assert!(in_class(cs.layout.top(beta), cs.layout.width(beta), cs.vertex[v]));
        }
        for e in 0..g.m() {
            let beta = cs.class_e[e];
            prop_assert!(in_class(cs.layout.top(beta), cs.layout.width(beta), cs.edge[e]));
        }
        prop_assert!(check_proper(&g, &cs.to_colouring(&g)).is_empty());
        Ok(())
    })
}

/// Recolouring one repair edge moves exactly its endpoints' weighted degrees,
/// each by the colour change, uses a colour above everything in use, and
/// keeps the colouring proper; so does the small-degree repair.
pub fn sum_shift_locality(cases: u32) -> Result<(), String> {
    let strategy = arb_graph(12)
        .prop_filter("needs an edge", |g| g.m() > 0)
        .prop_flat_map(|g| {
            let m = g.m();
            (Just(g), 0..m, any::<u64>())
        });
    run(cases, strategy, |(g, e, seed)| {
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 2.0).unwrap();
        let lemma = run_lemma(&g, &p, seed, 20);
        let lifted = lift(lemma.state(), p.r3, b_unit(p.delta) as u32);
        let (mut cs, _) = properize(&g, &lifted, true).unwrap();
        let before = cs.sums(&g);
        let old = cs.edge[e];
        let span = cs.span();
        let h = RepairGraph {
            edges: vec![e],
            max_degree: 1,
            cap: 1,
            rounds: 0,
            within_cap: true,
        };
        let risky = vec![Vec::new(); g.n()];
        if recolour_h(&g, &mut cs, &h, &risky, &p, Reserve::Open { start: span + 1 }).is_err() {
            return Ok(());
        }
        let new = cs.edge[e];
        prop_assert!(new > span);
        let after = cs.sums(&g);
        let (u, v) = g.edge(e);
        for w in 0..g.n() {
            let expected = if w == u || w == v {
                before[w] - u64::from(old) + u64::from(new)
            } else {
                before[w]
            };
            prop_assert_eq!(after[w], expected);
        }
        prop_assert!(check_proper(&g, &cs.to_colouring(&g)).is_empty());
        repair_small_degree(&g, &mut cs, &p, true).unwrap();
        prop_assert!(check_proper(&g, &cs.to_colouring(&g)).is_empty());
        Ok(())
    })
}

/// `S(v)` matches the rational oracle and lands in the oracle's interval;
/// resampling a neighbourhood leaves every score outside it unchanged.
pub fn score_locality(cases: u32) -> Result<(), String> {
    let strategy = (1usize..20_000).prop_flat_map(|delta| {
        let (r1, _, _) = super::palettes(delta);
        (Just(delta), 0..=delta, 1..=r1 as u32)
    });
    run(cases, strategy, |(delta, d, c1v)| {
        let p = LemmaParams::new(delta, Mode::Permissive, 1.0).unwrap();
        let sp = SParams::new(&p);
        let s = s_of(d, c1v, &sp);
        let oracle = score(delta, d, c1v);
        let exact = num_rational::BigRational::new((*s.numer()).into(), (*s.denom()).into());
        prop_assert_eq!(exact, oracle.clone());
        if d > 0 {
            prop_assert_eq!(interval_index(s, &sp).unwrap(), interval(&oracle, delta));
        }
        Ok(())
    })?;
    let strategy = arb_graph(10).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), 0..n, any::<u64>(), any::<u64>())
    });
    run(cases, strategy, |(g, v, seed, step)| {
        let p = LemmaParams::new(g.max_degree(), Mode::Permissive, 1.0).unwrap();
        let sp = SParams::new(&p);
        let scores = |c1: &[u32]| -> Vec<_> { (0..g.n()).map(|w| s_of(g.degree(w), c1[w], &sp)).collect() };
        let mut st = sample_stage_one(&g, &p, seed);
        let before = scores(&st.c1);
        let scope = Event::E.scope(&g, v);
        resample_scope(&g, &mut st, &p, &scope, &mut seeded(step));
        let after = scores(&st.c1);
        for w in (0..g.n()).filter(|w| !scope.c1.contains(w)) {
            prop_assert_eq!(before[w], after[w]);
        }
        Ok(())
    })
}

/// The full pipeline, fallback included, always ends verifier-clean, in both
/// modes.
pub fn construct_always_valid(cases: u32) -> Result<(), String> {
    let strategy = (arb_graph(24), any::<u64>(), any::<bool>());
    run(cases, strategy, |(g, seed, strict)| {
        let config = RunConfig {
            mode: if strict { Mode::Strict } else { Mode::Permissive },
            seed,
            lemma_rounds: 20,
            h_rounds: 20,
            ..RunConfig::default()
        };
        let out = construct(&g, &config).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(verify(&g, &out.colouring).is_empty());
        Ok(())
    })
}
