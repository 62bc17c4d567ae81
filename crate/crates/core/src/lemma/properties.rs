use rayon::prelude::*;
use serde::Serialize;

use super::params::{Caps, LemmaParams};
use super::score::{interval_index, s_of, SParams};
use super::state::{LemmaState, Stage};
use crate::graph::Graph;

/// The counted properties of the lemma. (I), (II), (VI), (1°) and (2°) concern
/// stage one; the rest are meaningful only after stage two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Property {
    I,
    II,
    III,
    IV,
    V,
    VI,
    #[serde(rename = "1°")]
    One,
    #[serde(rename = "2°")]
    Two,
    #[serde(rename = "3°")]
    Three,
    #[serde(rename = "4°")]
    Four,
}

impl Property {
    pub const STAGE_ONE: [Property; 5] = [Property::I, Property::II, Property::VI, Property::One, Property::Two];
    pub const ALL: [Property; 10] = [
        Property::I,
        Property::II,
        Property::III,
        Property::IV,
        Property::V,
        Property::VI,
        Property::One,
        Property::Two,
        Property::Three,
        Property::Four,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::I => "I",
            Property::II => "II",
            Property::III => "III",
            Property::IV => "IV",
            Property::V => "V",
            Property::VI => "VI",
            Property::One => "1°",
            Property::Two => "2°",
            Property::Three => "3°",
            Property::Four => "4°",
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// One offending site.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Violator {
    /// At `vertex`, `count` objects carry `value` (a colour, or an interval
    /// index α for (VI)).
    Count { vertex: usize, value: u64, count: usize },
    /// At `vertex`, `count` objects are exceptional; used for the endpoint
    /// match part of (1°) and for (III).
    Total { vertex: usize, count: usize },
    /// Edge `uv` breaking (V).
    Edge { u: usize, v: usize },
}

impl Violator {
    pub fn vertex(&self) -> usize {
        match *self {
            Violator::Count { vertex, .. } | Violator::Total { vertex, .. } => vertex,
            Violator::Edge { u, .. } => u,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapUse {
    pub label: &'static str,
    /// Bound enforced, slack included.
    pub cap: f64,
    /// Largest value seen over all vertices.
    pub observed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub property: Property,
    pub pass: bool,
    pub caps: Vec<CapUse>,
    pub violators: Vec<Violator>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub stage: Stage,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn get(&self, p: Property) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == p)
    }

    pub fn verdict(&self, p: Property) -> Option<bool> {
        self.get(p).map(|c| c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violators.len()).sum()
    }
}

// Per-vertex scan slots.
const I: usize = 0;
const II: usize = 1;
const VI: usize = 2;
const ONE_CLASS: usize = 3;
const ONE_MATCH: usize = 4;
const TWO: usize = 5;
const III: usize = 6;
const IV: usize = 7;
const THREE: usize = 8;
const FOUR: usize = 9;
const SLOTS: usize = 10;

struct Limits {
    /// `floor(cap · r)` for deviation caps, `floor(cap)` for count caps.
    int: [i64; SLOTS],
}

impl Limits {
    fn new(caps: &Caps, p: &LemmaParams) -> Self {
        let f = |x: f64| x.floor() as i64;
        let mut int = [0; SLOTS];
        int[I] = f(caps.i * f64::from(p.r1));
        int[II] = f(caps.ii * f64::from(p.r2));
        int[VI] = f(caps.vi);
        int[ONE_CLASS] = f(caps.one_class);
        int[ONE_MATCH] = f(caps.one_match);
        int[TWO] = f(caps.two);
        int[III] = f(caps.iii);
        int[IV] = f(caps.iv);
        int[THREE] = f(caps.three);
        int[FOUR] = f(caps.four);
        Limits { int }
    }
}

struct Scan {
    found: Vec<(usize, Violator)>,
    observed: [f64; SLOTS],
}

/// Evaluates the properties of `stage` against the caps of `p`.
///
/// Counting is exact integer arithmetic: the deviation tests of (I) and (II)
/// compare `|count·r − d|` with `floor(cap·r)`, so no fraction `d/r` is
/// rounded.
pub fn check_properties(g: &Graph, st: &LemmaState, sp: &SParams, p: &LemmaParams, stage: Stage) -> PropertyReport {
    let caps = p.caps();
    let limits = Limits::new(&caps, p);
    let alpha: Vec<u64> = (0..g.n())
        .map(|u| {
            let d = g.degree(u);
            if d > 0 && p.is_large(d) {
                interval_index(s_of(d, st.c1[u], sp), sp).expect("positive score")
            } else {
                0
            }
        })
        .collect();
    let width = (p.r3.max(p.r2).max(p.r1) as usize) + 1;
    let scans: Vec<Scan> = (0..g.n())
        .into_par_iter()
        .map_init(
            || vec![0usize; width],
            |buf, v| scan_vertex(g, st, p, stage, &limits, &alpha, buf, v),
        )
        .collect();

    let mut observed = [0.0f64; SLOTS];
    let mut found: [Vec<Violator>; SLOTS] = Default::default();
    for scan in scans {
        for (slot, o) in scan.observed.iter().enumerate() {
            observed[slot] = observed[slot].max(*o);
        }
        for (slot, viol) in scan.found {
            found[slot].push(viol);
        }
    }
    let [f_i, f_ii, f_vi, f_one_class, f_one_match, f_two, f_iii, f_iv, f_three, f_four] = found;

    let check = |property, caps: Vec<CapUse>, violators: Vec<Violator>| PropertyCheck {
        property,
        pass: violators.is_empty(),
        caps,
        violators,
    };
    let cap = |label, cap, observed| CapUse { label, cap, observed };

    let mut one = f_one_class;
    one.extend(f_one_match);
    let mut checks = vec![
        check(Property::I, vec![cap("|count − d/r1|", caps.i, observed[I])], f_i),
        check(Property::II, vec![cap("|count − d/r2|", caps.ii, observed[II])], f_ii),
        check(Property::VI, vec![cap("large neighbours per interval", caps.vi, observed[VI])], f_vi),
        check(
            Property::One,
            vec![
                cap("edges per sum value", caps.one_class, observed[ONE_CLASS]),
                cap("edges whose sum matches an endpoint", caps.one_match, observed[ONE_MATCH]),
            ],
            one,
        ),
        check(Property::Two, vec![cap("neighbours per c3 value", caps.two, observed[TWO])], f_two),
    ];
    if stage == Stage::Two {
        let v_viol: Vec<Violator> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, &(u, v))| st.c3v[u] == st.c3v[v] && st.c3e[e] != st.c3v[u])
            .map(|(_, &(u, v))| Violator::Edge { u, v })
            .collect();
        let v_count = v_viol.len() as f64;
        checks.extend([
            check(Property::III, vec![cap("edges off the sum formula", caps.iii, observed[III])], f_iii),
            check(Property::IV, vec![cap("edges per c3 value", caps.iv, observed[IV])], f_iv),
            check(Property::V, vec![cap("edges breaking c3 agreement", 0.0, v_count)], v_viol),
            check(Property::Three, vec![cap("non-H3 edges per c3 value", caps.three, observed[THREE])], f_three),
            check(Property::Four, vec![cap("H3 edges per c3 value", caps.four, observed[FOUR])], f_four),
        ]);
    }
    PropertyReport { stage, checks }
}

#[allow(clippy::too_many_arguments)]
fn scan_vertex(
    g: &Graph,
    st: &LemmaState,
    p: &LemmaParams,
    stage: Stage,
    limits: &Limits,
    alpha: &[u64],
    buf: &mut Vec<usize>,
    v: usize,
) -> Scan {
    let mut scan = Scan {
        found: Vec::new(),
        observed: [0.0; SLOTS],
    };
    let d = g.degree(v);
    let large = p.is_large(d);

    if large {
        for (slot, r, values) in [
            (I, p.r1, g.neighbours(v).map(|u| st.c1[u]).collect::<Vec<_>>()),
            (II, p.r2, g.incident(v).iter().map(|&(_, e)| st.c2[e]).collect()),
        ] {
            buf.iter_mut().for_each(|x| *x = 0);
            for x in values {
                buf[x as usize] += 1;
            }
            for value in 1..=r as usize {
                let count = buf[value];
                let dev = (count as i64 * i64::from(r) - d as i64).abs();
                scan.observed[slot] = scan.observed[slot].max(dev as f64 / f64::from(r));
                if dev > limits.int[slot] {
                    scan.found.push((
                        slot,
                        Violator::Count {
                            vertex: v,
                            value: value as u64,
                            count,
                        },
                    ));
                }
            }
        }
        let mut by_alpha: Vec<u64> = g.neighbours(v).filter(|&u| alpha[u] > 0).map(|u| alpha[u]).collect();
        by_alpha.sort_unstable();
        for run in by_alpha.chunk_by(|a, b| a == b) {
            let count = run.len();
            scan.observed[VI] = scan.observed[VI].max(count as f64);
            if count as i64 > limits.int[VI] {
                scan.found.push((
                    VI,
                    Violator::Count {
                        vertex: v,
                        value: run[0],
                        count,
                    },
                ));
            }
        }
    }

    let sums = g.incident(v).iter().map(|&(_, e)| st.edge_sum(g, e));
    tally(buf, &mut scan, limits, v, ONE_CLASS, p.r3, sums);
    let matches = g.incident(v).iter().filter(|&&(_, e)| st.in_h1(g, e)).count();
    total(&mut scan, ONE_MATCH, limits, v, matches);
    tally(buf, &mut scan, limits, v, TWO, p.r2, g.neighbours(v).map(|u| st.c3v[u]));

    if stage == Stage::Two {
        let exceptions = g
            .incident(v)
            .iter()
            .filter(|&&(_, e)| st.c3e[e] != st.edge_sum(g, e))
            .count();
        total(&mut scan, III, limits, v, exceptions);
        tally(buf, &mut scan, limits, v, IV, p.r3, g.incident(v).iter().map(|&(_, e)| st.c3e[e]));
        let (h3, rest): (Vec<usize>, Vec<usize>) =
            g.incident(v).iter().map(|&(_, e)| e).partition(|&e| st.in_h3(g, e));
        tally(buf, &mut scan, limits, v, THREE, p.r3, rest.iter().map(|&e| st.c3e[e]));
        tally(buf, &mut scan, limits, v, FOUR, p.r3, h3.iter().map(|&e| st.c3e[e]));
    }
    scan
}

/// Counts objects per value in `1..=range` and flags values above the limit.
#[allow(clippy::too_many_arguments)]
fn tally(
    buf: &mut [usize],
    scan: &mut Scan,
    limits: &Limits,
    v: usize,
    slot: usize,
    range: u32,
    values: impl Iterator<Item = u32>,
) {
    buf.iter_mut().for_each(|x| *x = 0);
    for x in values {
        buf[x as usize] += 1;
    }
    for (value, &count) in buf.iter().enumerate().take(range as usize + 1).skip(1) {
        scan.observed[slot] = scan.observed[slot].max(count as f64);
        if count as i64 > limits.int[slot] {
            scan.found.push((
                slot,
                Violator::Count {
                    vertex: v,
                    value: value as u64,
                    count,
                },
            ));
        }
    }
}

fn total(scan: &mut Scan, slot: usize, limits: &Limits, v: usize, count: usize) {
    scan.observed[slot] = scan.observed[slot].max(count as f64);
    if count as i64 > limits.int[slot] {
        scan.found.push((slot, Violator::Total { vertex: v, count }));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::lemma::{sample_stage_one, Mode};

    #[test]
    fn edgeless_passes_everything() {
        let g = Graph::empty(5);
        let p = LemmaParams::new(0, Mode::Permissive, 1.0).unwrap();
        let sp = SParams::new(&p);
        let mut st = sample_stage_one(&g, &p, 1);
        st.stage = Stage::Two;
        let r = check_properties(&g, &st, &sp, &p, Stage::Two);
        assert!(r.all_pass());
        assert_eq!(r.checks.len(), 10);
    }

    #[test]
    fn monochrome_star_fails_i_at_centre() {
        let g = generate(&GraphKind::Star { leaves: 400_000 }).unwrap();
        let p = LemmaParams::new(g.max_degree(), Mode::Strict, 1.0).unwrap();
        assert!(p.strict);
        let sp = SParams::new(&p);
        let mut st = sample_stage_one(&g, &p, 3);
        st.c1.iter_mut().skip(1).for_each(|c| *c = 1);
        let r = check_properties(&g, &st, &sp, &p, Stage::One);
        let i = r.get(Property::I).unwrap();
        assert!(!i.pass);
        assert!(i.violators.iter().all(|v| v.vertex() == 0));
        assert!(i.violators.contains(&Violator::Count {
            vertex: 0,
            value: 1,
            count: 400_000
        }));
    }

    #[test]
    fn v_lists_the_offending_edge() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p = LemmaParams::new(2, Mode::Permissive, 1.0).unwrap();
        let sp = SParams::new(&p);
        let mut st = sample_stage_one(&g, &p, 0);
        st.c3v = vec![2, 2, 1];
        st.c3e = vec![1, 1];
        st.stage = Stage::Two;
        let r = check_properties(&g, &st, &sp, &p, Stage::Two);
        assert_eq!(r.get(Property::V).unwrap().violators, vec![Violator::Edge { u: 0, v: 1 }]);
    }
}
