//! Seeded experiment sweeps over graph families.
//!
//! An [`ExperimentSpec`] names a family, a parameter grid and a seed list.
//! Exhaustive small-graph families go to the exact solver and produce a
//! conjecture sweep; every other family goes through [`construct`] and
//! produces one [`RunRecord`] per (graph, seed).
//!
//! Output is a pure function of the spec: records are assembled by run index
//! and wall time is only reported when `record_wall_time` is set.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colouring::{check_nsd, check_proper, TotalColouring};
use crate::construct::{construct, theorem_bound, CapRow, RunConfig, SpanBudget};
use crate::exact::{conjecture_sweep, SweepReport, Verdict};
use crate::graph::{connected_graphs, generate, labelled_graphs, Graph, GraphError, GraphKind};
use crate::lemma::{Mode, Property};
use crate::rng::derive_seed;

/// Version of the JSON summary layout.
pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// Columns of the construct CSV, in order.
pub const RECORD_COLUMNS: [&str; 19] = [
    "graph-id",
    "seed",
    "n",
    "m",
    "Δ",
    "mode",
    "downgraded",
    "span",
    "Δ+3",
    "theorem-bound",
    "span/Δ",
    "3Δ+10",
    "fallback",
    "attempts",
    "proper",
    "nsd",
    "cap-failures",
    "verdict",
    "wall-ms",
];

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

/// Graph family with its parameter grid.
///
/// `connected` and `labelled` are exhaustive over all graphs on `1..=max_n`
/// vertices and are solved exactly; the rest are constructed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    Random { n: Vec<usize>, p: Vec<f64> },
    Regular { n: Vec<usize>, d: Vec<usize> },
    Complete { n: Vec<usize> },
    Cycle { n: Vec<usize> },
    Path { n: Vec<usize> },
    Star { leaves: Vec<usize> },
    Connected { max_n: usize },
    Labelled { max_n: usize },
}

/// A generated graph, the seed it runs with, and a stable identifier.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub seed: u64,
    pub graph: Graph,
}

impl Family {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Family::Connected { .. } | Family::Labelled { .. })
    }

    fn grid_is_empty(&self) -> bool {
        match self {
            Family::Random { n, p } => n.is_empty() || p.is_empty(),
            Family::Regular { n, d } => n.is_empty() || d.is_empty(),
            Family::Complete { n } | Family::Cycle { n } | Family::Path { n } => n.is_empty(),
            Family::Star { leaves } => leaves.is_empty(),
            Family::Connected { max_n } | Family::Labelled { max_n } => *max_n == 0,
        }
    }

    /// One instance per (graph, seed). Random kinds draw a fresh graph per
    /// seed; fixed kinds repeat the same graph under each seed.
    pub fn instances(&self, seeds: &[u64]) -> Result<Vec<Instance>, GraphError> {
        let mut out = Vec::new();
        match self {
            Family::Random { n, p } => {
                for &n in n {
                    for &p in p {
                        for &seed in seeds {
                            let graph = generate(&GraphKind::Random { n, p, seed })?;
                            out.push(Instance { id: format!("random-n{n}-p{p}-s{seed}"), seed, graph });
                        }
                    }
                }
            }
            Family::Regular { n, d } => {
                for &n in n {
                    for &d in d {
                        for &seed in seeds {
                            let graph = generate(&GraphKind::Regular { n, d, seed })?;
                            out.push(Instance { id: format!("regular-n{n}-d{d}-s{seed}"), seed, graph });
                        }
                    }
                }
            }
            _ => {
                for (id, graph) in self.graphs(&[])? {
                    for &seed in seeds {
                        out.push(Instance { id: id.clone(), seed, graph: graph.clone() });
                    }
                }
            }
        }
        Ok(out)
    }

    /// The distinct graphs of the family; `seeds` only matters for random kinds.
    pub fn graphs(&self, seeds: &[u64]) -> Result<Vec<(String, Graph)>, GraphError> {
        let fixed = |name: &str, ns: &[usize], kind: fn(usize) -> GraphKind| {
            ns.iter()
                .map(|&n| Ok((format!("{name}-{n}"), generate(&kind(n))?)))
                .collect::<Result<Vec<_>, GraphError>>()
        };
        let exhaustive = |name: &str, max_n: usize, all: fn(usize) -> Vec<Graph>| {
            (1..=max_n)
                .flat_map(|n| all(n).into_iter().enumerate().map(move |(i, g)| (format!("{name}-n{n}-{i}"), g)))
                .collect()
        };
        match self {
            Family::Random { .. } | Family::Regular { .. } => {
                Ok(self.instances(seeds)?.into_iter().map(|i| (i.id, i.graph)).collect())
            }
            Family::Complete { n } => fixed("complete", n, |n| GraphKind::Complete { n }),
            Family::Cycle { n } => fixed("cycle", n, |n| GraphKind::Cycle { n }),
            Family::Path { n } => fixed("path", n, |n| GraphKind::Path { n }),
            Family::Star { leaves } => fixed("star", leaves, |leaves| GraphKind::Star { leaves }),
            Family::Connected { max_n } => Ok(exhaustive("connected", *max_n, connected_graphs)),
            Family::Labelled { max_n } => Ok(exhaustive("labelled", *max_n, labelled_graphs)),
        }
    }
}

fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

/// Parses a family descriptor with its seeds.
///
/// Forms: `connected:N`, `labelled:N`, `complete:A..B`, `cycle:A..B`,
/// `path:A..B`, `star:A..B` (a single number is a one-point range),
/// `random:n:p:count:seed` and `regular:n:d:count:seed`. Random kinds get
/// `count` seeds `derive_seed(seed, i)`; fixed kinds get the single seed 0.
pub fn parse_family(s: &str) -> Result<(Family, Vec<u64>), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let field = |i: usize| parts.get(i).copied().ok_or_else(|| format!("{s:?}: missing field {}", i + 1));
    let seeds = |count: &str, base: &str| -> Result<Vec<u64>, String> {
        let count: u64 = count.parse().map_err(|e| format!("count {count:?}: {e}"))?;
        let base: u64 = base.parse().map_err(|e| format!("seed {base:?}: {e}"))?;
        Ok((0..count).map(|i| derive_seed(base, i)).collect())
    };
    let arity = |k: usize| {
        if parts.len() == k {
            Ok(())
        } else {
            Err(format!("{s:?}: expected {} fields after the kind", k - 1))
        }
    };
    let max_n = || field(1)?.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let family = match parts[0] {
        "connected" => {
            arity(2)?;
            Family::Connected { max_n: max_n()? }
        }
        "labelled" => {
            arity(2)?;
            Family::Labelled { max_n: max_n()? }
        }
        "complete" | "cycle" | "path" | "star" => {
            arity(2)?;
            let ns = parse_range(field(1)?)?;
            match parts[0] {
                "complete" => Family::Complete { n: ns },
                "cycle" => Family::Cycle { n: ns },
                "path" => Family::Path { n: ns },
                _ => Family::Star { leaves: ns },
            }
        }
        "random" => {
            arity(5)?;
            let n = field(1)?.parse().map_err(|e| format!("n: {e}"))?;
            let p = field(2)?.parse().map_err(|e| format!("p: {e}"))?;
            return Ok((Family::Random { n: vec![n], p: vec![p] }, seeds(field(3)?, field(4)?)?));
        }
        "regular" => {
            arity(5)?;
            let n = field(1)?.parse().map_err(|e| format!("n: {e}"))?;
            let d = field(2)?.parse().map_err(|e| format!("d: {e}"))?;
            return Ok((Family::Regular { n: vec![n], d: vec![d] }, seeds(field(3)?, field(4)?)?));
        }
        other => return Err(format!("unknown family kind {other:?}")),
    };
    Ok((family, vec![0]))
}

fn default_slack() -> f64 {
    2.0
}

fn default_rounds() -> usize {
    200
}

fn default_retries() -> usize {
    2
}

/// JSON experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub name: String,
    pub family: Family,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default = "default_retries")]
    pub retries: usize,
    #[serde(default)]
    pub span_budget: SpanBudget,
    /// Runs over this many seconds are flagged; they are not interrupted.
    #[serde(default)]
    pub time_budget_secs: Option<f64>,
    /// Adds wall time to the outputs, which then differ between reruns.
    #[serde(default)]
    pub record_wall_time: bool,
    /// Worker threads; all available cores when absent.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Node budget per graph for exhaustive families.
    #[serde(default)]
    pub node_budget: Option<u64>,
}

impl ExperimentSpec {
    pub fn new(family: Family, seeds: Vec<u64>) -> Self {
        ExperimentSpec {
            name: String::new(),
            family,
            seeds,
            mode: Mode::Permissive,
            slack: default_slack(),
            rounds: default_rounds(),
            retries: default_retries(),
            span_budget: SpanBudget::default(),
            time_budget_secs: None,
            record_wall_time: false,
            workers: None,
            node_budget: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.family.grid_is_empty() {
            return Err(ExperimentError::Invalid("parameter grid is empty".into()));
        }
        if self.seeds.is_empty() {
            return Err(ExperimentError::Invalid("seed list is empty".into()));
        }
        if !self.slack.is_finite() || self.slack < 1.0 {
            return Err(ExperimentError::Invalid(format!("slack must be >= 1, got {}", self.slack)));
        }
        if self.workers == Some(0) {
            return Err(ExperimentError::Invalid("workers must be positive".into()));
        }
        Ok(())
    }

    /// Replaces the seed list with `derive_seed(global, i)` for each position `i`.
    pub fn reseed(&mut self, global: u64) {
        for (i, s) in self.seeds.iter_mut().enumerate() {
            *s = derive_seed(global, i as u64);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunVerdict {
    Valid,
    Invalid,
    Error(String),
}

impl std::fmt::Display for RunVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunVerdict::Valid => f.write_str("valid"),
            RunVerdict::Invalid => f.write_str("invalid"),
            RunVerdict::Error(e) => write!(f, "error: {e}"),
        }
    }
}

/// Outcome of one constructed run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub graph_id: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    /// Effective mode, after any downgrade.
    pub mode: Mode,
    pub downgraded: bool,
    pub span: Option<u32>,
    pub delta_plus_3: u32,
    pub theorem_bound: f64,
    pub span_ratio: Option<f64>,
    /// `span ≤ 3Δ + 10`.
    pub within_3delta_10: Option<bool>,
    pub fallback: bool,
    pub attempts: usize,
    pub proper: bool,
    pub nsd: bool,
    /// Properties failing in the lemma state of the final attempt.
    pub cap_failures: Vec<Property>,
    /// Caps against observed values in the final attempt.
    pub caps: Vec<CapRow>,
    pub verdict: RunVerdict,
    pub wall_ms: Option<f64>,
    pub over_time_budget: Option<bool>,
}

impl RunRecord {
    fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<String>| x.unwrap_or_default();
        vec![
            self.graph_id.clone(),
            self.seed.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.delta.to_string(),
            self.mode.to_string(),
            self.downgraded.to_string(),
            opt(self.span.map(|s| s.to_string())),
            self.delta_plus_3.to_string(),
            format!("{:.3}", self.theorem_bound),
            opt(self.span_ratio.map(|r| format!("{r:.4}"))),
            opt(self.within_3delta_10.map(|b| b.to_string())),
            self.fallback.to_string(),
            self.attempts.to_string(),
            self.proper.to_string(),
            self.nsd.to_string(),
            self.cap_failures.iter().map(|p| p.id()).collect::<Vec<_>>().join(";"),
            self.verdict.to_string(),
            opt(self.wall_ms.map(|w| format!("{w:.1}"))),
        ]
    }
}

/// A constructed run: the record plus what is needed to re-verify it.
#[derive(Clone, Debug)]
pub struct RunArtifact {
    pub record: RunRecord,
    pub graph: Graph,
    pub colouring: Option<TotalColouring>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Summary {
    Construct {
        runs: usize,
        valid: usize,
        success_rate: f64,
        max_span_ratio: Option<f64>,
        over_3delta_10: usize,
        fallbacks: usize,
        downgraded: usize,
        /// Fraction of runs in which each property failed its cap.
        cap_violation_frequency: BTreeMap<String, f64>,
        over_time_budget: Option<usize>,
    },
    Exact {
        graphs: usize,
        pass: usize,
        violations: usize,
        errors: usize,
        violating_ids: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryDoc {
    pub schema_version: u32,
    pub name: String,
    pub spec: ExperimentSpec,
    pub summary: Summary,
    /// Full records, constructed families only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<RunRecord>,
}

#[derive(Clone, Debug)]
pub enum ExperimentOutput {
    Construct { spec: ExperimentSpec, runs: Vec<RunArtifact> },
    Exact { spec: ExperimentSpec, report: SweepReport },
}

impl ExperimentOutput {
    pub fn records(&self) -> Vec<&RunRecord> {
        match self {
            ExperimentOutput::Construct { runs, .. } => runs.iter().map(|r| &r.record).collect(),
            ExperimentOutput::Exact { .. } => Vec::new(),
        }
    }

    /// Construct families: [`RECORD_COLUMNS`]. Exhaustive families: the
    /// conjecture sweep columns.
    pub fn csv(&self) -> String {
        match self {
            ExperimentOutput::Exact { report, .. } => report.to_csv(),
            ExperimentOutput::Construct { runs, .. } => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(RECORD_COLUMNS).expect("writing to memory");
                for r in runs {
                    w.write_record(r.record.csv_row()).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8")
            }
        }
    }

    pub fn summary(&self) -> SummaryDoc {
        match self {
            ExperimentOutput::Exact { spec, report } => SummaryDoc {
                schema_version: SUMMARY_SCHEMA_VERSION,
                name: spec.name.clone(),
                spec: spec.clone(),
                summary: Summary::Exact {
                    graphs: report.rows.len(),
                    pass: report.rows.iter().filter(|r| r.verdict == Verdict::Pass).count(),
                    violations: report.violations().count(),
                    errors: report.errors(),
                    violating_ids: report.violations().map(|r| r.graph_id.clone()).collect(),
                },
                records: Vec::new(),
            },
            ExperimentOutput::Construct { spec, runs } => {
                let records: Vec<RunRecord> = runs.iter().map(|r| r.record.clone()).collect();
                let count = records.len();
                let valid = records.iter().filter(|r| r.verdict == RunVerdict::Valid).count();
                let frequency = Property::ALL
                    .iter()
                    .map(|&p| {
                        let hits = records.iter().filter(|r| r.cap_failures.contains(&p)).count();
                        (p.id().to_string(), ratio(hits, count))
                    })
                    .collect();
                SummaryDoc {
                    schema_version: SUMMARY_SCHEMA_VERSION,
                    name: spec.name.clone(),
                    spec: spec.clone(),
                    summary: Summary::Construct {
                        runs: count,
                        valid,
                        success_rate: ratio(valid, count),
                        max_span_ratio: records.iter().filter_map(|r| r.span_ratio).reduce(f64::max),
                        over_3delta_10: records.iter().filter(|r| r.within_3delta_10 == Some(false)).count(),
                        fallbacks: records.iter().filter(|r| r.fallback).count(),
                        downgraded: records.iter().filter(|r| r.downgraded).count(),
                        cap_violation_frequency: frequency,
                        over_time_budget: spec
                            .record_wall_time
                            .then(|| records.iter().filter(|r| r.over_time_budget == Some(true)).count()),
                    },
                    records,
                }
            }
        }
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serialises")
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Runs the whole spec. Individual run failures become records; only an
/// invalid spec or an ungeneratable graph aborts.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput, ExperimentError> {
    spec.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = spec.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| ExperimentError::Pool(e.to_string()))?;
    if spec.family.is_exhaustive() {
        let family = spec.family.graphs(&spec.seeds)?;
        let report = pool.install(|| conjecture_sweep(&family, spec.node_budget));
        return Ok(ExperimentOutput::Exact { spec: spec.clone(), report });
    }
    let instances = spec.family.instances(&spec.seeds)?;
    let runs = pool.install(|| instances.into_par_iter().map(|inst| run_one(spec, inst)).collect());
    Ok(ExperimentOutput::Construct { spec: spec.clone(), runs })
}

fn run_one(spec: &ExperimentSpec, inst: Instance) -> RunArtifact {
    let g = inst.graph;
    let delta = g.max_degree();
    let config = RunConfig {
        mode: spec.mode,
        slack: spec.slack,
        seed: inst.seed,
        lemma_rounds: spec.rounds,
        h_rounds: spec.rounds,
        retries: spec.retries,
        span_budget: spec.span_budget,
        fault_cap: None,
    };
    let start = Instant::now();
    let result = construct(&g, &config);
    let elapsed = start.elapsed().as_secs_f64();
    let over = spec.time_budget_secs.map(|b| elapsed > b);
    if over == Some(true) {
        log::warn!("{} seed {} took {elapsed:.2}s, over the time budget", inst.id, inst.seed);
    }
    let mut record = RunRecord {
        graph_id: inst.id,
        seed: inst.seed,
        n: g.n(),
        m: g.m(),
        delta,
        mode: spec.mode,
        downgraded: false,
        span: None,
        delta_plus_3: delta as u32 + 3,
        theorem_bound: theorem_bound(delta),
        span_ratio: None,
        within_3delta_10: None,
        fallback: false,
        attempts: 0,
        proper: false,
        nsd: false,
        cap_failures: Vec::new(),
        caps: Vec::new(),
        verdict: RunVerdict::Invalid,
        wall_ms: spec.record_wall_time.then_some(elapsed * 1000.0),
        over_time_budget: if spec.record_wall_time { over } else { None },
    };
    let colouring = match result {
        Err(e) => {
            record.verdict = RunVerdict::Error(e.to_string());
            None
        }
        Ok(out) => {
            let r = &out.report;
            let c = out.colouring;
            record.mode = r.mode;
            record.downgraded = r.downgraded;
            record.fallback = r.fallback;
            record.attempts = r.attempts.len();
            if let Some(lemma) = r.attempts.last().and_then(|a| a.lemma.as_ref()) {
                record.caps = lemma.caps.clone();
                let mut failing: Vec<Property> = lemma.caps.iter().filter(|c| !c.pass).map(|c| c.property).collect();
                failing.dedup();
                record.cap_failures = failing;
            }
            let span = c.span();
            record.span = Some(span);
            record.span_ratio = (delta > 0).then(|| f64::from(span) / delta as f64);
            record.within_3delta_10 = Some(span as usize <= 3 * delta + 10);
            record.proper = check_proper(&g, &c).is_empty();
            record.nsd = check_nsd(&g, &c).is_empty();
            if record.proper && record.nsd {
                record.verdict = RunVerdict::Valid;
            }
            Some(c)
        }
    };
    RunArtifact { record, graph: g, colouring }
}
