//! The constructive pipeline: lemma colourings are lifted into colour classes,
//! made proper class by class, and the weighted degrees are then separated by
//! recolouring a sparse random subgraph with fresh colours and finally
//! repairing the small-degree vertices.
//!
//! Every output passes the verifier. In permissive mode a failed attempt is
//! retried with doubled slack, and after the last retry [`greedy_nsd`] takes
//! over; the report says which path produced the colouring.

mod fallback;
mod properize;
mod repair;
mod risky;
mod state;

pub use fallback::greedy_nsd;
pub use properize::{properize, ProperizeStats};
pub use repair::{large_tie, recolour_h, repair_small_degree, select_h, RecolourStats, RepairGraph, RepairStats, Reserve};
pub use risky::{compute_risky, RiskParams};
pub use state::{lift, ClassLayout, ConstructionState};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colouring::{check_proper, verify, TotalColouring};
use crate::graph::Graph;
use crate::lemma::{b_unit, run_lemma, LemmaError, LemmaParams, LemmaRun, Mode, Property};
use crate::rng::derive_seed;

#[derive(Debug, Error, PartialEq)]
pub enum ConstructError {
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error("lemma engine did not reach a valid state within the round budget")]
    LemmaFailed,
    #[error("class {class} needs {needed} colours but the class width is {b}")]
    ClassTooWide { class: u32, needed: u32, b: u32 },
    #[error("temporary colouring is not proper after properizing")]
    ImproperAfterProperize,
    #[error("repair subgraph has maximum degree {max_degree} above the cap {cap}")]
    HCapExceeded { max_degree: usize, cap: usize },
    #[error("reserve of {size} colours is below the required {required}")]
    ReserveTooSmall { size: usize, required: usize },
    #[error("no reserve colour fits edge {edge}")]
    ReserveExhausted { edge: usize },
    #[error("large adjacent vertices {u} and {v} keep equal weighted degrees")]
    LargeTie { u: usize, v: usize },
    #[error("no colour in 1..={pool} repairs vertex {vertex}")]
    RepairPoolExhausted { vertex: usize, pool: u32 },
    #[error("final colouring has {0} verifier violations")]
    Verification(usize),
    #[error("span {span} exceeds the budget {budget}")]
    SpanOverBudget { span: u32, budget: u32 },
}

/// Upper limit on the span of a permissive run before it counts as failed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanBudget {
    Unlimited,
    /// `3Δ + 10`.
    #[default]
    ThreeDeltaPlusTen,
    Fixed(u32),
}

impl SpanBudget {
    pub fn limit(self, delta: usize) -> Option<u32> {
        match self {
            SpanBudget::Unlimited => None,
            SpanBudget::ThreeDeltaPlusTen => Some(3 * delta as u32 + 10),
            SpanBudget::Fixed(x) => Some(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub mode: Mode,
    pub slack: f64,
    pub seed: u64,
    pub lemma_rounds: usize,
    pub h_rounds: usize,
    /// Permissive retries with doubled slack before the greedy fallback.
    pub retries: usize,
    /// Applies in permissive mode only.
    pub span_budget: SpanBudget,
    /// Overrides the default fault bound used for the risky window.
    pub fault_cap: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Permissive,
            slack: 2.0,
            seed: 0,
            lemma_rounds: 200,
            h_rounds: 200,
            retries: 2,
            span_budget: SpanBudget::default(),
            fault_cap: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapRow {
    pub property: Property,
    pub label: &'static str,
    pub cap: f64,
    pub observed: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaSummary {
    pub stage_one_rounds: usize,
    pub stage_one_valid: bool,
    pub stage_two_rounds: usize,
    pub l_events_clear: bool,
    pub e1: usize,
    pub e2: usize,
    pub h1_max_degree: usize,
    pub h2_max_degree: usize,
    pub h3_max_degree: usize,
    pub caps: Vec<CapRow>,
}

impl LemmaSummary {
    pub fn of(run: &LemmaRun) -> Self {
        let two = &run.stage_two;
        LemmaSummary {
            stage_one_rounds: run.stage_one.rounds,
            stage_one_valid: run.stage_one.valid,
            stage_two_rounds: two.rounds,
            l_events_clear: two.l_events_clear,
            e1: two.e1,
            e2: two.e2,
            h1_max_degree: two.h1_max_degree,
            h2_max_degree: two.h2_max_degree,
            h3_max_degree: two.h3_max_degree,
            caps: two
                .report
                .checks
                .iter()
                .flat_map(|c| {
                    c.caps.iter().map(move |cap| CapRow {
                        property: c.property,
                        label: cap.label,
                        cap: cap.cap,
                        observed: cap.observed,
                        pass: c.pass,
                    })
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskSummary {
    pub params: RiskParams,
    pub max_risky: usize,
    pub within_audit_cap: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HSummary {
    pub edges: usize,
    pub max_degree: usize,
    pub cap: usize,
    pub rounds: usize,
    pub within_cap: bool,
}

/// One pass through the pipeline; phases after a failure are absent.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AttemptReport {
    pub attempt: usize,
    pub slack: f64,
    pub seed: u64,
    pub lemma: Option<LemmaSummary>,
    pub b: u32,
    pub span_after_lift: Option<u32>,
    pub class_widths: Vec<u32>,
    pub class_max_degree: Vec<usize>,
    pub span_after_properize: Option<u32>,
    pub risk: Option<RiskSummary>,
    pub h: Option<HSummary>,
    pub recolour: Option<RecolourStats>,
    pub repair: Option<RepairStats>,
    pub span: Option<u32>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub mode_requested: Mode,
    pub mode: Mode,
    /// Strict mode was requested at a `Δ` where it is infeasible.
    pub downgraded: bool,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub attempts: Vec<AttemptReport>,
    /// The colouring came from [`greedy_nsd`].
    pub fallback: bool,
    pub span: u32,
    pub delta_plus_3: u32,
    /// `Δ + 139 Δ^{5/6} ln^{1/6} Δ`.
    pub theorem_bound: f64,
    pub span_budget: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub colouring: TotalColouring,
    pub report: RunReport,
}

/// `Δ + 139 Δ^{5/6} ln^{1/6} Δ`, with `ln` floored at 1.
pub fn theorem_bound(delta: usize) -> f64 {
    let d = delta.max(1) as f64;
    delta as f64 + 139.0 * d.powf(5.0 / 6.0) * d.ln().max(1.0).powf(1.0 / 6.0)
}

/// Runs the pipeline on `g`. Strict mode fails on the first error; permissive
/// mode retries and then falls back, so it always returns a colouring.
pub fn construct(g: &Graph, config: &RunConfig) -> Result<Construction, ConstructError> {
    let delta = g.max_degree();
    let base = LemmaParams::new(delta, config.mode, config.slack)?;
    let budget = if base.strict { None } else { config.span_budget.limit(delta) };
    let mut report = RunReport {
        mode_requested: config.mode,
        mode: base.mode(),
        downgraded: base.downgraded,
        seed: config.seed,
        n: g.n(),
        m: g.m(),
        delta,
        attempts: Vec::new(),
        fallback: false,
        span: 0,
        delta_plus_3: delta as u32 + 3,
        theorem_bound: theorem_bound(delta),
        span_budget: budget,
    };
    let tries = if base.strict { 1 } else { config.retries + 1 };
    for attempt in 0..tries {
        let slack = config.slack * f64::from(1u32 << attempt.min(20));
        let params = LemmaParams::new(delta, config.mode, slack)?;
        let seed = derive_seed(config.seed, attempt as u64);
        let mut ar = AttemptReport {
            attempt,
            slack: params.slack,
            seed,
            ..AttemptReport::default()
        };
        let outcome = pipeline(g, &params, config, seed, budget, &mut ar);
        match outcome {
            Ok(colouring) => {
                report.span = colouring.span();
                report.attempts.push(ar);
                return Ok(Construction { colouring, report });
            }
            Err(e) => {
                log::info!("attempt {attempt} failed: {e}");
                ar.failure = Some(e.to_string());
                report.attempts.push(ar);
                if base.strict {
                    return Err(e);
                }
            }
        }
    }
    let colouring = greedy_nsd(g);
    report.fallback = true;
    report.span = colouring.span();
    Ok(Construction { colouring, report })
}

fn pipeline(
    g: &Graph,
    params: &LemmaParams,
    config: &RunConfig,
    seed: u64,
    budget: Option<u32>,
    ar: &mut AttemptReport,
) -> Result<TotalColouring, ConstructError> {
    let strict = params.strict;
    let run = run_lemma(g, params, derive_seed(seed, 0), config.lemma_rounds);
    ar.lemma = Some(LemmaSummary::of(&run));
    if strict && !run.valid() {
        return Err(ConstructError::LemmaFailed);
    }

    let b = u32::try_from(b_unit(params.delta)).expect("class width fits u32");
    ar.b = b;
    let lifted = lift(run.state(), params.r3, b);
    ar.span_after_lift = Some(lifted.span());

    let (mut cs, stats) = properize(g, &lifted, !strict)?;
    ar.class_widths = stats.widths;
    ar.class_max_degree = stats.class_max_degree;
    ar.span_after_properize = Some(cs.span());
    debug_assert!(cs.class_confined());
    if !check_proper(g, &cs.to_colouring(g)).is_empty() {
        return Err(ConstructError::ImproperAfterProperize);
    }

    let rp = RiskParams::new(params, &run.s_params, config.fault_cap);
    let risky = compute_risky(g, run.state(), &run.s_params, params, &rp);
    let max_risky = risky.iter().map(Vec::len).max().unwrap_or(0);
    ar.risk = Some(RiskSummary {
        within_audit_cap: max_risky as f64 <= rp.audit_cap,
        params: rp,
        max_risky,
    });

    let h = select_h(g, params, derive_seed(seed, 2), config.h_rounds);
    ar.h = Some(HSummary {
        edges: h.edges.len(),
        max_degree: h.max_degree,
        cap: h.cap,
        rounds: h.rounds,
        within_cap: h.within_cap,
    });
    if strict && !h.within_cap {
        return Err(ConstructError::HCapExceeded {
            max_degree: h.max_degree,
            cap: h.cap,
        });
    }

    let start = cs.span() + 1;
    let reserve = if strict {
        Reserve::Bounded {
            start,
            end: theorem_bound(params.delta).floor() as u32,
        }
    } else {
        Reserve::Open { start }
    };
    ar.recolour = Some(recolour_h(g, &mut cs, &h, &risky, params, reserve)?);
    ar.repair = Some(repair_small_degree(g, &mut cs, params, !strict)?);

    let colouring = cs.to_colouring(g);
    ar.span = Some(colouring.span());
    let violations = verify(g, &colouring).len();
    if violations > 0 {
        return Err(ConstructError::Verification(violations));
    }
    if let Some(limit) = budget {
        if colouring.span() > limit {
            return Err(ConstructError::SpanOverBudget {
                span: colouring.span(),
                budget: limit,
            });
        }
    }
    Ok(colouring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    #[test]
    fn k2_is_valid() {
        let g = generate(&GraphKind::Complete { n: 2 }).unwrap();
        let out = construct(&g, &RunConfig::default()).unwrap();
        assert!(verify(&g, &out.colouring).is_empty());
        assert!(out.colouring.span() >= 3);
    }

    #[test]
    fn deterministic() {
        let g = generate(&GraphKind::Random { n: 400, p: 0.05, seed: 3 }).unwrap();
        let cfg = RunConfig {
            seed: 17,
            ..RunConfig::default()
        };
        let a = construct(&g, &cfg).unwrap();
        let b = construct(&g, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unlimited_budget_keeps_pipeline_output() {
        let g = generate(&GraphKind::Random { n: 500, p: 0.04, seed: 1 }).unwrap();
        let cfg = RunConfig {
            span_budget: SpanBudget::Unlimited,
            ..RunConfig::default()
        };
        let out = construct(&g, &cfg).unwrap();
        assert!(!out.report.fallback, "{:?}", out.report.attempts);
        assert!(verify(&g, &out.colouring).is_empty());
    }

    #[test]
    fn strict_on_small_delta_downgrades() {
        let g = generate(&GraphKind::Cycle { n: 6 }).unwrap();
        let cfg = RunConfig {
            mode: Mode::Strict,
            ..RunConfig::default()
        };
        let out = construct(&g, &cfg).unwrap();
        assert!(out.report.downgraded);
        assert_eq!(out.report.mode, Mode::Permissive);
        assert!(verify(&g, &out.colouring).is_empty());
    }

    #[test]
    fn strict_star_stays_within_the_asymptotic_bound() {
        let g = generate(&GraphKind::Star { leaves: 400_000 }).unwrap();
        let cfg = RunConfig {
            mode: Mode::Strict,
            seed: 1,
            ..RunConfig::default()
        };
        let out = construct(&g, &cfg).unwrap();
        let r = &out.report;
        assert_eq!((r.mode, r.downgraded, r.fallback), (Mode::Strict, false, false));
        assert!(verify(&g, &out.colouring).is_empty());
        assert!(f64::from(r.span) <= r.theorem_bound);
        assert_eq!(r.attempts[0].b, 15168);
    }
}
