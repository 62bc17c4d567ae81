//! The probabilistic lemma, made constructive.
//!
//! Stage one draws `c1` (vertices, palette `r1`), `c2` (edges, `r2`) and `c3`
//! (vertices, `r2`) at random and resamples local bad events until the
//! stage-one properties hold. Stage two derives `c3` on edges from the sum
//! `c1(u) + c1(v) + c2(uv)`, forces agreement on edges whose endpoints share
//! `c3`, and recolours the conflicting rest at random.

mod params;
mod properties;
mod resample;
mod score;
mod stage_two;
mod state;

pub(crate) use params::exact_ratio;
pub use params::{b_unit, strict_feasible, Caps, LemmaParams, Mode};
pub use properties::{check_properties, CapUse, Property, PropertyCheck, PropertyReport, Violator};
pub use resample::{first_violated, resample_scope, resample_until_valid, Event, ResampleOutcome, Scope};
pub use score::{interval_index, s_of, SParams};
pub use stage_two::{stage_two, StageTwoOutcome};
pub use state::{sample_stage_one, LemmaState, Stage};

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::rng::derive_seed;

#[derive(Debug, Error, PartialEq)]
pub enum LemmaError {
    #[error("slack must be a finite number >= 1, got {0}")]
    InvalidSlack(f64),
    #[error("interval index is defined for positive scores only")]
    NonPositiveScore,
}

/// Both stages of one engine run.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaRun {
    pub params: LemmaParams,
    pub s_params: SParams,
    pub stage_one: ResampleOutcome,
    pub stage_two: StageTwoOutcome,
}

impl LemmaRun {
    pub fn state(&self) -> &LemmaState {
        &self.stage_two.state
    }

    /// Stage one ended valid and the final report passes everything.
    pub fn valid(&self) -> bool {
        self.stage_one.valid && self.stage_two.report.all_pass()
    }
}

/// Stage one with seed `derive_seed(seed, 0)`, then stage two with
/// `derive_seed(seed, 1)`, each with `max_rounds` resampling steps.
pub fn run_lemma(g: &Graph, params: &LemmaParams, seed: u64, max_rounds: usize) -> LemmaRun {
    let sp = SParams::new(params);
    let one = resample_until_valid(g, params, &sp, derive_seed(seed, 0), max_rounds);
    let two = stage_two(g, &one.state, params, &sp, derive_seed(seed, 1), max_rounds);
    LemmaRun {
        params: params.clone(),
        s_params: sp,
        stage_one: one,
        stage_two: two,
    }
}
