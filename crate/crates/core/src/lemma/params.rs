use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::LemmaError;

/// Whether caps are enforced exactly or scaled by a slack factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    #[default]
    Permissive,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "permissive" => Ok(Mode::Permissive),
            other => Err(format!("unknown mode {other:?} (expected strict or permissive)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Permissive => "permissive",
        })
    }
}

/// Palette sizes and cap scaling for one run of the lemma engine.
///
/// All formulas use `Δ_eff = max(Δ, 1)` and `ln_floor = max(ln Δ_eff, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaParams {
    pub delta: usize,
    /// `⌈Δ^{1/6} / ln^{1/6} Δ⌉`, palette of `c1`.
    pub r1: u32,
    /// `⌈Δ^{1/3} / ln^{1/3} Δ⌉`, palette of `c2` and of `c3` on vertices.
    pub r2: u32,
    /// `2·r1 + r2`, palette of `c3` on edges.
    pub r3: u32,
    pub ln_floor: f64,
    pub strict: bool,
    /// 1 in strict mode.
    pub slack: f64,
    /// Strict mode was requested but `Δ` fails [`strict_feasible`].
    pub downgraded: bool,
}

impl LemmaParams {
    /// Strict mode on an infeasible `Δ` falls back to permissive mode with the
    /// given slack and sets `downgraded`.
    pub fn new(delta: usize, mode: Mode, slack: f64) -> Result<Self, LemmaError> {
        if !slack.is_finite() || slack < 1.0 {
            return Err(LemmaError::InvalidSlack(slack));
        }
        let (r1, r2, ln_floor) = palettes(delta);
        let feasible = strict_feasible(delta);
        let strict = mode == Mode::Strict && feasible;
        Ok(LemmaParams {
            delta,
            r1,
            r2,
            r3: 2 * r1 + r2,
            ln_floor,
            strict,
            slack: if strict { 1.0 } else { slack },
            downgraded: mode == Mode::Strict && !feasible,
        })
    }

    pub fn mode(&self) -> Mode {
        if self.strict {
            Mode::Strict
        } else {
            Mode::Permissive
        }
    }

    /// `⌈Δ/3⌉`: vertices of at least this degree are *large*.
    pub fn large_threshold(&self) -> usize {
        self.delta.div_ceil(3)
    }

    pub fn is_large(&self, degree: usize) -> bool {
        degree >= self.large_threshold()
    }

    fn delta_f(&self) -> f64 {
        self.delta.max(1) as f64
    }

    /// `Δ^a · ln^b Δ`.
    pub fn power(&self, a: f64, b: f64) -> f64 {
        self.delta_f().powf(a) * self.ln_floor.powf(b)
    }

    /// Every cap, already multiplied by `slack`.
    pub fn caps(&self) -> Caps {
        let s = self.slack;
        let p23 = self.power(2.0 / 3.0, 1.0 / 3.0);
        let p13 = self.power(1.0 / 3.0, 2.0 / 3.0);
        let sqrt = self.delta_f().sqrt();
        Caps {
            i: s * sqrt,
            ii: s * 3.0 * p13,
            vi: s * (self.power(5.0 / 6.0, 1.0 / 6.0) + sqrt),
            one_class: s * (p23 + 3.0 * p13),
            one_match: s * (2.0 * p23 + 5.0 * p13),
            two: s * (p23 + 3.0 * p13),
            three: s * (p23 + 3.0 * p13),
            four: s * 2.0 * p13,
            iii: s * ((2.0 * p23 + 5.0 * p13) + (p23 + 3.0 * p13)),
            iv: s * (p23 + 5.0 * p13),
        }
    }
}

/// Real-valued caps for each counted property.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Caps {
    /// Deviation bound of (I).
    pub i: f64,
    /// Deviation bound of (II).
    pub ii: f64,
    /// Per-interval bound of (VI).
    pub vi: f64,
    /// (1°), edges of one sum class at a vertex.
    pub one_class: f64,
    /// (1°), edges whose sum matches an endpoint's `c3`; also bounds Δ(H1).
    pub one_match: f64,
    /// (2°), neighbours with one `c3` value; also bounds Δ(H2).
    pub two: f64,
    pub three: f64,
    pub four: f64,
    /// Exceptions to the sum formula in (III): Δ(H1) cap plus Δ(H2) cap.
    pub iii: f64,
    pub iv: f64,
}

fn palettes(delta: usize) -> (u32, u32, f64) {
    let d = delta.max(1) as f64;
    let ln = d.ln().max(1.0);
    let r1 = (d.powf(1.0 / 6.0) / ln.powf(1.0 / 6.0)).ceil().max(1.0) as u32;
    let r2 = (d.powf(1.0 / 3.0) / ln.powf(1.0 / 3.0)).ceil().max(1.0) as u32;
    (r1, r2, ln)
}

/// `⌈Δ^{2/3}ln^{1/3}Δ⌉ + 6⌈Δ^{1/3}ln^{2/3}Δ⌉`.
pub fn b_unit(delta: usize) -> u64 {
    let d = delta.max(1) as f64;
    let ln = d.ln().max(1.0);
    (d.powf(2.0 / 3.0) * ln.powf(1.0 / 3.0)).ceil() as u64 + 6 * (d.powf(1.0 / 3.0) * ln.powf(2.0 / 3.0)).ceil() as u64
}

/// Whether strict mode is meaningful at this `Δ`: `ln Δ ≥ 1`, the largest
/// score is at most `Δ²`, and the three local-lemma dependency inequalities
/// (stage one, the `L_v` events, the `W_v` events) hold.
pub fn strict_feasible(delta: usize) -> bool {
    if delta < 3 {
        return false;
    }
    let d = delta as f64;
    let ln = d.ln();
    let (r1, r2, _) = palettes(delta);
    let b = u128::from(b_unit(delta));
    let delta128 = delta as u128;
    // 2·max S = b·Δ·(3·r1 + r2 + 2)
    let twice_max_s = b * delta128 * u128::from(3 * r1 + r2 + 2);
    let e = std::f64::consts::E;
    ln >= 1.0
        && twice_max_s <= 2 * delta128 * delta128
        && e * (6.0 + 6.0 * d * d) / d.powf(8.0 / 3.0) < 1.0
        && e / d * (2.0 * d.powf(2.0 / 3.0) * ln.powf(1.0 / 3.0) + 5.0 * d.powf(1.0 / 3.0) * ln.powf(2.0 / 3.0) + 1.0) < 1.0
        && e * 2.0 / d.powf(7.0 / 3.0) * (d * d + 1.0) <= 1.0
}

/// Exact rational value of a finite non-negative `f64`.
pub(crate) fn exact_ratio(x: f64) -> Ratio<i128> {
    use num_traits::float::FloatCore;
    debug_assert!(x.is_finite() && x >= 0.0);
    let (mantissa, exponent, _) = FloatCore::integer_decode(x);
    let mantissa = i128::from(mantissa);
    if mantissa == 0 {
        return Ratio::from_integer(0);
    }
    if exponent >= 0 {
        Ratio::from_integer(mantissa << exponent)
    } else {
        Ratio::new(mantissa, 1i128 << (-exponent))
    }
}
