use num_rational::Ratio;
use serde::Serialize;

use super::params::{b_unit, exact_ratio, LemmaParams};
use super::LemmaError;

/// Constants of the score `S(v) = b·d·c1(v) + R(d, Δ)` and of the intervals
/// `I_α = ((α−1)·len, α·len]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SParams {
    pub b_unit: u64,
    /// `Δ^{5/3} ln^{1/3} Δ / 3`, exactly as the `f64` computed once.
    pub interval_len: f64,
    #[serde(skip)]
    len_exact: Ratio<i128>,
    pub r1: u32,
    pub r2: u32,
}

impl SParams {
    pub fn new(p: &LemmaParams) -> Self {
        let interval_len = p.power(5.0 / 3.0, 1.0 / 3.0) / 3.0;
        SParams {
            b_unit: b_unit(p.delta),
            interval_len,
            len_exact: exact_ratio(interval_len),
            r1: p.r1,
            r2: p.r2,
        }
    }

    /// `R(d, Δ) = b·[(d/r1)·C(r1+1, 2) + (d/r2)·C(r2+1, 2)]`.
    ///
    /// `(d/r)·C(r+1, 2) = d(r+1)/2`, so `2R = b·d·(r1 + r2 + 2)`.
    pub fn r_of_d(&self, d: usize) -> Ratio<i128> {
        let b = i128::from(self.b_unit);
        Ratio::new(b * d as i128 * i128::from(self.r1 + self.r2 + 2), 2)
    }

    pub fn interval_len_exact(&self) -> Ratio<i128> {
        self.len_exact
    }
}

/// `S(v)` for a vertex of degree `d` with `c1(v) = c1v`. Exact; the value is a
/// multiple of 1/2.
pub fn s_of(d: usize, c1v: u32, sp: &SParams) -> Ratio<i128> {
    let b = i128::from(sp.b_unit);
    Ratio::from_integer(b * d as i128 * i128::from(c1v)) + sp.r_of_d(d)
}

/// The unique `α ≥ 1` with `s ∈ I_α`.
pub fn interval_index(s: Ratio<i128>, sp: &SParams) -> Result<u64, LemmaError> {
    if s <= Ratio::from_integer(0) {
        return Err(LemmaError::NonPositiveScore);
    }
    let q = s / sp.len_exact;
    let (quot, rem) = (q.numer() / q.denom(), q.numer() % q.denom());
    let alpha = if rem == 0 { quot } else { quot + 1 };
    Ok(alpha as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma::Mode;

    fn sp(delta: usize) -> SParams {
        SParams::new(&LemmaParams::new(delta, Mode::Permissive, 1.0).unwrap())
    }

    #[test]
    fn zero_degree_scores_zero() {
        let sp = sp(60);
        for c in 1..=2 {
            assert_eq!(s_of(0, c, &sp), Ratio::from_integer(0));
        }
    }

    #[test]
    fn unit_palettes_give_three_b() {
        let mut sp = sp(60);
        sp.r1 = 1;
        sp.r2 = 1;
        assert_eq!(s_of(1, 1, &sp), Ratio::from_integer(3 * sp.b_unit as i128));
    }

    #[test]
    fn delta_4096_value() {
        // evaluated with exact fractions and explicit binomials elsewhere
        assert_eq!(s_of(2048, 2, &sp(4096)), Ratio::from_integer(15_928_320));
    }

    #[test]
    fn interval_boundaries() {
        let sp = sp(60);
        let len = sp.interval_len_exact();
        assert_eq!(interval_index(len, &sp), Ok(1));
        assert_eq!(interval_index(len + Ratio::new(1, 1 << 60), &sp), Ok(2));
        assert_eq!(interval_index(len * Ratio::new(7, 2), &sp), Ok(4));
        assert_eq!(interval_index(len * 2, &sp), Ok(2));
        assert_eq!(interval_index(Ratio::from_integer(0), &sp), Err(LemmaError::NonPositiveScore));
    }
}
