use serde::Serialize;

use crate::colouring::TotalColouring;
use crate::graph::Graph;
use crate::lemma::LemmaState;

/// Consecutive colour blocks, one per class `β = 1..=classes`.
///
/// Block `β` is `top(β) − width(β) + 1 ..= top(β)`; a colour in it is written
/// `top(β) + a` with the addition `a ∈ {−width(β)+1, …, 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassLayout {
    widths: Vec<u32>,
    tops: Vec<u32>,
}

impl ClassLayout {
    /// Every block of width `b`, so `top(β) = β·b`.
    pub fn uniform(classes: u32, b: u32) -> Self {
        Self::from_widths(vec![b; classes as usize])
    }

    pub fn from_widths(widths: Vec<u32>) -> Self {
        let tops = widths
            .iter()
            .scan(0u32, |acc, &w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        ClassLayout { widths, tops }
    }

    pub fn classes(&self) -> u32 {
        self.widths.len() as u32
    }

    pub fn width(&self, beta: u32) -> u32 {
        self.widths[beta as usize - 1]
    }

    pub fn widths(&self) -> &[u32] {
        &self.widths
    }

    pub fn top(&self, beta: u32) -> u32 {
        self.tops[beta as usize - 1]
    }

    /// Colour of local rank `j ≥ 1` in block `β`, i.e. addition `1 − j`.
    pub fn colour(&self, beta: u32, j: u32) -> u32 {
        debug_assert!(j >= 1 && j <= self.width(beta));
        self.top(beta) + 1 - j
    }

    /// `a` with `colour = top(β) + a`.
    pub fn addition(&self, beta: u32, colour: u32) -> i64 {
        i64::from(colour) - i64::from(self.top(beta))
    }

    pub fn contains(&self, beta: u32, colour: u32) -> bool {
        let a = self.addition(beta, colour);
        a <= 0 && a > -i64::from(self.width(beta))
    }

    /// Largest colour any block can hold.
    pub fn end(&self) -> u32 {
        self.tops.last().copied().unwrap_or(0)
    }
}

/// Colours of the construction while it is being assembled.
///
/// `class_v` and `class_e` are the `c3` values from the lemma; until the
/// repair phases every colour stays inside its class block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionState {
    /// Class width used by [`lift`].
    pub b: u32,
    pub layout: ClassLayout,
    pub class_v: Vec<u32>,
    pub class_e: Vec<u32>,
    pub vertex: Vec<u32>,
    pub edge: Vec<u32>,
}

impl ConstructionState {
    pub fn span(&self) -> u32 {
        self.vertex.iter().chain(&self.edge).copied().max().unwrap_or(0)
    }

    pub fn sums(&self, g: &Graph) -> Vec<u64> {
        crate::colouring::sums_of(g, &self.vertex, &self.edge)
    }

    pub fn additions_v(&self) -> Vec<i64> {
        self.vertex
            .iter()
            .zip(&self.class_v)
            .map(|(&c, &beta)| self.layout.addition(beta, c))
            .collect()
    }

    pub fn additions_e(&self) -> Vec<i64> {
        self.edge
            .iter()
            .zip(&self.class_e)
            .map(|(&c, &beta)| self.layout.addition(beta, c))
            .collect()
    }

    /// Every object's colour lies in its own class block.
    pub fn class_confined(&self) -> bool {
        self.vertex.iter().zip(&self.class_v).all(|(&c, &b)| self.layout.contains(b, c))
            && self.edge.iter().zip(&self.class_e).all(|(&c, &b)| self.layout.contains(b, c))
    }

    pub fn to_colouring(&self, g: &Graph) -> TotalColouring {
        TotalColouring::with_span(g, self.vertex.clone(), self.edge.clone()).expect("construction colours are positive")
    }
}

/// `c_t(x) = B·c3(x)` for every vertex and edge: all additions are 0.
pub fn lift(st: &LemmaState, classes: u32, b: u32) -> ConstructionState {
    assert!(st.c3e.iter().all(|&c| c >= 1), "lift needs a stage-two state");
    let layout = ClassLayout::uniform(classes, b);
    ConstructionState {
        b,
        vertex: st.c3v.iter().map(|&beta| layout.top(beta)).collect(),
        edge: st.c3e.iter().map(|&beta| layout.top(beta)).collect(),
        class_v: st.c3v.clone(),
        class_e: st.c3e.clone(),
        layout,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma::Stage;

    fn state(c3v: Vec<u32>, c3e: Vec<u32>) -> LemmaState {
        LemmaState {
            c1: vec![1; c3v.len()],
            c2: vec![1; c3e.len()],
            c3v,
            c3e,
            rng_seed: 0,
            stage: Stage::Two,
        }
    }

    #[test]
    fn lift_multiplies_by_b() {
        let cs = lift(&state(vec![1, 2], vec![3]), 3, 10);
        assert_eq!(cs.edge, vec![30]);
        assert_eq!(cs.vertex, vec![10, 20]);
        assert_eq!(cs.additions_e(), vec![0]);
        assert!(cs.class_confined());
    }

    #[test]
    fn class_block_bounds() {
        let layout = ClassLayout::uniform(4, 10);
        assert!(layout.contains(3, 21));
        assert!(layout.contains(3, 30));
        assert!(!layout.contains(3, 20));
        assert!(!layout.contains(3, 31));
        assert_eq!(layout.colour(3, 1), 30);
        assert_eq!(layout.colour(3, 10), 21);
    }

    #[test]
    fn edgeless_lift_span() {
        let cs = lift(&state(vec![2, 3, 1], vec![]), 6, 7);
        assert_eq!(cs.span(), 21);
    }

    #[test]
    fn compact_layout_is_cumulative() {
        let layout = ClassLayout::from_widths(vec![3, 0, 5]);
        assert_eq!(layout.top(1), 3);
        assert_eq!(layout.top(2), 3);
        assert_eq!(layout.top(3), 8);
        assert_eq!(layout.colour(3, 5), 4);
        assert_eq!(layout.end(), 8);
    }
}
