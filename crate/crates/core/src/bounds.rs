//! Exact lower-bound checks and the end-to-end verification harness.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::coloring::{
    colorings_from_switching, count_3_colorings, find_extension, Color, Coloring, CountError, CountOptions,
};
use crate::laminar::{dilworth_decompose, extract, BalanceCheck, LaminarError, LaminarOutcome};
use crate::plane_graph::{Adjacency, GraphError, PlaneGraph, Vertex};
use crate::transition::{big_to_json, chain_matrices, compose, verify_product_bound, Classification, TransitionError};

/// Default degree threshold for low-degree vertices.
pub const DEFAULT_K: usize = 213;

/// Fractional bits of the logarithm brackets.
const LOG_BITS: usize = 128;

/// Extra working bits kept while squaring.
const GUARD_BITS: usize = 64;

/// Switching families up to this many components are listed and checked
/// one by one.
const MAX_LISTED_COMPONENTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The precision used could not separate the two sides.
    Undecided,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

/// Brackets `lo ≤ log2(x) ≤ hi` as fixed-point numbers with `LOG_BITS`
/// fractional bits. `x` must be positive.
pub fn log2_bracket(x: &BigUint) -> (BigUint, BigUint) {
    assert!(!x.is_zero(), "logarithm of zero");
    let e = x.bits() - 1;
    let p = LOG_BITS + GUARD_BITS;
    // mantissa in [1, 2) with p fractional bits
    let m_lo = if e as usize >= p { x >> (e as usize - p) } else { x << (p - e as usize) };
    let m_hi = if e as usize > p && !(x % (BigUint::one() << (e as usize - p))).is_zero() {
        &m_lo + 1u32
    } else {
        m_lo.clone()
    };
    let two = BigUint::from(2u32) << p;
    let mask_up = |v: BigUint, shift: usize| -> BigUint {
        let low = !(&v % (BigUint::one() << shift)).is_zero();
        (v >> shift) + u32::from(low)
    };
    let (mut y_lo, mut y_hi) = (m_lo, m_hi);
    let (mut b_lo, mut b_hi) = (BigUint::zero(), BigUint::zero());
    for _ in 0..LOG_BITS {
        b_lo <<= 1;
        b_hi <<= 1;
        let sq = (&y_lo * &y_lo) >> p;
        if sq >= two {
            b_lo += 1u32;
            y_lo = sq >> 1;
        } else {
            y_lo = sq;
        }
        let sq = mask_up(&y_hi * &y_hi, p);
        if sq >= two {
            b_hi += 1u32;
            y_hi = mask_up(sq, 1);
        } else {
            y_hi = sq;
        }
    }
    let whole = BigUint::from(e) << LOG_BITS;
    (&whole + b_lo, whole + b_hi + 1u32)
}

/// `count ≥ 2^√(n/212)`, i.e. `212 · log2(count)² ≥ n`.
pub fn main_bound(count: &BigUint, n: usize) -> Verdict {
    if n == 0 {
        return if count.is_zero() { Verdict::Fail } else { Verdict::Pass };
    }
    if count.is_zero() {
        return Verdict::Fail;
    }
    let n_big = BigUint::from(n);
    let floor_log = BigUint::from(count.bits() - 1);
    if &floor_log * &floor_log * 212u32 >= n_big {
        return Verdict::Pass;
    }
    let (lo, hi) = log2_bracket(count);
    let scaled = n_big << (2 * LOG_BITS);
    if &lo * &lo * 212u32 >= scaled {
        Verdict::Pass
    } else if &hi * &hi * 212u32 < scaled {
        Verdict::Fail
    } else {
        Verdict::Undecided
    }
}

/// `count ≥ 2^(m/7)`.
pub fn chain_bound(count: &BigUint, m: usize) -> bool {
    count.pow(7u32) >= BigUint::one() << m
}

/// `count ≥ 2^(m/6)`.
pub fn antichain_bound(count: &BigUint, m: usize) -> bool {
    count.pow(6u32) >= BigUint::one() << m
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laminar(#[from] LaminarError),
    #[error(transparent)]
    Transition(#[from] TransitionError),
}

impl BoundError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            BoundError::Count(CountError::BudgetExceeded { .. })
                | BoundError::Transition(TransitionError::Count(CountError::BudgetExceeded { .. }))
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub k: usize,
    pub count: CountOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { k: DEFAULT_K, count: CountOptions::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainProduct {
    pub layers: Vec<Classification>,
    /// Six times the sum of the entries of the composed matrix.
    pub six_sum: Value,
    /// `six_sum` does not exceed the exact count.
    pub holds: bool,
    /// `1ᵀ M1 ⋯ Mr 1 ≥ (3/2)^(r/4)` with stepwise potential growth.
    pub product_bound: bool,
    pub first_violation: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwitchingWitness {
    /// Vertices left after deleting the antichain interiors.
    pub reduced_vertices: usize,
    pub pair: (Color, Color),
    pub components: usize,
    /// `6 · components ≥ |antichain|`.
    pub holds: bool,
    /// Number of switched colorings checked to be proper, distinct and
    /// extendable to the whole graph (0 when there were too many to list).
    pub checked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub graph_id: String,
    pub n: usize,
    pub edges: usize,
    pub k: usize,
    pub exact_count: Value,
    pub budget_used: u64,
    pub outcome: &'static str,
    pub reducible_vertex: Option<String>,
    pub family_size: usize,
    pub chain: Vec<Vec<String>>,
    pub antichain: Vec<Vec<String>>,
    pub main_bound: Verdict,
    pub chain_bound: Option<bool>,
    pub antichain_bound: Option<bool>,
    pub balance: Option<BalanceCheck>,
    pub chain_product: Option<ChainProduct>,
    pub switching: Option<SwitchingWitness>,
    pub passed: bool,
}

impl BoundReport {
    fn evaluate(&mut self) {
        self.passed = !self.main_bound.is_failure()
            && self.chain_bound != Some(false)
            && self.antichain_bound != Some(false)
            && self.balance.is_none_or(|b| b.holds())
            && self.chain_product.as_ref().is_none_or(|c| c.holds && c.product_bound)
            && self.switching.as_ref().is_none_or(|s| s.holds);
    }
}

/// Counts the colorings of `g` exactly and checks every applicable bound.
pub fn verify(g: &PlaneGraph, graph_id: &str, opts: VerifyOptions) -> Result<BoundReport, BoundError> {
    let counted = count_3_colorings(g, opts.count)?;
    let mut used = counted.budget_used;
    let count = BigUint::from(counted.count);
    let n = g.vertex_count();
    let mut report = BoundReport {
        graph_id: graph_id.to_owned(),
        n,
        edges: g.edge_count(),
        k: opts.k,
        exact_count: big_to_json(&count),
        budget_used: 0,
        outcome: "reducible",
        reducible_vertex: None,
        family_size: 0,
        chain: Vec::new(),
        antichain: Vec::new(),
        main_bound: main_bound(&count, n),
        chain_bound: None,
        antichain_bound: None,
        balance: None,
        chain_product: None,
        switching: None,
        passed: false,
    };
    match extract(g, opts.k)? {
        LaminarOutcome::Reducible { vertex } => {
            report.reducible_vertex = Some(g.name(vertex).to_owned());
        }
        LaminarOutcome::Family { family, .. } => {
            let (chain, antichain) = dilworth_decompose(g, &family)?;
            report.outcome = "family";
            report.family_size = family.len();
            report.chain = chain.names(g);
            report.antichain = antichain.names(g);
            report.chain_bound = Some(chain_bound(&count, chain.len()));
            report.antichain_bound = Some(antichain_bound(&count, antichain.len()));
            report.balance = Some(BalanceCheck::new(chain.len(), antichain.len(), family.len()));
            if chain.len() >= 2 {
                let left = CountOptions { budget: opts.count.budget.saturating_sub(used), ..opts.count };
                let layers = chain_matrices(g, &chain.cycles, left)?;
                used += layers.iter().map(|l| l.budget_used).sum::<u64>();
                let mats: Vec<_> = layers.iter().map(|l| l.matrix.clone()).collect();
                let total = compose(&mats)?;
                let six_sum = total.entries.sum() * 6u32;
                let product = verify_product_bound(&mats.iter().map(|m| m.entries.clone()).collect::<Vec<_>>());
                report.chain_product = Some(ChainProduct {
                    layers: mats.iter().map(|m| m.classification()).collect(),
                    holds: six_sum <= count,
                    six_sum: big_to_json(&six_sum),
                    product_bound: product.passed(),
                    first_violation: product.first_violation,
                });
            }
            if !antichain.is_empty() {
                let left = opts.count.budget.saturating_sub(used);
                report.switching = Some(switching_witness(g, &antichain.cycles, left)?);
            }
        }
    }
    report.budget_used = used;
    report.evaluate();
    Ok(report)
}

/// Deletes the antichain interiors, colors what is left and switches
/// bichromatic components of the best color pair.
pub fn switching_witness(
    g: &PlaneGraph,
    antichain: &[crate::plane_graph::Cycle],
    budget: u64,
) -> Result<SwitchingWitness, BoundError> {
    let reduced = g.delete_interiors(antichain)?;
    let base = find_extension(&reduced.graph, &[], budget)?
        .ok_or_else(|| GraphError::Inconsistent("triangle-free plane graph without a 3-coloring".into()))?;
    let family = colorings_from_switching(&reduced.graph, &base);
    let components = family.components.len();
    let mut checked = 0;
    if components <= MAX_LISTED_COMPONENTS {
        let mut seen = std::collections::HashSet::new();
        for c in family.colorings() {
            let distinct = seen.insert(c.as_slice().to_vec());
            let pre: Vec<(Vertex, Color)> =
                (0..reduced.graph.vertex_count()).map(|v| (reduced.to_host(v), c.color(v))).collect();
            let extends = find_extension(g, &pre, budget)?.is_some_and(|full: Coloring| full.is_proper(g));
            if !(distinct && c.is_proper(&reduced.graph) && extends) {
                return Err(GraphError::Inconsistent("switched coloring failed its checks".into()).into());
            }
            checked += 1;
        }
    }
    Ok(SwitchingWitness {
        reduced_vertices: reduced.graph.vertex_count(),
        pair: family.pair,
        components,
        holds: 6 * components >= antichain.len(),
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn main_bound_thresholds() {
        assert_eq!(main_bound(&big(2), 212), Verdict::Pass);
        assert_eq!(main_bound(&big(1), 212), Verdict::Fail);
        assert_eq!(main_bound(&big(4), 848), Verdict::Pass);
        assert_eq!(main_bound(&big(3), 848), Verdict::Fail);
        assert_eq!(main_bound(&big(30), 5), Verdict::Pass);
        assert_eq!(main_bound(&big(1), 5), Verdict::Fail);
        assert_eq!(main_bound(&big(0), 1), Verdict::Fail);
        assert_eq!(main_bound(&big(1), 0), Verdict::Pass);
    }

    #[test]
    fn log_bracket_is_tight_and_sound() {
        for x in [1u64, 2, 3, 5, 30, 1023, 1024, 1025, u64::MAX] {
            let (lo, hi) = log2_bracket(&big(x));
            let truth = (x as f64).log2();
            let scale = 2f64.powi(LOG_BITS as i32);
            let (lo, hi) =
                (lo.to_string().parse::<f64>().unwrap() / scale, hi.to_string().parse::<f64>().unwrap() / scale);
            assert!(lo <= truth + 1e-12 && truth <= hi + 1e-12, "{x}: {lo} {truth} {hi}");
            assert!(hi - lo < 1e-30_f64.max(1e-15 * truth), "{x}: {lo} {hi}");
        }
        let (lo, hi) = log2_bracket(&big(1024));
        assert_eq!(lo, BigUint::from(10u32) << LOG_BITS);
        assert_eq!(hi, (BigUint::from(10u32) << LOG_BITS) + 1u32);
    }

    #[test]
    fn chain_and_antichain_thresholds() {
        assert!(antichain_bound(&big(2), 6));
        assert!(!antichain_bound(&big(1), 6));
        assert!(antichain_bound(&big(1), 0));
        assert!(chain_bound(&big(2), 7));
        assert!(!chain_bound(&big(1), 1));
    }
}
