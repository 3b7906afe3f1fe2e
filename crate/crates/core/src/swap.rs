//! Convex decompositions of points of the two-matroid intersection polytope,
//! and randomized swap rounding with thinning.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersection::{check_shared, max_weight_within};
use crate::lp::colgen::{convex_combination, reconstructs, ColumnOutcome};
use crate::lp::polytope::{in_matroid_polytope, support_in};
use crate::matroid::Matroid;
use crate::rational::{bernoulli, fmt_q, Q};
use crate::subset::{for_each_combination, Subset};

/// Common independent sets with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCombination {
    pub parts: Vec<(Subset, Q)>,
}

impl ConvexCombination {
    /// Whether the combination reproduces `x` exactly and every set is
    /// independent in both matroids.
    pub fn is_exact(&self, m1: &Matroid, m2: &Matroid, x: &[Q]) -> bool {
        reconstructs(x.len(), &self.parts, x) && self.parts.iter().all(|(s, _)| m1.indep(s) && m2.indep(s))
    }
}

/// Writes `x` as a convex combination of common independent sets, by column
/// generation with maximum-weight common independent sets as the pricing
/// step.
pub fn decompose_point(m1: &Matroid, m2: &Matroid, x: &[Q]) -> Result<ConvexCombination> {
    check_shared(m1, m2)?;
    let n = m1.universe();
    if x.len() != n {
        return Err(Error::Domain(format!("point has length {} for universe {n}", x.len())));
    }
    if x.iter().enumerate().any(|(e, v)| v.is_negative() || (!m1.ground().contains(e) && !v.is_zero())) {
        return Err(Error::Domain("point is negative or nonzero off the ground set".into()));
    }
    for (i, m) in [m1, m2].into_iter().enumerate() {
        if !in_matroid_polytope(m, x)? {
            return Err(Error::Domain(format!("point is outside the polytope of matroid {}", i + 1)));
        }
    }
    let support = support_in(m1.ground(), x);
    let within = Subset::from_ids(n, support.iter().copied());
    let outcome = convex_combination(n, &support, x, |duals| max_weight_within(m1, m2, duals, &positive(&within, duals)))?;
    match outcome {
        ColumnOutcome::Combination(parts) => {
            let combo = ConvexCombination { parts };
            if !combo.is_exact(m1, m2, x) {
                return Err(Error::Invariant("decomposition does not reproduce the point".into()));
            }
            Ok(combo)
        }
        ColumnOutcome::Separated { .. } => {
            Err(Error::Invariant("point lies in both polytopes but not in their intersection".into()))
        }
    }
}

fn positive(within: &Subset, w: &[Q]) -> Subset {
    Subset::from_ids(within.universe(), within.iter().filter(|&e| w[e].is_positive()))
}

/// Exhaustive unit search covers units touching at most this many elements,
/// as long as the number of candidates stays within [`UNIT_BUDGET`].
pub const SMALL_UNIT: usize = 4;
pub const UNIT_BUDGET: usize = 20_000;

fn unit_feasible(m1: &Matroid, m2: &Matroid, i: &Subset, j: &Subset, unit: &Subset) -> bool {
    let a = i.symmetric_difference(unit);
    let b = j.symmetric_difference(unit);
    m1.indep(&a) && m2.indep(&a) && m1.indep(&b) && m2.indep(&b)
}

/// A nonempty `W` inside `i Δ j` with `i Δ W` and `j Δ W` both common
/// independent. The whole difference always qualifies; smaller units are
/// preferred (exhaustively up to [`SMALL_UNIT`] elements, then by shrinking
/// the whole difference one element at a time).
pub fn find_unit(m1: &Matroid, m2: &Matroid, i: &Subset, j: &Subset) -> Subset {
    let diff = i.symmetric_difference(j);
    let ids = diff.to_vec();
    let mut candidates = 0usize;
    for size in 1..=SMALL_UNIT.min(ids.len()) {
        candidates = candidates.saturating_add(binomial(ids.len(), size));
        if candidates > UNIT_BUDGET {
            break;
        }
        let mut found = None;
        for_each_combination(&ids, size, |c| {
            let unit = Subset::from_ids(diff.universe(), c.iter().copied());
            if unit_feasible(m1, m2, i, j, &unit) {
                found = Some(unit);
                return false;
            }
            true
        });
        if let Some(u) = found {
            return u;
        }
    }
    let mut unit = diff;
    for e in ids {
        let smaller = unit.without(e);
        if !smaller.is_empty() && unit_feasible(m1, m2, i, j, &smaller) {
            unit = smaller;
        }
    }
    unit
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, t| acc.saturating_mul(n - t) / (t + 1))
}

/// One randomized exchange between `i` (weight `li`) and `j` (weight `lj`):
/// with probability `lj / (li + lj)` the unit is applied to `i`, otherwise to
/// `j`. Expected `li 1_i + lj 1_j` is preserved and `|i Δ j|` shrinks.
pub fn merge_step<R: Rng + ?Sized>(
    m1: &Matroid,
    m2: &Matroid,
    i: &Subset,
    li: &Q,
    j: &Subset,
    lj: &Q,
    rng: &mut R,
) -> Result<(Subset, Subset, MergeRecord)> {
    if i == j {
        return Err(Error::Contract("merge_step needs two different sets".into()));
    }
    let unit = find_unit(m1, m2, i, j);
    if unit.is_empty() || !unit_feasible(m1, m2, i, j, &unit) {
        return Err(Error::Invariant(format!("no feasible exchange between {i:?} and {j:?}")));
    }
    let to_left = bernoulli(rng, &(lj / (li + lj)));
    let record = MergeRecord { unit: unit.to_vec(), applied_to_left: to_left };
    Ok(if to_left { (i.symmetric_difference(&unit), j.clone(), record) } else { (i.clone(), j.symmetric_difference(&unit), record) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeRecord {
    pub unit: Vec<usize>,
    pub applied_to_left: bool,
}

/// Everything a single rounding run did, for the statistical harness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub merges: Vec<MergeRecord>,
    /// The single set left after merging.
    pub merged: Vec<usize>,
    /// The merged set after thinning.
    pub result: Vec<usize>,
}

/// Swap rounding of `alpha * 1` with retention probability `1 - gamma`. The
/// decomposition is computed once and reused by every [`SwapRounder::sample`].
#[derive(Debug, Clone)]
pub struct SwapRounder {
    m1: Matroid,
    m2: Matroid,
    pub decomposition: ConvexCombination,
    pub alpha: Q,
    pub gamma: Q,
}

impl SwapRounder {
    pub fn new(m1: &Matroid, m2: &Matroid, alpha: &Q, gamma: &Q) -> Result<SwapRounder> {
        if !gamma.is_positive() || *gamma > Q::new(1.into(), 2.into()) {
            return Err(Error::Contract(format!("gamma must lie in (0, 1/2], got {}", fmt_q(gamma))));
        }
        if alpha.is_negative() {
            return Err(Error::Contract("alpha must be nonnegative".into()));
        }
        let n = m1.universe();
        let x: Vec<Q> = (0..n).map(|e| if m1.ground().contains(e) { alpha.clone() } else { Q::zero() }).collect();
        let decomposition = decompose_point(m1, m2, &x)?;
        Ok(SwapRounder { m1: m1.clone(), m2: m2.clone(), decomposition, alpha: alpha.clone(), gamma: gamma.clone() })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Subset> {
        Ok(self.sample_with_transcript(rng)?.0)
    }

    /// Merges the two lightest entries until one set remains, then keeps
    /// each of its elements independently with probability `1 - gamma`.
    pub fn sample_with_transcript<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Subset, Transcript)> {
        let mut pool: Vec<(Subset, Q)> = self.decomposition.parts.clone();
        let mut merges = Vec::new();
        while pool.len() > 1 {
            pool.sort_by(|a, b| a.1.cmp(&b.1));
            let (mut i, li) = pool.remove(0);
            let (mut j, lj) = pool.remove(0);
            while i != j {
                let (a, b, rec) = merge_step(&self.m1, &self.m2, &i, &li, &j, &lj, rng)?;
                i = a;
                j = b;
                merges.push(rec);
            }
            pool.push((i, li + lj));
        }
        let (merged, total) = pool.pop().unwrap_or_else(|| (Subset::empty(self.m1.universe()), Q::one()));
        if !total.is_one() || !self.m1.indep(&merged) || !self.m2.indep(&merged) {
            return Err(Error::Invariant("merging lost weight or independence".into()));
        }
        let keep = Q::one() - &self.gamma;
        let result = Subset::from_ids(merged.universe(), merged.iter().filter(|_| bernoulli(rng, &keep)));
        let transcript = Transcript { merges, merged: merged.to_vec(), result: result.to_vec() };
        Ok((result, transcript))
    }
}

pub fn swap_round<R: Rng + ?Sized>(m1: &Matroid, m2: &Matroid, alpha: &Q, gamma: &Q, rng: &mut R) -> Result<Subset> {
    SwapRounder::new(m1, m2, alpha, gamma)?.sample(rng)
}
