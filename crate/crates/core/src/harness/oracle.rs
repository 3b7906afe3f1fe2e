//! Exhaustive oracles for small intersections: the exact chromatic number
//! and the optimum of the covering LP over common independent sets.

use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::simplex::{LinearProgram, LpOutcome, Sense};
use crate::matroid::Matroid;
use crate::rational::Q;
use crate::subset::Subset;
use crate::union::chromatic_number;

pub const CHI_BUDGET: usize = 14;
pub const COVLP_BUDGET: usize = 12;

/// Ground elements (shared by all matroids) and the maximal common
/// independent sets as bitmasks over their positions.
fn maximal_common_sets(ms: &[Matroid], budget: usize) -> Result<(Vec<usize>, Vec<u32>)> {
    let first = ms.first().ok_or_else(|| Error::Contract("need at least one matroid".into()))?;
    if ms.iter().any(|m| m.universe() != first.universe() || m.ground() != first.ground()) {
        return Err(Error::Domain("matroids do not share a ground set".into()));
    }
    let ids = first.ground().to_vec();
    let n = ids.len();
    if n > budget.min(24) {
        return Err(Error::Refusal(format!("{n} elements exceed the enumeration budget of {budget}")));
    }
    let universe = first.universe();
    let total = 1usize << n;
    let mut indep = vec![false; total];
    indep[0] = true;
    for mask in 1..total {
        // Subsets of dependent sets are skipped cheaply: a set is only tested
        // when every one-smaller subset is independent.
        let all_sub = (0..n).filter(|b| mask >> b & 1 == 1).all(|b| indep[mask & !(1 << b)]);
        if all_sub {
            let s = Subset::from_ids(universe, (0..n).filter(|b| mask >> b & 1 == 1).map(|b| ids[b]));
            indep[mask] = ms.iter().all(|m| m.indep(&s));
        }
    }
    let maximal = (0..total)
        .filter(|&mask| indep[mask] && (0..n).all(|b| mask >> b & 1 == 1 || !indep[mask | 1 << b]))
        .map(|m| m as u32)
        .collect();
    Ok((ids, maximal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOrder {
    /// Branch on the lowest uncovered element, candidate sets ascending.
    LowestElement,
    /// Branch on the uncovered element in fewest candidate sets, candidate
    /// sets descending.
    FewestCandidates,
}

struct Cover {
    containing: Vec<Vec<u32>>,
    order: SearchOrder,
    failed: HashSet<(u32, usize)>,
}

impl Cover {
    fn search(&mut self, uncovered: u32, t: usize) -> bool {
        if uncovered == 0 {
            return true;
        }
        if t == 0 || self.failed.contains(&(uncovered, t)) {
            return false;
        }
        let e = match self.order {
            SearchOrder::LowestElement => uncovered.trailing_zeros() as usize,
            SearchOrder::FewestCandidates => (0..32)
                .filter(|b| uncovered >> b & 1 == 1)
                .min_by_key(|&b| (self.containing[b].len(), std::cmp::Reverse(b)))
                .unwrap(),
        };
        let mut cands = self.containing[e].clone();
        if self.order == SearchOrder::FewestCandidates {
            cands.reverse();
        }
        for s in cands {
            if self.search(uncovered & !s, t - 1) {
                return true;
            }
        }
        self.failed.insert((uncovered, t));
        false
    }
}

/// Exact chromatic number of the intersection: fewest common independent
/// sets covering the ground set, by iterative deepening from `max chi(M_i)`.
pub fn brute_chi_intersection(ms: &[Matroid], budget: usize) -> Result<usize> {
    brute_chi_with_order(ms, budget, SearchOrder::LowestElement)
}

pub fn brute_chi_with_order(ms: &[Matroid], budget: usize, order: SearchOrder) -> Result<usize> {
    let (ids, sets) = maximal_common_sets(ms, budget)?;
    let n = ids.len();
    if n == 0 {
        return Ok(0);
    }
    if sets.iter().all(|&s| s == 0) {
        return Err(Error::Domain("some element is a loop".into()));
    }
    let containing = (0..n).map(|b| sets.iter().copied().filter(|s| s >> b & 1 == 1).collect()).collect();
    let mut cover = Cover { containing, order, failed: HashSet::new() };
    let lower = ms.iter().map(|m| chromatic_number(m).0).max().unwrap_or(1).max(1);
    let full = ((1u64 << n) - 1) as u32;
    for t in lower..=n {
        if cover.search(full, t) {
            return Ok(t);
        }
    }
    Err(Error::Invariant("no cover by singletons".into()))
}

/// Optimum of `min sum x_I` subject to `sum_{I containing e} x_I >= 1`,
/// `x >= 0`, over the maximal common independent sets.
pub fn covlp_opt(ms: &[Matroid], budget: usize) -> Result<Q> {
    let (ids, sets) = maximal_common_sets(ms, budget)?;
    let n = ids.len();
    if n == 0 {
        return Ok(Q::zero());
    }
    let mut lp = LinearProgram::new(sets.len());
    lp.objective = vec![-Q::one(); sets.len()];
    for b in 0..n {
        let coeffs: Vec<(usize, Q)> =
            sets.iter().enumerate().filter(|(_, s)| *s >> b & 1 == 1).map(|(j, _)| (j, Q::one())).collect();
        if coeffs.is_empty() {
            return Err(Error::Domain(format!("element {} is a loop", ids[b])));
        }
        lp.add_row(coeffs, Sense::Ge, Q::one(), format!("cover{}", ids[b]));
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        other => Err(Error::Invariant(format!("covering program returned {other:?}"))),
    }
}
