//! Writing a point as a convex combination of sets by column generation.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::simplex::{Step, Tableau};
use crate::rational::Q;
use crate::subset::Subset;

/// Result of trying to write `x` as `sum_k lambda_k 1_{S_k}` with
/// `sum_k lambda_k = 1` over sets produced by a pricing oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnOutcome {
    /// Positive weights summing to one; may include the empty set.
    Combination(Vec<(Subset, Q)>),
    /// No combination exists; `duals[e]` separates `x` from the hull
    /// (`duals . x + offset > max_S duals(S) + offset` fails for all sets).
    Separated { duals: Vec<Q> },
}

/// Phase-one column generation over the rows `support` (elements with
/// positive target value) plus a convexity row. `price(duals)` must return a
/// set maximizing `duals(S)` among the allowed sets (restricted to
/// `support`); the empty set must be allowed.
pub fn convex_combination<F>(universe: usize, support: &[usize], x: &[Q], mut price: F) -> Result<ColumnOutcome>
where
    F: FnMut(&[Q]) -> Subset,
{
    let m = support.len() + 1;
    let mut row_of = vec![usize::MAX; universe];
    for (i, &e) in support.iter().enumerate() {
        row_of[e] = i;
    }
    let mut cols: Vec<Vec<(usize, Q)>> = (0..m).map(|i| vec![(i, Q::one())]).collect();
    let mut cost = vec![Q::one(); m];
    let mut rhs: Vec<Q> = support.iter().map(|&e| x[e].clone()).collect();
    rhs.push(Q::one());
    // The empty set only touches the convexity row.
    cols.push(vec![(m - 1, Q::one())]);
    cost.push(Q::zero());
    let mut sets: Vec<Subset> = vec![Subset::empty(universe)];
    let art = m;
    let mut t = Tableau::new(m, &cols, cost, rhs, (0..m).collect());
    loop {
        match t.step() {
            Step::Pivoted => continue,
            Step::Unbounded(_) => return Err(Error::Invariant("phase-one program reported unbounded".into())),
            Step::Optimal => {}
        }
        let mut duals = vec![Q::zero(); universe];
        for (i, &e) in support.iter().enumerate() {
            duals[e] = t.dual(i);
        }
        let offset = t.dual(m - 1);
        let s = price(&duals);
        if s.iter().any(|e| row_of[e] == usize::MAX) {
            return Err(Error::Invariant("pricing returned an element outside the support".into()));
        }
        let gain = s.iter().fold(offset.clone(), |acc, e| acc + &duals[e]);
        if gain.is_positive() {
            let mut col: Vec<(usize, Q)> = s.iter().map(|e| (row_of[e], Q::one())).collect();
            col.push((m - 1, Q::one()));
            t.add_column(&col, Q::zero());
            sets.push(s);
            continue;
        }
        if t.objective().is_positive() {
            return Ok(ColumnOutcome::Separated { duals });
        }
        let vals = t.values();
        let mut out = Vec::new();
        for (k, s) in sets.into_iter().enumerate() {
            let v = &vals[art + k];
            if v.is_positive() {
                out.push((s, v.clone()));
            }
        }
        return Ok(ColumnOutcome::Combination(out));
    }
}

/// Checks `sum lambda 1_S = x` on `support`, zero elsewhere, and `sum lambda = 1`.
pub fn reconstructs(universe: usize, combo: &[(Subset, Q)], x: &[Q]) -> bool {
    let mut acc = vec![Q::zero(); universe];
    let mut total = Q::zero();
    for (s, l) in combo {
        if !l.is_positive() {
            return false;
        }
        total += l;
        for e in s.iter() {
            acc[e] += l;
        }
    }
    total.is_one() && acc.as_slice() == x
}
